"""Finite-dimensional harness: sl2 tensor-product modules, the gamma-invariant
functionals and the quantum Gaudin operators acting on them by exact matrices.

Functionals are row vectors and a Gaudin operator H acts by psi -> psi o H
(H is fixed by the antipode, being a sum of products of commuting factors).
Two readings of "psi is killed by sum h + k" are supported:

    transpose:       psi o (sum h + k) = 0
    contragredient:  -psi o (sum h) + k psi = 0   (x.psi = -psi o x)

Only the contragredient reading at k = -2 matches the left ideal generated by
sum h - 2, sum f and sum a f; on irreducible finite-dimensional modules its
gamma space is zero, so the Verma variant (truncated far enough) is the
non-vacuous test of that reading.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import flint

from .classical import SystemConfig
from .kernel import to_fmpq
from .report import Check


def _zeros(n: int, m: int) -> flint.fmpq_mat:
    return flint.fmpq_mat(n, m)


def identity(n: int) -> flint.fmpq_mat:
    m = _zeros(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def kron(a: flint.fmpq_mat, b: flint.fmpq_mat) -> flint.fmpq_mat:
    ra, ca, rb, cb = a.nrows(), a.ncols(), b.nrows(), b.ncols()
    out = _zeros(ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            x = a[i, j]
            if x == 0:
                continue
            for k in range(rb):
                for l in range(cb):
                    y = b[k, l]
                    if y != 0:
                        out[i * rb + k, j * cb + l] = x * y
    return out


def is_zero(m: flint.fmpq_mat) -> bool:
    return all(x == 0 for x in m.entries())


def null_space(m: flint.fmpq_mat) -> list[list[flint.fmpq]]:
    """Basis of {x : m x = 0}, read off the reduced row echelon form."""
    rref, rank = m.rref()
    ncols = m.ncols()
    pivots = []
    for r in range(rank):
        for c in range(ncols):
            if rref[r, c] != 0:
                pivots.append(c)
                break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [flint.fmpq(0)] * ncols
        v[fcol] = flint.fmpq(1)
        for r, p in enumerate(pivots):
            v[p] = -rref[r, fcol]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class Sl2Module:
    """sl2 module of highest weight lam in the basis v_j = F^j v_0.

    With ``depth=None`` this is the irreducible module of dimension lam + 1
    (lam a nonnegative integer).  Otherwise it is the Verma module of highest
    weight lam truncated to v_0..v_depth; the truncation only distorts F on
    v_depth, so it is exact on total depths below the cut."""

    lam: Fraction | int
    depth: int | None = None

    @property
    def dim(self) -> int:
        return int(self.lam) + 1 if self.depth is None else self.depth + 1

    def E(self) -> flint.fmpq_mat:
        m = _zeros(self.dim, self.dim)
        for j in range(1, self.dim):
            m[j - 1, j] = to_fmpq(j * (Fraction(self.lam) - j + 1))
        return m

    def F(self) -> flint.fmpq_mat:
        m = _zeros(self.dim, self.dim)
        for j in range(self.dim - 1):
            m[j + 1, j] = 1
        return m

    def H(self) -> flint.fmpq_mat:
        m = _zeros(self.dim, self.dim)
        for j in range(self.dim):
            m[j, j] = to_fmpq(Fraction(self.lam) - 2 * j)
        return m

    def casimir_value(self) -> Fraction:
        lam = Fraction(self.lam)
        return lam * lam / 2 + lam


class TensorModule:
    """V_1 x ... x V_N with site operators e_i, f_i, h_i."""

    def __init__(self, weights: Sequence, depth: int | None = None):
        if depth is None:
            self.weights = tuple(int(w) for w in weights)
        else:
            self.weights = tuple(Fraction(w) for w in weights)
        self.sites = [Sl2Module(w, depth) for w in self.weights]
        self.dim = reduce(lambda x, y: x * y, (s.dim for s in self.sites), 1)
        self._cache: dict[tuple[str, int], flint.fmpq_mat] = {}

    def site(self, op: str, i: int) -> flint.fmpq_mat:
        key = (op, i)
        if key not in self._cache:
            left = reduce(lambda x, y: x * y, (s.dim for s in self.sites[:i]), 1)
            right = reduce(lambda x, y: x * y, (s.dim for s in self.sites[i + 1 :]), 1)
            local = getattr(self.sites[i], op)()
            self._cache[key] = kron(kron(identity(left), local), identity(right))
        return self._cache[key]

    def untruncated_columns(self) -> list[int]:
        """Basis vectors with no site on the truncation layer."""
        cols = []
        for idx in range(self.dim):
            rest, ok = idx, True
            for s in reversed(self.sites):
                j = rest % s.dim
                rest //= s.dim
                if s.depth is not None and j == s.depth:
                    ok = False
            if ok:
                cols.append(idx)
        return cols

    def total(self, op: str, coeffs: Sequence | None = None) -> flint.fmpq_mat:
        out = _zeros(self.dim, self.dim)
        for i in range(len(self.sites)):
            c = 1 if coeffs is None else to_fmpq(coeffs[i])
            out = out + self.site(op, i) * c
        return out


def gaudin_matrices(cfg: SystemConfig, weights: Sequence[int], mod: TensorModule | None = None) -> list[flint.fmpq_mat]:
    """H_i = sum_{j != i} (e_i f_j + f_i e_j + h_i h_j / 2)/(a_i - a_j)."""
    if len(weights) != cfg.n:
        raise ValueError(f"need {cfg.n} weights, got {len(weights)}")
    mod = mod or TensorModule(weights)
    out = []
    for i, ai in enumerate(cfg.a):
        H = _zeros(mod.dim, mod.dim)
        for j, aj in enumerate(cfg.a):
            if j == i:
                continue
            e_i, f_i, h_i = mod.site("E", i), mod.site("F", i), mod.site("H", i)
            e_j, f_j, h_j = mod.site("E", j), mod.site("F", j), mod.site("H", j)
            term = e_i * f_j + f_i * e_j + (h_i * h_j) * flint.fmpq(1, 2)
            H = H + term * to_fmpq(1 / (ai - aj))
        out.append(H)
    return out


@dataclass
class GammaSpace:
    weights: tuple[int, ...]
    k: int
    basis: flint.fmpq_mat  # rows are functionals
    mod: TensorModule

    @property
    def dim(self) -> int:
        return self.basis.nrows()

    def restrict(self, op: flint.fmpq_mat) -> flint.fmpq_mat | None:
        """The matrix R with B op = R B, or None if op does not preserve the span."""
        if self.dim == 0:
            return _zeros(0, 0)
        image = self.basis * op
        # solve R B = image via B^T R^T = image^T on the pivot columns of B
        bt = self.basis.transpose()
        rref, rank = flint.fmpq_mat.rref(bt.transpose())
        cols = []
        for r in range(rank):
            for c in range(bt.nrows()):
                if rref[r, c] != 0:
                    cols.append(c)
                    break
        sub = _zeros(self.dim, self.dim)
        rhs = _zeros(self.dim, self.dim)
        for a, c in enumerate(cols):
            for r in range(self.dim):
                sub[a, r] = bt[c, r]
            for r in range(self.dim):
                rhs[a, r] = image[r, c]
        Rt = sub.solve(rhs)
        R = Rt.transpose()
        if not is_zero(R * self.basis - image):
            return None
        return R


TRANSPOSE = "transpose"
CONTRAGREDIENT = "contragredient"


def gamma_invariants(
    cfg: SystemConfig,
    weights: Sequence,
    k: int,
    mod: TensorModule | None = None,
    dual: str = TRANSPOSE,
) -> GammaSpace:
    """Functionals killed by sum h + k, sum f and sum a f.

    ``transpose``: psi o (sum h + k) = 0, i.e. psi o sum h = -k psi.
    ``contragredient``: x acts on psi as -psi o x, so psi o sum h = k psi.
    The two readings agree on the f conditions."""
    mod = mod or TensorModule(weights)
    n = mod.dim
    sum_h = mod.total("H")
    if dual == TRANSPOSE:
        h_cond = sum_h + identity(n) * k
    elif dual == CONTRAGREDIENT:
        h_cond = sum_h * -1 + identity(n) * k
    else:
        raise ValueError(f"unknown dual convention {dual!r}")
    conds = [h_cond, mod.total("F"), mod.total("F", cfg.a)]
    # psi M = 0 for all M  <=>  M^T psi^T = 0; stack the transposes
    stacked = _zeros(3 * n, n)
    for b, M in enumerate(conds):
        Mt = M.transpose()
        for r in range(n):
            for c in range(n):
                x = Mt[r, c]
                if x != 0:
                    stacked[b * n + r, c] = x
    vecs = null_space(stacked)
    basis = _zeros(len(vecs), n)
    for r, v in enumerate(vecs):
        for c, x in enumerate(v):
            basis[r, c] = x
    return GammaSpace(tuple(weights), k, basis, mod)


def _fmt(m: flint.fmpq_mat | None) -> str | None:
    return None if m is None else str(m.tolist())[:2000]


def eigen_relations(cfg: SystemConfig, space: GammaSpace, hams: Sequence[flint.fmpq_mat]) -> dict[str, flint.fmpq_mat | None]:
    """Residuals of sum H, sum a H + (1/2) sum C and sum a^2 H + sum a C on the
    gamma space (None if some H fails to preserve it)."""
    cas = [s.casimir_value() for s in space.mod.sites]
    R = [space.restrict(H) for H in hams]
    if any(r is None for r in R):
        return {"sum": None, "first-moment": None, "second-moment": None}
    d = space.dim
    zero = _zeros(d, d)
    s0 = sum(R, zero)
    s1 = sum((r * to_fmpq(a) for r, a in zip(R, cfg.a)), zero) + identity(d) * to_fmpq(sum(cas) / 2)
    s2 = sum((r * to_fmpq(a * a) for r, a in zip(R, cfg.a)), zero) + identity(d) * to_fmpq(
        sum(a * c for a, c in zip(cfg.a, cas))
    )
    return {"sum": s0, "first-moment": s1, "second-moment": s2}


def rep_checks(
    cfg: SystemConfig,
    weights: Sequence,
    k: int = -2,
    dual: str = TRANSPOSE,
    depth: int | None = None,
    prefix: str = "rep",
) -> list[Check]:
    label = ",".join(str(w) for w in weights)
    t0 = time.perf_counter()
    mod = TensorModule(weights, depth)
    hams = gaudin_matrices(cfg, weights, mod)
    space = gamma_invariants(cfg, weights, k, mod, dual)
    other = CONTRAGREDIENT if dual == TRANSPOSE else TRANSPOSE
    other_space = gamma_invariants(cfg, weights, k, mod, other)
    base_ms = (time.perf_counter() - t0) * 1000
    info = {"gamma_dim": space.dim, "k": k, "dual": dual}
    checks = []

    def timed(name, fn):
        s = time.perf_counter()
        ok, witness, detail = fn()
        ms = (time.perf_counter() - s) * 1000 + base_ms
        checks.append(Check(f"{prefix}/{label}/{name}", "pass" if ok else "fail", witness, ms, detail))

    def casimirs():
        bad = []
        exact = mod.untruncated_columns()
        for i, s in enumerate(mod.sites):
            e, f, h = mod.site("E", i), mod.site("F", i), mod.site("H", i)
            c = e * f + f * e + (h * h) * flint.fmpq(1, 2) - identity(mod.dim) * to_fmpq(s.casimir_value())
            if any(c[r, col] != 0 for col in exact for r in range(mod.dim)):
                bad.append(i + 1)
        return not bad, None if not bad else f"sites {bad}", {"casimirs": [str(s.casimir_value()) for s in mod.sites]}

    def total_zero():
        s = sum(hams, _zeros(mod.dim, mod.dim))
        return is_zero(s), None if is_zero(s) else "sum H != 0 on the full module", {}

    def preserve():
        bad = [i + 1 for i, H in enumerate(hams) if space.restrict(H) is None]
        detail = dict(info)
        detail[f"{other}_gamma_dim"] = other_space.dim
        detail[f"{other}_preserved"] = all(other_space.restrict(H) is not None for H in hams)
        return not bad, None if not bad else f"H{bad} leave the gamma space", detail

    def commute():
        R = [space.restrict(H) for H in hams]
        if any(r is None for r in R):
            return False, "some H does not preserve the gamma space", dict(info)
        for i in range(len(R)):
            for j in range(i + 1, len(R)):
                c = R[i] * R[j] - R[j] * R[i]
                if not is_zero(c):
                    return False, f"[H{i + 1},H{j + 1}] = {_fmt(c)}", dict(info)
        return True, None, dict(info)

    def relations():
        res = eigen_relations(cfg, space, hams)
        bad = {k_: _fmt(v) for k_, v in res.items() if v is None or not is_zero(v)}
        other_res = eigen_relations(cfg, other_space, hams)
        detail = dict(info)
        detail[f"{other}_relations_hold"] = all(v is not None and is_zero(v) for v in other_res.values())
        detail[f"{other}_gamma_dim"] = other_space.dim
        return not bad, None if not bad else str(bad)[:2000], detail

    timed("casimir-values", casimirs)
    timed("sum-H-vanishes", total_zero)
    timed("gamma-space-preserved", preserve)
    timed("commute-on-gamma-space", commute)
    timed("moment-relations-on-gamma-space", relations)
    return checks


# weights and truncation depths of the Verma variant, chosen so that the
# contragredient gamma space at k = -2 is nonzero.  That space lives on total
# depth d = (sum lam + 2)/2, so cutting at d + 1 is exact for every check.
VERMA_CASES = {
    1: [((1, -1, Fraction(1, 2), Fraction(-1, 2)), 2), ((3, 1, Fraction(-1, 2), Fraction(-3, 2)), 3)],
    2: [((1, -1, Fraction(1, 2), Fraction(-1, 2), 0), 2)],
}


def verma_checks(cfg: SystemConfig, cases: Sequence | None = None) -> list[Check]:
    """The contragredient reading on truncated Verma modules, where its gamma
    space is not zero."""
    out = []
    for weights, depth in cases if cases is not None else VERMA_CASES.get(cfg.g, []):
        out.extend(rep_checks(cfg, weights, -2, CONTRAGREDIENT, depth, prefix="rep-verma"))
    return out


def levels_reproducing_relations(
    cfg: SystemConfig, weights: Sequence, levels: Sequence[int], dual: str = TRANSPOSE, depth: int | None = None
) -> list[int]:
    """The levels k in the given range (with nonzero gamma space) at which the
    three moment relations hold."""
    mod = TensorModule(weights, depth)
    hams = gaudin_matrices(cfg, weights, mod)
    out = []
    for k in levels:
        space = gamma_invariants(cfg, weights, k, mod, dual)
        if space.dim == 0:
            continue
        res = eigen_relations(cfg, space, hams)
        if all(v is not None and is_zero(v) for v in res.values()):
            out.append(k)
    return out
