"""Quantum side: the algebras A_X and A, the Gaudin and Beauville-Mukai
quantum Hamiltonians, the quantized generating series, and the checks run
against the delta-module realization of A/I.

Naming.  In A the coefficient variables are ``f1..fn`` and the operator
generators ``fs1..fsn`` with [fs_i, f_j] = delta_ij.  In A_X the coefficients
are ``xh1..xhg`` and the operators ``yh1..yhg`` with [yh, r(xh)] = 2 Pi(xh) r'.
Casimir values enter either as numbers (from the config) or as symbolic
parameters ``C1..Cn``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .classical import (
    SystemConfig,
    elementary,
    hitchin_hamiltonians,
    random_rational,
)
from .deltamodule import EXTENDED, SURFACE, DeltaModule, DeltaVector, delta_module, extended_f
from .kernel import RatFunc, poly_ring, series_coeff
from .opalgebra import QUANTUM, AlgebraDescriptor, NCElement, commutator
from .report import Check

SERIES = ("t", "z")


class ConventionMismatch(ArithmeticError):
    pass


def f_names(cfg: SystemConfig) -> list[str]:
    return [f"f{i + 1}" for i in range(cfg.n)]


def fs_names(cfg: SystemConfig) -> list[str]:
    return [f"fs{i + 1}" for i in range(cfg.n)]


def casimir_names(cfg: SystemConfig) -> list[str]:
    return [f"C{i + 1}" for i in range(cfg.n)]


@lru_cache(maxsize=None)
def a_algebra(cfg: SystemConfig, params: tuple[str, ...] = ()) -> AlgebraDescriptor:
    ring = poly_ring(tuple(f_names(cfg)) + tuple(params))
    action = {p: {f: 1} for p, f in zip(fs_names(cfg), f_names(cfg))}
    return AlgebraDescriptor(ring, fs_names(cfg), action, QUANTUM, name="A", check=False)


@lru_cache(maxsize=None)
def ax_algebra(cfg: SystemConfig, params: tuple[str, ...] = ()) -> AlgebraDescriptor:
    xs = [f"xh{a + 1}" for a in range(cfg.g)]
    ring = poly_ring(tuple(xs) + tuple(params))
    action = {f"yh{a + 1}": {x: 2 * cfg.pi_at(ring.var(x))} for a, x in enumerate(xs)}
    return AlgebraDescriptor(ring, [f"yh{a + 1}" for a in range(cfg.g)], action, QUANTUM, name="A_X", check=False)


@dataclass(frozen=True)
class QuantumAlgebras:
    cfg: SystemConfig
    params: tuple[str, ...] = ()
    symbolic_casimirs: bool = False

    @property
    def AX(self) -> AlgebraDescriptor:
        return ax_algebra(self.cfg, self.params + self._cparams)

    @property
    def A(self) -> AlgebraDescriptor:
        return a_algebra(self.cfg, self.params + self._cparams)

    @property
    def _cparams(self) -> tuple[str, ...]:
        return tuple(casimir_names(self.cfg)) if self.symbolic_casimirs else ()

    def casimir(self, i: int) -> RatFunc:
        ring = self.A.ring
        if self.symbolic_casimirs:
            return ring.var(f"C{i + 1}")
        if self.cfg.casimirs is None:
            raise ValueError("config carries no Casimir values")
        return ring.coerce(self.cfg.casimirs[i])

    def f(self, i: int) -> NCElement:
        return self.A.var(f"f{i + 1}")

    def h(self, i: int) -> NCElement:
        return self.A.gen(f"fs{i + 1}").scale(-2 * self.A.ring.var(f"f{i + 1}"))

    def e(self, i: int, sign: int = 1) -> NCElement:
        """e_i = sign C_i/(2 f_i) - h_i^2/(4 f_i) - h_i/(2 f_i).

        sign = +1 gives e f + f e + h^2/2 = C_i; sign = -1 is the variant with
        the Casimir term negated."""
        fi = self.A.ring.var(f"f{i + 1}")
        h = self.h(i)
        return (self.A.coeff(sign * self.casimir(i)) - (h * h).scale(Fraction(1, 2)) - h) / (2 * fi)

    def ell0(self) -> NCElement:
        return sum((self.f(i) for i in range(self.cfg.n)), self.A.zero())

    def ell1(self) -> NCElement:
        return sum((self.f(i).scale(self.cfg.a[i]) for i in range(self.cfg.n)), self.A.zero())

    def sum_h_minus_2(self) -> NCElement:
        return sum((self.h(i) for i in range(self.cfg.n)), self.A.zero()) - 2

    def casimir_element(self, i: int, sign: int = 1) -> NCElement:
        e, f, h = self.e(i, sign), self.f(i), self.h(i)
        return e * f + f * e + (h * h).scale(Fraction(1, 2))


# ----------------------------------------------------------- Hamiltonians


def quantum_hitchin(q: QuantumAlgebras) -> list[NCElement]:
    cfg = q.cfg
    es = [q.e(i) for i in range(cfg.n)]
    fs = [q.f(i) for i in range(cfg.n)]
    hs = [q.h(i) for i in range(cfg.n)]
    out = []
    for i in range(cfg.n):
        acc = q.A.zero()
        for j in range(cfg.n):
            if j != i:
                num = es[i] * fs[j] + fs[i] * es[j] + (hs[i] * hs[j]).scale(Fraction(1, 2))
                acc = acc + num / (cfg.a[i] - cfg.a[j])
        out.append(acc)
    return out


def _field_series(q: QuantumAlgebras, elems: Sequence[NCElement], var: str) -> NCElement:
    X = q.A.ring.var(var)
    return sum((x.scale(1 / (X - ai)) for x, ai in zip(elems, q.cfg.a)), q.A.zero())


def hitchin_generating_check(q: QuantumAlgebras, var: str = "t") -> NCElement:
    """sum H_i/(X-a_i) + sum (C_i/2)/(X-a_i)^2 - (e f + f e + h^2/2)(X)/2."""
    cfg = q.cfg
    X = q.A.ring.var(var)
    H = quantum_hitchin(q)
    lhs = _field_series(q, H, var)
    for i, ai in enumerate(cfg.a):
        lhs = lhs + q.A.coeff(q.casimir(i) / 2 / (X - ai) ** 2)
    eX = _field_series(q, [q.e(i) for i in range(cfg.n)], var)
    fX = _field_series(q, [q.f(i) for i in range(cfg.n)], var)
    hX = _field_series(q, [q.h(i) for i in range(cfg.n)], var)
    rhs = (eX * fX + fX * eX + (hX * hX).scale(Fraction(1, 2))).scale(Fraction(1, 2))
    return lhs - rhs


def hitchin_remainders(q: QuantumAlgebras, var: str = "t") -> dict[str, NCElement]:
    """Exact identities in A used to show the Gaudin operators normalize I."""
    cfg = q.cfg
    eX = _field_series(q, [q.e(i) for i in range(cfg.n)], var)
    fX = _field_series(q, [q.f(i) for i in range(cfg.n)], var)
    hX = _field_series(q, [q.h(i) for i in range(cfg.n)], var)
    HX = eX * fX + fX * eX + (hX * hX).scale(Fraction(1, 2))
    sh2, l0, l1 = q.sum_h_minus_2(), q.ell0(), q.ell1()
    H = quantum_hitchin(q)
    a = cfg.a
    sum_e = sum((q.e(i) for i in range(cfg.n)), q.A.zero())
    sum_ae = sum((q.e(i).scale(a[i]) for i in range(cfg.n)), q.A.zero())
    sum_h = sh2 + 2
    sum_ah = sum((q.h(i).scale(a[i]) for i in range(cfg.n)), q.A.zero())
    C = [q.casimir(i) for i in range(cfg.n)]
    sum_aH = sum((H[i].scale(a[i]) for i in range(cfg.n)), q.A.zero())
    sum_a2H = sum((H[i].scale(a[i] ** 2) for i in range(cfg.n)), q.A.zero())
    return {
        "sum-h-commutes": sh2 * HX - HX * sh2,
        "ell0-commutes": l0 * HX - HX * l0,
        "ell1-remainder": l1 * HX - HX * l1 - (fX * sh2).scale(2) + (hX * l0).scale(2),
        "first-moment": sum_aH + sum(C, q.A.ring.zero()) / 2 - sum_e * l0 - (sum_h * sh2).scale(Fraction(1, 4)),
        "second-moment": sum_a2H
        + sum((c * ai for c, ai in zip(C, a)), q.A.ring.zero())
        - sum_ae * l0
        - sum_e * l1
        - (sum_ah * sh2).scale(Fraction(1, 2)),
    }


def printed_ell1_remainder(q: QuantumAlgebras, var: str = "t") -> NCElement:
    """The ell1 commutation display with the opposite remainder sign; it does not
    vanish (kept to document the sign)."""
    cfg = q.cfg
    eX = _field_series(q, [q.e(i) for i in range(cfg.n)], var)
    fX = _field_series(q, [q.f(i) for i in range(cfg.n)], var)
    hX = _field_series(q, [q.h(i) for i in range(cfg.n)], var)
    HX = eX * fX + fX * eX + (hX * hX).scale(Fraction(1, 2))
    l0, l1, sh2 = q.ell0(), q.ell1(), q.sum_h_minus_2()
    return l1 * HX - HX * l1 + (fX * sh2).scale(2) - (hX * l0).scale(2)


def quantum_bm(q: QuantumAlgebras, pi_power: int = -1) -> list[NCElement]:
    """H^BM_(i+1) = (-1)^i [X^i] sum_alpha L_alpha(X) T_alpha with Lagrange
    weights L_alpha kept left; T = (Pi^p yh)^2 + sum (-C_i/2)/(xh - a_i)^2."""
    cfg = q.cfg
    AX = q.AX
    ring = AX.ring
    xs = [ring.var(f"xh{a + 1}") for a in range(cfg.g)]
    C = [q.casimir(i).to_ring(ring) if q.symbolic_casimirs else ring.coerce(cfg.casimirs[i]) for i in range(cfg.n)]
    T = []
    for a in range(cfg.g):
        y = AX.gen(f"yh{a + 1}").scale(cfg.pi_at(xs[a]) ** pi_power)
        t = y * y
        for ci, ai in zip(C, cfg.a):
            t = t + AX.coeff(-ci / 2 / (xs[a] - ai) ** 2)
        T.append(t)
    out = [AX.zero() for _ in range(cfg.g)]
    for a in range(cfg.g):
        # Lagrange basis polynomial coefficients in X
        coeffs = [ring.one()]
        den = ring.one()
        for b in range(cfg.g):
            if b == a:
                continue
            new = [ring.zero() for _ in range(len(coeffs) + 1)]
            for k, c in enumerate(coeffs):
                new[k + 1] = new[k + 1] + c
                new[k] = new[k] - c * xs[b]
            coeffs = new
            den = den * (xs[a] - xs[b])
        for i, c in enumerate(coeffs):
            out[i] = out[i] + T[a].scale((-1) ** i * c / den)
    return out


def hitchin_symbol(q: QuantumAlgebras, H: NCElement) -> RatFunc:
    """Degree-2 symbol of an element of A read in the (u, v) coordinates of the
    classical system: f_i -> u_i, fs_i -> -v_i / (2 u_i)."""
    cfg = q.cfg
    names = cfg.us() + cfg.vs()
    ring = poly_ring(tuple(names) + q.params + q._cparams)
    u = [ring.var(x) for x in cfg.us()]
    v = [ring.var(x) for x in cfg.vs()]
    fmap = {f"f{i + 1}": u[i] for i in range(cfg.n)}
    fstar = [-v[i] / (2 * u[i]) for i in range(cfg.n)]
    out = ring.zero()
    for mono, c in H.homogeneous(2).terms.items():
        t = c.subs(fmap, ring=ring)
        for i, k in enumerate(mono):
            if k:
                t = t * fstar[i] ** k
        out = out + t
    return out


# --------------------------------------------------------- quantized series


def p_f(q: QuantumAlgebras, var: str) -> RatFunc:
    cfg = q.cfg
    ring = q.A.ring
    X = ring.var(var)
    out = ring.zero()
    for i in range(cfg.n):
        t = ring.var(f"f{i + 1}")
        for j, aj in enumerate(cfg.a):
            if j != i:
                t = t * (X - aj)
        out = out + t
    return out


def u_hat_series(q: QuantumAlgebras, var: str = "t") -> RatFunc:
    P = p_f(q, var)
    return P.derivative(var) / P


def w_hat_series(q: QuantumAlgebras, var: str = "t") -> NCElement:
    """sum_i (U(X) - U(a_i)) / (X - a_i) h_i, exact in X, coefficients left."""
    cfg = q.cfg
    X = q.A.ring.var(var)
    U = u_hat_series(q, var)
    out = q.A.zero()
    for i, ai in enumerate(cfg.a):
        out = out + q.h(i).scale((U - U.subs({var: ai})) / (X - ai))
    return out


def what_phi(q: QuantumAlgebras, phi: Sequence, var: str = "t") -> NCElement:
    """Res_{X=inf}(W(X) phi(X) dX) using the representative of P_f obtained by
    dropping its components along ell0 and ell1 (a degree-g polynomial in X
    with leading coefficient sum a_i^2 f_i), so that the coefficients stay
    regular on the surface."""
    cfg = q.cfg
    A = q.A
    ring = A.ring
    X = ring.var(var)
    # P_f = sum_k F_k Q_k(X); drop k = 1, 2
    dm = delta_module(cfg, ())
    F_ring = dm.F_ring
    P_F = p_f(QuantumAlgebras(cfg, (var,)), var).subs(dm.f_in_F, ring=poly_ring(F_ring.names + (var,)))
    back = _F_in_f(cfg, ring)
    P_red = P_F.subs({"F1": 0, "F2": 0}).subs(back, ring=ring)
    U = P_red.derivative(var) / P_red
    phi_x = sum((ring.coerce(c) * X**k for k, c in enumerate(phi)), ring.zero())
    out = A.zero()
    for i, ai in enumerate(cfg.a):
        c = (U - U.subs({var: ai})) / (X - ai) * phi_x
        out = out + q.h(i).scale(series_coeff(c, var, 1, allow_polynomial_part=True))
    return out


def _F_in_f(cfg: SystemConfig, ring) -> dict:
    return {
        f"F{k + 1}": sum((ring.var(f"f{i + 1}") * Fraction(cfg.a[i]) ** k for i in range(cfg.n)), ring.zero())
        for k in range(cfg.n)
    }


def lambda_hat_e(q: QuantumAlgebras, k: int) -> NCElement:
    """Image of e_k(xh): sum_i fbar_i e_(k+2)(a without a_i), fbar_i = f_i / sum a^2 f."""
    cfg = q.cfg
    ring = q.A.ring
    s = sum((ring.var(f"f{i + 1}") * Fraction(ai) ** 2 for i, ai in enumerate(cfg.a)), ring.zero())
    out = ring.zero()
    for i in range(cfg.n):
        others = [aj for j, aj in enumerate(cfg.a) if j != i]
        out = out + ring.var(f"f{i + 1}") / s * elementary(others, k + 2)
    return q.A.coeff(out)


# -------------------------------------------------------------- checking


def _timed(name: str, fn: Callable[[], tuple[bool, str | None, dict]]) -> Check:
    import time

    t0 = time.perf_counter()
    ok, witness, detail = fn()
    return Check(name, "pass" if ok else "fail", witness, (time.perf_counter() - t0) * 1000, detail)


def _vacuum_witness(v: DeltaVector) -> str | None:
    return None if v.is_zero() else str(v)[:2000]


def vacuum_image(q: QuantumAlgebras, a: NCElement) -> DeltaVector:
    dm = delta_module(q.cfg, q.params + q._cparams)
    return dm.act(a, dm.vacuum())


def ideal_member(q: QuantumAlgebras, a: NCElement) -> bool:
    return vacuum_image(q, a).is_zero()


def casimir_checks(q: QuantumAlgebras) -> list[Check]:
    checks = []
    for i in range(q.cfg.n):

        def run(i=i):
            d = q.casimir_element(i) - q.casimir(i)
            return d.is_zero(), None if d.is_zero() else str(d), {}

        checks.append(_timed(f"quantum-algebra/casimir-identity/{i + 1}", run))
    return checks


def hitchin_checks(q: QuantumAlgebras) -> list[Check]:
    cfg = q.cfg
    checks = []

    qt = QuantumAlgebras(cfg, q.params + ("t",), q.symbolic_casimirs)

    def gen():
        d = hitchin_generating_check(qt)
        return d.is_zero(), None if d.is_zero() else str(d)[:2000], {}

    checks.append(_timed("gaudin/generating-identity", gen))
    rem = hitchin_remainders(qt)
    printed = printed_ell1_remainder(qt)
    for name, d in sorted(rem.items()):
        detail = {"printed_sign_holds": printed.is_zero()} if name == "ell1-remainder" else {}
        checks.append(
            _timed(
                f"gaudin/exact/{name}",
                lambda d=d, detail=detail: (d.is_zero(), None if d.is_zero() else str(d)[:2000], detail),
            )
        )
    H = quantum_hitchin(q)
    C = [q.casimir(i) for i in range(cfg.n)]
    a = cfg.a
    ids = {
        "sum": sum(H, q.A.zero()),
        "first-moment": sum((H[i].scale(a[i]) for i in range(cfg.n)), q.A.zero())
        + sum(C, q.A.ring.zero()) / 2,
        "second-moment": sum((H[i].scale(a[i] ** 2) for i in range(cfg.n)), q.A.zero())
        + sum((c * ai for c, ai in zip(C, a)), q.A.ring.zero()),
    }
    for name, e in ids.items():

        def run(e=e):
            v = vacuum_image(q, e)
            return v.is_zero(), _vacuum_witness(v), {}

        checks.append(_timed(f"gaudin/relations-mod-ideal/{name}", run))
    for i in range(cfg.n):
        for j in range(i + 1, cfg.n):

            def run(i=i, j=j):
                c = commutator(H[i], H[j])
                exact = c.is_zero()
                v = vacuum_image(q, c)
                return v.is_zero(), _vacuum_witness(v), {"exactly_zero_in_A": exact}

            checks.append(_timed(f"gaudin/commute-mod-ideal/H{i + 1}-H{j + 1}", run))
    return checks


def bm_checks(q: QuantumAlgebras) -> list[Check]:
    H = quantum_bm(q)
    checks = []
    for i in range(len(H)):
        for j in range(i + 1, len(H)):

            def run(i=i, j=j):
                c = commutator(H[i], H[j])
                return c.is_zero(), None if c.is_zero() else str(c)[:2000], {}

            checks.append(_timed(f"beauville-mukai-quantum/commute/H{i + 1}-H{j + 1}", run))
    return checks


def symbol_checks(q: QuantumAlgebras, seed: int = 0, samples: int = 10) -> list[Check]:
    """Compare the degree-2 symbol of each quantum Gaudin operator with the
    classical Gaudin Hamiltonian; the ratio must be one constant kappa."""
    cfg = q.cfg
    H = quantum_hitchin(q)
    classical = hitchin_hamiltonians(cfg)

    def run():
        syms = [hitchin_symbol(q, h) for h in H]
        ring = syms[0].ring
        kappa = None
        for s, c in zip(syms, classical):
            c = c.to_ring(ring)
            if c.is_zero():
                continue
            r = s / c
            if not r.is_constant():
                return False, f"non-constant ratio {r}", {}
            if kappa is None:
                kappa = r.constant_value()
            elif r.constant_value() != kappa:
                return False, f"ratios differ: {kappa} vs {r.constant_value()}", {}
        rng = random.Random(seed)
        names = list(ring.names)
        for _ in range(samples):
            pt = {}
            for x in names:
                val = Fraction(0)
                while val == 0:
                    val = random_rational(rng)
                pt[x] = val
            for s, c in zip(syms, classical):
                if s.evaluate(pt) != kappa * c.to_ring(ring).evaluate(pt):
                    return False, f"mismatch at {pt}", {"kappa": str(kappa)}
        return True, None, {"kappa": str(kappa)}

    return [_timed("quantization/symbol-matches-classical", run)]


def normalizer_family(dm: DeltaModule) -> list[DeltaVector]:
    """v0 together with r v0 for the degree-zero functions r = F_k/F_3 and their
    pairwise products.  These r normalize the ideal, so an element x of the
    ideal satisfies x (r v0) = 0 for each of them."""
    v0 = dm.vacuum()
    if dm.mode != SURFACE:
        return [v0]
    R = dm.ring
    ratios = [R.var(f"F{k}") / R.var("F3") for k in range(4, dm.cfg.n + 1)]
    fam = [v0] + [v0.scale(r) for r in ratios]
    for i, r in enumerate(ratios):
        for r2 in ratios[i:]:
            fam.append(v0.scale(r * r2))
    return fam


def family_images(q: QuantumAlgebras, a: NCElement) -> list[DeltaVector]:
    dm = delta_module(q.cfg, q.params + q._cparams)
    return [dm.act(a, v) for v in normalizer_family(dm)]


def family_member(q: QuantumAlgebras, a: NCElement) -> bool:
    """Necessary condition for membership in I that is sharper than the plain
    vacuum test: a annihilates every vector of the normalizer family."""
    return all(v.is_zero() for v in family_images(q, a))


def _family_witness(images: list[DeltaVector]) -> str | None:
    for k, v in enumerate(images):
        if not v.is_zero():
            return f"family vector {k}: {str(v)[:2000]}"
    return None


def series_checks(cfg: SystemConfig, phis_max: int | None = None) -> list[Check]:
    """Commutators of the generating series with ell0 and ell1 and the U/W
    relations.  Statements modulo I are tested on the normalizer family; the
    plain vacuum outcome is reported alongside because W(t) itself kills v0."""
    q = QuantumAlgebras(cfg, ("t", "z"))
    checks = []
    W_t = w_hat_series(q, "t")
    U_t, U_z = u_hat_series(q, "t"), u_hat_series(q, "z")
    ring = q.A.ring
    t, z = ring.var("t"), ring.var("z")
    nmax = cfg.g + 2 if phis_max is None else phis_max

    def ell0():
        c = commutator(q.ell0(), W_t)
        return c.is_zero(), None if c.is_zero() else str(c)[:2000], {}

    def ell1():
        c = commutator(q.ell1(), W_t)
        imgs = family_images(q, c)
        bad = []
        for n in range(nmax + 1):
            for v in imgs:
                for coeff in v.layers.values():
                    r = series_coeff(coeff * coeff.ring.var("t") ** n, "t", 1, allow_polynomial_part=True)
                    if not r.is_zero():
                        bad.append(n)
        ok = all(v.is_zero() for v in imgs)
        return ok, _family_witness(imgs), {"failing_powers": sorted(set(bad)), "max_power": nmax}

    def uu():
        ok = commutator(q.A.coeff(U_t), q.A.coeff(U_z)).is_zero()
        return ok, None, {}

    def relation(lhs: NCElement, rhs: NCElement):
        imgs = family_images(q, lhs - rhs)
        ok = all(v.is_zero() for v in imgs)
        detail = {"plain_vacuum_test_passes": imgs[0].is_zero(), "vacuum_kills_rhs": vacuum_image(q, rhs).is_zero()}
        if not ok:
            detail["holds_with_opposite_sign"] = family_member(q, lhs + rhs)
            detail["exact_in_A_with_opposite_sign"] = (lhs + rhs).is_zero()
        return ok, _family_witness(imgs), detail

    def wu():
        lhs = commutator(W_t, q.A.coeff(U_z))
        rhs = q.A.coeff((2 * (U_z - U_t) / (z - t)).derivative("z"))
        return relation(lhs, rhs)

    def ww():
        W_z = w_hat_series(q, "z")
        lhs = commutator(W_t, W_z)
        inner = W_z.derivative("z") + W_t.derivative("t") - (W_z - W_t).scale(2 / (z - t))
        return relation(lhs, inner.scale(2 / (z - t)))

    def x_image():
        # Lambda(prod (X - xh)) = sum_k (-1)^k X^(g-k) Lambda(e_k) against P_f / sum a^2 f
        s = sum((ring.var(f"f{i + 1}") * Fraction(ai) ** 2 for i, ai in enumerate(cfg.a)), ring.zero())
        img = ring.zero()
        for k in range(cfg.g + 1):
            img = img + (-1) ** k * t ** (cfg.g - k) * lambda_hat_e(q, k).scalar_part()
        imgs = family_images(q, q.A.coeff(img - p_f(q, "t") / s))
        return all(v.is_zero() for v in imgs), _family_witness(imgs), {}

    def y_sign():
        # the sign eps for which Y(t) -> eps W(t) respects both X-side relations
        W_z = w_hat_series(q, "z")
        passing = []
        for eps in (1, -1):
            wu_l = commutator(W_t, q.A.coeff(U_z)).scale(eps)
            wu_r = q.A.coeff((2 * (U_z - U_t) / (z - t)).derivative("z"))
            ww_l = commutator(W_t, W_z)
            inner = W_z.derivative("z") + W_t.derivative("t") - (W_z - W_t).scale(2 / (z - t))
            ww_r = inner.scale(2 * eps / (z - t))
            if family_member(q, wu_l - wu_r) and family_member(q, ww_l - ww_r):
                passing.append(eps)
        return len(passing) == 1, None, {"signs_respecting_relations": passing}

    checks.append(_timed("quantum-series/ell0-commutes-with-W", ell0))
    checks.append(_timed("quantum-series/ell1-bracket-mod-ideal", ell1))
    checks.append(_timed("quantum-series/U-U-commute", uu))
    checks.append(_timed("quantum-series/W-U-relation-mod-ideal", wu))
    checks.append(_timed("quantum-series/W-W-relation-mod-ideal", ww))
    checks.append(_timed("quantum-series/X-series-image", x_image))
    checks.append(_timed("quantum-series/morphism-sign", y_sign))
    return checks


# --------------------------------------------------------- separation check


def res_at_infinity(r: RatFunc, var: str) -> RatFunc:
    """Res_{t=inf}(r dt) = -(coefficient of t^-1 in the expansion at infinity)."""
    return -series_coeff(r, var, 1, allow_polynomial_part=True)


def residue_identity_check(cfg: SystemConfig, phi: Sequence) -> tuple[bool, str | None, bool]:
    """sum_alpha phi(xh)/(xh - a_i) = -Res_{t=inf}((U(t) - U(a_i)) phi(t)/(t - a_i) dt)
    in Q(xh, s) for every i, with f_i on the separated locus.  The third entry
    says whether the identity also holds when Res is read as plain extraction of
    the t^-1 coefficient."""
    ring = poly_ring(tuple(f"xh{a + 1}" for a in range(cfg.g)) + ("s", "t"))
    fs = extended_f(cfg, ring)
    tv = ring.var("t")
    P = ring.zero()
    for i in range(cfg.n):
        term = fs[i]
        for j, aj in enumerate(cfg.a):
            if j != i:
                term = term * (tv - aj)
        P = P + term
    U = P.derivative("t") / P
    phi_t = sum((ring.coerce(c) * tv**k for k, c in enumerate(phi)), ring.zero())
    ok, alt, witness = True, True, None
    for i, ai in enumerate(cfg.a):
        lhs = ring.zero()
        for a in range(cfg.g):
            x = ring.var(f"xh{a + 1}")
            lhs = lhs + phi_t.subs({"t": x}) / (x - ai)
        res = res_at_infinity((U - U.subs({"t": ai})) * phi_t / (tv - ai), "t")
        if lhs != -res:
            ok = False
            witness = witness or f"i={i + 1}: lhs={lhs} -Res={-res}"
        if lhs != res:
            alt = False
    return ok, witness, alt


@dataclass
class SeparationOperators:
    """Both sides of the separation identity as operators on the extended module.

    The right side is scale * (Pi(xh)^p yh)^2 + sum (-C_i/2)/(xh - a_i)^2."""

    q: QuantumAlgebras
    dm: DeltaModule
    pi_power: int = -1
    scale: Fraction = Fraction(1)

    def h(self, i: int, v: DeltaVector) -> DeltaVector:
        return self.dm.act(self.q.h(i), v)

    def y(self, a: int, v: DeltaVector) -> DeltaVector:
        """yh_alpha = -Pi(xh_alpha) sum_i (xh_alpha - a_i)^{-1} h_i, coefficients left."""
        x = self.dm.ring.var(f"xh{a + 1}")
        out = DeltaVector(self.dm, {})
        for i, ai in enumerate(self.q.cfg.a):
            out = out + self.h(i, v).scale(-self.q.cfg.pi_at(x) / (x - ai))
        return out

    def lhs(self, a: int, v: DeltaVector) -> DeltaVector:
        x = self.dm.ring.var(f"xh{a + 1}")
        H = quantum_hitchin(self.q)
        out = DeltaVector(self.dm, {})
        for i, ai in enumerate(self.q.cfg.a):
            out = out + self.dm.act(H[i], v).scale(1 / (x - ai))
        return out

    def rhs(self, a: int, v: DeltaVector) -> DeltaVector:
        ring = self.dm.ring
        x = ring.var(f"xh{a + 1}")
        w = self.q.cfg.pi_at(x) ** self.pi_power
        out = self.y(a, self.y(a, v).scale(w)).scale(w * self.scale)
        for i, ai in enumerate(self.q.cfg.a):
            out = out + v.scale(-self.q.casimir(i).to_ring(ring) / 2 / (x - ai) ** 2)
        return out

    def test_family(self) -> dict[str, DeltaVector]:
        v0 = self.dm.vacuum()
        fam = {"v0": v0}
        for b in range(self.q.cfg.g):
            fam[f"xh{b + 1}.v0"] = v0.scale(self.dm.ring.var(f"xh{b + 1}"))
            fam[f"yh{b + 1}.v0"] = self.y(b, v0)
        for j in range(self.q.cfg.n):
            fam[f"h{j + 1}.v0"] = self.h(j, v0)
        return fam

    def failures(self) -> list[tuple[int, str, str]]:
        out = []
        fam = self.test_family()
        for a in range(self.q.cfg.g):
            for name, v in fam.items():
                d = self.lhs(a, v) - self.rhs(a, v)
                if not d.is_zero():
                    out.append((a, name, str(d)[:500]))
        return out


# label -> (power of Pi, overall factor); the first entry is the normative one
T_CONVENTIONS = {
    "Pi^-1": (-1, Fraction(1)),
    "Pi": (1, Fraction(1)),
    "quarter-Pi^-1": (-1, Fraction(1, 4)),
}


def separation_checks(cfg: SystemConfig) -> list[Check]:
    if cfg.casimirs is None or not cfg.casimir_hypothesis():
        raise ValueError("separation check needs Casimirs with sum C = sum a C")
    q = QuantumAlgebras(cfg)
    checks = []
    for k in range(3):
        phi = [0] * k + [1]

        def lem(phi=phi):
            ok, w, alt = residue_identity_check(cfg, phi)
            return ok, w, {"holds_with_plain_coefficient_extraction": alt}

        checks.append(_timed(f"separation/residue-identity/X^{k}", lem))

    def main():
        results = {}
        for lift in ("roots", "flat"):
            dm = DeltaModule(cfg, (), EXTENDED, lift)
            for label, (power, factor) in T_CONVENTIONS.items():
                results[(lift, label)] = SeparationOperators(q, dm, power, factor).failures()
        passing = sorted(label for (lift, label), f in results.items() if lift == "roots" and not f)
        detail = {
            "conventions_passing": passing or ["none"],
            "flat_lift_conventions_passing": sorted(l for (lf, l), f in results.items() if lf == "flat" and not f)
            or ["none"],
        }
        f = results[("roots", "Pi^-1")]
        if f:
            a, name, w = f[0]
            return False, f"alpha={a + 1} on {name}: {w}", detail
        return True, None, detail

    checks.append(_timed("separation/identity-on-test-family", main))
    return checks
