"""The induced module A/I realized on delta distributions.

Linear coordinates F_k = sum_i a_i^(k-1) f_i (k = 1..n) replace the f_i.
A vector is a finite sum of layers  c_(p,q) * d^p delta(F_1) * d^q delta(F_2).
The coefficients c are functions on the surface F_1 = F_2 = 0, written in
one of two charts: the surface field Q(F_3..F_n), or the extended field
Q(xh_1..xh_g, s) in which

    f_i = s * prod_alpha (a_i - xh_alpha) / prod_{j != i} (a_i - a_j)

on the surface, with s = F_3 = sum_i a_i^2 f_i.  Off the surface the
extended chart follows the roots of the spectral polynomial (see DeltaModule).

Rules:
  * multiplication by r: write r in the chart (F_1, F_2, w) and use Leibniz
    against the distributions,
        r * d^p delta = sum_m (-1)^m C(p, m) (d^m r)(F_1 = 0) d^(p-m) delta,
    (same in F_2), so only jets of r along the surface are needed;
  * d/dF_k goes through the inverse Jacobian of the chart: the F_1, F_2
    components raise the layer index, the w components differentiate the
    coefficient;
  * f_i^* = sum_k a_i^(k-1) d/dF_k.

The vacuum is v0 = s delta(F_1) delta(F_2), annihilated by sum f_i,
sum a_i f_i and sum h_i - 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping

from .classical import SystemConfig
from .kernel import KernelError, PolyRing, RatFunc, poly_ring, solve_linear
from .opalgebra import NCElement

SURFACE = "surface"
EXTENDED = "extended"


class DenominatorOnSurface(KernelError):
    """A coefficient's denominator vanishes on F_1 = F_2 = 0."""


Layer = tuple[int, int]


@dataclass
class DeltaVector:
    module: "DeltaModule"
    layers: dict[Layer, RatFunc] = field(default_factory=dict)

    def __post_init__(self):
        self.layers = {k: v for k, v in self.layers.items() if not v.is_zero()}

    def is_zero(self) -> bool:
        return not self.layers

    def __add__(self, other: "DeltaVector") -> "DeltaVector":
        out = dict(self.layers)
        for k, v in other.layers.items():
            out[k] = out[k] + v if k in out else v
        return DeltaVector(self.module, out)

    def __neg__(self):
        return DeltaVector(self.module, {k: -v for k, v in self.layers.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, DeltaVector) and (self - other).is_zero()

    __hash__ = None

    def scale(self, r) -> "DeltaVector":
        """Multiply every layer by an element of the coefficient field."""
        r = self.module.ring.coerce(r)
        return DeltaVector(self.module, {k: r * v for k, v in self.layers.items()})

    def depth(self) -> Layer:
        p = max((k[0] for k in self.layers), default=0)
        q = max((k[1] for k in self.layers), default=0)
        return p, q

    def __str__(self):
        if not self.layers:
            return "0"
        return " + ".join(f"({v})*d{p},{q}" for (p, q), v in sorted(self.layers.items()))


class DeltaModule:
    """Left action of the algebra A (coefficients f_i, operators f_i^*).

    The module is written in a chart (F_1, F_2, w) of V: F_1 and F_2 are kept
    as coordinates and F_3..F_n are functions of (F_1, F_2, w).  Layer
    coefficients are functions of w only.

    * surface mode: w = (F_3..F_n), the identity chart;
    * extended mode: w = (xh_1..xh_g, s) with s = F_3 and the xh the roots of
      the spectral polynomial.  ``lift="roots"`` takes the xh to be roots of the
      full P_f(X) = sum_i f_i prod_{j != i}(X - a_j), so they move with F_1, F_2;
      ``lift="flat"`` takes roots of the polynomial with the F_1, F_2 components
      dropped, so that the xh depend on F_3..F_n only.
    """

    def __init__(self, cfg: SystemConfig, params: tuple[str, ...] = (), mode: str = SURFACE, lift: str = "roots"):
        if mode not in (SURFACE, EXTENDED):
            raise ValueError(f"unknown mode {mode!r}")
        if lift not in ("roots", "flat"):
            raise ValueError(f"unknown lift {lift!r}")
        self.cfg = cfg
        self.params = tuple(params)
        self.mode = mode
        self.lift = lift
        n = cfg.n
        self.F = [f"F{k + 1}" for k in range(n)]
        self.f = [f"f{i + 1}" for i in range(n)]
        self.F_ring = poly_ring(tuple(self.F) + self.params)
        # f = V^{-1} F with V[k][i] = a_i^k
        vand = [[Fraction(ai) ** k for ai in cfg.a] for k in range(n)]
        inv = _inverse(vand)
        Fv = [self.F_ring.var(x) for x in self.F]
        self.f_in_F = {
            self.f[i]: sum((Fv[k] * inv[i][k] for k in range(n) if inv[i][k]), self.F_ring.zero())
            for i in range(n)
        }
        if mode == SURFACE:
            self.w = list(self.F[2:])
            self.ring = poly_ring(tuple(self.w) + self.params)
            self.chart_ring = poly_ring(("F1", "F2") + tuple(self.w) + self.params)
            self.s = self.ring.var("F3")
            self.chart = {x: self.chart_ring.var(x) for x in self.F}
        else:
            self.w = [f"xh{a + 1}" for a in range(cfg.g)] + ["s"]
            self.ring = poly_ring(tuple(self.w) + self.params)
            self.chart_ring = poly_ring(("F1", "F2") + tuple(self.w) + self.params)
            self.s = self.ring.var("s")
            self.chart = self._extended_chart()
        self.coords = ["F1", "F2"] + self.w
        self._jinv = self._inverse_jacobian()
        self._coeff_cache: dict = {}
        self._chart_cache: dict = {}

    def _extended_chart(self) -> dict[str, RatFunc]:
        """F_k as functions of (F_1, F_2, xh, s)."""
        cfg, R = self.cfg, self.chart_ring
        F1, F2, s = R.var("F1"), R.var("F2"), R.var("s")
        xs = [R.var(f"xh{a + 1}") for a in range(cfg.g)]
        # P_f(X) = sum_k F_k Q_k(X); unknowns F_4..F_n from P_f(xh_alpha) = 0
        Q = _q_basis(cfg)
        if self.lift == "flat":
            fs = extended_f(cfg, R)
            chart = {"F1": F1, "F2": F2}
            for k in range(2, cfg.n):
                chart[self.F[k]] = sum((fs[i] * Fraction(cfg.a[i]) ** k for i in range(cfg.n)), R.zero())
            return chart
        rows, rhs = [], []
        for x in xs:
            vals = [_eval_poly(q, x) for q in Q]
            rows.append(vals[3:])
            rhs.append(-(F1 * vals[0] + F2 * vals[1] + s * vals[2]))
        sol = solve_linear(rows, rhs) if rows else []
        chart = {"F1": F1, "F2": F2, "F3": s}
        for k, v in enumerate(sol):
            chart[self.F[k + 3]] = v
        return chart

    def _inverse_jacobian(self) -> list[list[RatFunc]]:
        """Entry [c][j] = d coord_c / d F_(j+1) in the chart."""
        R = self.chart_ring
        n = self.cfg.n
        jac = [[self.chart[self.F[k]].derivative(c) for c in self.coords] for k in range(n)]
        cols = []
        for j in range(n):
            rhs = [R.one() if r == j else R.zero() for r in range(n)]
            cols.append(solve_linear(jac, rhs))
        return [[cols[j][c] for j in range(n)] for c in range(n)]

    # ----------------------------------------------------------- vectors
    def vacuum(self) -> DeltaVector:
        return DeltaVector(self, {(0, 0): self.s})

    def vector(self, layers: Mapping[Layer, object]) -> DeltaVector:
        return DeltaVector(self, {k: self.ring.coerce(v) for k, v in layers.items()})

    # ------------------------------------------------- coefficient handling
    def to_F(self, c: RatFunc) -> RatFunc:
        """Rewrite a coefficient of A (in f_i and parameters) in the F coordinates."""
        return c.subs(self.f_in_F, ring=self.F_ring)

    def to_chart(self, c: RatFunc) -> RatFunc:
        """A coefficient of A as a function of the chart coordinates."""
        hit = self._chart_cache.get(c)
        if hit is None:
            hit = self.to_F(c).subs(self.chart, ring=self.chart_ring)
            self._chart_cache[c] = hit
        return hit

    def _on_surface(self, r: RatFunc) -> RatFunc:
        zero = {"F1": 0, "F2": 0}
        if not r.den.is_constant():
            den = RatFunc(self.chart_ring, r.den).subs(zero)
            if den.is_zero():
                raise DenominatorOnSurface(f"denominator {r.den} vanishes on F1 = F2 = 0")
        return r.subs(zero, ring=self.ring)

    def jet(self, r: RatFunc, m: int, l: int) -> RatFunc:
        """(d/dF_1)^m (d/dF_2)^l r on the surface, r a chart function."""
        key = (r, m, l)
        hit = self._coeff_cache.get(key)
        if hit is None:
            d = r
            for _ in range(m):
                d = d.derivative("F1")
            for _ in range(l):
                d = d.derivative("F2")
            hit = self._on_surface(d)
            self._coeff_cache[key] = hit
        return hit

    # --------------------------------------------------------------- action
    def multiply_chart(self, r: RatFunc, v: DeltaVector) -> DeltaVector:
        """Multiplication by a chart function, Leibniz against the deltas."""
        out: dict[Layer, RatFunc] = {}
        for (p, q), b in v.layers.items():
            for m in range(p + 1):
                for l in range(q + 1):
                    j = self.jet(r, m, l)
                    if j.is_zero():
                        continue
                    term = j * b * ((-1) ** (m + l) * comb(p, m) * comb(q, l))
                    key = (p - m, q - l)
                    out[key] = out[key] + term if key in out else term
        return DeltaVector(self, out)

    def multiply(self, c: RatFunc, v: DeltaVector) -> DeltaVector:
        """Multiplication by a coefficient of A (a function of the f_i)."""
        return self.multiply_chart(self.to_chart(c), v)

    def d_coord(self, c: int, v: DeltaVector) -> DeltaVector:
        """Derivative along the c-th chart coordinate."""
        if c == 0:
            return DeltaVector(self, {(p + 1, q): b for (p, q), b in v.layers.items()})
        if c == 1:
            return DeltaVector(self, {(p, q + 1): b for (p, q), b in v.layers.items()})
        name = self.coords[c]
        return DeltaVector(self, {key: b.derivative(name) for key, b in v.layers.items()})

    def d_F(self, k: int, v: DeltaVector) -> DeltaVector:
        """d/dF_(k+1) on a vector (0-based k)."""
        out = DeltaVector(self, {})
        for c in range(self.cfg.n):
            coef = self._jinv[c][k]
            if coef.is_zero():
                continue
            out = out + self.multiply_chart(coef, self.d_coord(c, v))
        return out

    def f_star(self, i: int, v: DeltaVector) -> DeltaVector:
        out = DeltaVector(self, {})
        for k in range(self.cfg.n):
            w = Fraction(self.cfg.a[i]) ** k
            if w:
                out = out + self.d_F(k, v).scale(w)
        return out

    def act(self, a: NCElement, v: DeltaVector) -> DeltaVector:
        """Left action of a normal-ordered element of A on a vector."""
        powers: dict[tuple[int, ...], DeltaVector] = {(0,) * a.algebra.nops: v}

        def apply(mono):
            if mono in powers:
                return powers[mono]
            i = next(k for k, e in enumerate(mono) if e)
            prev = list(mono)
            prev[i] -= 1
            res = self.f_star(i, apply(tuple(prev)))
            powers[mono] = res
            return res

        out = DeltaVector(self, {})
        for mono, c in a.terms.items():
            out = out + self.multiply(c, apply(mono))
        return out

    def annihilates_vacuum(self, a: NCElement) -> bool:
        return self.act(a, self.vacuum()).is_zero()


def _q_basis(cfg: SystemConfig) -> list[list[Fraction]]:
    """Q_k(X) with P_f(X) = sum_k F_k Q_k(X); coefficient lists, constant first."""
    n = cfg.n
    vand = [[Fraction(ai) ** k for ai in cfg.a] for k in range(n)]
    inv = _inverse(vand)
    basis = []
    for i in range(n):
        poly = [Fraction(1)]
        for j, aj in enumerate(cfg.a):
            if j != i:
                poly = [Fraction(0)] + poly
                for d in range(len(poly) - 1):
                    poly[d] -= aj * poly[d + 1]
        basis.append(poly)
    out = []
    for k in range(n):
        q = [Fraction(0)] * n
        for i in range(n):
            if inv[i][k]:
                for d, c in enumerate(basis[i]):
                    q[d] += inv[i][k] * c
        out.append(q)
    return out


def _eval_poly(coeffs: list[Fraction], x: RatFunc) -> RatFunc:
    out = x.ring.zero()
    for c in reversed(coeffs):
        out = out * x + c
    return out


def extended_f(cfg: SystemConfig, ring: PolyRing) -> list[RatFunc]:
    """f_i = s prod_alpha (a_i - xh_alpha) / prod_{j != i}(a_i - a_j)."""
    s = ring.var("s")
    xh = [ring.var(f"xh{a + 1}") for a in range(cfg.g)]
    out = []
    for i, ai in enumerate(cfg.a):
        t = s / cfg.pi_prime(i)
        for x in xh:
            t = t * (ai - x)
        out.append(t)
    return out


@lru_cache(maxsize=None)
def delta_module(
    cfg: SystemConfig, params: tuple[str, ...] = (), mode: str = SURFACE, lift: str = "roots"
) -> DeltaModule:
    return DeltaModule(cfg, params, mode, lift)


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                fac = aug[r][col]
                aug[r] = [x - fac * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
