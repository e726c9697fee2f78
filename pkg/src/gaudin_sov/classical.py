"""The rational Gaudin (Hitchin) system, the Beauville-Mukai system on
g points of T*P^1, and the birational maps alpha, beta, eta between them.

Coordinates.  A point of the nilpotent cone at a_i is (u_i, v_i) with the
third matrix entry w_i = -v_i^2/u_i eliminated.  A point of (T*P^1)^(g) is
a set of pairs (x_alpha, y_alpha).  Symbolic variables are named ``u1..un``,
``v1..vn``, ``x1..xg``, ``y1..yg`` with n = g + 3.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import flint

from .kernel import PolyRing, RatFunc, poly_ring, to_fraction
from .opalgebra import CLASSICAL, AlgebraDescriptor, NCElement, poisson_bracket


class ConfigError(ValueError):
    pass


class IrrationalSpectrum(ArithmeticError):
    pass


class DegenerateSpectrum(ArithmeticError):
    pass


class NotInDomain(ArithmeticError):
    pass


def _frac(x) -> Fraction:
    return to_fraction(x) if not isinstance(x, str) else Fraction(x)


@dataclass(frozen=True)
class SystemConfig:
    g: int
    points: tuple[Fraction, ...]
    casimirs: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(_frac(a) for a in self.points))
        if self.casimirs is not None:
            object.__setattr__(self, "casimirs", tuple(_frac(c) for c in self.casimirs))
        if self.g < 1:
            raise ConfigError("genus must be positive")
        if len(self.points) != self.g + 3:
            raise ConfigError(f"need {self.g + 3} points for genus {self.g}, got {len(self.points)}")
        if len(set(self.points)) != len(self.points):
            raise ConfigError("marked points must be pairwise distinct")
        if self.casimirs is not None and len(self.casimirs) != self.n:
            raise ConfigError(f"need {self.n} Casimir values, got {len(self.casimirs)}")

    @property
    def n(self) -> int:
        return self.g + 3

    @property
    def a(self) -> tuple[Fraction, ...]:
        return self.points

    def pi_prime(self, i: int) -> Fraction:
        """prod_{j != i} (a_i - a_j)."""
        out = Fraction(1)
        for j, aj in enumerate(self.points):
            if j != i:
                out *= self.points[i] - aj
        return out

    def pi_at(self, x):
        """Pi(x) = prod_i (x - a_i) for a scalar or RatFunc x."""
        out = 1
        for ai in self.points:
            out = out * (x - ai)
        return out

    def casimir_hypothesis(self) -> bool:
        if self.casimirs is None:
            return False
        return sum(self.casimirs) == sum(a * c for a, c in zip(self.points, self.casimirs))

    # variable names
    def xs(self) -> list[str]:
        return [f"x{k + 1}" for k in range(self.g)]

    def ys(self) -> list[str]:
        return [f"y{k + 1}" for k in range(self.g)]

    def us(self) -> list[str]:
        return [f"u{k + 1}" for k in range(self.n)]

    def vs(self) -> list[str]:
        return [f"v{k + 1}" for k in range(self.n)]


CFG1 = SystemConfig(1, (0, 1, 2, 3))


def elementary(values: Sequence, k: int):
    """e_k of a list of scalars or RatFuncs (e_0 = 1, e_k = 0 for k > len)."""
    if k < 0 or k > len(values):
        return 0
    out = 0
    for combo in combinations(values, k):
        t = 1
        for v in combo:
            t = t * v
        out = out + t
    return out


@dataclass(frozen=True)
class SeparatedPoint:
    pairs: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pairs = tuple(sorted((_frac(x), _frac(y)) for x, y in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        xs = [x for x, _ in pairs]
        if len(set(xs)) != len(xs):
            raise DegenerateSpectrum("separated coordinates x must be distinct")

    @property
    def x(self) -> list[Fraction]:
        return [p[0] for p in self.pairs]

    @property
    def y(self) -> list[Fraction]:
        return [p[1] for p in self.pairs]

    def as_values(self, cfg: SystemConfig) -> dict[str, Fraction]:
        vals = dict(zip(cfg.xs(), self.x))
        vals.update(zip(cfg.ys(), self.y))
        return vals


@dataclass(frozen=True)
class NilpotentTuple:
    u: tuple[Fraction, ...]
    v: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(_frac(x) for x in self.u))
        object.__setattr__(self, "v", tuple(_frac(x) for x in self.v))
        if len(self.u) != len(self.v):
            raise ValueError("u and v must have equal length")

    @property
    def w(self) -> tuple[Fraction, ...]:
        return tuple(-vi * vi / ui for ui, vi in zip(self.u, self.v))

    def violations(self, cfg: SystemConfig) -> list[str]:
        out = []
        if len(self.u) != cfg.n:
            return ["wrong length"]
        if any(ui == 0 for ui in self.u):
            out.append("some u_i vanish")
        if sum(self.u) != 0:
            out.append("sum u != 0")
        if sum(a * ui for a, ui in zip(cfg.a, self.u)) != 0:
            out.append("sum a u != 0")
        if sum(self.v) != 0:
            out.append("sum v != 0")
        if sum(a * a * ui for a, ui in zip(cfg.a, self.u)) == 0:
            out.append("sum a^2 u == 0")
        return out

    def as_values(self, cfg: SystemConfig) -> dict[str, Fraction]:
        vals = dict(zip(cfg.us(), self.u))
        vals.update(zip(cfg.vs(), self.v))
        return vals


@dataclass(frozen=True)
class HitchVector:
    h: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(_frac(x) for x in self.h))

    def satisfies_relations(self, cfg: SystemConfig) -> bool:
        return all(sum(a**k * hi for a, hi in zip(cfg.a, self.h)) == 0 for k in range(3))


@dataclass(frozen=True)
class BMVector:
    h: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(_frac(x) for x in self.h))


# ------------------------------------------------------------------ rings


def bm_ring(cfg: SystemConfig, extra: Sequence[str] = ()) -> PolyRing:
    return poly_ring(tuple(cfg.xs()) + tuple(cfg.ys()) + tuple(extra))


def hitchin_ring(cfg: SystemConfig, extra: Sequence[str] = ()) -> PolyRing:
    return poly_ring(tuple(cfg.us()) + tuple(cfg.vs()) + tuple(extra))


@lru_cache(maxsize=None)
def x_algebra(cfg: SystemConfig, params: tuple[str, ...] = (), mode: str = CLASSICAL) -> AlgebraDescriptor:
    """Coefficients Q(x, params); y_alpha acts by 2 Pi(x_alpha) d/dx_alpha."""
    ring = poly_ring(tuple(cfg.xs()) + tuple(params))
    action = {}
    for xn, yn in zip(cfg.xs(), cfg.ys()):
        action[yn] = {xn: 2 * cfg.pi_at(ring.var(xn))}
    return AlgebraDescriptor(ring, cfg.ys(), action, mode, name="X-side")


@lru_cache(maxsize=None)
def u_algebra(cfg: SystemConfig, params: tuple[str, ...] = ()) -> AlgebraDescriptor:
    """Coefficients Q(u, params); v_i acts by -2 u_i d/du_i."""
    ring = poly_ring(tuple(cfg.us()) + tuple(params))
    action = {vn: {un: -2 * ring.var(un)} for un, vn in zip(cfg.us(), cfg.vs())}
    return AlgebraDescriptor(ring, cfg.vs(), action, CLASSICAL, name="U-side")


# ----------------------------------------------------------- Hamiltonians


def bm_hamiltonians(cfg: SystemConfig, extra: Sequence[str] = ()) -> list[RatFunc]:
    """H_1..H_g: coefficients of X^0..X^(g-1) in the Lagrange interpolant of
    y^2/Pi(x) through the nodes x_1..x_g."""
    ring = bm_ring(cfg, extra)
    g = cfg.g
    xs = [ring.var(n) for n in cfg.xs()]
    ys = [ring.var(n) for n in cfg.ys()]
    values = [y * y / cfg.pi_at(x) for x, y in zip(xs, ys)]
    hams = [ring.zero() for _ in range(g)]
    for al in range(g):
        others = [xs[b] for b in range(g) if b != al]
        denom = ring.one()
        for xb in others:
            denom = denom * (xs[al] - xb)
        w = values[al] / denom
        # prod_{b != al}(X - x_b) = sum_k (-1)^(g-1-k) e_{g-1-k}(others) X^k
        for k in range(g):
            e = elementary(others, g - 1 - k)
            if e == 0:
                continue
            sign = -1 if (g - 1 - k) % 2 else 1
            hams[k] = hams[k] + w * (sign * ring.coerce(e))
    return hams


def hitchin_hamiltonians(cfg: SystemConfig, extra: Sequence[str] = ()) -> list[RatFunc]:
    """Gaudin Hamiltonians sum_{j != i} tr(A_i A_j)/(a_i - a_j) on the nilpotent cone."""
    ring = hitchin_ring(cfg, extra)
    u = [ring.var(n) for n in cfg.us()]
    v = [ring.var(n) for n in cfg.vs()]
    hams = []
    for i in range(cfg.n):
        h = ring.zero()
        for j in range(cfg.n):
            if j == i:
                continue
            num = (u[i] * v[j] - u[j] * v[i]) ** 2
            h = h + num / ((cfg.a[j] - cfg.a[i]) * u[i] * u[j])
        hams.append(h)
    return hams


def evaluate_hitchin(cfg: SystemConfig, t: NilpotentTuple) -> HitchVector:
    """Numeric Gaudin Hamiltonians from the trace form 2 v_i v_j + u_i w_j + u_j w_i."""
    w = t.w
    out = []
    for i in range(cfg.n):
        s = Fraction(0)
        for j in range(cfg.n):
            if j != i:
                tr = 2 * t.v[i] * t.v[j] + t.u[i] * w[j] + t.u[j] * w[i]
                s += tr / (cfg.a[i] - cfg.a[j])
        out.append(s)
    return HitchVector(tuple(out))


def evaluate_bm(cfg: SystemConfig, p: SeparatedPoint) -> BMVector:
    """Numeric H^BM via the interpolating polynomial (independent of the symbolic route)."""
    g = cfg.g
    coeffs = [Fraction(0)] * g
    for al, (xa, ya) in enumerate(p.pairs):
        others = [xb for b, (xb, _) in enumerate(p.pairs) if b != al]
        poly = flint.fmpq_poly([1])
        denom = Fraction(1)
        for xb in others:
            poly *= flint.fmpq_poly([-_fmpq(xb), 1])
            denom *= xa - xb
        scale = ya * ya / cfg.pi_at(xa) / denom
        for k in range(g):
            coeffs[k] += to_fraction(poly[k]) * scale
    return BMVector(tuple(coeffs))


def _fmpq(x: Fraction) -> flint.fmpq:
    return flint.fmpq(x.numerator, x.denominator)


# ------------------------------------------------------------------- maps


def spectral_polynomial(cfg: SystemConfig, u: Sequence[Fraction]) -> flint.fmpq_poly:
    """P_u(X) = Pi(X) sum_i u_i/(X - a_i)."""
    out = flint.fmpq_poly([0])
    for i, ui in enumerate(u):
        term = flint.fmpq_poly([_fmpq(Fraction(ui))])
        for j, aj in enumerate(cfg.a):
            if j != i:
                term *= flint.fmpq_poly([-_fmpq(aj), 1])
        out += term
    return out


def alpha(cfg: SystemConfig, t: NilpotentTuple) -> SeparatedPoint:
    bad = t.violations(cfg)
    if "sum a^2 u == 0" in bad:
        raise NotInDomain("sum a_i^2 u_i vanishes")
    if bad:
        raise NotInDomain("; ".join(bad))
    p = spectral_polynomial(cfg, t.u)
    if p.degree() != cfg.g:
        raise NotInDomain(f"spectral polynomial has degree {p.degree()}")
    _, factors = p.factor()
    roots = []
    for f, mult in factors:
        if f.degree() != 1:
            continue
        if mult > 1:
            raise DegenerateSpectrum("repeated spectral root")
        roots.append(to_fraction(-f[0] / f[1]))
    if len(roots) < cfg.g:
        raise IrrationalSpectrum("spectral polynomial does not split over Q")
    if any(r in cfg.a for r in roots):
        raise DegenerateSpectrum("spectral root at a marked point")
    pairs = []
    for x in roots:
        y = cfg.pi_at(x) * sum(vi / (x - ai) for vi, ai in zip(t.v, cfg.a))
        pairs.append((x, y))
    return SeparatedPoint(tuple(pairs))


def beta(cfg: SystemConfig, p: SeparatedPoint) -> NilpotentTuple:
    xs, ys = p.x, p.y
    if any(x in cfg.a for x in xs):
        raise NotInDomain("a separated coordinate sits at a marked point")
    u, v = [], []
    for i, ai in enumerate(cfg.a):
        pp = cfg.pi_prime(i)
        ui = Fraction(1)
        for x in xs:
            ui *= ai - x
        u.append(ui / pp)
        vi = Fraction(0)
        for al, (xa, ya) in enumerate(p.pairs):
            num, den = Fraction(1), Fraction(1)
            for b, xb in enumerate(xs):
                if b != al:
                    num *= ai - xb
                    den *= xa - xb
            vi += ya * num / den
        v.append(vi / pp)
    return NilpotentTuple(tuple(u), tuple(v))


def beta_symbolic(cfg: SystemConfig, extra: Sequence[str] = ()) -> tuple[list[RatFunc], list[RatFunc]]:
    """beta's formulas as rational functions of free (x, y)."""
    ring = bm_ring(cfg, extra)
    xs = [ring.var(n) for n in cfg.xs()]
    ys = [ring.var(n) for n in cfg.ys()]
    u, v = [], []
    for i, ai in enumerate(cfg.a):
        pp = cfg.pi_prime(i)
        ui = ring.one()
        for x in xs:
            ui = ui * (ai - x)
        u.append(ui / pp)
        vi = ring.zero()
        for al in range(cfg.g):
            num, den = ring.one(), ring.one()
            for b in range(cfg.g):
                if b != al:
                    num = num * (ai - xs[b])
                    den = den * (xs[al] - xs[b])
            vi = vi + ys[al] * num / den
        v.append(vi / pp)
    return u, v


def eta(cfg: SystemConfig, h: HitchVector) -> BMVector:
    """Coefficients of X^0..X^(g-1) of P_h(X) = Pi(X) sum_i h_i/(X - a_i)."""
    p = spectral_polynomial(cfg, h.h)
    if p.degree() >= cfg.g:
        raise NotInDomain("input does not satisfy the three linear relations")
    return BMVector(tuple(to_fraction(p[k]) for k in range(cfg.g)))


def eta_inv(cfg: SystemConfig, b: BMVector) -> HitchVector:
    out = []
    for i, ai in enumerate(cfg.a):
        s = sum(hj * ai**j for j, hj in enumerate(b.h))
        out.append(Fraction(s) / cfg.pi_prime(i))
    return HitchVector(tuple(out))


def eta_symbolic(cfg: SystemConfig, hs: Sequence[RatFunc]) -> list[RatFunc]:
    """eta applied to a vector of functions: k-th coefficient is
    sum_i h_i (-1)^(n-1-k) e_{n-1-k}(a_{!=i})."""
    n = cfg.n
    out = []
    for k in range(cfg.g):
        s = 0
        for i, h in enumerate(hs):
            others = [a for j, a in enumerate(cfg.a) if j != i]
            e = elementary(others, n - 1 - k)
            sign = -1 if (n - 1 - k) % 2 else 1
            s = h * (sign * e) + s
        out.append(s)
    return out


def check_diagram(cfg: SystemConfig, p: SeparatedPoint) -> bool:
    t = beta(cfg, p)
    lhs = eta(cfg, evaluate_hitchin(cfg, t))
    rhs = evaluate_bm(cfg, p)
    return lhs == rhs and alpha(cfg, t) == p


def gamma_act(cfg: SystemConfig, t: NilpotentTuple, a, b, c) -> NilpotentTuple:
    """Action of [[a, bX + c], [0, 1/a]] on a gauge-fixed tuple."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    u = tuple(ui / (a * a) for ui in t.u)
    v = tuple(vi + (b * ai + c) * ui / a for vi, ui, ai in zip(t.v, t.u, cfg.a))
    return NilpotentTuple(u, v)


# --------------------------------------------------------------- sampling


def random_rational(rng: random.Random, bound: int = 12, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound * den, bound * den), rng.randint(1, den))


def random_separated_point(cfg: SystemConfig, rng: random.Random) -> SeparatedPoint:
    xs: list[Fraction] = []
    while len(xs) < cfg.g:
        x = random_rational(rng)
        if x not in cfg.a and x not in xs:
            xs.append(x)
    ys = [random_rational(rng) for _ in xs]
    return SeparatedPoint(tuple(zip(xs, ys)))


# --------------------------------------------------------- Poisson checks


def bm_involutivity(cfg: SystemConfig) -> dict[tuple[int, int], NCElement]:
    """All brackets {H_i, H_j} (i < j) in the X-side algebra."""
    alg = x_algebra(cfg)
    hams = [alg.from_ratfunc(h) for h in bm_hamiltonians(cfg)]
    return {
        (i, j): poisson_bracket(hams[i], hams[j])
        for i in range(cfg.g)
        for j in range(i + 1, cfg.g)
    }


def constrained_u(cfg: SystemConfig, ring: PolyRing, sigma: str | None = "s") -> list[RatFunc]:
    """u_i = sigma prod_alpha (a_i - x_alpha)/Pi'(a_i) (sigma = 1 if None)."""
    xs = [ring.var(n) for n in cfg.xs()]
    out = []
    for i, ai in enumerate(cfg.a):
        t = ring.one() if sigma is None else ring.var(sigma)
        for x in xs:
            t = t * (ai - x)
        out.append(t / cfg.pi_prime(i))
    return out


def hitchin_involutivity(cfg: SystemConfig) -> dict[tuple[int, int], RatFunc]:
    """{H_i, H_j} in the unconstrained (u, v) algebra, then u -> constrained form."""
    alg = u_algebra(cfg)
    hams = [alg.from_ratfunc(h) for h in hitchin_hamiltonians(cfg)]
    target = poly_ring(tuple(cfg.xs()) + ("s",) + tuple(cfg.vs()))
    us = constrained_u(cfg, target)
    mapping = dict(zip(cfg.us(), us))
    out = {}
    for i in range(cfg.n):
        for j in range(i + 1, cfg.n):
            br = poisson_bracket(hams[i], hams[j]).to_ratfunc()
            out[(i, j)] = br.subs(mapping, ring=target)
    return out
