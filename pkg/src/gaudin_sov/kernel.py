"""Exact rational arithmetic: polynomial rings, rational functions and the
series / partial-fraction / identity-testing primitives used everywhere else.

Polynomials are sparse multivariate polynomials over Q backed by
``flint.fmpq_mpoly`` (graded lexicographic order).  Rational functions are
kept in a canonical form: numerator and denominator coprime, denominator
with leading coefficient 1, so that equality of canonical forms is equality
of functions.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import flint

__all__ = [
    "KernelError",
    "NotExpandable",
    "NotSimplePoles",
    "DenominatorVanishesEverywhere",
    "PolyRing",
    "RatFunc",
    "poly_ring",
    "to_fmpq",
    "to_fraction",
    "ratfunc_eq",
    "series_coeff",
    "partial_fractions",
    "solve_linear",
    "PRIME",
]

# Fixed 62-bit prime for the modular Schwartz-Zippel fast path.
PRIME = 2**62 - 57
SAMPLE_BOUND = 10**6
MAX_RESAMPLES = 100

Scalar = Union[int, Fraction, "flint.fmpq", "flint.fmpz", str]


class KernelError(ArithmeticError):
    pass


class NotExpandable(KernelError):
    pass


class NotSimplePoles(KernelError):
    pass


class DenominatorVanishesEverywhere(KernelError):
    pass


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, (int, flint.fmpz)):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x.strip())
        return flint.fmpq(f.numerator, f.denominator)
    raise TypeError(f"not a rational scalar: {x!r}")


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    q = to_fmpq(x)
    return Fraction(int(q.p), int(q.q))


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, flint.fmpq, flint.fmpz))


class PolyRing:
    """A polynomial ring Q[names] with a canonical flint context.

    Instances are cached by variable tuple, so ``poly_ring(names) is
    poly_ring(names)`` and rings can be compared by identity.
    """

    def __init__(self, names: tuple[str, ...]):
        if len(set(names)) != len(names):
            raise ValueError(f"repeated variable names: {names}")
        self.names = names
        self.nvars = len(names)
        self.index = {n: i for i, n in enumerate(names)}
        self.ctx = flint.fmpq_mpoly_ctx.get(names, "deglex")

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def __reduce__(self):
        return (poly_ring, (self.names,))

    # construction helpers
    def poly_const(self, c) -> flint.fmpq_mpoly:
        return self.ctx.from_dict({(0,) * self.ctx.nvars(): to_fmpq(c)}) if c != 0 else self.ctx.from_dict({})

    def const(self, c) -> "RatFunc":
        return RatFunc(self, self.poly_const(c), self.poly_const(1), _normal=True)

    def zero(self) -> "RatFunc":
        return self.const(0)

    def one(self) -> "RatFunc":
        return self.const(1)

    def var(self, name: str) -> "RatFunc":
        i = self.index[name]
        return RatFunc(self, self.ctx.gens()[i], self.poly_const(1), _normal=True)

    def vars(self, *names: str) -> list["RatFunc"]:
        return [self.var(n) for n in names]

    def poly_var(self, name: str) -> flint.fmpq_mpoly:
        return self.ctx.gens()[self.index[name]]

    def from_poly(self, p: flint.fmpq_mpoly) -> "RatFunc":
        return RatFunc(self, p, self.poly_const(1), _normal=True)

    def coerce(self, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            if x.ring is self:
                return x
            return x.to_ring(self)
        if _is_scalar(x):
            return self.const(x)
        if isinstance(x, flint.fmpq_mpoly):
            return self.from_poly(x)
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def extend(self, *names: str) -> "PolyRing":
        return poly_ring(self.names + tuple(n for n in names if n not in self.index))

    def parse(self, text: str) -> "RatFunc":
        """Parse an arithmetic expression in the ring variables (tests, CLI)."""
        env = {n: self.var(n) for n in self.names}
        env["Fraction"] = Fraction
        return self.coerce(eval(text, {"__builtins__": {}}, env))


@lru_cache(maxsize=None)
def poly_ring(names: Sequence[str]) -> PolyRing:
    return PolyRing(tuple(names))


def _remap_poly(p: flint.fmpq_mpoly, src: PolyRing, dst: PolyRing) -> flint.fmpq_mpoly:
    if src is dst:
        return p
    idx = [dst.index.get(n) for n in src.names]
    n = dst.ctx.nvars()
    out = {}
    for exps, c in p.to_dict().items():
        e = [0] * n
        for i, k in enumerate(exps):
            if k:
                if idx[i] is None:
                    raise KernelError(f"variable {src.names[i]} of {src} missing in {dst}")
                e[idx[i]] = k
        out[tuple(e)] = c
    return dst.ctx.from_dict(out)


def _poly_is_one(p) -> bool:
    return p.is_one()


class RatFunc:
    """A rational function num/den over Q in the variables of ``ring``."""

    __slots__ = ("ring", "num", "den", "_hash")

    def __init__(self, ring: PolyRing, num, den=None, _normal: bool = False):
        self.ring = ring
        if den is None:
            den = ring.poly_const(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normal:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # ------------------------------------------------------------------ basics
    def normalize(self) -> "RatFunc":
        num, den = _normalize(self.num, self.den)
        return RatFunc(self.ring, num, den, _normal=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return _poly_is_one(self.den)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise KernelError(f"not a constant: {self}")
        if self.num.is_zero():
            return Fraction(0)
        return to_fraction(self.num.leading_coefficient() / self.den.leading_coefficient())

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if _is_scalar(other):
            other = self.ring.const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if other.ring is not self.ring:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, str(self.num), str(self.den)))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.is_poly():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.ring is not self.ring:
                raise KernelError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if _is_scalar(other):
            return self.ring.const(other)
        return NotImplemented

    # -------------------------------------------------------------- arithmetic
    def __neg__(self):
        return RatFunc(self.ring, -self.num, self.den, _normal=True)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return RatFunc(self.ring, a + c, b)
        if _poly_is_one(b):
            return RatFunc(self.ring, a * d + c, d, _normal=True)
        if _poly_is_one(d):
            return RatFunc(self.ring, a + c * b, b, _normal=True)
        g = b.gcd(d)
        if _poly_is_one(g):
            return RatFunc(self.ring, a * d + b * c, b * d, _normal=True)
        b1, d1 = b / g, d / g
        num = a * d1 + c * b1
        h = num.gcd(g)
        if not _poly_is_one(h):
            num = num / h
            g = g / h
        return RatFunc(self.ring, *_monic(num, b1 * d1 * g), _normal=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            c = to_fmpq(other)
            if c == 0:
                return self.ring.zero()
            return RatFunc(self.ring, self.num * c, self.den, _normal=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero() or c.is_zero():
            return self.ring.zero()
        if _poly_is_one(b) and _poly_is_one(d):
            return RatFunc(self.ring, a * c, b, _normal=True)
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        if not _poly_is_one(g1):
            a, d = a / g1, d / g1
        if not _poly_is_one(g2):
            c, b = c / g2, b / g2
        return RatFunc(self.ring, *_monic(a * c, b * d), _normal=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.ring, *_monic(self.den, self.num), _normal=True)

    def __truediv__(self, other):
        if _is_scalar(other):
            c = to_fmpq(other)
            if c == 0:
                raise ZeroDivisionError("division by zero scalar")
            return RatFunc(self.ring, self.num / c, self.den, _normal=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.ring, self.num**k, self.den**k, _normal=True)

    # ---------------------------------------------------------------- calculus
    def derivative(self, name: str) -> "RatFunc":
        if name not in self.ring.index:
            return self.ring.zero()
        n, d = self.num, self.den
        dn = n.derivative(name)
        if _poly_is_one(d):
            return RatFunc(self.ring, dn, d, _normal=True)
        dd = d.derivative(name)
        if dd.is_zero():
            return RatFunc(self.ring, dn, d)
        # d' shares factors with d; quotient rule then reduce
        g = d.gcd(dd)
        d1 = d / g
        num = dn * d1 - n * (dd / g)
        return RatFunc(self.ring, num, d * d1)

    def degree(self, name: str) -> tuple[int, int]:
        """Degrees of numerator and denominator in ``name``."""
        i = self.ring.index[name]
        dn = -1 if self.num.is_zero() else self.num.degrees()[i]
        return int(dn), int(self.den.degrees()[i])

    def depends_on(self, name: str) -> bool:
        if name not in self.ring.index:
            return False
        dn, dd = self.degree(name)
        return dn > 0 or dd > 0

    def free_vars(self) -> tuple[str, ...]:
        return tuple(n for n in self.ring.names if self.depends_on(n))

    # ------------------------------------------------------------ substitution
    def to_ring(self, ring: PolyRing) -> "RatFunc":
        if ring is self.ring:
            return self
        return RatFunc(
            ring,
            _remap_poly(self.num, self.ring, ring),
            _remap_poly(self.den, self.ring, ring),
            _normal=True,
        )

    def subs(self, mapping: Mapping[str, object], ring: PolyRing | None = None) -> "RatFunc":
        """Substitute variables by rational functions of ``ring`` (default: own ring).

        Variables absent from ``mapping`` are sent to the same-named variable
        of the target ring.
        """
        target = ring or self.ring
        images = []
        for name in self.ring.names:
            if name in mapping:
                images.append(target.coerce(mapping[name]))
            else:
                images.append(target.var(name))
        num = _subs_poly(self.num, self.ring, images, target)
        den = _subs_poly(self.den, self.ring, images, target)
        return num / den

    def evaluate(self, values: Mapping[str, object] | Sequence) -> Fraction:
        """Evaluate at a rational point (all variables must be given)."""
        if isinstance(values, Mapping):
            vals = [to_fmpq(values[n]) for n in self.ring.names]
        else:
            vals = [to_fmpq(v) for v in values]
        d = self.den(*vals)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return to_fraction(self.num(*vals) / d)

    def coefficients_in(self, name: str) -> dict[int, "RatFunc"]:
        """Coefficients of a function polynomial in ``name`` (denominator free of it)."""
        i = self.ring.index[name]
        if self.den.degrees()[i] > 0:
            raise KernelError(f"denominator depends on {name}")
        parts: dict[int, dict] = {}
        for exps, c in self.num.to_dict().items():
            k = exps[i]
            e = list(exps)
            e[i] = 0
            parts.setdefault(k, {})[tuple(e)] = c
        return {
            k: RatFunc(self.ring, self.ring.ctx.from_dict(d), self.den)
            for k, d in sorted(parts.items())
        }


def _monic(num, den):
    lc = den.leading_coefficient()
    if lc != 1:
        num = num / lc
        den = den / lc
    return num, den


def _normalize(num, den):
    if num.is_zero():
        return num, num.context().from_dict({(0,) * num.context().nvars(): 1})
    g = num.gcd(den)
    if not _poly_is_one(g):
        num = num / g
        den = den / g
    return _monic(num, den)


def polys_needed(ring: PolyRing) -> bool:
    return ring.nvars > 0


def _subs_poly(p, src: PolyRing, images: list[RatFunc], target: PolyRing) -> RatFunc:
    if p.is_zero():
        return target.zero()
    if all(im.is_poly() for im in images):
        if not polys_needed(src):
            return target.const(to_fraction(p.leading_coefficient()))
        polys = [im.num for im in images]
        return target.from_poly(p.compose(*polys, ctx=target.ctx))
    # general case: clear denominators variable by variable
    degs = [int(d) for d in p.degrees()]
    nums = [im.num for im in images]
    dens = [im.den for im in images]
    num_pows: list[dict[int, object]] = [{0: target.poly_const(1)} for _ in images]
    den_pows: list[dict[int, object]] = [{0: target.poly_const(1)} for _ in images]

    def power(cache, base, k):
        if k not in cache:
            cache[k] = power(cache, base, k - 1) * base
        return cache[k]

    total = target.poly_const(0)
    for exps, c in p.to_dict().items():
        term = target.poly_const(c)
        for j, e in enumerate(exps):
            if degs[j] == 0:
                continue
            if e:
                term = term * power(num_pows[j], nums[j], e)
            if degs[j] - e:
                term = term * power(den_pows[j], dens[j], degs[j] - e)
        total = total + term
    den = target.poly_const(1)
    for j, k in enumerate(degs):
        if k:
            den = den * power(den_pows[j], dens[j], k)
    return RatFunc(target, total, den)


# ---------------------------------------------------------------- equality


def _sample_point(rng: random.Random, n: int) -> list[int]:
    return [rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND) for _ in range(n)]


def _mod_eval(p, point_mod: list[int]) -> int | None:
    """Evaluate an fmpq_mpoly modulo PRIME (None when a coefficient denominator is 0 mod p)."""
    total = 0
    for exps, c in zip(p.monoms(), p.coeffs()):
        den = int(c.q) % PRIME
        if den == 0:
            return None
        term = int(c.p) * pow(den, -1, PRIME) % PRIME
        for x, e in zip(point_mod, exps):
            if e:
                term = term * pow(x, int(e), PRIME) % PRIME
        total = (total + term) % PRIME
    return total


def ratfunc_eq(
    a: RatFunc,
    b: RatFunc,
    mode: str = "exact",
    trials: int = 3,
    seed: int = 0,
    modular: bool = False,
) -> bool:
    """Decide a == b, exactly or by Schwartz-Zippel sampling.

    In probabilistic mode the two sides are evaluated at ``trials`` random
    integer points; points where a denominator vanishes are resampled, at
    most ``MAX_RESAMPLES`` times in total.  ``modular=True`` evaluates in
    Z/PRIME instead of Q.
    """
    if a.ring is not b.ring:
        raise KernelError("ratfunc_eq needs a common ring")
    if mode == "exact":
        return (a - b).is_zero()
    if mode != "probabilistic":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    n = a.ring.nvars
    done = 0
    misses = 0
    while done < trials:
        pt = _sample_point(rng, n)
        if modular:
            pm = [x % PRIME for x in pt]
            vals = [_mod_eval(p, pm) for p in (a.num, a.den, b.num, b.den)]
            if any(v is None for v in vals) or vals[1] == 0 or vals[3] == 0:
                ok = False
            else:
                ok = True
                lhs = vals[0] * vals[3] % PRIME
                rhs = vals[2] * vals[1] % PRIME
        else:
            fpt = [flint.fmpq(x) for x in pt]
            da, db = a.den(*fpt), b.den(*fpt)
            ok = da != 0 and db != 0
            if ok:
                lhs = a.num(*fpt) * db
                rhs = b.num(*fpt) * da
        if not ok:
            misses += 1
            if misses > MAX_RESAMPLES:
                raise DenominatorVanishesEverywhere(
                    f"no admissible sample after {MAX_RESAMPLES} resamples"
                )
            continue
        if lhs != rhs:
            return False
        done += 1
    return True


# ----------------------------------------------------- series at infinity


def series_coeff(r: RatFunc, var: str, k: int, allow_polynomial_part: bool = False) -> RatFunc:
    """Coefficient of var**(-k) in the expansion of r at var = infinity.

    For k <= 0 this reads the polynomial part, which is only meaningful when
    the caller allows a polynomial part (otherwise NotExpandable).
    """
    ring = r.ring
    if r.is_zero():
        return ring.zero()
    if var not in ring.index:
        return r if k == 0 else ring.zero()
    num = r.num
    den_coeffs = RatFunc(ring, r.den).coefficients_in(var)
    num_coeffs = RatFunc(ring, num).coefficients_in(var)
    dn = max(num_coeffs)
    dd = max(den_coeffs)
    if dn > dd and not allow_polynomial_part:
        raise NotExpandable(f"numerator degree {dn} exceeds denominator degree {dd} in {var}")
    if k <= 0 and not allow_polynomial_part:
        raise NotExpandable("non-negative powers requested without polynomial part")
    # r = var^(dn-dd) * (sum_i n_{dn-i} var^-i) / (sum_i d_{dd-i} var^-i)
    # = sum_j c_j var^(dn-dd-j); the coefficient of var^-k has j = dn-dd+k
    j_target = dn - dd + k
    if j_target < 0:
        return ring.zero()
    lead = den_coeffs[dd]
    inv_lead = lead.inverse()
    cs: list[RatFunc] = []
    for j in range(j_target + 1):
        acc = num_coeffs.get(dn - j, ring.zero())
        for i in range(1, min(j, dd) + 1):
            di = den_coeffs.get(dd - i)
            if di is not None and not cs[j - i].is_zero():
                acc = acc - di * cs[j - i]
        cs.append(acc * inv_lead)
    return cs[j_target]


def polynomial_part(r: RatFunc, var: str) -> RatFunc:
    """The polynomial part in ``var`` of r (quotient of num by den in var)."""
    ring = r.ring
    dn, dd = r.degree(var)
    if dn < dd:
        return ring.zero()
    x = ring.var(var)
    out = ring.zero()
    for k in range(0, dn - dd + 1):
        c = series_coeff(r, var, -k, allow_polynomial_part=True)
        if not c.is_zero():
            out = out + c * x**k
    return out


def partial_fractions(r: RatFunc, var: str, poles: Sequence) -> tuple[RatFunc, list[RatFunc]]:
    """Decompose r = poly(var) + sum_i res_i / (var - pole_i).

    The poles must be free of ``var``; the denominator of r must be a
    scalar multiple of a product of distinct factors (var - pole_i).
    """
    ring = r.ring
    x = ring.var(var)
    poles = [ring.coerce(p) for p in poles]
    for p in poles:
        if p.depends_on(var):
            raise KernelError("poles must not depend on the expansion variable")
    num = RatFunc(ring, r.num)
    den = RatFunc(ring, r.den)
    dden = den.derivative(var)
    poly = polynomial_part(r, var)
    residues = []
    for p in poles:
        dp = den.subs({var: p})
        ddp = dden.subs({var: p})
        if ddp.is_zero():
            if dp.is_zero():
                raise NotSimplePoles(f"repeated factor at {var} = {p}")
            residues.append(ring.zero())
            continue
        if not dp.is_zero():
            residues.append(ring.zero())
            continue
        residues.append(num.subs({var: p}) / ddp)
    rebuilt = poly
    for p, c in zip(poles, residues):
        rebuilt = rebuilt + c / (x - p)
    if rebuilt != r:
        raise NotSimplePoles("denominator does not split over the given simple poles")
    return poly, residues


# ------------------------------------------------------------ linear algebra


def solve_linear(matrix: list[list[RatFunc]], rhs: list[RatFunc]) -> list[RatFunc]:
    """Solve a square linear system over a rational-function field (Gauss-Jordan)."""
    n = len(matrix)
    m = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if not m[i][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [c * inv for c in m[col]]
        for i in range(n):
            if i != col and not m[i][col].is_zero():
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return [row[n] for row in m]


def as_ratfuncs(ring: PolyRing, xs: Iterable) -> list[RatFunc]:
    return [ring.coerce(x) for x in xs]
