"""Crossed products of a rational-function field by commuting derivations.

An :class:`AlgebraDescriptor` fixes a coefficient field Q(coeff_vars) and
operator generators p_1..p_m, each acting on the field by a derivation D_m.
Elements (:class:`NCElement`) are normal ordered: coefficients on the left,
operator monomials p^k on the right.

In quantum mode the product is the associative one determined by
``p c = c p + D(c)``.  In classical mode the product is commutative and the
Poisson bracket is the biderivation with ``{p, c} = D(c)``, ``{p, p'} = 0``
and ``{c, c'} = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

from .kernel import KernelError, PolyRing, RatFunc, poly_ring

CLASSICAL = "classical"
QUANTUM = "quantum"


class ModeMismatch(TypeError):
    pass


class RelationViolation(ArithmeticError):
    def __init__(self, pair, residual):
        super().__init__(f"relation fails on generator pair {pair}: residual {residual}")
        self.pair = pair
        self.residual = residual


Monomial = tuple[int, ...]


class AlgebraDescriptor:
    def __init__(
        self,
        ring: PolyRing,
        op_gens: Sequence[str],
        action: Mapping[str, Mapping[str, RatFunc]],
        mode: str,
        name: str = "",
        check: bool = True,
    ):
        if mode not in (CLASSICAL, QUANTUM):
            raise ValueError(f"unknown mode {mode!r}")
        self.ring = ring
        self.op_gens = tuple(op_gens)
        self.op_index = {p: i for i, p in enumerate(self.op_gens)}
        self.mode = mode
        self.name = name
        overlap = set(self.op_gens) & set(ring.names)
        if overlap:
            raise ValueError(f"operator generators clash with coefficient variables: {overlap}")
        self.action = tuple(
            {v: ring.coerce(val) for v, val in action.get(p, {}).items() if not ring.coerce(val).is_zero()}
            for p in self.op_gens
        )
        self.nops = len(self.op_gens)
        self._zero_mono = (0,) * self.nops
        if check:
            self.check_commuting()

    def __repr__(self):
        return f"AlgebraDescriptor({self.name or '?'}, {self.mode}, ops={self.op_gens})"

    def derive(self, m: int, c: RatFunc) -> RatFunc:
        """Apply the derivation of the m-th operator generator to a coefficient."""
        out = self.ring.zero()
        for v, dv in self.action[m].items():
            if c.depends_on(v):
                out = out + dv * c.derivative(v)
        return out

    def check_commuting(self):
        for i in range(self.nops):
            for j in range(i + 1, self.nops):
                for v in self.ring.names:
                    x = self.ring.var(v)
                    lhs = self.derive(i, self.derive(j, x))
                    rhs = self.derive(j, self.derive(i, x))
                    if lhs != rhs:
                        raise KernelError(
                            f"derivations of {self.op_gens[i]} and {self.op_gens[j]} do not commute on {v}"
                        )

    def with_mode(self, mode: str) -> "AlgebraDescriptor":
        action = {p: self.action[i] for i, p in enumerate(self.op_gens)}
        return AlgebraDescriptor(self.ring, self.op_gens, action, mode, self.name, check=False)

    # element constructors
    def zero(self) -> "NCElement":
        return NCElement(self, {})

    def one(self) -> "NCElement":
        return self.coeff(1)

    def coeff(self, c) -> "NCElement":
        c = self.ring.coerce(c)
        return NCElement(self, {} if c.is_zero() else {self._zero_mono: c})

    def var(self, name: str) -> "NCElement":
        return self.coeff(self.ring.var(name))

    def gen(self, name: str) -> "NCElement":
        m = [0] * self.nops
        m[self.op_index[name]] = 1
        return NCElement(self, {tuple(m): self.ring.one()})

    def monomial(self, mono: Monomial, c=1) -> "NCElement":
        c = self.ring.coerce(c)
        return NCElement(self, {} if c.is_zero() else {tuple(mono): c})

    # commutative view (classical mode): ops become ring variables
    @property
    def full_ring(self) -> PolyRing:
        return poly_ring(self.ring.names + self.op_gens)

    def from_ratfunc(self, r: RatFunc) -> "NCElement":
        """Read a function polynomial in the operator variables as an element."""
        full = self.full_ring
        r = r.to_ring(full) if r.ring is not full else r
        terms: dict = {(): r}
        for p in self.op_gens:
            new = {}
            for mono, c in terms.items():
                for k, ck in c.coefficients_in(p).items():
                    new[mono + (k,)] = ck
            terms = new
        out = {}
        for mono, c in terms.items():
            if not c.is_zero():
                out[mono] = c.to_ring(self.ring)
        return NCElement(self, out)


class NCElement:
    """Normal-ordered element sum_k c_k p^k of a crossed product."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: AlgebraDescriptor, terms: Mapping[Monomial, RatFunc]):
        self.algebra = algebra
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    # ----------------------------------------------------------------- basics
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, NCElement):
            if isinstance(other, (int, RatFunc)):
                other = self.algebra.coeff(other)
            else:
                return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"NCElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms):
            ops = "*".join(
                (p if k == 1 else f"{p}^{k}") for p, k in zip(self.algebra.op_gens, mono) if k
            )
            c = str(self.terms[mono])
            parts.append(f"({c})" + (f"*{ops}" if ops else ""))
        return " + ".join(parts)

    def op_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def homogeneous(self, d: int) -> "NCElement":
        return NCElement(self.algebra, {m: c for m, c in self.terms.items() if sum(m) == d})

    def symbol(self) -> "NCElement":
        return self.homogeneous(self.op_degree())

    def coefficient(self, mono: Monomial) -> RatFunc:
        return self.terms.get(tuple(mono), self.algebra.ring.zero())

    def scalar_part(self) -> RatFunc:
        return self.coefficient(self.algebra._zero_mono)

    def _coerce(self, other) -> "NCElement":
        if isinstance(other, NCElement):
            if other.algebra is not self.algebra:
                raise KernelError("elements of different algebras")
            return other
        return self.algebra.coeff(other)

    # ------------------------------------------------------------- arithmetic
    def __neg__(self):
        return NCElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return NCElement(self.algebra, terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "NCElement":
        """Left multiplication by a coefficient."""
        c = self.algebra.ring.coerce(c)
        if c.is_zero():
            return self.algebra.zero()
        return NCElement(self.algebra, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NCElement):
            if self.algebra.mode == CLASSICAL:
                return self.scale(other)
            other = self._coerce(other)
        if self.algebra.mode == QUANTUM:
            return multiply(self, other)
        return _commutative_product(self, other)

    def __rmul__(self, other):
        return self._coerce(other) * self if self.algebra.mode == QUANTUM else self.scale(other)

    def __truediv__(self, c):
        return self.scale(self.algebra.ring.coerce(c).inverse())

    def __pow__(self, k: int):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    # --------------------------------------------------- coefficientwise maps
    def map_coeffs(self, fn: Callable[[RatFunc], RatFunc], algebra: AlgebraDescriptor | None = None):
        alg = algebra or self.algebra
        return NCElement(alg, {m: fn(c) for m, c in self.terms.items()})

    def derivative(self, name: str) -> "NCElement":
        """Derivative in a formal parameter (must be inert under every D_m)."""
        return self.map_coeffs(lambda c: c.derivative(name))

    def subs_params(self, mapping: Mapping[str, object]) -> "NCElement":
        """Substitute inert parameters inside every coefficient."""
        return self.map_coeffs(lambda c: c.subs(mapping))

    def coefficients_in(self, name: str) -> dict[int, "NCElement"]:
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            for k, ck in c.coefficients_in(name).items():
                out.setdefault(k, {})[m] = ck
        return {k: NCElement(self.algebra, d) for k, d in sorted(out.items())}

    def to_ratfunc(self) -> RatFunc:
        full = self.algebra.full_ring
        out = full.zero()
        ops = [full.var(p) for p in self.algebra.op_gens]
        for m, c in self.terms.items():
            t = c.to_ring(full)
            for v, k in zip(ops, m):
                if k:
                    t = t * v**k
            out = out + t
        return out


# -------------------------------------------------------------------- products


def _commutative_product(a: NCElement, b: NCElement) -> NCElement:
    alg = a.algebra
    terms: dict[Monomial, RatFunc] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            c = ca * cb
            terms[m] = terms[m] + c if m in terms else c
    return NCElement(alg, terms)


def _sub_monomials(k: Monomial) -> Iterable[Monomial]:
    if not k:
        yield ()
        return
    for rest in _sub_monomials(k[1:]):
        for i in range(k[0] + 1):
            yield (i,) + rest


def _derived(alg: AlgebraDescriptor, c: RatFunc, mu: Monomial, cache: dict) -> RatFunc:
    """D^mu(c), memoized in ``cache`` keyed by mu."""
    if mu in cache:
        return cache[mu]
    m = next(i for i, e in enumerate(mu) if e)
    lower = list(mu)
    lower[m] -= 1
    val = alg.derive(m, _derived(alg, c, tuple(lower), cache))
    cache[mu] = val
    return val


def multiply(a: NCElement, b: NCElement) -> NCElement:
    """Associative normal-ordered product (quantum mode)."""
    alg = a.algebra
    if alg.mode != QUANTUM:
        raise ModeMismatch("multiply needs a quantum-mode algebra")
    if b.algebra is not alg:
        raise KernelError("elements of different algebras")
    terms: dict[Monomial, RatFunc] = {}
    zero = alg._zero_mono
    caches = {mb: {zero: cb} for mb, cb in b.terms.items()}
    for ka, ca in a.terms.items():
        for mu in _sub_monomials(ka):
            binom = 1
            for k, m in zip(ka, mu):
                binom *= comb(k, m)
            rest = tuple(k - m for k, m in zip(ka, mu))
            for lb, cb in b.terms.items():
                d = _derived(alg, cb, mu, caches[lb])
                if d.is_zero():
                    continue
                mono = tuple(x + y for x, y in zip(rest, lb))
                c = ca * d
                if binom != 1:
                    c = c * binom
                terms[mono] = terms[mono] + c if mono in terms else c
    return NCElement(alg, terms)


def commutator(a: NCElement, b: NCElement) -> NCElement:
    if a.algebra.mode != QUANTUM:
        raise ModeMismatch("commutator needs a quantum-mode algebra")
    return multiply(a, b) - multiply(b, a)


def _op_partial(e: NCElement, m: int) -> NCElement:
    terms = {}
    for mono, c in e.terms.items():
        if mono[m]:
            k = list(mono)
            k[m] -= 1
            terms[tuple(k)] = c * mono[m]
    return NCElement(e.algebra, terms)


def _coeff_derive(e: NCElement, m: int) -> NCElement:
    alg = e.algebra
    return NCElement(alg, {mono: alg.derive(m, c) for mono, c in e.terms.items()})


def poisson_bracket(a: NCElement, b: NCElement) -> NCElement:
    alg = a.algebra
    if alg.mode != CLASSICAL:
        raise ModeMismatch("poisson_bracket needs a classical-mode algebra")
    if b.algebra is not alg:
        raise KernelError("elements of different algebras")
    out = alg.zero()
    for m in range(alg.nops):
        pa = _op_partial(a, m)
        pb = _op_partial(b, m)
        if pa:
            db = _coeff_derive(b, m)
            if db:
                out = out + _commutative_product(pa, db)
        if pb:
            da = _coeff_derive(a, m)
            if da:
                out = out - _commutative_product(da, pb)
    return out


def bracket(a: NCElement, b: NCElement) -> NCElement:
    """Commutator or Poisson bracket according to the algebra mode."""
    return commutator(a, b) if a.algebra.mode == QUANTUM else poisson_bracket(a, b)


# ------------------------------------------------------------------------ maps


@dataclass
class GeneratorMap:
    """Images of coefficient variables and operator generators in a target algebra.

    Coefficient variables without an image go to the same-named variable
    of the target coefficient ring.
    """

    source: AlgebraDescriptor
    target: AlgebraDescriptor
    coeff_images: dict[str, RatFunc] = field(default_factory=dict)
    op_images: dict[str, NCElement] = field(default_factory=dict)

    def coeff_image(self, c: RatFunc) -> RatFunc:
        return c.subs(self.coeff_images, ring=self.target.ring)

    def op_image(self, name: str) -> NCElement:
        if name in self.op_images:
            return self.op_images[name]
        return self.target.gen(name)


def apply_map(m: GeneratorMap, e: NCElement, check: bool = False) -> NCElement:
    if e.algebra is not m.source:
        raise KernelError("element does not belong to the map source")
    tgt = m.target
    if check:
        check_relations(m)
    power_cache: dict[tuple[int, int], NCElement] = {}

    def power(i: int, k: int) -> NCElement:
        if (i, k) not in power_cache:
            power_cache[(i, k)] = tgt.one() if k == 0 else power(i, k - 1) * m.op_image(m.source.op_gens[i])
        return power_cache[(i, k)]

    out = tgt.zero()
    for mono, c in e.terms.items():
        term = tgt.coeff(m.coeff_image(c))
        for i, k in enumerate(mono):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def check_relations(m: GeneratorMap) -> None:
    src, tgt = m.source, m.target
    images = {p: m.op_image(p) for p in src.op_gens}
    for p, img in images.items():
        for v in src.ring.names:
            cv = tgt.coeff(m.coeff_image(src.ring.var(v)))
            lhs = bracket(img, cv)
            rhs = tgt.coeff(m.coeff_image(src.derive(src.op_index[p], src.ring.var(v))))
            if lhs != rhs:
                raise RelationViolation((p, v), lhs - rhs)
    names = list(images)
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            r = bracket(images[names[i]], images[names[j]])
            if r:
                raise RelationViolation((names[i], names[j]), r)


def identity_map(alg: AlgebraDescriptor) -> GeneratorMap:
    return GeneratorMap(alg, alg)
