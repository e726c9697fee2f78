import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaudin_sov.classical import SystemConfig, u_algebra, x_algebra
from gaudin_sov.kernel import poly_ring
from gaudin_sov.opalgebra import (
    AlgebraDescriptor,
    GeneratorMap,
    ModeMismatch,
    apply_map,
    bracket,
    commutator,
    identity_map,
    multiply,
)
from gaudin_sov.quantum import QuantumAlgebras

CFG1 = SystemConfig(1, (0, 1, 2, 3))

# a small Weyl-type algebra: coefficients x, z; derivations dx, dz with [dx, x] = x^2, [dz, z] = 1
W_RING = poly_ring(("x", "z"))
WEYL = AlgebraDescriptor(
    W_RING, ("dx", "dz"), {"dx": {"x": W_RING.var("x") ** 2}, "dz": {"z": 1}}, "quantum", name="weyl"
)
POISSON = WEYL.with_mode("classical")

coef = st.integers(min_value=-3, max_value=3)


def element(alg, cs):
    x, z = alg.var("x"), alg.var("z")
    dx, dz = alg.gen("dx"), alg.gen("dz")
    basis = [alg.one(), x, z, dx, dz, x * dx, dz * dz, z * dx]
    return sum((b.scale(c) for b, c in zip(basis, cs) if c), alg.zero())


elems = st.lists(coef, min_size=8, max_size=8)


def test_yhat_xhat_normal_order():
    q = QuantumAlgebras(CFG1)
    AX = q.AX
    x, y = AX.var("xh1"), AX.gen("yh1")
    pi = x * (x - 1) * (x - 2) * (x - 3)
    assert y * x == x * y + pi * 2


def test_h_f_relation():
    q = QuantumAlgebras(CFG1, (), True)
    h, f = q.h(0), q.f(0)
    assert h * f == f * h - f * 2


def test_casimir_normal_orders_to_scalar():
    q = QuantumAlgebras(CFG1, (), True)
    assert q.casimir_element(0) == q.A.coeff(q.A.ring.var("C1"))


def test_classical_brackets():
    ua = u_algebra(CFG1)
    v1, u1 = ua.gen("v1"), ua.var("u1")
    assert bracket(v1, u1 * u1) == (u1 * u1).scale(-4)
    xa = x_algebra(CFG1)
    assert bracket(xa.gen("y1"), xa.gen("y1")).is_zero()


def test_quantum_generators_commute():
    q = QuantumAlgebras(SystemConfig(2, (0, 1, 2, 3, 5)))
    assert commutator(q.AX.gen("yh1"), q.AX.gen("yh2")).is_zero()


def test_mode_mismatch():
    with pytest.raises(ModeMismatch):
        multiply(POISSON.gen("dx"), POISSON.gen("dz"))


def test_identity_map_and_constraint_image():
    e = element(WEYL, [1, 2, -1, 3, 0, 1, 2, -2])
    assert apply_map(identity_map(WEYL), e) == e
    # u_i -> sigma prod(a_i - x)/Pi'(a_i) sends sum u to zero
    ua = u_algebra(CFG1)
    ring = poly_ring(("x1", "s"))
    x, s = ring.vars("x1", "s")
    images = {f"u{i + 1}": s * (ai - x) / CFG1.pi_prime(i) for i, ai in enumerate(CFG1.a)}
    target = AlgebraDescriptor(ring, (), {}, "classical")
    m = GeneratorMap(ua, target, images, {})
    total = sum((ua.var(f"u{i + 1}") for i in range(4)), ua.zero())
    assert apply_map(m, total).is_zero()


@settings(max_examples=25, deadline=None)
@given(elems, elems, elems)
def test_associativity(a, b, c):
    A, B, C = (element(WEYL, cs) for cs in (a, b, c))
    assert (A * B) * C == A * (B * C)


@settings(max_examples=25, deadline=None)
@given(elems, elems, elems)
def test_jacobi_classical(a, b, c):
    A, B, C = (element(POISSON, cs) for cs in (a, b, c))
    total = bracket(A, bracket(B, C)) + bracket(B, bracket(C, A)) + bracket(C, bracket(A, B))
    assert total.is_zero()


@settings(max_examples=25, deadline=None)
@given(elems, elems, elems)
def test_leibniz_classical(a, b, c):
    A, B, C = (element(POISSON, cs) for cs in (a, b, c))
    assert bracket(A, B * C) == bracket(A, B) * C + B * bracket(A, C)


@settings(max_examples=25, deadline=None)
@given(elems, elems)
def test_commutator_antisymmetric(a, b):
    A, B = element(WEYL, a), element(WEYL, b)
    assert (commutator(A, B) + commutator(B, A)).is_zero()
