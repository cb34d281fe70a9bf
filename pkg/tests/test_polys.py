import pytest
from hypothesis import given, strategies as st

from elltrace import polys as P

coeffs = st.lists(st.integers(-20, 20), min_size=0, max_size=6).map(P.trim)


def test_basics():
    f = P.trim([1, 2, 0, 0])
    assert f == (1, 2)
    assert P.degree(()) == -1
    assert P.add((1, 2), (3, -2)) == (4,)
    assert P.mul((1, 1), (1, -1)) == (1, 0, -1)
    assert P.derivative((5, 3, 2)) == (3, 4)
    assert P.evaluate((1, 2, 3), 2) == 17
    assert P.eval_mod((1, 2, 3), 2, 5) == 2


def test_content_and_primitive():
    assert P.content((4, -8, 12)) == 4
    assert P.content((-4, 8, -12)) == -4  # sign follows the leading coefficient
    assert P.primitive_part((4, -8, 12)) == (1, -2, 3)


@given(coeffs, coeffs)
def test_mul_degree_and_eval(f, g):
    h = P.mul(f, g)
    for t in (-2, 0, 1, 3):
        assert P.evaluate(h, t) == P.evaluate(f, t) * P.evaluate(g, t)


@given(coeffs, coeffs, coeffs)
def test_gcd_common_factor(f, g, h):
    if P.is_zero(h) or P.degree(h) < 1:
        return
    a, b = P.mul(f, h), P.mul(g, h)
    if P.is_zero(a) and P.is_zero(b):
        return
    d = P.gcd(a, b)
    # h divides the gcd
    assert P.degree(d) >= P.degree(h)
    P.exact_div(d, P.gcd(d, P.primitive_part(h)))  # no raise


def test_exact_div():
    f = P.mul((1, 2), (3, 0, 1))
    assert P.exact_div(f, (1, 2)) == (3, 0, 1)
    with pytest.raises(ValueError):
        P.exact_div((1, 1, 1), (1, 1))


def test_squarefree_legendre_delta():
    delta = (0, 0, 16, -32, 16)  # 16 t^2 (t-1)^2
    out = P.squarefree_decomposition(delta)
    assert out == [((0, -1, 1), 2)]


def test_squarefree_mixed():
    # f = t (t-1)^2 (t^2+1)^3
    f = P.mul((0, 1), P.mul(P.mul((1, -1), (1, -1)),
                            P.mul(P.mul((1, 0, 1), (1, 0, 1)), (1, 0, 1))))
    out = P.squarefree_decomposition(f)
    assert [(g, m) for g, m in out] == [((0, 1), 1), ((-1, 1), 2), ((1, 0, 1), 3)]


@given(coeffs, st.integers(1, 3))
def test_squarefree_reconstructs(f, m):
    if P.degree(f) < 1:
        return
    # build f^m and check multiplicities scale
    g = f
    for _ in range(m - 1):
        g = P.mul(g, f)
    parts = P.squarefree_decomposition(g)
    total = sum(P.degree(h) * mult for h, mult in parts)
    assert total == P.degree(g)
    # every reported multiplicity is a multiple of m when f is squarefree
    if P.squarefree_decomposition(f) == [(P.primitive_part(f) if f[-1] > 0 else
                                          P.primitive_part(P.neg(f)), 1)]:
        assert all(mult % m == 0 for _, mult in parts)
