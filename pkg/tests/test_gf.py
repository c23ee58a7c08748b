import pytest
from hypothesis import given, settings, strategies as st

from circle_ekr.errors import DivisionByZero, FieldMismatch, NotAPrimePower
from circle_ekr.gf import NONSQUARE, SQUARE, ZERO, field_create, prime_power

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def elems(q):
    return st.integers(min_value=0, max_value=q - 1)


@pytest.mark.parametrize("q,pe", [(2, (2, 1)), (8, (2, 3)), (9, (3, 2)), (49, (7, 2)), (101, (101, 1))])
def test_prime_power(q, pe):
    assert prime_power(q) == pe


@pytest.mark.parametrize("q", [0, 1, 6, 12, 100])
def test_not_prime_power(q):
    with pytest.raises(NotAPrimePower):
        field_create(q)


@pytest.mark.parametrize("q", ORDERS)
def test_group_structure(q):
    F = field_create(q)
    nonzero = range(1, q)
    assert sorted(F.mul(a, F.inv(a)) for a in nonzero) == [1] * (q - 1)
    # multiplicative group is cyclic of order q-1
    assert any(len({F.pow(g, k) for k in range(q - 1)}) == q - 1 for g in nonzero)
    assert all(F.pow(a, q) == a for a in F.elements())
    # characteristic
    one = 1
    acc = 0
    for _ in range(F.p):
        acc = F.add(acc, one)
    assert acc == 0


@pytest.mark.parametrize("q", ORDERS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_field_axioms(q, data):
    F = field_create(q)
    a, b, c = (data.draw(elems(q)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a
    if b:
        assert F.mul(F.div(a, b), b) == a


@pytest.mark.parametrize("q", ORDERS)
def test_tables_agree_with_methods(q):
    F = field_create(q)
    for a in F.elements():
        for b in F.elements():
            assert F.add_table[a, b] == F.add(a, b)
            assert F.mul_table[a, b] == F.mul(a, b)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 25])
def test_quadratic_character(q):
    F = field_create(q)
    squares = {F.mul(a, a) for a in range(1, q)}
    assert F.char(0) == ZERO
    for a in range(1, q):
        assert F.char(a) == (SQUARE if a in squares else NONSQUARE)
    assert len(squares) == (q - 1) // 2


@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_even_characteristic_everything_square(q):
    F = field_create(q)
    assert all(F.char(a) == SQUARE for a in range(1, q))
    # absolute trace is additive and onto GF(2)
    tr = [F.trace(a) for a in F.elements()]
    assert set(tr) == {0, 1} and tr.count(1) == q // 2


def test_division_by_zero():
    F = field_create(5)
    with pytest.raises(DivisionByZero):
        F.inv(0)


def test_field_elements_and_mismatch():
    F, K = field_create(4), field_create(8)
    a, b = F(2), F(3)
    assert (a * b) / b == a
    assert a + a == F(0)
    with pytest.raises(FieldMismatch):
        a + K(1)
