import random

import pytest

from cocycle_rigidity.errors import EnumerationCapExceeded, NotInDelta, PreconditionError
from cocycle_rigidity.formats import parse_group
from cocycle_rigidity.geometry import CayleyExplorer
from cocycle_rigidity.shift import (
    Alphabet,
    Configuration,
    enumerate_patterns,
    random_configuration,
    restrict,
    shift,
    support_norm,
    truncate,
)

A = Alphabet.of("01")
A3 = Alphabet.of("abc", zero="b")


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet.of("")
    with pytest.raises(ValueError):
        Alphabet.of("aa")
    with pytest.raises(ValueError):
        Alphabet(("ab",))
    assert A3.zero == 1
    assert A3.decode("cab") == (2, 0, 1)
    assert A3.encode((2, 0, 1)) == "cab"
    with pytest.raises(PreconditionError):
        A3.index("z")


def test_configurations_are_canonical():
    x = Configuration(A, {(0,): 0, (1,): 1})
    assert x.support == [(1,)]
    assert x == Configuration(A, {(1,): 1})
    assert hash(x) == hash(Configuration(A, {(1,): 1}))
    assert x((5,)) == 0
    assert x.read([(1,), (2,)]) == (1, 0)


def test_constant_configuration_is_outside_delta():
    x = Configuration(A, default=1)
    assert not x.in_delta()
    with pytest.raises(NotInDelta):
        support_norm(x, CayleyExplorer(parse_group("Z^1")))


def test_shift_is_left_translation():
    G = parse_group("Z^2")
    x = Configuration(A, {(1, 0): 1})
    y = shift(G, (2, 3), x)
    # (g x)(h) = x(g^-1 h)
    assert y((3, 3)) == 1 and y.support == [(3, 3)]
    assert shift(G, (-2, -3), y) == x


def test_shift_is_an_action_on_a_nonabelian_group():
    F = parse_group("F(2)")
    a, b = F.generators[0], F.generators[1]
    x = Configuration(A, {F.identity: 1, a: 1})
    assert shift(F, F.mul(a, b), x) == shift(F, a, shift(F, b, x))


def test_support_norm_and_truncate():
    E = CayleyExplorer(parse_group("Z^2"))
    x = Configuration(A, {(2, -1): 1, (0, 1): 1})
    assert support_norm(x, E) == 3
    assert support_norm(Configuration.zero(A), E) == 0
    assert truncate(x, 2, E) == Configuration(A, {(0, 1): 1})
    ones = Configuration(A, default=1)
    t = truncate(ones, 1, E)
    assert t.in_delta() and sorted(t.support) == sorted(E.ball(1))


def test_restrict():
    x = Configuration(A3, {(0,): 0, (2,): 2})
    p = restrict(x, [(0,), (1,), (2,)])
    assert p.values == (0, 1, 2)
    assert p.text(A3) == "abc"
    assert p.totalize(A3) == x


def test_enumeration_is_lexicographic_and_capped():
    pats = list(enumerate_patterns(A, ["u", "v"]))
    assert [p.values for p in pats] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(list(enumerate_patterns(A3, range(4)))) == 81
    with pytest.raises(EnumerationCapExceeded):
        next(enumerate_patterns(A, range(21)))
    assert next(enumerate_patterns(A, range(21), cap=1 << 21)).values == (0,) * 21


@pytest.mark.parametrize("alphabet", [A, A3])
def test_random_configuration_is_seeded(alphabet):
    sites = [(k,) for k in range(40)]
    x = random_configuration(random.Random(7), alphabet, sites)
    y = random_configuration(random.Random(7), alphabet, sites)
    assert x == y
    assert x.in_delta()
    assert set(x.read(sites)) <= set(range(len(alphabet)))
    assert set(x.support) <= set(sites)
