import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from refmon.relations import (
    Relation,
    compose,
    identity,
    image,
    inverse,
    is_function,
    parallel,
    projections,
    range_restrict,
    sort_key,
)

atoms = st.sampled_from(["a", "b", "c", "d", "e"])
relations = st.builds(Relation, st.lists(st.tuples(atoms, atoms), max_size=20))
atom_sets = st.frozensets(atoms)


def R(*pairs):
    return Relation(pairs)


class TestImage:
    def test_picks_every_target(self):
        assert image(R(("x", 1), ("x", 2), ("y", 3)), {"x"}) == {1, 2}

    def test_empty_argument(self):
        assert image(R(("x", 1)), set()) == frozenset()

    def test_disjoint_domain(self):
        assert image(R(("x", 1)), {"z"}) == frozenset()


class TestCompose:
    def test_single_chain(self):
        assert compose(R(("a", "b")), R(("b", "c"))) == R(("a", "c"))

    def test_dedups(self):
        r1 = R(("a", "b"), ("a", "b2"))
        r2 = R(("b", "c"), ("b2", "c"))
        assert compose(r1, r2) == R(("a", "c"))

    def test_identity_is_neutral(self):
        assert compose(identity({"a", "b"}), R(("a", "x"))) == R(("a", "x"))

    def test_left_is_applied_first(self):
        assert compose(R((1, 2)), R((2, 3))) == R((1, 3))
        assert compose(R((2, 3)), R((1, 2))) == Relation()


class TestParallel:
    def test_fixture_pairing(self):
        got = parallel(R(("ts1", "james")), R(("httpd", "intranet")))
        assert got == R((("ts1", "httpd"), ("james", "intranet")))

    def test_empty_factor(self):
        assert parallel(Relation(), R(("b", "d"))) == Relation()

    def test_cross_product(self):
        got = parallel(R(("a", "c")), R(("b", "d"), ("b", "d2")))
        assert got == R((("a", "b"), ("c", "d")), (("a", "b"), ("c", "d2")))


class TestRangeRestrict:
    def test_keeps_matching_targets(self):
        hosting = R(("h1", "ts1"), ("h2", "httpd"))
        assert range_restrict(hosting, {"ts1"}) == R(("h1", "ts1"))

    def test_empty(self):
        assert range_restrict(R(("a", "b")), set()) == Relation()

    def test_full(self):
        assert range_restrict(R(("a", "b")), {"b"}) == R(("a", "b"))


def test_inverse_examples():
    assert inverse(R(("a", "b"))) == R(("b", "a"))
    assert inverse(Relation()) == Relation()
    assert inverse(R(("a", "b"), ("c", "b"))) == R(("b", "a"), ("b", "c"))


def test_projections_examples():
    assert projections(R(("a", 1), ("b", 1))) == ({"a", "b"}, {1})
    assert projections(Relation()) == (frozenset(), frozenset())
    assert projections(identity({"x"})) == ({"x"}, {"x"})


@pytest.mark.parametrize(
    "pairs, expected",
    [([("a", 1), ("b", 1)], True), ([("a", 1), ("a", 2)], False), ([], True)],
)
def test_is_function(pairs, expected):
    assert is_function(Relation(pairs)) is expected


def test_iteration_is_sorted_and_duplicate_free():
    r = Relation([("b", 2), ("a", 9), ("a", 1), ("b", 2)])
    assert list(r) == [("a", 1), ("a", 9), ("b", 2)]
    assert len(r) == 3


def test_sort_key_orders_mixed_atoms():
    values = [("h", ("h", 80)), 3, "a", ("a", 1), 1]
    assert sorted(values, key=sort_key) == [1, 3, "a", ("a", 1), ("h", ("h", 80))]


def test_value_semantics():
    assert R(("a", 1)) == Relation([("a", 1)])
    assert hash(R(("a", 1))) == hash(Relation([("a", 1)]))
    assert {R(("a", 1)), Relation([("a", 1)])} == {R(("a", 1))}


@given(relations)
def test_image_of_domain_is_range(r):
    assert image(r, r.dom()) == r.ran()


@given(relations)
def test_identities_are_neutral(r):
    assert compose(r, identity(r.ran())) == r
    assert compose(identity(r.dom()), r) == r


@given(relations, relations, atom_sets)
def test_image_through_composition(r1, r2, a):
    assert image(compose(r1, r2), a) == image(r2, image(r1, a))


@given(relations)
def test_inverse_is_an_involution(r):
    assert inverse(inverse(r)) == r
    assert inverse(r).dom() == r.ran()


@given(relations, relations)
def test_parallel_cardinality(r1, r2):
    assert len(parallel(r1, r2)) == len(r1) * len(r2)


@given(relations, relations, atom_sets)
def test_operators_match_definitions(r1, r2, a):
    p1, p2 = oracles.pairs(r1), oracles.pairs(r2)
    assert image(r1, a) == oracles.image(p1, a)
    assert compose(r1, r2).pairs == oracles.compose(p1, p2)
    assert parallel(r1, r2).pairs == oracles.parallel(p1, p2)
    assert range_restrict(r1, a).pairs == oracles.range_restrict(p1, a)
    assert inverse(r1).pairs == oracles.inverse(p1)
    assert projections(r1) == (oracles.dom(p1), oracles.ran(p1))
    assert is_function(r1) == oracles.is_function(p1)
