import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_assignments, consistent_pairs
from recshacl.core import Graph, PartialInterpretation, ShapeAssignment, TruthValue, exactify
from recshacl.evaluate import (EvaluationError, compile_shape_3v, eval_path, eval_shape_2v,
                               eval_shape_3v)
from recshacl.generate import random_graph, random_path, random_shape
from recshacl.schema import (And, Closed, Compose, Disj, Eq, Forall, GeqN, Inverse, Name,
                             Nominal, Not, Optional_, Or, Prop, Star, Top, Union_)

T, U, F = TruthValue.T, TruthValue.U, TruthValue.F
p = Prop("p")


@pytest.fixture
def chain():
    g = Graph.from_triples([("1", "p", "2"), ("2", "p", "3")])
    return g, {n: g.node(n) for n in "123"}


def _pairs(g, rel):
    return {(g.nodes[a], g.nodes[b]) for a, b in rel.pairs()}


def test_inverse(chain):
    g, _ = chain
    assert _pairs(g, eval_path(Inverse(p), g)) == {("2", "1"), ("3", "2")}


def test_compose(chain):
    g, _ = chain
    assert _pairs(g, eval_path(Compose(p, p), g)) == {("1", "3")}


def test_star(chain):
    g, _ = chain
    ident = {(n, n) for n in "123"}
    assert _pairs(g, eval_path(Star(p), g)) == ident | {("1", "2"), ("2", "3"), ("1", "3")}


def test_optional_and_union(chain):
    g, _ = chain
    ident = {(n, n) for n in "123"}
    assert _pairs(g, eval_path(Optional_(p), g)) == ident | {("1", "2"), ("2", "3")}
    assert _pairs(g, eval_path(Union_(p, Inverse(p)), g)) == \
        {("1", "2"), ("2", "3"), ("2", "1"), ("3", "2")}


def test_unknown_property_is_empty(chain):
    g, _ = chain
    assert eval_path(Prop("nope"), g).pairs() == frozenset()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_star_is_reflexive_transitive_closure(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 5))
    e = random_path(rng, 2)
    base, star = eval_path(e, g).pairs(), eval_path(Star(e), g).pairs()
    assert base <= star
    assert all((a, a) in star for a in range(g.size))
    assert all((a, c) in star for a, b in star for b2, c in star if b == b2)
    # least such relation: every pair is reachable by a finite base path
    reach = {(a, a) for a in range(g.size)}
    while True:
        step = reach | {(a, c) for a, b in reach for b2, c in base if b == b2}
        if step == reach:
            break
        reach = step
    assert star == reach


def test_two_valued_examples(covid):
    empty = ShapeAssignment.bottom([], covid.size)
    assert eval_shape_2v(GeqN(1, Prop("vaccinated"), Top()), covid, empty) == {covid.node("c")}
    assert eval_shape_2v(Top(), covid, empty) == frozenset(range(covid.size))
    close = Prop("closeTo")
    assert eval_shape_2v(Eq(close, close), covid, empty) == frozenset(range(covid.size))


def test_closed_ranges_over_graph_and_schema_properties(covid):
    empty = ShapeAssignment.bottom([], covid.size)
    only_close = eval_shape_2v(Closed(("closeTo",)), covid, empty)
    assert {covid.nodes[x] for x in only_close} == set("abef") | {"Pfizer", "Cough"}
    assert eval_shape_2v(Closed(()), covid, empty) == {covid.node("Pfizer"), covid.node("Cough")}


def test_unknown_constant_is_an_error(covid):
    empty = ShapeAssignment.bottom([], covid.size)
    with pytest.raises(EvaluationError):
        eval_shape_2v(Nominal("Moderna"), covid, empty)
    with pytest.raises(EvaluationError):
        eval_shape_2v(Name("s"), covid, empty)


def test_three_valued_negation_of_unknown():
    g = Graph(["x"])
    pi = PartialInterpretation.least_precise(["s"], 1)
    assert eval_shape_3v(Not(Name("s")), g, pi, 0) is U


def test_three_valued_geq_counts_possibly_true():
    g = Graph.from_triples([("a", "p", "b1"), ("a", "p", "b2"), ("a", "p", "b3")])
    b1, b2, b3 = (g.node(n) for n in ("b1", "b2", "b3"))
    lo = ShapeAssignment(["s"], [1 << b1], g.size)
    hi = ShapeAssignment(["s"], [1 << b1 | 1 << b2], g.size)
    pi = PartialInterpretation(lo, hi)  # b1 t, b2 u, b3 f
    assert eval_shape_3v(GeqN(2, p, Name("s")), g, pi, g.node("a")) is U
    assert eval_shape_3v(GeqN(1, p, Name("s")), g, pi, g.node("a")) is T
    assert eval_shape_3v(GeqN(3, p, Name("s")), g, pi, g.node("a")) is F


def _instance(seed, n_shapes=2, max_nodes=3):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, max_nodes))
    names = ["s", "r"][:n_shapes]
    return rng, g, names


def _pi(names, lo, hi, size):
    return PartialInterpretation.from_masks(names, lo, hi, size)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_coincidence_on_exact_pairs(seed):
    rng, g, names = _instance(seed)
    phi = random_shape(rng, names, list(g.nodes), 3)
    for masks in all_assignments(len(names), g.size):
        a = ShapeAssignment(names, masks, g.size)
        two = eval_shape_2v(phi, g, a)
        for x in range(g.size):
            assert eval_shape_3v(phi, g, exactify(a), x) is (T if x in two else F)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_compiled_evaluator_matches_nodewise(seed):
    rng, g, names = _instance(seed)
    phi = random_shape(rng, names, list(g.nodes), 3)
    f = compile_shape_3v(phi, g, names)
    for lo, hi in consistent_pairs(len(names), g.size):
        l, h = f(lo, hi)
        pi = _pi(names, lo, hi, g.size)
        for x in range(g.size):
            v = eval_shape_3v(phi, g, pi, x)
            assert v is (T if l >> x & 1 else U if h >> x & 1 else F)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_precision_monotone(seed):
    rng, g, names = _instance(seed)
    phi = random_shape(rng, names, list(g.nodes), 3)
    pairs = list(consistent_pairs(len(names), g.size))
    values = {}
    for lo, hi in pairs:
        pi = _pi(names, lo, hi, g.size)
        values[lo, hi] = [eval_shape_3v(phi, g, pi, x) for x in range(g.size)]
    for lo, hi in pairs:
        for lo2, hi2 in pairs:
            more_precise = all(a & ~b == 0 for a, b in zip(lo, lo2)) and \
                all(b & ~a == 0 for a, b in zip(hi, hi2))
            if more_precise:
                assert all(v.leq_p(w) for v, w in zip(values[lo, hi], values[lo2, hi2]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_abbreviations(seed):
    rng, g, names = _instance(seed)
    a = random_shape(rng, names, list(g.nodes), 2)
    b = random_shape(rng, names, list(g.nodes), 2)
    e = random_path(rng, 1)
    pairs = [(Or(a, b), Not(And(Not(a), Not(b)))),
             (Forall(e, a), Not(GeqN(1, e, Not(a))))]
    for native, abbrev in pairs:
        for lo, hi in consistent_pairs(len(names), g.size):
            pi = _pi(names, lo, hi, g.size)
            for x in range(g.size):
                assert eval_shape_3v(native, g, pi, x) is eval_shape_3v(abbrev, g, pi, x)
        for masks in all_assignments(len(names), g.size):
            sa = ShapeAssignment(names, masks, g.size)
            assert eval_shape_2v(native, g, sa) == eval_shape_2v(abbrev, g, sa)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_path_shapes_never_unknown(seed):
    rng, g, names = _instance(seed)
    shapes = [Eq(random_path(rng, 1), random_path(rng, 1)),
              Disj(random_path(rng, 1), random_path(rng, 1)), Closed(("p",))]
    pi = PartialInterpretation.least_precise(names, g.size)
    for phi in shapes:
        assert all(eval_shape_3v(phi, g, pi, x) is not U for x in range(g.size))
