"""Acceptance suite: one pass/fail line per criterion, printed in the terminal summary."""

import itertools
import random
import subprocess
import sys
import time
from importlib import resources

from conftest import ACCEPTANCE_LINES, consistent_pairs
from recshacl import load_example
from recshacl.acorss import compare_semantics, is_acorss_stable
from recshacl.core import (Graph, PartialInterpretation, ShapeAssignment, TruthValue, exactify,
                           precision_leq)
from recshacl.evaluate import compile_shape_3v, eval_shape_2v, eval_shape_3v
from recshacl.fixpoint import (SemanticsKind, enumerate_stable, enumerate_supported, kripke_kleene,
                               program, t_op, well_founded)
from recshacl.generate import connectives_used, random_instance
from recshacl.oracle import (oracle_partial_stable, oracle_supported, precision_minimum,
                             unique_extension)
from recshacl.schema import And, Forall, GeqN, Inverse, Name, Not, Or, Prop, Compose, Star, to_snf
from recshacl.textio import parse_graph, parse_schema
from recshacl.validate import ValidationMode, validate, validates_unique

PEOPLE = ("a", "b", "c", "d", "e", "f")
ALL_CONNECTIVES = {"top", "name", "nominal", "and", "or", "not", "forall", "geq", "eq", "disj",
                   "closed"}


def record(number: int, title: str, violations: list, elapsed: float | None = None,
           limit: float | None = None) -> None:
    timing = ""
    if elapsed is not None:
        timing = f" ({elapsed:.2f}s"
        if limit is not None:
            timing += f", limit {limit:g}s"
            if elapsed >= limit:
                violations.append(f"took {elapsed:.2f}s")
        timing += ")"
    status = "PASS" if not violations else "FAIL"
    line = f"[{status}] criterion {number}: {title}{timing}"
    if violations:
        line += f"; {len(violations)} violation(s), first: {violations[0]}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not violations, line


def people(g: Graph, a: ShapeAssignment, shape: str) -> set[str]:
    return {g.nodes[x] for x in a.nodes(shape)} & set(PEOPLE)


def test_criterion_1_contact_tracing():
    start = time.perf_counter()
    covid = parse_graph(load_example("covid.graph"))
    at_risk = parse_schema(load_example("at_risk.shacl"))
    bad = []
    wf = well_founded(at_risk, covid)
    if wf.lower != wf.upper:
        bad.append("WF model is not exact")
    if people(covid, wf.lower, "atRisk") != {"d", "e", "f"}:
        bad.append("WF atRisk")
    if people(covid, wf.lower, "canWork") != {"a", "b", "c"}:
        bad.append("WF canWork")
    kk = kripke_kleene(at_risk, covid)
    values = {n: kk.value("atRisk", covid.node(n)) for n in PEOPLE}
    expected = {"a": TruthValue.U, "b": TruthValue.U, "c": TruthValue.F,
                "d": TruthValue.T, "e": TruthValue.T, "f": TruthValue.T}
    if values != expected:
        bad.append(f"KK atRisk {values}")
    supported = enumerate_supported(at_risk, covid)
    at_risk_sets = sorted(sorted(people(covid, m, "atRisk")) for m in supported)
    if at_risk_sets != [["a", "b", "d", "e", "f"], ["d", "e", "f"]]:
        bad.append(f"supported models {at_risk_sets}")
    stable = enumerate_stable(at_risk, covid)
    if len(stable) != 1 or exactify(stable[0]) != wf:
        bad.append("stable model differs from WF")
    record(1, "contact-tracing WF/KK/supported/stable models", bad, time.perf_counter() - start, 1.0)


def test_criterion_2_safe_schema():
    start = time.perf_counter()
    covid = parse_graph(load_example("covid.graph"))
    safe = parse_schema(load_example("safe.shacl"))
    bad = []
    comparison = compare_semantics(safe, covid)
    aft = [people(covid, m, "Safe") for m in comparison.aft_stable]
    acorss = sorted((people(covid, m, "Safe") for m in comparison.acorss_stable), key=len)
    if aft != [{"a", "b", "c"}]:
        bad.append(f"AFT-stable {aft}")
    if acorss != [{"a", "b", "c"}, set(PEOPLE)]:
        bad.append(f"ACORSS-stable {acorss}")
    record(2, "Safe schema AFT-stable vs ACORSS-stable", bad, time.perf_counter() - start, 1.0)


def _approximator_violations(schema, g) -> list[str]:
    prog = program(schema, g)
    k, size = len(schema.vocabulary), g.size
    psi = {pair: prog.psi(*pair) for pair in consistent_pairs(k, size)}
    bad = []
    for (lo, hi), (plo, phi) in psi.items():
        # every <=p step between consistent pairs is a chain of single-atom refinements
        for i in range(k):
            for x in range(size):
                bit = 1 << x
                if lo[i] & bit or not hi[i] & bit:
                    continue
                up = lo[:i] + (lo[i] | bit,) + lo[i + 1:]
                down = hi[:i] + (hi[i] & ~bit,) + hi[i + 1:]
                for finer in ((up, hi), (lo, down)):
                    flo, fhi = psi[finer]
                    if any(a & ~b for a, b in zip(plo, flo)) or any(b & ~a for a, b in zip(phi, fhi)):
                        bad.append(f"psi not monotone at {lo, hi} -> {finer}")
        if lo == hi:
            exact = t_op(schema, g, ShapeAssignment(schema.vocabulary, lo, size)).masks
            if (plo, phi) != (exact, exact):
                bad.append(f"psi differs from T on exact pair {lo}")
    return bad


def test_criterion_3_approximator_violations(batch):
    start = time.perf_counter()
    assert len(batch) >= 200
    assert all(len(s.vocabulary) <= 3 and g.size <= 3 for s, g in batch)
    bad = []
    missing = ALL_CONNECTIVES - set().union(*(connectives_used(s) for s, _ in batch))
    if missing:
        bad.append(f"connectives never generated: {sorted(missing)}")
    for schema, g in batch:
        bad += _approximator_violations(schema, g)
    record(3, "approximator monotone and coincides with T on exact pairs (200 instances)", bad,
           time.perf_counter() - start, 60.0)


def test_criterion_4_stable_containment(batch):
    bad = []
    for n, (schema, g) in enumerate(batch):
        original = compare_semantics(schema, g)
        if not original.containment:
            bad.append(f"instance {n}: AFT-stable not contained in ACORSS-stable")
        normal = compare_semantics(to_snf(schema).schema, g)
        voc = schema.vocabulary
        aft = {m.restrict(voc) for m in normal.aft_stable}
        acorss = {m.restrict(voc) for m in normal.acorss_stable}
        if aft != acorss:
            bad.append(f"instance {n}: SNF stable sets differ")
        for m in original.aft_stable:
            if not is_acorss_stable(schema, g, m):
                bad.append(f"instance {n}: AFT-stable model rejected by the level check")
    record(4, "AFT-stable within ACORSS-stable; equal after SNF", bad)


def test_criterion_5_aft_structure(batch):
    bad = []
    for n, (schema, g) in enumerate(batch):
        supported = enumerate_supported(schema, g)
        if set(supported) != set(oracle_supported(schema, g)):
            bad.append(f"instance {n}: supported enumeration differs from oracle")
        kk = kripke_kleene(schema, g)
        if not all(precision_leq(kk, exactify(m)) for m in supported):
            bad.append(f"instance {n}: KK not below a supported model")
        if not set(enumerate_stable(schema, g)) <= set(supported):
            bad.append(f"instance {n}: stable model that is not supported")
        if len(schema.vocabulary) * g.size <= 12:
            if well_founded(schema, g) != precision_minimum(oracle_partial_stable(schema, g)):
                bad.append(f"instance {n}: WF is not the least partial stable fixpoint")
    record(5, "KK, WF, stable and supported structure against oracles", bad)


def test_criterion_6_non_recursive():
    rng = random.Random(6)
    instances = [random_instance(rng, recursive=False) for _ in range(120)]
    bad = []
    for n, (schema, g) in enumerate(instances):
        ext = unique_extension(schema, g)
        exact = exactify(ext)
        if kripke_kleene(schema, g) != exact or well_founded(schema, g) != exact:
            bad.append(f"instance {n}: KK or WF differs from the unique extension")
        if enumerate_supported(schema, g) != [ext] or enumerate_stable(schema, g) != [ext]:
            bad.append(f"instance {n}: model sets differ from the unique extension")
        expected = validates_unique(schema, g, ext)
        for sem, mode in itertools.product(SemanticsKind, ValidationMode):
            if validate(schema, g, sem, mode).passed != expected:
                bad.append(f"instance {n}: verdict {sem.value}/{mode.value}")
    record(6, "non-recursive schemas: all semantics and verdicts coincide (120 instances)", bad)


def _graphs_on_two_nodes():
    pairs = [(x, y) for x in "mn" for y in "mn"]
    for k in range(1 << len(pairs)):
        triples = [(x, "p", y) for i, (x, y) in enumerate(pairs) if k >> i & 1]
        yield Graph.from_triples(triples, nodes=("m", "n"))


def test_criterion_7_abbreviations():
    voc = ("a", "b")
    paths = [Prop("p"), Inverse(Prop("p")), Star(Prop("p")), Compose(Prop("p"), Prop("p"))]
    a, b = Name("a"), Name("b")
    cases = [(Or(a, b), Not(And(Not(a), Not(b))))]
    cases += [(Forall(e, a), Not(GeqN(1, e, Not(a)))) for e in paths]
    bad = []
    for g in _graphs_on_two_nodes():
        for native, expanded in cases:
            for masks in itertools.product(range(1 << g.size), repeat=2):
                m = ShapeAssignment(voc, masks, g.size)
                if eval_shape_2v(native, g, m) != eval_shape_2v(expanded, g, m):
                    bad.append(f"two-valued {native} on {masks}")
            f_native = compile_shape_3v(native, g, voc)
            f_expanded = compile_shape_3v(expanded, g, voc)
            for lo, hi in consistent_pairs(2, g.size):
                if f_native(lo, hi) != f_expanded(lo, hi):
                    bad.append(f"compiled three-valued {native} on {lo, hi}")
                p = PartialInterpretation.from_masks(voc, lo, hi, g.size)
                for x in range(g.size):
                    if eval_shape_3v(native, g, p, x) != eval_shape_3v(expanded, g, p, x):
                        bad.append(f"three-valued {native} at {x} on {lo, hi}")
    record(7, "or/forall agree with their abbreviations (2- and 3-valued, exhaustive)", bad)


DATA = resources.files("recshacl") / "data"
GRAPH, AT_RISK, SAFE = (str(DATA / n) for n in ("covid.graph", "at_risk.shacl", "safe.shacl"))
CLI_CASES = [
    (["validate", "--graph", GRAPH, "--schema", AT_RISK, "--semantics", "wf", "--mode", "cautious"],
     1, lambda out: "(witnesses: d, e, f)" in out),
    (["models", "--graph", GRAPH, "--schema", AT_RISK, "--semantics", "supported"],
     0, lambda out: out.startswith("2 supported model(s)\n") and out.count("\nmodel ") == 2),
    (["compare", "--graph", GRAPH, "--schema", SAFE],
     0, lambda out: out.startswith("AFT-stable: 1, ACORSS-stable: 2\n")),
]


def test_criterion_8_cli_contract():
    bad = []
    for argv, code, check in CLI_CASES:
        runs = [subprocess.run([sys.executable, "-m", "recshacl", *argv], capture_output=True)
                for _ in range(2)]
        first, second = runs
        if (first.returncode, first.stdout, first.stderr) != \
                (second.returncode, second.stdout, second.stderr):
            bad.append(f"{argv[0]}: output differs between runs")
        if first.returncode != code:
            bad.append(f"{argv[0]}: exit {first.returncode}, expected {code}")
        if not check(first.stdout.decode()):
            bad.append(f"{argv[0]}: unexpected output {first.stdout[:80]!r}")
    record(8, "CLI examples: exit codes, output, byte-determinism", bad)
