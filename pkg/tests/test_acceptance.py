"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines alongside the pytest verdicts.
"""

import json
import math
import random
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from kneserlab.blowup import (
    apply_quotient,
    blow_up,
    check_quotient,
    find_mono_multipartite,
    kneser_quotient,
    lemma1_witness,
    validate_witness,
)
from kneserlab.bounds import chromatic_formula, schedule, thm1_bound, upper_cond
from kneserlab.coloring import Coloring, exact_chi
from kneserlab.combinatorics import (
    binom_exact,
    enumerate_stable,
    linear_stable_count,
    stable_count_bound,
)
from kneserlab.family import full_family, kneser_hypergraph, stable_family
from kneserlab.harness import coupled_curve, upper_pipeline

ARTIFACT_DIR = Path(__file__).parent / "artifacts"


@contextmanager
def criterion(num: int, desc: str, budget_s: float | None = None):
    t0 = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {num}: FAIL - {desc}")
        raise
    elapsed = time.monotonic() - t0
    print(f"\nACCEPTANCE {num}: PASS - {desc} ({elapsed:.1f}s)")
    if budget_s is not None:
        assert elapsed < budget_s, f"criterion {num} exceeded its {budget_s}s budget"


def kg(n, k, r=2):
    return kneser_hypergraph(full_family(n, k), r)


def sg(n, k):
    return kneser_hypergraph(stable_family(n, k, 2), 2)


def test_criterion_1_exact_chromatic_table():
    table = [
        (kg(5, 2), 3, "KG_{5,2}"),
        (kg(6, 2), 4, "KG_{6,2}"),
        (kg(7, 2), 5, "KG_{7,2}"),
        (kg(7, 3), 3, "KG_{7,3}"),
        (kg(8, 3), 4, "KG_{8,3}"),
        (sg(5, 2), 3, "SG_{5,2}"),
        (sg(6, 2), 4, "SG_{6,2}"),
        (kg(6, 2, 3), 2, "KG^3_{6,2}"),
        (kg(9, 2, 3), 3, "KG^3_{9,2}"),
    ]
    with criterion(1, "exact chromatic table matches the closed formulas", 120.0):
        for h, expected, name in table:
            cert = exact_chi(h)
            assert cert.exact, name
            assert cert.chi == expected, f"{name}: got {cert.chi}, expected {expected}"


def test_criterion_2_stable_count_suite():
    with criterion(2, "gap-count closed form and cyclic-count bound on the grid", 30.0):
        for r in (2, 3, 4):
            for k in range(1, 5):
                for n in range(r * (k - 1) + 1, 15):
                    closed = binom_exact(n - (r - 1) * (k - 1), k)
                    assert linear_stable_count(n, k, r) == closed
                    cyclic = sum(1 for _ in enumerate_stable(n, k, r))
                    assert cyclic <= closed
                    assert stable_count_bound(n, k, r) == closed


def test_criterion_3_quotient_realization():
    cases = [(6, 1, 1, 2), (8, 2, 1, 2), (9, 2, 1, 3)]
    with criterion(3, "quotient images equal the directly built Kneser hypergraphs"):
        for n, k, l, r in cases:
            f = kneser_quotient(n, k, l, r)
            assert check_quotient(f) is None
            image = apply_quotient(f)
            target = kg(n, k, r)
            assert image.n_vertices == target.n_vertices
            assert list(image.edges()) == list(target.edges())


def test_criterion_4_mono_multipartite_suite():
    h = kg(6, 2)
    m, d, trials = 6, 3, 300
    blown = blow_up(h, m)
    rng = random.Random(20260810)
    with criterion(4, f"monochromatic parts extracted in {trials}/{trials} trials", 60.0):
        for _ in range(trials):
            coloring = Coloring(
                tuple(rng.randrange(d) for _ in range(blown.n_vertices)), d
            )
            parts = find_mono_multipartite(h, m, coloring, d)
            assert parts is not None
            assert all(len(p) == 2 for p in parts)  # ceil(6/3)
            assert len({coloring.colors[u] for p in parts for u in p}) == 1
            bases = tuple(sorted({u // m for u in p}.pop() for p in parts))
            assert h.has_edge(bases)


def test_criterion_5_witness_suite():
    n, k, l, r, trials = 10, 2, 1, 2, 100
    d = chromatic_formula(n, k + l, r) - 1
    assert d == 5
    sched = schedule(n, k, l, r)
    n_vertices = binom_exact(n, k)
    failures = []
    with criterion(5, f"witness found and re-validated in {trials}/{trials} colorings", 600.0):
        for trial in range(trials):
            rng = random.Random(7_000_000 + trial)
            kappa = Coloring(tuple(rng.randrange(d) for _ in range(n_vertices)), d)
            report = lemma1_witness(n, k, l, r, kappa)
            if report is None or not validate_witness(sched, kappa, report):
                failures.append({"trial": trial, "coloring": list(kappa.colors)})
        if failures:
            ARTIFACT_DIR.mkdir(exist_ok=True)
            artifact = ARTIFACT_DIR / "witness_counterexamples.json"
            artifact.write_text(json.dumps(failures, indent=2))
            pytest.fail(f"{len(failures)} colorings without a witness; see {artifact}")


def test_criterion_6_bound_regression():
    with criterion(6, "bound evaluators match the hand-computed oracles"):
        assert thm1_bound(1, 4, 2, 2, 0.5).ln_bound.ln_value == pytest.approx(
            math.log(2.25), abs=1e-12
        )
        assert upper_cond(16, 1, 1, 2, 0.5) == pytest.approx(math.log(0.25), abs=1e-12)
        s = schedule(100, 5, 2, 2)
        assert float(s.beta) == 1.0
        assert s.s == 5.0
        assert s.u == 3
        assert s.d == 87
        assert s.q == (7, 14, 28, 56)
        assert s.t[0] == 1
        assert s.z[0] == 1


def test_criterion_7_coupled_monotonicity():
    grid = [i / 10 for i in range(11)]
    jobs = [(kg(5, 2), 3, "KG_{5,2}"), (kg(7, 2), 5, "KG_{7,2}")]
    with criterion(7, "100 coupled chi curves non-decreasing, ending at the full chi", 300.0):
        for h, full_chi, name in jobs:
            for seed in range(50):
                curve = coupled_curve(h, grid, seed)
                assert all(a <= b for a, b in zip(curve, curve[1:])), (name, seed, curve)
                assert curve[-1] == full_chi, (name, seed, curve)
        # spot-check: hint-accelerated curves equal hint-free recomputation
        for h, _, name in jobs:
            for seed in (0, 17):
                assert coupled_curve(h, grid, seed, use_hints=False) == coupled_curve(
                    h, grid, seed, use_hints=True
                ), (name, seed)


def test_criterion_8_empty_window_pipeline():
    with criterion(8, "empty-window pipeline reports frequency beside the bound value"):
        report = upper_pipeline(n=12, k=2, r=2, l=2, p=0.3, seed=8, trials=20)
        # every success was validated inside the pipeline: proper on the sample
        # with exactly chromatic_formula(12,2,2) - 2 = 8 colors
        assert report["palette"] == 8
        assert 0 <= report["successes"] <= 20
        print(
            f"\n  empty-window success frequency: {report['success_freq']:.3f} "
            f"over {report['trials']} seeds; upper_cond ln-value: "
            f"{report['upper_cond']:.4f} (no threshold asserted); "
            f"window potential edges {report['window_potential_edges']} "
            f"(ordered product {report['window_product_count']})"
        )


def test_criterion_9_non_reproducibility_statement():
    statement = (
        "The headline results of the source material are asymptotic "
        "almost-sure statements as n grows without bound and are NOT "
        "reproducible at desk scale. They are covered here by finite-n "
        "property suites instead: exact chromatic tables (criterion 1), "
        "counting identities (criterion 2), constructive realizations "
        "(criteria 3-5), bound regressions (criterion 6), coupled "
        "monotonicity (criterion 7), and the empty-window pipeline "
        "(criterion 8), in lieu of quantitative reproduction."
    )
    with criterion(9, "non-reproducibility of asymptotic claims stated explicitly"):
        print(f"\n  {statement}")
        suite = globals()
        for i in range(1, 9):
            assert any(name.startswith(f"test_criterion_{i}_") for name in suite)
