"""Acceptance suite: one PASS/FAIL line per criterion, printed past output capture.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines start
with ``ACCEPTANCE``.
"""

import itertools
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest
from support import TwistedCase

from cocycle_rigidity.cli import main
from cocycle_rigidity.cocycle import check_identity
from cocycle_rigidity.errors import EnumerationCapExceeded
from cocycle_rigidity.formats import load_cocycle, parse_group
from cocycle_rigidity.geometry import CayleyExplorer
from cocycle_rigidity.rigidity import (
    INDEPENDENCE,
    RigidityOptions,
    build_b_table,
    candidate_elements,
    check_independence,
    check_locality,
    locality_pairs,
    rigidify,
)
from cocycle_rigidity.shift import Configuration, random_configuration

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "cocycle_rigidity" / "fixtures"
SEEDS = range(20)
TARGETS = ("S(3)", "Z^1")


@pytest.fixture
def emit(capsys):
    def report(criterion, ok, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else ""))

    return report


@pytest.fixture(scope="module")
def runs():
    """The 40 twisted coboundaries on Z^2 with rho = 1 and their rigidify results."""
    out = []
    start = time.perf_counter()
    for target, seed in itertools.product(TARGETS, SEEDS):
        case = TwistedCase(seed, target=target, rho=1)
        out.append((case, rigidify(case.c, RigidityOptions(seed=seed))))
    return out, time.perf_counter() - start


def test_end_to_end_rigidity(runs, emit):
    results, elapsed = runs
    bad = [
        (case.H.spec, r.options.seed)
        for case, r in results
        if r.obstruction is not None or r.verification.failures or r.verification.checked != 10_000
    ]
    lengths = {case.c.L for case, _ in results}
    ok = not bad and lengths == {2} and elapsed < 120
    emit(
        "end-to-end rigidity",
        ok,
        f"{len(results)} cocycles, L={sorted(lengths)}, {len(bad)} with obstruction or failures, {elapsed:.0f}s",
    )
    assert ok


def test_homomorphism_recovery_up_to_conjugacy(runs, emit):
    results, _ = runs
    mismatches = 0
    checked = 0
    for case, result in results:
        for g in case.E.ball(3):
            checked += 1
            if result.phi_table[g] != case.expected_phi(g):
                mismatches += 1
    emit("homomorphism recovery", mismatches == 0, f"{checked} values on B(3), {mismatches} mismatches")
    assert mismatches == 0


def test_transfer_recovery_every_pattern(runs, emit):
    # the criterion asks for every pattern on B(3L); B(6) in Z^2 has 85 sites
    results, _ = runs
    case, _ = results[0]
    try:
        table = build_b_table(case.c, exhaustive=True)
    except EnumerationCapExceeded as exc:
        emit("transfer recovery (every B(3L)-pattern)", False, f"not enumerable: {exc}")
        raise
    bad = sum(
        1
        for values, b in table.entries.items()
        if b != case.expected_b(Configuration(case.A, dict(zip(table.sites, values))))
    )
    emit("transfer recovery (every B(3L)-pattern)", bad == 0, f"{len(table.entries)} patterns")
    assert bad == 0


def test_transfer_recovery_sampled(runs, capsys):
    # the same equality on every entry the verification run materialized
    results, _ = runs
    bad = total = 0
    for case, result in results:
        table = result.b_table
        for values, b in table.entries.items():
            total += 1
            if b != case.expected_b(Configuration(case.A, dict(zip(table.sites, values)))):
                bad += 1
    with capsys.disabled():
        print(f"\n  transfer recovery on {total} computed patterns: {bad} mismatches")
    assert total > 100_000 and bad == 0


def test_independence_of_the_choice(runs, emit):
    results, _ = runs
    rng = random.Random(0)
    start = time.perf_counter()
    failures = 0
    min_candidates = None
    spans = True
    for j in range(50):
        case, _ = results[rng.randrange(len(results))]
        c = case.c
        x = random_configuration(rng, c.alphabet, c.explorer.ball(3 * c.L))
        cands = candidate_elements(c, x, per_sphere=5)
        n = len(cands)
        min_candidates = n if min_candidates is None else min(min_candidates, n)
        spans &= len({c.explorer.word_norm(g) for g in cands}) == 2
        failures += check_independence(c, x, cands) is not None
    elapsed = time.perf_counter() - start
    ok = failures == 0 and min_candidates >= 10 and spans and elapsed < 30
    emit("independence", ok, f"50 pairs, >= {min_candidates} candidates over two spheres, {failures} failures, {elapsed:.1f}s")
    assert ok


def test_locality(runs, emit):
    results, _ = runs
    failures = checked = 0
    for j in range(100):
        case, _ = results[j % len(results)]
        (x, y), = locality_pairs(case.c, 1, seed=j)
        checked += 1
        failures += check_locality(case.c, x, y) is not None
    emit("locality", failures == 0, f"{checked} pairs, {failures} failures")
    assert failures == 0


def test_half_geodesic_intersection(emit):
    E = CayleyExplorer(parse_group("Z^2"))
    outcome = {}
    for L in (1, 2, 3):
        path = E.extend_biinfinite_geodesic(2 * L)
        outcome[L] = E.is_geodesic(path) and E.half_geodesic_intersection_check(path, L)[0]
    ok = all(outcome.values())
    emit("half-geodesic intersection", ok, ", ".join(f"L={L}: {v}" for L, v in outcome.items()))
    assert ok


def test_component_values(emit):
    z2 = CayleyExplorer(parse_group("Z^2"))
    z = CayleyExplorer(parse_group("Z^1"))
    f2 = CayleyExplorer(parse_group("F(2)"))
    z2_ok = all((z2.component_report(r, 2 * r + 4).unbounded, z2.N(r, 2 * r + 4)) == (1, r) for r in range(7))
    z_ok = all((z.component_report(r, 2 * r + 4).unbounded, z.N(r, 2 * r + 4)) == (2, r) for r in range(7))
    # the stated count for F(2) with the closed ball B(r) removed
    got = {r: f2.component_report(r, r + 3).unbounded for r in (1, 2, 3)}
    want = {r: 4 * 3 ** (r - 1) for r in (1, 2, 3)}
    ok = z2_ok and z_ok and got == want
    emit("N(r) and end counts", ok, f"Z^2 {z2_ok}, Z {z_ok}, F(2) got {got} expected {want}")
    assert ok


def test_counterexample(emit, capsys):
    c = load_cocycle(FIXTURES / "z_counterexample.cocycle.json")
    result = rigidify(c)
    w = result.obstruction
    code = main(["demo-counterexample"])
    capsys.readouterr()
    u = c.target.generators[0]
    ok = (
        w is not None
        and w.kind == INDEPENDENCE
        and w.x == Configuration(c.alphabet, {(0,): 1})
        and (w.details["g1"], w.details["g2"]) == ((2,), (-2,))
        and (w.details["b1"], w.details["b2"]) == (c.target.inv(u), c.target.identity)
        and code == 1
    )
    emit("counterexample on Z", ok, f"witness {w.kind if w else None}, exit code {code}")
    assert ok


def test_corruption_soundness(emit):
    c = load_cocycle(FIXTURES / "z2_twisted.cocycle.json")
    H = c.target
    flip = H.parse_label("(0 1)")
    baseline = check_identity(c, 1)
    missed = []
    entries = 0
    for p, rule in c.rules.items():
        for values in rule.table:
            entries += 1
            corrupted = c.with_rule(p, rule.with_entry(values, H.mul(rule(values), flip)))
            report = check_identity(corrupted, 1)
            if report.ok or not any((p, values) in f.lookups for f in report.failures):
                missed.append((p, values))
            restored = corrupted.with_rule(p, rule)
            if not check_identity(restored, 1).ok:
                missed.append(("restore", p, values))
    ok = baseline.ok and not missed
    emit("cocycle-identity soundness", ok, f"{entries} entries corrupted one at a time, {len(missed)} missed")
    assert ok


def _cli(args, hashseed, cwd):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    proc = subprocess.run(
        [sys.executable, "-m", "cocycle_rigidity.cli", *args], capture_output=True, env=env, cwd=cwd, check=False
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_determinism(emit, tmp_path):
    twisted = str(FIXTURES / "z2_twisted.cocycle.json")
    commands = {
        "group-info": ["group-info", "--group", "F(2)", "--r", "2"],
        "verify-cocycle": ["verify-cocycle", twisted, "--r-check", "2", "--seed", "4"],
        "rigidify": ["rigidify", twisted, "--samples", "2000", "--seed", "3", "-o", "out.json"],
        "check-cohomology": ["check-cohomology", "out.json", twisted, "--samples", "2000", "--threads", "2"],
        "demo-counterexample": ["demo-counterexample", "-o", "demo.json"],
    }
    differing = []
    for name, args in commands.items():
        outputs = []
        for run, hashseed in enumerate((1, 2)):
            cwd = tmp_path / f"run{run}"
            cwd.mkdir(exist_ok=True)
            if name == "check-cohomology":
                _cli(commands["rigidify"], hashseed, cwd)
            rc, out, err = _cli(args, hashseed, cwd)
            files = {p.name: p.read_bytes() for p in sorted(cwd.glob("*.json"))}
            outputs.append((rc, out, err, files))
        if outputs[0] != outputs[1]:
            differing.append(name)
    emit("determinism", not differing, f"{len(commands)} subcommands run twice, differing: {differing or 'none'}")
    assert not differing
