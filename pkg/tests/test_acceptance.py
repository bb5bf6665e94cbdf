"""Acceptance suite: one test per criterion, each timed against its budget."""

import random
import time
from collections import Counter
from fractions import Fraction

import pytest

from boxpers import harness
from boxpers.config import (
    VARIANTS,
    _sig,
    audit_analysis,
    audit_levels,
    configuration_1d,
    novikov_betti,
    run_window,
    stabilize,
)
from boxpers.diagcalc import TripleComposite, factorization_sequences, omega_hat, omega_under
from boxpers.fieldlin import AmbientSpace, FieldSpec, direct_sum, random_map
from boxpers.fixtures import FIXTURES, MANIFOLD_FIXTURES, random_exact, random_periodic

from conftest import record

pytestmark = pytest.mark.acceptance

FIELDS = (FieldSpec.gf(2), FieldSpec.gf(5), FieldSpec.rationals())


def _random_instances(seed, count, periodic=True):
    rng = random.Random(seed)
    for i in range(count):
        F = FIELDS[i % 3]
        if periodic and i % 2:
            yield random_periodic(rng, F, max_simplices=200)
        else:
            yield random_exact(rng, F, max_simplices=200)


def _triple(F, rng):
    d = [AmbientSpace.new(rng.randint(0, 6)) for _ in range(4)]
    return TripleComposite(*(random_map(F, d[i], d[i + 1], rng, 0.5) for i in range(3)))


def test_01_omega_duality():
    t0 = time.perf_counter()
    rng = random.Random(101)
    bad, count, vanish = 0, 0, 0
    for F in FIELDS:
        for _ in range(70):
            t = _triple(F, rng)
            count += 1
            if omega_hat(t).dim != omega_under(t.dual()).dim:
                bad += 1
            if omega_under(t).dim != omega_hat(t.dual()).dim:
                bad += 1
            if t.alpha.is_surjective() or t.gamma.is_injective():
                vanish += 1
                bad += omega_hat(t).dim != 0
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and count >= 200 and vanish > 0 and elapsed < 10
    record(1, "omega duality", ok, elapsed, 10, f"{count} triples, {vanish} with vanishing forced")
    assert ok


def test_02_factorization_exactness():
    t0 = time.perf_counter()
    rng = random.Random(202)
    tally = Counter()
    bad = 0
    for k in range(50):
        F = FIELDS[k % 3]
        t = _triple(F, rng)
        for where in ("alpha", "beta", "gamma"):
            m = {"alpha": t.alpha, "beta": t.beta, "gamma": t.gamma}[where]
            extra = AmbientSpace.new(rng.randint(0, 6))
            # through a larger domain
            S, inj, proj = direct_sum(F, [m.domain, extra])
            f1, f2 = inj[0], m @ proj[0] + random_map(F, extra, m.codomain, rng) @ proj[1]
            bad += not factorization_sequences(t, where, f1, f2)["ok"]
            # through a larger codomain
            S, inj, proj = direct_sum(F, [m.codomain, extra])
            g1, g2 = inj[0] @ m + inj[1] @ random_map(F, m.domain, extra, rng), proj[0]
            bad += not factorization_sequences(t, where, g1, g2)["ok"]
            tally[where] += 2
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and min(tally.values()) >= 100 and elapsed < 10
    record(2, "factorization exactness", ok, elapsed, 10, f"per variant {dict(tally)}")
    assert ok


def test_03_box_laws():
    t0 = time.perf_counter()
    rng = random.Random(303)
    failures = []
    n = 0
    for doc in _random_instances(303, 50):
        model = harness.model_of(doc)
        n += 1
        for v in VARIANTS:
            run = stabilize(model, v, 64)
            rep = harness.box_law_audit(run.analysis, rng)
            if not rep["ok"]:
                failures.append(rep["failures"][:2])
    elapsed = time.perf_counter() - t0
    ok = not failures and n >= 50 and elapsed < 120
    record(3, "box laws", ok, elapsed, 120, f"{n} complexes x {len(VARIANTS)} variants")
    assert ok, failures[:3]


def test_04_dimension_formula():
    t0 = time.perf_counter()
    docs = [mk() for mk in FIXTURES.values()] + list(_random_instances(404, 50))
    failures = []
    levels = 0
    for doc in docs:
        model = harness.model_of(doc)
        for v in VARIANTS:
            run = stabilize(model, v, 64)
            an = audit_analysis(run, v)
            for r in an.degrees:
                for a in audit_levels(an):
                    levels += 1
                    c = an.dimension_formula_check(r, a, run.results)
                    if not c["ok"]:
                        failures.append(c)
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 120
    record(4, "dimension formula", ok, elapsed, 120, f"{len(docs)} instances, {levels} (degree, level, variant) checks")
    assert ok, failures[:3]


def test_05_theta_comparison():
    t0 = time.perf_counter()
    reps = {name: harness.theta_audit(mk()) for name, mk in FIXTURES.items()}
    checked = sum(len(r["levels"]) for r in reps.values())
    ok = all(r["ok"] for r in reps.values()) and checked > 0
    record(5, "theta comparison", ok, time.perf_counter() - t0, None, f"{checked} levels")
    assert ok


@pytest.mark.parametrize("name", MANIFOLD_FIXTURES)
def test_06_poincare_duality(name):
    t0 = time.perf_counter()
    rep = harness.check_duality(FIXTURES[name]())
    elapsed = time.perf_counter() - t0
    ok = rep.ok and elapsed < 60
    record(6, f"duality {name}", ok, elapsed, 60)
    assert ok, rep.to_json()


def test_07_stability():
    t0 = time.perf_counter()
    rng = random.Random(707)
    bad, trials, min_levels = [], 0, None
    for name, mk in FIXTURES.items():
        doc = mk()
        run = stabilize(harness.model_of(doc))
        sigma = harness.support_gap(run.results)
        sigma = sigma if sigma is not None else max(Fraction(1), run.analysis.model.period)
        for _ in range(20):
            pert = harness.random_perturbation(doc, 2 * sigma / 9, rng)
            rep = harness.check_stability(doc, pert, rng=rng)
            trials += 1
            lv = rep.inclusions["levels"]
            min_levels = lv if min_levels is None else min(min_levels, lv)
            if not rep.ok:
                bad.append((name, rep.to_json()))
    elapsed = time.perf_counter() - t0
    ok = not bad and min_levels >= 10 and elapsed < 60
    record(7, "stability", ok, elapsed, 60, f"{trials} perturbations, >= {min_levels} sandwich levels each")
    assert ok, bad[:2]


def test_08_oracle_equivalence():
    t0 = time.perf_counter()
    bad = []
    n = 0
    for doc in _random_instances(808, 50, periodic=False):
        n += 1
        for v in VARIANTS:
            try:
                harness.persistence_oracle(doc, v)
            except Exception as exc:
                bad.append((v, str(exc)))
    ok = not bad and n >= 50
    record(8, "oracle equivalence", ok, time.perf_counter() - t0, None, f"{n} complexes")
    assert ok, bad[:3]


def test_09_subsurjection_route():
    t0 = time.perf_counter()
    reps = {name: harness.subsurjection_audit(mk()) for name, mk in FIXTURES.items()}
    points = sum(len(r["points"]) for r in reps.values())
    ok = all(r["ok"] for r in reps.values())
    record(9, "sub-surjection route", ok, time.perf_counter() - t0, None, f"{points} support points")
    assert ok


def test_10_window_stabilization():
    t0 = time.perf_counter()
    sheets = {}
    ok = True
    for name, mk in FIXTURES.items():
        model = harness.model_of(mk())
        for v in VARIANTS:
            run = stabilize(model, v, 16)
            sheets[(name, v)] = run.sheets
            if not model.trivial:
                # confirm directly that W and 2W agree
                _, doubled = run_window(model, 2 * run.sheets, v)
                ok = ok and _sig(doubled) == _sig(run.results)
    ok = ok and all(sheets[("FIX-W", v)] <= 4 for v in VARIANTS)
    ok = ok and all(sheets[("FIX-C", v)] <= 3 for v in VARIANTS)
    detail = f"FIX-W {sheets[('FIX-W', 'standard')]} sheets, FIX-C {sheets[('FIX-C', 'standard')]} sheets"
    record(10, "window stabilization", ok, time.perf_counter() - t0, None, detail)
    assert ok, sheets


def test_11_novikov_consistency():
    t0 = time.perf_counter()
    ok = True
    ranks = {}
    for name, mk in FIXTURES.items():
        model = harness.model_of(mk())
        nov = novikov_betti(model)
        ranks[name] = nov
        run = stabilize(model)
        for r, res in run.results.items():
            ok = ok and configuration_1d(res, "delta", nov).total == nov[r]
    ok = ok and ranks["FIX-W"][1] == 1
    record(11, "Novikov consistency", ok, time.perf_counter() - t0, None, f"FIX-W ranks {ranks['FIX-W']}")
    assert ok, ranks
