import random
from fractions import Fraction as Q

import pytest

from boxpers import harness
from boxpers.config import stabilize
from boxpers.errors import ClassMismatch, EpsilonTooLarge, NotAManifold, ValidationError
from boxpers.fixtures import FIXTURES, MANIFOLD_FIXTURES, fix_c, fix_w, fix_w_perturbed, random_exact


@pytest.mark.parametrize("name", MANIFOLD_FIXTURES)
def test_duality_on_closed_surfaces(name):
    rep = harness.check_duality(FIXTURES[name]())
    assert rep.ok, rep.to_json()


def test_duality_refuses_non_manifolds():
    with pytest.raises(NotAManifold):
        harness.check_duality(fix_w())


def test_stability_of_moved_side_loop():
    rep = harness.check_stability(fix_w(), fix_w_perturbed(), eps=Q(1, 30))
    assert rep.ok
    assert rep.sup_norm == Q(1, 200) and rep.sigma == 1
    assert rep.inclusions["levels"] >= 10


def test_stability_rejects_large_eps():
    with pytest.raises(EpsilonTooLarge):
        harness.check_stability(fix_w(), fix_w_perturbed(), eps=Q(1))
    with pytest.raises(EpsilonTooLarge):
        harness.check_stability(fix_w(), fix_w_perturbed(delta=Q(1, 20)), eps=Q(1, 30))


def test_stability_rejects_other_class():
    with pytest.raises(ClassMismatch):
        harness.check_stability(fix_w(), fix_c())


def test_random_perturbation_stays_in_class():
    rng = random.Random(1)
    doc = fix_w()
    pert = harness.random_perturbation(doc, Q(1, 50), rng)
    g = harness.exact_difference(doc.spec, doc.form, pert.form)
    assert max(abs(x) for x in g) <= Q(1, 50)


@pytest.mark.parametrize("name", ["FIX-G", "FIX-T", "FIX-S2", "FIX-RP2"])
def test_oracle_on_exact_fixtures(name):
    for v in ("standard", "bm"):
        assert harness.persistence_oracle(FIXTURES[name](), v)["ok"]


def test_oracle_refuses_periodic_input():
    with pytest.raises(ValidationError):
        harness.persistence_oracle(fix_w())


def test_oracle_on_small_random_complexes():
    rng = random.Random(5)
    for _ in range(5):
        assert harness.persistence_oracle(random_exact(rng))["ok"]


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_audits_pass_on_fixtures(name):
    doc = FIXTURES[name]()
    for audit in (harness.theta_audit, harness.dimension_audit, harness.subsurjection_audit, harness.novikov_audit):
        rep = audit(doc)
        assert rep["ok"], (audit.__name__, rep)


def test_window_audit_reports_sheets():
    rep = harness.window_audit(fix_w())
    assert rep["variants"]["standard"]["stable_sheets"] <= 4


def test_box_laws_on_fixture():
    run = stabilize(harness.model_of(FIXTURES["FIX-S2"]()))
    rep = harness.box_law_audit(run.analysis, random.Random(0))
    assert rep["ok"], rep["failures"][:3]
