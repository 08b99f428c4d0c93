import json
import math

import numpy as np
import pytest

from sharpembed import certify as cert
from sharpembed.errors import DomainError, InconclusiveError
from sharpembed.phase_plane import P_eval, alpha_star


def test_count_sign_changes_known():
    assert cert.count_sign_changes(np.sin, 0.1, 3 * math.pi - 0.1) == 2
    assert cert.count_sign_changes(lambda x: (x - 0.5) ** 2 + 1, 0, 1) == 0
    # a root sitting exactly on a grid node is still a single sign change
    assert cert.count_sign_changes(lambda x: x - 0.5, 0.0, 1.0, n=101) == 1


def test_count_sign_changes_touching_root():
    # a double root is ambiguous on every level, so no false sign change is reported
    with pytest.raises(InconclusiveError):
        cert.count_sign_changes(lambda x: np.where(np.abs(x - 0.3) < 1e-3, 0.0, x - 0.3), 0, 1)


def test_p_cubic_roots_reproduced():
    qs = np.linspace(-8, 10, 40)
    coeffs = np.polyfit(qs, P_eval(1.15, qs), 3)
    roots = np.sort(np.roots(coeffs).real)
    assert np.allclose(roots, cert.P_AT_115[1], atol=1e-6)


@pytest.mark.parametrize("label", list(cert.FACTORISATIONS))
def test_factorisations(label):
    expanded, factored, xs = cert.FACTORISATIONS[label]
    assert len(xs) == 25
    assert np.allclose(factored(xs), expanded(xs), rtol=1e-5, atol=0)


def test_tau7_form_is_not_an_expansion():
    expanded, factored, xs = cert.TAU7_FORM
    gap = np.max(np.abs(factored(xs) - expanded(xs)) / np.abs(expanded(xs)))
    assert gap > 0.05
    assert np.all(factored(xs) < 0) and np.all(expanded(xs) < 0)


def test_main_lemma_small_grid():
    rep = cert.certify_main_lemma(q_grid=(2.5, 5.0), alpha_density=6)
    assert rep.passed and rep.margin > 0
    counts = {c["check"]: c["count"] for c in rep.checks}
    assert counts == {"dI/dalpha < 0": 12, "I > pi/sqrt(q-2)": 12}
    with pytest.raises(DomainError):
        cert.certify_main_lemma(q_grid=(2.0,), alpha_density=2)


@pytest.mark.parametrize("q, frac", [(3.5, 0.5), (3.9, 0.95), (3.1, 0.1)])
def test_lemma22_single(q, frac):
    rep = cert.certify_lemma22(q, frac * alpha_star(q))
    assert rep.passed, rep.witnesses


@pytest.mark.parametrize("q", [2.5, 3.0])
def test_lemma22_monotone_branch(q):
    rep = cert.certify_lemma22(q, 0.4 * alpha_star(q))
    assert rep.name == "lemma22_monotone_g"
    assert rep.passed


def test_lemma23_domain():
    with pytest.raises(DomainError):
        cert.certify_lemma23(4.5, 0.1)


def test_polynomials_and_chain():
    poly = cert.certify_polynomials(q_count=6, z_count=300)
    assert poly.passed, poly.witnesses
    assert poly.diagnostics["reference tau7 form max relative gap"] == pytest.approx(0.1016, abs=1e-3)
    chain = cert.certify_chain(points_per_step=300)
    assert chain.passed
    steps = {c["check"].split(":")[0] for c in chain.checks}
    assert steps == {f"step {k}" for k in range(7)} | {"tail"}


def test_report_serialises():
    rep = cert.certify_lemma23_grid(3, 3)
    text = json.dumps(rep.to_dict())
    assert json.loads(text)["name"] == "lemma23"


def test_failing_slack_is_a_witness():
    s = cert._Slacks("demo", "two points")
    s.add("x > 0", 1.0, {"x": 1})
    s.add("x > 0", -0.5, {"x": -0.5})
    rep = s.report()
    assert not rep.passed
    assert rep.margin == -0.5
    assert rep.witnesses[0]["point"] == {"x": -0.5}


def test_refinement_stability():
    base = cert.certify_all(("lemma22", "lemma23", "chain"), density=1)
    fine = cert.certify_all(("lemma22", "lemma23", "chain"), density=2)
    for a, b in zip(base, fine):
        assert a.passed and b.passed
        assert b.margin <= a.margin + 1e-12
