"""Acceptance criteria, one test each.

Each test prints a single ``PASS``/``FAIL`` line with the measured quantity,
so ``pytest tests/test_acceptance.py`` doubles as a readable report.  Running
the file directly prints the same lines without pytest.
"""
import math
import sys

import numpy as np
import pytest

from sharpembed import certify as cert
from sharpembed.embedding import (EmbeddingParams, FourierFunction, bifurcation_threshold,
                                  destabilization_check, second_variation_form, sharp_constant)
from sharpembed.phase_plane import P_eval, alpha_star, tau_eval
from sharpembed.quadrature import (duality_residual, elliptic_oracle_q4, period_integral,
                                   period_integral_deriv, period_limit)
from sharpembed.solutions import (band_index, count_periodic_solutions, first_integral_residual,
                                  rayleigh_quotient, reconstruct_profile, solve_alpha_for_period,
                                  virial_residual)


def elliptic_oracle():
    alphas = (0.05, 0.1, 0.15, 0.2, 0.24)
    gap = max(abs(period_integral(4, a).value - elliptic_oracle_q4(a)) for a in alphas)
    return gap <= 1e-8, f"max |I_4 - oracle| = {gap:.2e}"


def limit_law():
    gaps = {q: abs(period_integral(q, alpha_star(q) * (1 - 1e-6)).value - period_limit(q))
            for q in (2.5, 3.0, 4.0)}
    worst = max(gaps.values())
    return worst <= 1e-3, f"max gap to pi/sqrt(q-2) = {worst:.2e}"


def main_lemma():
    worst_deriv, worst_rel, n = -math.inf, 0.0, 0
    for q in (2.2, 2.5, 3.0, 3.5, 4.0):
        astar = alpha_star(q)
        for a in np.linspace(0.01, 0.999, 50) * astar:
            d = period_integral_deriv(q, a).value
            h = 1e-6 * astar
            fd = (period_integral(q, a + h, 1e-13).value
                  - period_integral(q, a - h, 1e-13).value) / (2 * h)
            worst_deriv = max(worst_deriv, d)
            worst_rel = max(worst_rel, abs(d - fd) / abs(fd))
            n += 1
    ok = n == 250 and worst_deriv < 0 and worst_rel <= 1e-4
    return ok, f"{n} points, max dI/dalpha = {worst_deriv:.3e}, max rel FD gap = {worst_rel:.2e}"


def duality():
    worst = max(duality_residual(q, a) for q, a in ((3, 0.3), (5, 0.1), (6, 0.1)))
    return worst <= 1e-8, f"max residual = {worst:.2e}"


def counting():
    fixed = (count_periodic_solutions(4, math.pi), count_periodic_solutions(4, 2 * math.pi),
             count_periodic_solutions(3, math.pi))
    grid = [(q, T) for q in np.linspace(2.05, 12.0, 20) for T in np.linspace(0.5, 10.0, 10)]
    mismatches = sum(count_periodic_solutions(q, T) != band_index(q, T) for q, T in grid)
    ok = fixed == (2, 3, 1) and len(grid) == 200 and mismatches == 0
    return ok, f"counts {fixed}, band mismatches {mismatches}/{len(grid)}"


def sharp_constant_and_threshold():
    res = sharp_constant(EmbeddingParams(4, 1, 1))
    exact = res.value == 2 ** 0.25
    rng = np.random.default_rng(20)
    pairs = []
    while len(pairs) < 20:
        T = rng.uniform(0.3, 6.0)
        q = rng.uniform(2.0001, bifurcation_threshold(1, T))
        pairs.append((q, T))
    nones = sum(solve_alpha_for_period(q, T, 1) is None for q, T in pairs)
    ok = exact and res.status.value == "exact_constant_minimizer" and nones == 20
    return ok, f"lambda(4,1,1) = {res.value!r}, none returned for {nones}/20 pairs"


def destabilization():
    values = {}
    for r, T, q in ((1, math.pi, 4), (1, 2, 6), (2, math.pi, 4)):
        assert q > bifurcation_threshold(r, T)
        values[(r, T, q)], eps = destabilization_check(q, r, T, eps=0.01)
        assert eps == 0.01
    return all(v < 0 for v in values.values()), "J = " + ", ".join(f"{v:.3e}" for v in values.values())


def profile_fidelity():
    a = solve_alpha_for_period(4, math.pi, 1)
    p = reconstruct_profile(4, a, 1, math.pi)
    fi, vr = first_integral_residual(p), virial_residual(p)
    rq = rayleigh_quotient(p, 4, math.pi)
    ok = p.period_residual <= 1e-6 and fi <= 1e-6 and vr <= 1e-5 and rq < (2 * math.pi) ** 0.25
    return ok, (f"period {p.period_residual:.1e}, first integral {fi:.1e}, virial {vr:.1e}, "
                f"Rayleigh {rq:.7f} < {(2 * math.pi) ** 0.25:.7f}")


def reference_numerics():
    taus = (abs(tau_eval(1.15, 4) - 0.8966333519), abs(tau_eval(1.157, 4) - 0.8933635819))
    fact_gap = 0.0
    for expanded, factored, xs in cert.FACTORISATIONS.values():
        assert len(xs) == 25
        e = expanded(xs)
        fact_gap = max(fact_gap, float(np.max(np.abs(factored(xs) - e) / np.abs(e))))
    qs = np.linspace(-8, 10, 40)
    roots = np.sort(np.roots(np.polyfit(qs, P_eval(1.15, qs), 3)).real)
    root_gap = float(np.max(np.abs(roots - np.array([-5.796999289, 4.076622243, 8.501415029]))))
    ok = max(taus) <= 1e-9 and fact_gap <= 1e-5 and root_gap <= 1e-6
    return ok, (f"tau gaps {taus[0]:.1e}/{taus[1]:.1e}, factorisation rel gap {fact_gap:.1e}, "
                f"root gap {root_gap:.1e}")


def certificates():
    base = cert.certify_all(("lemma22", "lemma23", "chain"), density=1)
    fine = cert.certify_all(("lemma22", "lemma23", "chain"), density=2)
    chain_steps = {c["check"].split(":")[0] for c in base[2].checks if c["passed"]}
    steps_ok = {f"step {k}" for k in range(7)} <= chain_steps
    ok = all(r.passed for r in base + fine) and steps_ok
    margins = ", ".join(f"{a.name} {a.margin:.1e}->{b.margin:.1e}" for a, b in zip(base, fine))
    return ok, f"margins (1x->2x): {margins}"


def eigenvalue_formula():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(30):
        k, q = int(rng.integers(1, 8)), rng.uniform(2.1, 10)
        r, T = rng.uniform(0.5, 3.0), rng.uniform(0.3, 5.0)
        got = second_variation_form(FourierFunction.cosine(k, T), q, r)
        want = T * ((k * math.pi / T) ** (2 * r) + 2 - q)
        worst = max(worst, abs(got - want) / abs(want))
    return worst <= 1e-10, f"max rel error {worst:.1e} over 30 draws"


CRITERIA = [
    ("1 elliptic oracle agreement", elliptic_oracle),
    ("2 limit law", limit_law),
    ("3 monotonicity of the period", main_lemma),
    ("4 duality identity", duality),
    ("5 solution counting", counting),
    ("6 sharp constant and threshold", sharp_constant_and_threshold),
    ("7 destabilization", destabilization),
    ("8 profile fidelity", profile_fidelity),
    ("9 reference numerics", reference_numerics),
    ("10 certificates", certificates),
    ("11 eigenvalue formula", eigenvalue_formula),
]


def _line(name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}"


@pytest.mark.parametrize("name, check", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(name, *check()) for name, check in CRITERIA]
    for name, ok, detail in results:
        print(_line(name, ok, detail))
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
