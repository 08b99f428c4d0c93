"""Grid certificates for the monotonicity of the period integral and the
auxiliary inequalities behind it.

Every certificate records signed slacks (positive means the inequality holds
with that much room) and keeps the smallest one as its margin.  Agreement
checks against a tolerance use the unused fraction of the tolerance as slack.  These are
floating-point checks on explicit grids, not interval-arithmetic proofs; the
grids are listed in each report so a failure can be located and re-run at a
finer resolution.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError, InconclusiveError
from .phase_plane import (P_denominator, P_dz, P_eval, Q_denominator, Q_dq,
                          Q_dq_bound, Q_eval, alpha_star, g_family_eval,
                          oval_roots, tau_eval)
from .quadrature import (DEFAULT_TOL, dual_alpha, dual_exponent, period_integral,
                         period_integral_deriv, period_limit)

# (z_k, tau_k) continuation checkpoints for the upper branch of g(x0) < g(xhat) < g(x1)
CHAIN = (
    (1.15, 0.897),
    (1.157, 0.894),
    (1.166, 0.890),
    (1.177, 0.885),
    (1.194, 0.878),
    (1.221, 0.868),
    (1.271, 0.851),
    (1.438, 0.815),
)

# Reference factorisations: P(1.15, q) in q, and Q(z, 3, tau) in z.
P_AT_115 = (1.16747016, (-5.796999289, 4.076622243, 8.501415029))


def p_at_115_factored(q):
    lead, roots = P_AT_115
    q = np.asarray(q, dtype=float)
    return lead * (q - roots[0]) * (q - roots[1]) * (q - roots[2])


def q_tau0_factored(z):
    z = np.asarray(z, dtype=float)
    return (6.582844536 * (z + 1.157682736) * (z - 1.157682736)
            * (z * z + 1.636399020 * z + 1.166257009) * (z * z - 1.636399020 * z + 1.166257009))


def q_tau1_factored(z):
    z = np.asarray(z, dtype=float)
    return (6.274166280 * (z + 1.166008256) * (z - 1.166008256)
            * (z * z + 1.656562646 * z + 1.186071814) * (z * z - 1.656562646 * z + 1.186071814))


def q_tau7_factored(z):
    z = np.asarray(z, dtype=float)
    return (-0.493638296 * (z * z + 12.72622203)
            * (z * z + 2.170075688 * z + 1.376692111) * (z * z - 2.170075688 * z + 1.376692111))


FACTORISATIONS = {
    "P(1.15,q)": (lambda q: P_eval(1.15, q), p_at_115_factored, np.linspace(3.0, 4.0, 25)),
    "Q(z,3,0.897)": (lambda z: Q_eval(z, 3.0, 0.897), q_tau0_factored, np.linspace(0.5, 3.0, 25)),
    "Q(z,3,0.894)": (lambda z: Q_eval(z, 3.0, 0.894), q_tau1_factored, np.linspace(0.5, 3.0, 25)),
}

# The reference tau7 form does not expand to Q(z, 3, 0.815): its z^2 and
# constant coefficients are 11.351 and -11.906 where Q has 12 and -12.  Only
# its sign is used; agreement is reported as a diagnostic.
TAU7_FORM = (lambda z: Q_eval(z, 3.0, 0.815), q_tau7_factored, np.linspace(0.5, 3.0, 25))


@dataclass
class CertificateReport:
    name: str
    passed: bool
    margin: float
    witnesses: list
    grid_spec: str
    checks: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


class _Slacks:
    """Running minimum of signed slacks, per named check."""

    def __init__(self, name, grid_spec):
        self.name = name
        self.grid_spec = grid_spec
        self.checks = {}
        self.failures = []
        self.worst = (math.inf, None, None)

    def add(self, check, slack, point, count=1):
        slack = float(slack)
        if math.isnan(slack):
            slack = -math.inf
        m = self.checks.setdefault(check, [math.inf, 0])
        m[0] = min(m[0], slack)
        m[1] += count
        if slack < self.worst[0]:
            self.worst = (slack, check, point)
        if slack <= 0 and len(self.failures) < 20:
            self.failures.append({"check": check, "point": point, "value": slack})

    def add_array(self, check, slacks, points):
        slacks = np.asarray(slacks, dtype=float)
        i = int(np.nanargmin(slacks)) if np.any(np.isfinite(slacks)) else 0
        self.add(check, slacks[i], points(i), count=slacks.size)
        for j in np.flatnonzero(~(slacks > 0))[:20]:
            if j != i:
                self.add(check, slacks[j], points(int(j)), count=0)

    def report(self):
        margin, check, point = self.worst
        witnesses = [{"check": check, "point": point, "value": margin}]
        witnesses += [w for w in self.failures if w["point"] != point or w["check"] != check]
        checks = [{"check": k, "margin": v[0], "count": v[1], "passed": v[0] > 0}
                  for k, v in self.checks.items()]
        return CertificateReport(self.name, bool(margin > 0), float(margin), witnesses,
                                 self.grid_spec, checks)


def count_sign_changes(func, a, b, n=2000, floor=1e-12, max_levels=12):
    """Sign changes of ``func`` on [a, b] from an n-point grid with local refinement.

    Samples with |value| <= floor * max|value| are ambiguous; the grid is
    refined around them (halving the spacing) for up to ``max_levels`` levels.
    Ambiguous samples with no unambiguous neighbour within two final grid
    spacings make the count inconclusive.
    """
    xs = np.linspace(a, b, n)
    vs = np.asarray(func(xs), dtype=float)
    cut = floor * np.max(np.abs(vs))
    h = (b - a) / (n - 1)
    for _ in range(max_levels):
        amb = np.abs(vs) <= cut
        if not amb.any():
            break
        h *= 0.5
        extra = np.concatenate([xs[amb] - h, xs[amb] + h])
        extra = extra[(extra > a) & (extra < b)]
        xs = np.concatenate([xs, extra])
        vs = np.concatenate([vs, np.asarray(func(extra), dtype=float)])
        order = np.argsort(xs)
        xs, vs = xs[order], vs[order]
    amb = np.abs(vs) <= cut
    if amb.any():
        clear_x = xs[~amb]
        for x in xs[amb]:
            if clear_x.size == 0 or np.min(np.abs(clear_x - x)) > 2.0 * h:
                raise InconclusiveError(f"cannot isolate sign change near t={x}")
    signs = np.sign(vs[~amb])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _alpha_grid(q, density, lo=0.01, hi=0.999):
    return np.linspace(lo, hi, density) * alpha_star(q)


DEFAULT_MAIN_Q = (2.2, 2.5, 3.0, 3.5, 4.0)


def certify_main_lemma(q_grid=DEFAULT_MAIN_Q, alpha_density=50, tol=DEFAULT_TOL):
    """dI/dalpha < 0 and I > pi/sqrt(q-2) on a grid of (q, alpha).

    Exponents above 4 are mapped to 2q/(q-2) < 4 with alpha -> alpha^{2/(q-2)},
    which rescales I by the positive factor 2/(q-2).
    """
    spec = f"q in {list(q_grid)}; {alpha_density} alpha in [0.01, 0.999] alpha*"
    slacks = _Slacks("main_lemma", spec)
    for q in q_grid:
        if not q > 2:
            raise DomainError(f"q must exceed 2, got {q}")
        for alpha in _alpha_grid(q, alpha_density):
            point = {"q": float(q), "alpha": float(alpha)}
            if q > 4:
                qq, aa, scale = dual_exponent(q), dual_alpha(q, alpha), 2.0 / (q - 2.0)
                point["dual"] = {"q": qq, "alpha": float(aa)}
            else:
                qq, aa, scale = q, alpha, 1.0
            deriv = period_integral_deriv(qq, aa, tol).value
            value = scale * period_integral(qq, aa, tol).value
            slacks.add("dI/dalpha < 0", -deriv, point)
            slacks.add("I > pi/sqrt(q-2)", value - period_limit(q), point)
    return slacks.report()


def certify_lemma22(q, alpha, grid_size=2000):
    """Sign pattern of g' on [x0, x1].

    For q > 3: g'(x0) < 0, g'(x̂) > 0, g'(x1) < 0, g1 changes sign exactly
    twice and g2 exactly once.  For q <= 3: g1 > 0 inside, so g increases.
    """
    oval = oval_roots(q, alpha)
    point = {"q": float(q), "alpha": float(alpha)}
    if q > 3:
        slacks = _Slacks("lemma22", f"{grid_size}-point grid on [x0, x1]")
        slacks.add("g'(x0) < 0", -g_family_eval(oval, oval.x0, "dg"), point)
        slacks.add("g'(xhat) > 0", g_family_eval(oval, oval.xhat, "dg"), point)
        slacks.add("g'(x1) < 0", -g_family_eval(oval, oval.x1, "dg"), point)
        n1 = count_sign_changes(lambda t: g_family_eval(oval, t, "g1"), oval.x0, oval.x1, grid_size)
        n2 = count_sign_changes(lambda t: g_family_eval(oval, t, "g2"), oval.x0, oval.x1, grid_size)
        slacks.add("g1 sign changes == 2", 1.0 if n1 == 2 else -abs(n1 - 2), {**point, "count": n1})
        slacks.add("g2 sign changes == 1", 1.0 if n2 == 1 else -abs(n2 - 1), {**point, "count": n2})
        return slacks.report()
    slacks = _Slacks("lemma22_monotone_g", f"{grid_size}-point grid on (x0, x1)")
    ts = np.linspace(oval.x0, oval.x1, grid_size)
    if q == 3:
        ts = ts[1:-1]
    g1 = g_family_eval(oval, ts, "g1")
    slacks.add_array("g1 > 0 (g increasing)", g1, lambda i: {**point, "t": float(ts[i])})
    return slacks.report()


def certify_lemma23(q, alpha):
    """g(x0) < g(x̂) < g(x1) for 3 <= q <= 4."""
    if not 3 <= q <= 4:
        raise DomainError(f"ordering is certified for 3 <= q <= 4, got {q}")
    oval = oval_roots(q, alpha)
    g0, gh, g1 = (g_family_eval(oval, t, "g") for t in (oval.x0, oval.xhat, oval.x1))
    point = {"q": float(q), "alpha": float(alpha)}
    slacks = _Slacks("lemma23", "single point")
    slacks.add("g(x0) < g(xhat)", gh - g0, point)
    slacks.add("g(xhat) < g(x1)", g1 - gh, point)
    return slacks.report()


def _merge(name, reports, spec):
    out = _Slacks(name, spec)
    for rep in reports:
        for c in rep.checks:
            m = out.checks.setdefault(c["check"], [math.inf, 0])
            m[0] = min(m[0], c["margin"])
            m[1] += c["count"]
        for w in rep.witnesses:
            if w["value"] < out.worst[0]:
                out.worst = (w["value"], w["check"], w["point"])
            if w["value"] <= 0 and len(out.failures) < 20:
                out.failures.append(w)
    return out.report()


def certify_lemma22_grid(q_count=10, alpha_count=10, grid_size=2000):
    qs = np.linspace(3.0, 4.0, q_count + 1)[1:]
    fracs = np.linspace(0.05, 0.99, alpha_count)
    reports = [certify_lemma22(q, f * alpha_star(q), grid_size) for q in qs for f in fracs]
    spec = (f"q in linspace(3, 4, {q_count + 1})[1:] x alpha/alpha* in "
            f"linspace(0.05, 0.99, {alpha_count}); {grid_size}-point t grid")
    return _merge("lemma22", reports, spec)


def certify_lemma23_grid(q_count=20, alpha_count=20):
    qs = np.linspace(3.0, 4.0, q_count)
    fracs = np.linspace(0.05, 0.99, alpha_count)
    reports = [certify_lemma23(q, f * alpha_star(q)) for q in qs for f in fracs]
    spec = f"q in linspace(3, 4, {q_count}) x alpha/alpha* in linspace(0.05, 0.99, {alpha_count})"
    return _merge("lemma23", reports, spec)


def _rel_gap(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(np.abs(a), np.abs(b))


def certify_polynomials(q_count=21, z_count=2000, z_max=20.0):
    """Sign and shape claims for the rational reductions of the ordering inequality."""
    qs = np.linspace(3.0, 4.0, q_count)
    zs = np.linspace(1.0, z_max, z_count)
    Z, Qg = np.meshgrid(zs, qs)
    pt = lambda i: {"z": float(Z.flat[i]), "q": float(Qg.flat[i])}
    spec = f"q in linspace(3, 4, {q_count}), z in linspace(1, {z_max}, {z_count})"
    s = _Slacks("polynomials", spec)

    s.add_array("P-denominator < 0", -P_denominator(Z, Qg).ravel(), pt)
    s.add_array("P(1, q) > 0", P_eval(1.0, qs), lambda i: {"z": 1.0, "q": float(qs[i])})
    inner = Z[:, 1:], Qg[:, 1:]
    s.add_array("dP/dz < 0 for z > 1", -P_dz(*inner).ravel(),
                lambda i: {"z": float(inner[0].flat[i]), "q": float(inner[1].flat[i])})
    s.add_array("P leading coefficient < 0", 5 * (2 * qs - 1) * (7 - qs) * (qs + 3),
                lambda i: {"q": float(qs[i])})
    s.add_array("P(1.15, q) > 0", P_eval(1.15, qs), lambda i: {"z": 1.15, "q": float(qs[i])})
    s.add_array("Q-denominator > 0 for z > 1", Q_denominator(*inner).ravel(),
                lambda i: {"z": float(inner[0].flat[i]), "q": float(inner[1].flat[i])})

    for label, (expanded, factored, xs) in FACTORISATIONS.items():
        gap = _rel_gap(expanded(xs), factored(xs))
        s.add_array(f"{label} matches factorisation (rel 1e-5)", 1.0 - gap / 1e-5,
                    lambda i, xs=xs: {"x": float(xs[i])})

    taus = np.array([tau for _, tau in CHAIN])
    Zt, Tt = np.meshgrid(zs, taus)
    ptt = lambda i: {"z": float(Zt.flat[i]), "tau": float(Tt.flat[i])}
    s.add_array("dQ/dq at q=4 equals closed form (rel 1e-9)",
                1.0 - _rel_gap(Q_dq(Zt, 4.0, Tt), Q_dq_bound(Zt, Tt)).ravel() / 1e-9, ptt)
    s.add_array("d2Q/dq2 = 2(z^2-1)^3 > 0 for z > 1", 2 * (zs[1:] ** 2 - 1) ** 3,
                lambda i: {"z": float(zs[i + 1])})
    z3 = zs[zs <= 3.0]
    Z3, T3 = np.meshgrid(z3, taus)
    s.add_array("dQ/dq at q=4 < 0 for z <= 3", -Q_dq_bound(Z3, T3).ravel(),
                lambda i: {"z": float(Z3.flat[i]), "tau": float(T3.flat[i])})

    tau7 = CHAIN[-1][1]
    s.add_array("Q(z, 3, tau7) < 0", -Q_eval(zs, 3.0, tau7), lambda i: {"z": float(zs[i])})
    s.add_array("reference tau7 form < 0", -q_tau7_factored(zs), lambda i: {"z": float(zs[i])})
    s.add("Q(z, 3, tau7) leading coefficient < 0", 4.0 * (3.0 - 8.0 * tau7**5), {"tau": tau7})
    s.add_array("dQ/dq at q=4, tau7 < 0", -Q_dq_bound(zs, tau7), lambda i: {"z": float(zs[i])})
    s.add("dQ/dq at q=4, tau7 leading coefficient < 0", 8.0 * tau7**5 - 1.0, {"tau": tau7})
    report = s.report()
    expanded, factored, xs = TAU7_FORM
    report.diagnostics["reference tau7 form max relative gap"] = float(
        np.max(_rel_gap(expanded(xs), factored(xs))))
    return report


def certify_chain(points_per_step=2000, z_max=20.0):
    """Each checkpoint bounds tau on the next z-interval, where Q(z, 3, tau_k) < 0."""
    spec = f"{points_per_step} z-points per step; tail on [{CHAIN[-1][0]}, {z_max}]"
    s = _Slacks("chain", spec)
    for k in range(len(CHAIN) - 1):
        (zk, tk), (zn, _) = CHAIN[k], CHAIN[k + 1]
        zs = np.linspace(zk, zn, points_per_step)
        step = {"step": k, "z_k": zk, "tau_k": tk}
        s.add(f"step {k}: tau(z_k, 4) < tau_k", tk - tau_eval(zk, 4.0), step)
        s.add_array(f"step {k}: Q(z, 3, tau_k) < 0", -Q_eval(zs, 3.0, tk),
                    lambda i, zs=zs, step=step: {**step, "z": float(zs[i])})
        s.add_array(f"step {k}: dQ/dq <= bound < 0", -Q_dq_bound(zs, tk),
                    lambda i, zs=zs, step=step: {**step, "z": float(zs[i])})
    z7, t7 = CHAIN[-1]
    zs = np.linspace(z7, z_max, points_per_step)
    tail = {"step": "tail", "z_k": z7, "tau_k": t7}
    s.add("tail: tau(z_7, 4) < tau_7", t7 - tau_eval(z7, 4.0), tail)
    s.add_array("tail: Q(z, 3, tau_7) < 0", -Q_eval(zs, 3.0, t7),
                lambda i: {**tail, "z": float(zs[i])})
    s.add("tail: leading coefficient < 0", 4.0 * (3.0 - 8.0 * t7**5), tail)
    return s.report()


SUITES = ("main", "lemma22", "lemma23", "polynomials", "chain")


def certify_all(suites=SUITES, density=1):
    """Run the named certificates; ``density`` multiplies every grid size."""
    runners = {
        "main": lambda: certify_main_lemma(alpha_density=50 * density),
        "lemma22": lambda: certify_lemma22_grid(10 * density, 10 * density, 2000 * density),
        "lemma23": lambda: certify_lemma23_grid(20 * density, 20 * density),
        "polynomials": lambda: certify_polynomials(21 * density, 2000 * density),
        "chain": lambda: certify_chain(2000 * density),
    }
    return [runners[name]() for name in suites]
