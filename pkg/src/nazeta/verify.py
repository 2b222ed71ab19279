"""Seeded verification suites with machine-readable results.

Each check returns a ``CheckResult``; a suite is a list of checks.  Random
inputs come from ``random.Random(seed)`` (Mersenne Twister), drawn as floats
and converted exactly, so a seed pins every input bit for bit.  Results
carry no timings, so the same flags give byte-identical output.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from typing import Callable

from mpmath import mp, mpc, mpf

from . import eisenstein, lattice, rank2, zeros, zetalib
from .fields import Q, Q_I, Q_SQRT_5, Q_SQRT_M3, Q_SQRT_M5, SHIPPED_FIELDS, make_field
from .hpnum import digits_of, working

SCHEMA = 1


@dataclass
class CheckResult:
    name: str
    criterion: int
    passed: bool
    worst: str
    tolerance: str
    cases: int
    digits: int
    counterexample: dict | None = None
    detail: dict = field(default_factory=dict)


class _Tracker:
    """Collects the worst residual and the first failing case."""

    def __init__(self, tolerance):
        self.tolerance = mpf(tolerance)
        self.worst = mpf(0)
        self.cases = 0
        self.first_failure = None

    def add(self, residual, case: dict):
        self.cases += 1
        residual = mpf(residual)
        if residual > self.worst:
            self.worst = residual
        if not residual <= self.tolerance and self.first_failure is None:
            self.first_failure = dict(case, residual=digits_of(residual, 6))

    def fail(self, case: dict):
        self.cases += 1
        if self.first_failure is None:
            self.first_failure = case

    def result(self, name, criterion, digits, **detail) -> CheckResult:
        return CheckResult(name, criterion, self.first_failure is None, digits_of(self.worst, 6),
                           digits_of(self.tolerance, 3), self.cases, digits, self.first_failure, detail)


def _c(z) -> str:
    z = mpc(z)
    return f"{digits_of(z.real, 20)},{digits_of(z.imag, 20)}"


# ---------------------------------------------------------------- checks

ACCEPTANCE_FIELDS = (Q, Q_I, Q_SQRT_M3, Q_SQRT_M5, Q_SQRT_5)


def check_functional_equation(seed: int = 0, digits: int = 40, count: int = 200,
                              fields=ACCEPTANCE_FIELDS) -> CheckResult:
    """|xi_{K,2}(s) - xi_{K,2}(1-s)| / |xi_{K,2}(s)| on random s in [-2,3] x [-40,40]."""
    rng = random.Random(seed)
    track = _Tracker("1e-25")
    with working(digits):
        for K in fields:
            done = 0
            while done < count:
                s = mpc(rng.uniform(-2, 3), rng.uniform(-40, 40))
                if min(abs(s), abs(s - 1)) < 1e-3:
                    continue
                a = rank2.rank2_zeta(s, K, digits)
                b = rank2.rank2_zeta(1 - s, K, digits)
                track.add(abs(a - b) / abs(a), {"field": K.label, "s": _c(s)})
                done += 1
    return track.result("functional_equation", 1, digits)


def check_suzuki(seed: int = 0, digits: int = 50, count: int = 50) -> CheckResult:
    """F(z + i/4) - F(z - i/4) = i z (1 + 4z^2) xi_{Q,2}(1/2 + iz) on random |z| <= 20."""
    rng = random.Random(seed)
    track = _Tracker("1e-25")
    with working(digits):
        for _ in range(count):
            r, theta = 20 * math.sqrt(rng.random()), rng.uniform(0, 2 * math.pi)
            z = mpc(r * math.cos(theta), r * math.sin(theta))
            lhs, rhs = rank2.suzuki_identity_sides(z, digits)
            scale = max(abs(lhs), abs(rhs))
            track.add(abs(lhs - rhs) / scale if scale else 0, {"z": _c(z)})
    return track.result("suzuki_identity", 2, digits)


CERTIFICATION_BOXES = ((Q, None, 60), (Q, 2, 40), (Q, 10, 40), (Q_I, None, 30), (Q_SQRT_M5, None, 20))


def check_certification(digits: int = 30, jobs: int = 1, boxes=CERTIFICATION_BOXES) -> CheckResult:
    """Contour count plus pole correction equals the number of on-line zeros, exactly."""
    track = _Tracker(0)
    counts = {}
    for K, T, t1 in boxes:
        report = zeros.certify_box(K, T, t1, digits, jobs=jobs)
        label = f"{K.label} T={T or 1} t<={t1}"
        counts[label] = {"contour": report.contour_count, "zeros": len(report.on_line_zeros)}
        if report.certified:
            track.add(0, {})
        else:
            track.fail({"box": label, "discrepancy": report.discrepancy, "notes": report.notes})
    return track.result("critical_line_certification", 3, digits, counts=counts)


def check_residues(digits: int = 40) -> CheckResult:
    """Res_1 = xi(2) - 1/2 by contour and limit; Res_0 = -Res_1."""
    track = _Tracker("1e-20")
    with working(digits):
        target = zetalib.completed_xi(2, digits) - mpf(1) / 2
        contour1 = rank2.residue_contour(1, Q, digits)
        limit1 = rank2.residue_limit(1, Q, digits)
        contour0 = rank2.residue_contour(0, Q, digits)
        limit0 = rank2.residue_limit(0, Q, digits)
        track.add(abs(contour1 - target), {"path": "contour", "pole": 1})
        track.add(abs(limit1 - target), {"path": "limit", "pole": 1})
        track.add(abs(contour0 + contour1), {"path": "contour", "pole": 0})
        track.add(abs(limit0 + limit1), {"path": "limit", "pole": 0})
    return track.result("residues", 4, digits, residue_at_one=digits_of(contour1.real, 25))


RANKIN_SELBERG_POINTS = ((2, 1), (2, 3), (3, "1.5"))


def check_rankin_selberg(quad_order: int = 12, points=RANKIN_SELBERG_POINTS) -> CheckResult:
    """Quadrature of E*(z,s) over the truncated domain against the closed form, relative 1e-3."""
    track = _Tracker("1e-3")
    for s, T in points:
        numeric, closed = eisenstein.integrate_truncated_domain(s, mpf(T), 15, quad_order)
        track.add(abs(numeric - closed) / abs(closed), {"s": str(s), "T": str(T)})
    return track.result("rankin_selberg_quadrature", 5, 15, quad_order=quad_order)


FOURIER_POINTS = (("0.3", "1.2", "2", "0"), ("-0.1", "0.8", "2.5", "1"), ("0.45", "3", "3", "0"),
                  ("0.2", "1.5", "2", "5"), ("-0.4", "2.2", "3", "-2"))


def check_eisenstein_oracle(digits: int = 30) -> CheckResult:
    """Fourier expansion vs lattice sum, plus invariance under z -> z+1 and z -> -1/z."""
    track = _Tracker("1e-10")
    with working(digits):
        for x, y, sr, si in FOURIER_POINTS:
            z, s = mpc(mpf(x), mpf(y)), mpc(mpf(sr), mpf(si))
            four = eisenstein.eisenstein_fourier(z, s, None, digits)
            lat = eisenstein.epstein_lattice_sum(z, s, None, digits)
            track.add(abs(four - lat) / abs(lat), {"z": _c(z), "s": _c(s), "test": "fourier_vs_lattice"})
            for image, label in ((z + 1, "translate"), (-1 / z, "invert")):
                moved = eisenstein.eisenstein_fourier(image, s, None, digits)
                track.add(abs(moved - four) / abs(four), {"z": _c(z), "s": _c(s), "test": label})
    return track.result("eisenstein_oracle", 6, digits)


def _random_upper(rng: random.Random) -> mpc:
    """Random point: a reduced point moved by a random word in S and T."""
    z = mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.87, 2.5))
    return _scramble(z, rng)


def _scramble(z: mpc, rng: random.Random) -> mpc:
    for _ in range(rng.randint(0, 3)):
        z = z + rng.randint(-2, 2)
        z = -1 / z
    return z


def check_lattice(seed: int = 0, digits: int = 40, rr_count: int = 100, stable_count: int = 200,
                  near_boundary: int = 20) -> CheckResult:
    """Riemann-Roch, agreement of the four stability tests, and h0(Z^2) against theta."""
    rng = random.Random(seed)
    rr = _Tracker("1e-12")
    stable = _Tracker(0)
    theta = _Tracker("1e-20")
    with working(digits):
        for _ in range(rr_count):
            tau = mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 3))
            L = lattice.LatticeK(Q, tau, mpf(rng.uniform(0.6, 1.6)))
            gap = lattice.h0(L, digits) - lattice.h1(L, digits) - lattice.degree(L)
            rr.add(abs(gap), {"tau": _c(tau), "scale": digits_of(mpf(L.scale), 20)})
        for i in range(stable_count):
            if i < near_boundary:
                # reduced points straddling the line y = 1 by 1e-12
                offset = mpf(10) ** -12 * (1 if i % 2 else -1)
                reduced = mpc(rng.uniform(-0.5, 0.5), 1 + offset)
                tau = _scramble(reduced, rng)
            else:
                tau = _random_upper(rng)
            L = lattice.LatticeK(Q, tau)
            verdicts = {
                "reduction": lattice.is_semistable_q(tau),
                "lambda1": lattice.lambda1(L) >= 1,
                "hayashi": lattice.hayashi_check(L, None, digits),
                "distance": lattice.is_semistable_k(L, digits),
            }
            if len(set(verdicts.values())) == 1:
                stable.add(0, {})
            else:
                stable.fail({"tau": _c(tau), **{k: str(v) for k, v in verdicts.items()}})
        value = lattice.h0(lattice.LatticeK(Q, mpc(0, 1)), digits)
        brute = mp.log(mp.nsum(lambda m, n: mp.exp(-mp.pi * (m * m + n * n)), [-mp.inf, mp.inf], [-mp.inf, mp.inf]))
        jacobi = 2 * mp.log(mp.jtheta(3, 0, mp.exp(-mp.pi)))
        theta.add(abs(value - brute), {"oracle": "double sum"})
        theta.add(abs(value - jacobi), {"oracle": "jacobi theta"})
    failures = [t.first_failure for t in (rr, stable, theta) if t.first_failure]
    return CheckResult("lattice_suite", 7, not failures, digits_of(rr.worst, 6), "1e-12",
                       rr.cases + stable.cases + theta.cases, digits, failures[0] if failures else None,
                       {"riemann_roch_worst": digits_of(rr.worst, 6),
                        "stability_agreements": stable.cases - (1 if stable.first_failure else 0),
                        "theta_worst": digits_of(theta.worst, 6)})


def check_dedekind_paths(digits: int = 30) -> CheckResult:
    """zeta*L against the form route at s = 2, 3; for d = -20 the two classes sum to zeta_K."""
    track = _Tracker("1e-10")
    with working(digits):
        for d in (-3, -4, -20):
            K = make_field(d)
            for s in (2, 3):
                a = zetalib.dedekind_zeta(s, K, digits)
                b = zetalib.dedekind_zeta_by_forms(s, K, digits)
                track.add(abs(a - b) / abs(a), {"disc": d, "s": s, "test": "zeta_L_vs_forms"})
        K = make_field(-20)
        L = lattice.LatticeK(K, (mpc(0), mpf(1)))
        classes = {}
        for cusp in lattice.enumerate_candidate_cusps(L, mpf("0.01"), digits):
            classes.setdefault(cusp.ideal_class, cusp)
        for s in (2, 3):
            target = zetalib.dedekind_zeta(2 * s, K, digits)
            parts = []
            for cusp in classes.values():
                a0, _ = eisenstein.constant_term_k(cusp, L, s, digits)
                n = cusp.ideal_b_norm / L.ideal_norm
                parts.append(a0 / mp.power(mpf(n.numerator) / n.denominator, 2 * s))
            if len(parts) != 2:
                track.fail({"disc": -20, "s": s, "classes_found": len(parts)})
                continue
            track.add(abs(mp.fsum(parts) - target) / abs(target), {"disc": -20, "s": s, "test": "class_sum"})
    return track.result("dedekind_paths", 8, digits)


def check_bridge(seed: int = 0, digits: int = 30, rational: int = 5, gaussian: int = 3) -> CheckResult:
    """Lattice-side Epstein zeta against the point value at tau, Re(s) >= 2."""
    rng = random.Random(seed)
    track = _Tracker("1e-20")
    with working(digits):
        for _ in range(rational):
            tau = mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 2.5))
            L = lattice.LatticeK(Q, tau, mpf(rng.uniform(0.7, 1.4)))
            s = mpc(rng.uniform(2, 3.5), rng.uniform(-3, 3))
            track.add(eisenstein.bridge_check(L, s, digits), {"field": "Q", "tau": _c(tau), "s": _c(s)})
        for _ in range(gaussian):
            z, r = mpc(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)), mpf(rng.uniform(0.7, 1.5))
            L = lattice.LatticeK(Q_I, (z, r))
            s = mpc(rng.uniform(2, 3), rng.uniform(-2, 2))
            track.add(eisenstein.bridge_check(L, s, digits),
                      {"field": Q_I.label, "z": _c(z), "r": digits_of(r, 20), "s": _c(s)})
    return track.result("lattice_point_bridge", 9, digits)


MELLIN_POINTS = ((1, 1, 2), ("pi", 2, 1), ("2pi", 2, 3))


def check_mellin(digits: int = 30) -> CheckResult:
    """Quadrature of int exp(-A t^B) t^s dt/t against (1/B) A^(-s/B) Gamma(s/B)."""
    track = _Tracker("1e-20")
    with working(digits):
        named = {"pi": mp.pi, "2pi": 2 * mp.pi}
        for A, B, s in MELLIN_POINTS:
            a = named.get(A, A) if isinstance(A, str) else A
            numeric, closed = eisenstein.mellin_check(a, B, s, digits)
            track.add(abs(numeric - closed), {"A": str(A), "B": str(B), "s": str(s)})
    return track.result("mellin_identity", 10, digits)


# ---------------------------------------------------------------- suites

SUITES: dict[str, tuple[str, ...]] = {
    "identities": ("functional_equation", "suzuki", "residues", "dedekind", "mellin"),
    "zeros": ("certification",),
    "lattice": ("lattice",),
    "eisenstein": ("eisenstein_oracle", "bridge", "rankin_selberg"),
}
SUITES["all"] = tuple(name for suite in ("identities", "zeros", "lattice", "eisenstein") for name in SUITES[suite])


def _runner(name: str, seed: int, digits: int | None, jobs: int) -> Callable[[], CheckResult]:
    opt = {} if digits is None else {"digits": digits}
    table = {
        "functional_equation": lambda: check_functional_equation(seed, **opt),
        "suzuki": lambda: check_suzuki(seed, **opt),
        "residues": lambda: check_residues(**opt),
        "dedekind": lambda: check_dedekind_paths(**opt),
        "mellin": lambda: check_mellin(**opt),
        "certification": lambda: check_certification(jobs=jobs, **opt),
        "lattice": lambda: check_lattice(seed, **opt),
        "eisenstein_oracle": lambda: check_eisenstein_oracle(**opt),
        "bridge": lambda: check_bridge(seed, **opt),
        "rankin_selberg": lambda: check_rankin_selberg(),
    }
    return table[name]


def run_suite(suite: str, seed: int = 0, digits: int | None = None, jobs: int = 1) -> dict:
    """Run a suite and return the summary document (stable key order)."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    results = [_runner(name, seed, digits, jobs)() for name in SUITES[suite]]
    failed = next((r for r in results if not r.passed), None)
    return {
        "schema": SCHEMA,
        "suite": suite,
        "seed": seed,
        "digits": "default" if digits is None else digits,
        "passed": failed is None,
        "first_counterexample": None if failed is None else {"check": failed.name, **(failed.counterexample or {})},
        "checks": [asdict(r) for r in results],
    }
