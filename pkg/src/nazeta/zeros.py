"""Zeros of xi_{K,2} and xi^T on the critical line, and their certification.

On s = 1/2 + it the rank-two zetas are real, so zeros show up as sign
changes of t -> xi(1/2 + it).  The total number of zeros in a rectangle is
obtained independently by the argument principle (unwrapped phase along the
boundary).  A box is certified when both counts agree exactly.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from mpmath import mp, mpc, mpf

from .errors import BoundaryTooCloseToZero, RealnessViolated
from .fields import Q, FieldDescriptor
from .hpnum import DEFAULT_DIGITS, GUARD_DIGITS, working
from .rank2 import HALF, rank2_function

DEFAULT_STEP = 0.05
REFINE_TOL = mpf("1e-20")


@dataclass
class ZeroReport:
    field: str
    T: str
    rect: tuple[str, str, str, str]  # sigma0, sigma1, t0, t1
    on_line_zeros: list[tuple[str, str]]  # (t, bracket width) as decimal strings
    contour_count: int
    pole_correction: int
    certified: bool
    digits: int
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["rect"] = list(self.rect)
        out["on_line_zeros"] = [{"t": t, "width": w} for t, w in self.on_line_zeros]
        return out

    @property
    def discrepancy(self) -> int:
        return self.contour_count + self.pole_correction - len(self.on_line_zeros)


# ------------------------------------------------------------------ sampling

def _line_value(K: FieldDescriptor, T, t, p: int) -> mpf:
    fn = rank2_function(K, T)
    with working(p):
        v = fn(mpc(HALF, t), p)
        tol = mpf(10) ** (GUARD_DIGITS - p + 2)
        if abs(v.imag) > tol * max(abs(v), mpf(10) ** (-10 * p)):
            raise RealnessViolated(f"xi(1/2 + i{t}) has imaginary part {v.imag} (value {v})")
        return v.real


def _sample_chunk(args) -> list[tuple[str, str]]:
    label, disc, h, T, ts, p = args
    K = FieldDescriptor(label, disc, h)
    with working(p):
        return [(str(t), str(_line_value(K, T, mpf(t), p))) for t in ts]


def _grid(t0, t1, step) -> list:
    n = max(1, math.ceil(float((mpf(t1) - mpf(t0)) / mpf(step))))
    return [mpf(t0) + (mpf(t1) - mpf(t0)) * j / n for j in range(n + 1)]


def _evaluate_many(K, T, ts, p, jobs: int) -> list[tuple[mpf, mpf]]:
    if jobs <= 1 or len(ts) < 2 * jobs:
        with working(p):
            return [(t, _line_value(K, T, t, p)) for t in ts]
    chunks = [ts[i::jobs] for i in range(jobs)]
    args = [(K.label, K.disc, K.class_number, T, [str(t) for t in c], p) for c in chunks]
    out = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_sample_chunk, args):
            out.extend((mpf(t), mpf(v)) for t, v in part)
    out.sort(key=lambda tv: tv[0])
    return out


def critical_line_samples(K: FieldDescriptor = Q, T=None, t0=0.01, t1=30, step=DEFAULT_STEP,
                          p: int = DEFAULT_DIGITS, jobs: int = 1,
                          adaptive: bool = True) -> list[tuple[mpf, mpf]]:
    """Samples (t, xi(1/2 + it)) on [t0, t1].

    Where |value| falls below 1e-3 of the median of its neighbourhood the
    step is halved locally (twice), so close zero pairs are less likely missed.
    """
    if not (0 < t0 < t1) or step <= 0:
        raise ValueError("need 0 < t0 < t1 and step > 0")
    with working(p):
        samples = _evaluate_many(K, T, _grid(t0, t1, step), p, jobs)
        if not adaptive:
            return samples
        for _ in range(2):
            extra = []
            mags = [abs(v) for _, v in samples]
            for i in range(len(samples) - 1):
                window = mags[max(0, i - 3): i + 5]
                med = statistics.median(window)
                if min(mags[i], mags[i + 1]) < med / 1000:
                    extra.append((samples[i][0] + samples[i + 1][0]) / 2)
            if not extra:
                break
            samples = sorted(samples + _evaluate_many(K, T, extra, p, jobs), key=lambda tv: tv[0])
        return samples


# ---------------------------------------------------------------- refinement

def _illinois(fn: Callable[[mpf], mpf], a, fa, b, fb, tol) -> tuple[mpf, mpf]:
    """Illinois regula falsi, closing the bracket to width <= tol; returns (root, width)."""
    side = 0
    for _ in range(400):
        if abs(b - a) <= tol:
            break
        c = b - fb * (b - a) / (fb - fa)
        # keep c strictly inside, fall back to bisection when the step degenerates
        if not (min(a, b) < c < max(a, b)):
            c = (a + b) / 2
        fc = fn(c)
        if fc == 0:
            return _close(fn, c, tol)
        if (fc > 0) == (fb > 0):
            b, fb = c, fc
            if side == -1:
                fa /= 2
            side = -1
        else:
            a, fa = b, fb
            b, fb = c, fc
            if side == 1:
                fa /= 2
            side = 1
        # once converged to the estimate, probe tol/2 around it to close the bracket
        if abs(b - a) > tol and abs(fc) < abs(fa) * mpf(10) ** -6:
            lo, hi = c - tol / 4, c + tol / 4
            flo, fhi = fn(lo), fn(hi)
            if (flo > 0) != (fhi > 0):
                return (lo + hi) / 2, hi - lo
    return (a + b) / 2, abs(b - a)


def _close(fn, c, tol):
    return c, mpf(0)


def bracket_and_refine(samples: Sequence[tuple], fn: Callable[[mpf], mpf],
                       tol=REFINE_TOL) -> list[tuple[mpf, mpf]]:
    """Refine every sign change between consecutive samples to a bracket of width <= tol."""
    out = []
    for (ta, fa), (tb, fb) in zip(samples, samples[1:]):
        if fa == 0:
            out.append((mpf(ta), mpf(0)))
            continue
        if fb != 0 and (fa > 0) != (fb > 0):
            out.append(_illinois(fn, mpf(ta), mpf(fa), mpf(tb), mpf(fb), mpf(tol)))
    if samples and samples[-1][1] == 0:
        out.append((mpf(samples[-1][0]), mpf(0)))
    return out


def _min_modulus_candidates(samples, fn, tol, scale_tol) -> list[tuple[mpf, mpf]]:
    """Local minima of |f| without a sign change that golden-section search drives to ~0."""
    found = []
    for i in range(1, len(samples) - 1):
        (ta, fa), (tm, fm), (tb, fb) = samples[i - 1], samples[i], samples[i + 1]
        if (fa > 0) != (fb > 0) or (fa > 0) != (fm > 0):
            continue
        if not (abs(fm) < abs(fa) and abs(fm) < abs(fb)):
            continue
        lo, hi = ta, tb
        g = (mp.sqrt(5) - 1) / 2
        x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
        f1, f2 = abs(fn(x1)), abs(fn(x2))
        while hi - lo > tol:
            if f1 < f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - g * (hi - lo)
                f1 = abs(fn(x1))
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + g * (hi - lo)
                f2 = abs(fn(x2))
        if min(f1, f2) <= scale_tol * max(abs(fa), abs(fb)):
            found.append(((lo + hi) / 2, hi - lo))
    return found


# ------------------------------------------------------------ argument principle

def _phase_along(fn, z0: mpc, z1: mpc, p: int, spacing=0.1,
                 max_depth: int = 40) -> mpf:
    """Continuous change of arg f along the segment z0 -> z1.

    Subdivides until each step changes the phase by less than pi/4 and the
    midpoint agrees with the endpoints' increment.
    """
    def arg_step(fa, fb):
        return mp.arg(fb / fa)

    total = mpf(0)
    initial = max(8, math.ceil(float(abs(z1 - z0)) / spacing))
    nodes = [z0 + (z1 - z0) * mpf(j) / initial for j in range(initial + 1)]
    values = [fn(z, p) for z in nodes]
    for v, z in zip(values, nodes):
        if v == 0:
            raise BoundaryTooCloseToZero(f"zero on the contour at {z}")
    stack = list(reversed(list(zip(nodes, values, nodes[1:], values[1:], [0] * initial))))
    limit = mpf(math.pi) / 4
    while stack:
        za, fa, zb, fb, depth = stack.pop()
        d = arg_step(fa, fb)
        zm = (za + zb) / 2
        if abs(d) < limit:
            fm = fn(zm, p)
            if fm == 0:
                raise BoundaryTooCloseToZero(f"zero on the contour at {zm}")
            if abs(arg_step(fa, fm) + arg_step(fm, fb) - d) < mpf("1e-6"):
                total += d
                continue
        else:
            fm = fn(zm, p)
        if depth >= max_depth:
            raise BoundaryTooCloseToZero(f"phase does not settle near {zm}")
        stack.append((zm, fm, zb, fb, depth + 1))
        stack.append((za, fa, zm, fm, depth + 1))
    return total


def _poles_inside(rect) -> int:
    s0, s1, t0, t1 = rect
    return sum(1 for pole in (0, 1) if s0 < pole < s1 and t0 < 0 < t1)


def winding_number(fn, rect, p: int = DEFAULT_DIGITS) -> int:
    """(1/2 pi) * total phase change of fn around the rectangle boundary (counter-clockwise)."""
    s0, s1, t0, t1 = (mpf(x) for x in rect)
    corners = [mpc(s0, t0), mpc(s1, t0), mpc(s1, t1), mpc(s0, t1)]
    with working(p):
        total = mpf(0)
        for a, b in zip(corners, corners[1:] + corners[:1]):
            total += _phase_along(fn, a, b, p)
        turns = total / (2 * mp.pi)
        n = int(mp.nint(turns))
        if abs(turns - n) > mpf("1e-3"):
            raise BoundaryTooCloseToZero(f"winding {turns} is not an integer")
        return n


def count_zeros_rectangle(K: FieldDescriptor = Q, T=None, rect=(0.4, 0.6, 1, 2),
                          p: int = DEFAULT_DIGITS, nudges: int = 5) -> int:
    """Zeros of xi_{K,2} (or xi^T) inside the rectangle: winding number plus poles inside.

    Retries with the rectangle shifted by up to 1e-3 when a zero lies on the boundary.
    """
    fn = rank2_function(K, T)
    rect = tuple(mpf(x) for x in rect)
    for attempt in range(nudges + 1):
        shift = mpf("2e-4") * attempt
        moved = (rect[0] - shift, rect[1] + shift, rect[2] - shift, rect[3] + shift)
        try:
            return winding_number(fn, moved, p) + _poles_inside(moved)
        except BoundaryTooCloseToZero:
            continue
    raise BoundaryTooCloseToZero(f"rectangle {rect} could not be separated from zeros")


def _symmetric_winding(fn, sigma0, sigma1, t1, p: int) -> int:
    """Winding of a rectangle symmetric about the real axis via conjugate symmetry.

    The lower half of the boundary contributes the same phase as the upper
    half, so only the path sigma1 -> sigma1 + i t1 -> sigma0 + i t1 -> sigma0
    is traced (both real end points give real, nonzero values).
    """
    a, b = mpc(sigma1, 0), mpc(sigma1, t1)
    c, d = mpc(sigma0, t1), mpc(sigma0, 0)
    with working(p):
        half = _phase_along(fn, a, b, p) + _phase_along(fn, b, c, p) + _phase_along(fn, c, d, p)
        turns = 2 * half / (2 * mp.pi)
        n = int(mp.nint(turns))
        if abs(turns - n) > mpf("1e-3"):
            raise BoundaryTooCloseToZero(f"winding {turns} is not an integer")
        return n


# -------------------------------------------------------------- certification

def find_line_zeros(K: FieldDescriptor = Q, T=None, t1=30, p: int = DEFAULT_DIGITS,
                    step=DEFAULT_STEP, jobs: int = 1, tol=REFINE_TOL) -> list[tuple[mpf, mpf]]:
    """Sign-change zeros of xi(1/2 + it) for 0 < t <= t1."""
    fn = rank2_function(K, T)
    with working(p):
        samples = critical_line_samples(K, T, mpf(step) / 5, t1, step, p, jobs)
        line = lambda t: fn(mpc(HALF, t), p).real
        return bracket_and_refine(samples, line, tol)


def certify_box(K: FieldDescriptor = Q, T=None, t1=30, p: int = DEFAULT_DIGITS,
                sigma=(-1, 2), step=DEFAULT_STEP, jobs: int = 1, tol=REFINE_TOL) -> ZeroReport:
    """Certify that all zeros with |Im s| <= t1 in sigma0 < Re s < sigma1 lie on Re s = 1/2.

    The rectangle is [sigma0, sigma1] x [-t1, t1]; on-line zeros are listed
    at +-t.  Poles at 0 and 1 are inside, so pole_correction = 2.
    """
    if T is not None and mpf(T) < 1:
        note = ["T < 1: outside the proven range, outcome recorded only"]
    else:
        note = []
    fn = rank2_function(K, T)
    s0, s1 = mpf(sigma[0]), mpf(sigma[1])
    with working(p):
        t_top = mpf(t1)
        winding = None
        for attempt in range(6):
            try:
                winding = _symmetric_winding(fn, s0, s1, t_top, p)
                break
            except BoundaryTooCloseToZero:
                t_top = mpf(t1) + mpf("2e-4") * (attempt + 1)
        if winding is None:
            raise BoundaryTooCloseToZero(f"top edge at t = {t1} could not avoid zeros")
        poles = 2
        zeros = find_line_zeros(K, T, t_top, p, step, jobs, tol)
        expected = winding + poles
        if expected != 2 * len(zeros):
            note.append(f"mismatch at step {step}: contour {expected}, line {2 * len(zeros)}; rescanning")
            fine = critical_line_samples(K, T, mpf(step) / 50, t_top, mpf(step) / 10, p, jobs)
            line = lambda t: fn(mpc(HALF, t), p).real
            zeros = bracket_and_refine(fine, line, tol)
            doubles = _min_modulus_candidates(fine, line, tol, mpf(10) ** (GUARD_DIGITS + 8 - p))
            zeros = sorted(zeros + doubles + doubles, key=lambda z: z[0])
            if doubles:
                note.append(f"{len(doubles)} candidate double zero(s) from minimum-modulus search")
        listed = sorted([(-t, w) for t, w in zeros] + list(zeros), key=lambda z: z[0])
        widths_ok = all(w <= tol for _, w in listed)
        certified = (winding + poles == len(listed)) and widths_ok
        if not certified:
            note.append(f"discrepancy: contour {winding} + poles {poles} vs {len(listed)} line zeros")
        return ZeroReport(
            field=K.label,
            T=mp.nstr(mpf(T) if T is not None else mpf(1), 15),
            rect=(mp.nstr(s0, 15), mp.nstr(s1, 15), mp.nstr(-t_top, 25), mp.nstr(t_top, 25)),
            on_line_zeros=[(mp.nstr(t, p), mp.nstr(w, 5)) for t, w in listed],
            contour_count=winding,
            pole_correction=poles,
            certified=certified,
            digits=p,
            notes=note,
        )


# ------------------------------------------------------------------- output

def write_zero_csv(zeros: Sequence[tuple], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "width"])
        for t, width in zeros:
            w.writerow([t if isinstance(t, str) else mp.nstr(t, 30),
                        width if isinstance(width, str) else mp.nstr(width, 5)])


def report_json(report: ZeroReport) -> str:
    doc = {"schema": 1, "kind": "zero_report"}
    doc.update(report.to_dict())
    return json.dumps(doc, indent=2)
