"""Completed Epstein zeta of a positive-definite quadratic form on Z^k.

For Q(v) = v^T G v with D = det G the theta inversion splits the Mellin
integral at lambda > 0:

    pi^-s Gamma(s) Z_Q(s)
        = sum' Gamma(s, pi lambda Q(v)) (pi Q(v))^-s
        + D^-1/2 sum' Gamma(k/2 - s, pi Q*(v)/lambda) (pi Q*(v))^(s - k/2)
        + D^-1/2 lambda^(s - k/2)/(s - k/2) - lambda^s / s,

Q* being the form of G^-1.  Both sums decay like exp(-pi lambda Q), so
truncating at pi lambda Q > X leaves an error of order exp(-X); X is chosen
from the working precision.  The right side is entire in s apart from the
two explicit poles, which gives the continuation for free.
"""

from __future__ import annotations

import math
from typing import Iterator, Sequence

from mpmath import mp, mpc, mpf

from .hpnum import DEFAULT_DIGITS, upper_incomplete_gamma, working


def _cholesky(gram: Sequence[Sequence[float]]) -> list[list[float]]:
    k = len(gram)
    low = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1):
            acc = float(gram[i][j]) - sum(low[i][m] * low[j][m] for m in range(j))
            if i == j:
                if acc <= 0:
                    raise ValueError("Gram matrix is not positive definite")
                low[i][i] = math.sqrt(acc)
            else:
                low[i][j] = acc / low[j][j]
    return low


def short_vectors(gram, bound: float) -> Iterator[tuple[int, ...]]:
    """Nonzero integer vectors with v^T G v <= bound, one of each pair +-v.

    Fincke-Pohst enumeration in float arithmetic with a small safety margin;
    callers recompute the exact form value at full precision.
    """
    k = len(gram)
    g = [[float(gram[i][j]) for j in range(k)] for i in range(k)]
    # q_ii and mu_ij from the LDL^T decomposition of G
    low = _cholesky(g)
    diag = [low[i][i] ** 2 for i in range(k)]
    mu = [[low[i][j] / low[j][j] if j < i else 0.0 for j in range(k)] for i in range(k)]
    limit = bound * (1 + 1e-9) + 1e-12
    v = [0] * k

    # Q(v) = sum_j diag[j] (v_j + sum_{i>j} mu[i][j] v_i)^2, enumerate from the last coordinate
    def rec(j: int, remaining: float):
        centre = -sum(mu[i][j] * v[i] for i in range(j + 1, k))
        radius = math.sqrt(max(remaining, 0.0) / diag[j])
        lo, hi = math.ceil(centre - radius - 1e-12), math.floor(centre + radius + 1e-12)
        for x in range(lo, hi + 1):
            v[j] = x
            rest = remaining - diag[j] * (x - centre) ** 2
            if rest < -1e-12 * (1 + bound):
                continue
            if j == 0:
                yield tuple(v)
            else:
                yield from rec(j - 1, rest)
        v[j] = 0

    for vec in rec(k - 1, limit):
        first = next((c for c in reversed(vec) if c), 0)
        if first > 0:
            yield vec


def form_value(gram, vec) -> mpf:
    k = len(vec)
    total = mpf(0)
    for i in range(k):
        if vec[i]:
            row = mpf(0)
            for j in range(k):
                if vec[j]:
                    row += gram[i][j] * vec[j]
            total += vec[i] * row
    return total


def _det_and_inverse(gram):
    m = mp.matrix([[mpf(x) for x in row] for row in gram])
    return mp.det(m), m ** -1


def _grouped_values(gram, bound: float) -> dict:
    """Multiset of exact form values (as keys) over short vectors, counting +-v once each."""
    values: dict = {}
    for vec in short_vectors(gram, bound):
        q = form_value(gram, vec)
        values[q] = values.get(q, 0) + 1
    return values


def completed_epstein(gram, s, p: int = DEFAULT_DIGITS, split: mpf | None = None) -> mpc:
    """pi^-s Gamma(s) sum'_{v in Z^k} Q(v)^-s for the Gram matrix ``gram``."""
    with working(p) as dps:
        s = mpc(s)
        gram = [[mpf(x) for x in row] for row in gram]
        k = len(gram)
        det, inv = _det_and_inverse(gram)
        dual = [[inv[i, j] for j in range(k)] for i in range(k)]
        lam = mpf(split) if split is not None else det ** (mpf(-1) / k)
        half_k = mpf(k) / 2
        # cutoff X in the exponent: exp(-X) X^|Re s| below 10^-dps
        cut = dps * math.log(10) + 5
        cut += (abs(float(s.real)) + k) * math.log(cut) + abs(float(s.imag)) * 0.0
        sqrt_det = mp.sqrt(det)
        total = mpc(0)
        for q, mult in _grouped_values(gram, cut / (math.pi * float(lam))).items():
            x = mp.pi * q
            total += 2 * mult * upper_incomplete_gamma(s, lam * x, p) * mp.power(x, -s)
        dual_total = mpc(0)
        for q, mult in _grouped_values(dual, cut * float(lam) / math.pi).items():
            x = mp.pi * q
            dual_total += 2 * mult * upper_incomplete_gamma(half_k - s, x / lam, p) * mp.power(x, s - half_k)
        total += dual_total / sqrt_det
        total += mp.power(lam, s - half_k) / ((s - half_k) * sqrt_det) - mp.power(lam, s) / s
        return +total


def epstein_zeta(gram, s, p: int = DEFAULT_DIGITS) -> mpc:
    """sum'_{v in Z^k} Q(v)^-s (continued analytically; poles at s = k/2 and none at 0)."""
    with working(p):
        s = mpc(s)
        return completed_epstein(gram, s, p) / (mp.power(mp.pi, -s) * mp.gamma(s))


def direct_epstein(gram, s, radius: int) -> mpc:
    """Brute-force box sum over max|v_i| <= radius (oracle for Re s > k/2)."""
    import itertools
    k = len(gram)
    gram = [[mpf(x) for x in row] for row in gram]
    s = mpc(s)
    total = mpc(0)
    for vec in itertools.product(range(-radius, radius + 1), repeat=k):
        if any(vec):
            total += mp.power(form_value(gram, vec), -s)
    return total
