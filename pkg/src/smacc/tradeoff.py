"""Rate-memory tradeoff: corner points, envelopes, baseline, gap bounds.

All memory and rate values are exact rationals.  The securely achievable
corner points are (1, K), the uncoded-data family indexed by i, and
(N/L, 0); memory sharing makes their lower convex envelope achievable.
The insecure baseline is the corner-point formula R(iN/K) = K(1-iL/K)^2
of the keyless scheme, anchored at (0, K).  For L >= K/2 and N >= 2K the
secure-over-insecure rate ratio stays below 3 (N < 3K) or 2 (N >= 3K),
which, combined with the baseline being within factor 2 of optimal,
bounds the scheme's gap to the optimum by 6 or 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundViolatedError, ParamError


@dataclass(frozen=True)
class CornerPoint:
    """One securely achievable (memory, rate) pair."""

    M: Fraction
    rate: Fraction
    case: str
    i: int | None = None


@dataclass(frozen=True)
class RateCurve:
    """Piecewise-linear lower convex envelope of (M, R) points."""

    vertices: tuple[tuple[Fraction, Fraction], ...]

    @property
    def min_memory(self) -> Fraction:
        return self.vertices[0][0]

    @property
    def max_memory(self) -> Fraction:
        return self.vertices[-1][0]

    def rate_at(self, M) -> Fraction:
        """Envelope rate at memory M; flat beyond the last corner."""
        M = Fraction(M)
        if M < self.min_memory:
            raise ParamError(f"memory {M} below the curve's minimum {self.min_memory}")
        if M >= self.max_memory:
            return self.vertices[-1][1]
        for (m0, r0), (m1, r1) in zip(self.vertices, self.vertices[1:]):
            if m0 <= M <= m1:
                return r0 + (r1 - r0) * (M - m0) / (m1 - m0)
        raise AssertionError("unreachable: vertices are sorted")


def corner_points(K: int, L: int, N: int) -> list[CornerPoint]:
    """All securely achievable corner points for a (K, L, N) network."""
    if not (1 <= L < K):
        raise ParamError(f"need 1 <= L < K, got L={L}, K={K}")
    if N < K:
        raise ParamError(f"need N >= K, got N={N}, K={K}")
    points = [CornerPoint(M=Fraction(1), rate=Fraction(K), case="full-key")]
    for i in range(1, K // L + 1):
        g = math.gcd(i, K)
        shrink = (1 - Fraction(i * L, K)) ** 2
        key_mem = Fraction(K, L) * shrink if g == 1 else Fraction(2 * K, g * (L + 1)) * shrink
        points.append(CornerPoint(
            M=Fraction(i * N, K) + key_mem,
            rate=K * shrink,
            case="coprime" if g == 1 else "grouped",
            i=i,
        ))
    points.append(CornerPoint(M=Fraction(N, L), rate=Fraction(0), case="coded-placement"))
    return points


def envelope(points) -> RateCurve:
    """Lower convex envelope of (M, R) pairs or CornerPoints.

    Dominated points are dropped; the result is convex and non-increasing
    in memory (memory sharing between any two achievable points is
    achievable, and extra memory never hurts).
    """
    raw = []
    for p in points:
        if isinstance(p, CornerPoint):
            raw.append((Fraction(p.M), Fraction(p.rate)))
        else:
            m, r = p
            raw.append((Fraction(m), Fraction(r)))
    if not raw:
        raise ParamError("envelope needs at least one point")
    best: dict[Fraction, Fraction] = {}
    for m, r in raw:
        if m not in best or r < best[m]:
            best[m] = r
    pts = sorted(best.items())

    hull: list[tuple[Fraction, Fraction]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    # drop any trailing ascent: more memory at a worse rate is never on
    # the achievable envelope
    while len(hull) >= 2 and hull[-1][1] >= hull[-2][1]:
        hull.pop()
    return RateCurve(vertices=tuple(hull))


def insecure_corner_points(K: int, L: int, N: int) -> list[tuple[Fraction, Fraction]]:
    """Corner points of the keyless baseline scheme, anchored at (0, K)."""
    if not (1 <= L < K):
        raise ParamError(f"need 1 <= L < K, got L={L}, K={K}")
    if N < K:
        raise ParamError(f"need N >= K, got N={N}, K={K}")
    points = [(Fraction(0), Fraction(K))]
    i = 1
    while i * L < K:
        points.append((Fraction(i * N, K), K * (1 - Fraction(i * L, K)) ** 2))
        i += 1
    points.append((Fraction(i * N, K), Fraction(0)))  # coverage: iL >= K
    return points


def insecure_envelope(K: int, L: int, N: int) -> RateCurve:
    return envelope(insecure_corner_points(K, L, N))


def insecure_baseline(K: int, L: int, N: int, M) -> Fraction:
    """Baseline rate R(M) by memory sharing between the keyless corners."""
    return insecure_envelope(K, L, N).rate_at(M)


def secure_uncoded_corners(K: int, L: int, N: int) -> list[tuple[Fraction, Fraction]]:
    """Secure corners restricted to uncoded data placement, for L >= K/2.

    With L >= K/2 the i = 2 data placement already covers every subfile,
    so (2N/K, 0) is securely achievable without coded placement.
    """
    if 2 * L < K:
        raise ParamError(f"requires L >= K/2, got L={L}, K={K}")
    beta = (1 - Fraction(L, K)) ** 2
    return [
        (Fraction(1), Fraction(K)),
        (Fraction(N, K) + Fraction(K, L) * beta, K * beta),
        (Fraction(2 * N, K), Fraction(0)),
    ]


@dataclass(frozen=True)
class GapSample:
    M: Fraction
    secure_rate: Fraction
    baseline_rate: Fraction
    ratio: Fraction
    ok: bool


@dataclass(frozen=True)
class GapEvaluation:
    """Secure-over-baseline ratios on sampled memory points in [1, 2N/K]."""

    K: int
    L: int
    N: int
    beta: Fraction
    t: Fraction
    bound: int
    vs_optimal_bound: int
    samples: tuple[GapSample, ...]

    @property
    def passed(self) -> bool:
        return all(s.ok for s in self.samples)


def gap_check(K: int, L: int, N: int, M_samples) -> GapEvaluation:
    """Check the rate-ratio bound at each sampled memory point.

    Requires L >= K/2 and N >= 2K.  The ratio of the uncoded-placement
    secure envelope to the insecure baseline must stay within 3 when
    2K <= N < 3K and within 2 when N >= 3K; at M = 2N/K both rates are
    zero and the ratio is taken as 1.  The bound against the true optimum
    is twice that, conditional on the baseline's known factor-2
    optimality.  Raises BoundViolatedError on any failure, which would
    mean an implementation bug.
    """
    if 2 * L < K:
        raise ParamError(f"gap bound requires L >= K/2, got L={L}, K={K}")
    if N < 2 * K:
        raise ParamError(f"gap bound requires N >= 2K, got N={N}, K={K}")
    secure = envelope(secure_uncoded_corners(K, L, N))
    baseline = insecure_envelope(K, L, N)
    bound = 3 if N < 3 * K else 2
    samples = []
    for M in M_samples:
        M = Fraction(M)
        if not (1 <= M <= Fraction(2 * N, K)):
            raise ParamError(f"memory sample {M} outside [1, 2N/K]")
        rs, rb = secure.rate_at(M), baseline.rate_at(M)
        if rb == 0:
            ratio = Fraction(1) if rs == 0 else None
        else:
            ratio = rs / rb
        ok = ratio is not None and ratio <= bound
        samples.append(GapSample(M=M, secure_rate=rs, baseline_rate=rb,
                                 ratio=ratio if ratio is not None else Fraction(-1), ok=ok))
    evaluation = GapEvaluation(
        K=K, L=L, N=N,
        beta=(1 - Fraction(L, K)) ** 2,
        t=Fraction(N, K) - 1,
        bound=bound,
        vs_optimal_bound=2 * bound,
        samples=tuple(samples),
    )
    if not evaluation.passed:
        bad = [s for s in evaluation.samples if not s.ok][:3]
        raise BoundViolatedError(
            f"rate ratio exceeded {bound} at {[(str(s.M), str(s.ratio)) for s in bad]}; "
            "this indicates an implementation bug"
        )
    return evaluation
