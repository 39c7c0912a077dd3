"""Network parameters, derived quantities, memory accounting, file library.

The network has K caches and K users; user k reads the L caches
k, k+1, ..., k+L-1 (cyclic).  A scheme instance is pinned by (K, L, N, F)
plus the memory point: the all-keys point at M = 1, the uncoded-data
points indexed by i (split into the gcd(i, K) = 1 and != 1 cases because
their key placements differ), or the all-coded-data point at M = N/L.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DivisibilityError, ParamError

_FILE_STREAM = 0x66696C65  # distinct RNG stream tags so placements never
_KEY_STREAM = 0x6B657973   # collide with library generation


class Case(enum.Enum):
    """Which corner-point family a parameter set belongs to."""

    FULL_KEY = "full-key"          # M = 1: caches store only whole keys
    COPRIME = "coprime"            # uncoded data, gcd(i, K) = 1
    GROUPED = "grouped"            # uncoded data, g = gcd(i, K) != 1
    CODED_PLACEMENT = "coded-placement"  # M = N/L: coded data, no keys


@dataclass(frozen=True)
class SystemParams:
    """Validated parameters with all derived quantities filled in."""

    K: int
    L: int
    N: int
    F: int
    case: Case
    i: int | None = None
    g: int = 1
    k_tilde: int = 0
    i_tilde: int = 0

    @property
    def subfiles_per_file(self) -> int:
        if self.case is Case.COPRIME:
            return self.K
        if self.case is Case.GROUPED:
            return self.k_tilde
        if self.case is Case.CODED_PLACEMENT:
            return self.L
        return 1

    @property
    def subfile_bits(self) -> int:
        return self.F // self.subfiles_per_file

    @property
    def key_count(self) -> int:
        if self.case is Case.FULL_KEY:
            return self.K
        if self.case is Case.COPRIME:
            return (self.K - self.i * self.L) ** 2
        if self.case is Case.GROUPED:
            return self.g * self.batches
        return 0

    @property
    def key_bits(self) -> int:
        if self.case is Case.FULL_KEY:
            return self.F
        if self.case is Case.COPRIME:
            return self.F // self.K
        if self.case is Case.GROUPED:
            return self.F // self.k_tilde
        return 0

    @property
    def subkey_parts(self) -> int:
        """Sub-keys each key is split into before cache placement."""
        if self.case is Case.COPRIME:
            return self.L
        if self.case is Case.GROUPED:
            return self.L + 1
        return 1

    @property
    def subkey_bits(self) -> int:
        return self.key_bits // self.subkey_parts if self.key_bits else 0

    @property
    def batches(self) -> int:
        """Grouped case: rounds of g keys, one key per group per round."""
        if self.case is not Case.GROUPED:
            return 0
        return (self.k_tilde - self.i_tilde * self.L) ** 2

    @property
    def groups(self) -> int:
        return self.g if self.case is Case.GROUPED else 1

    def group_of_user(self, k: int) -> int:
        """Group of user k (1-based): users split into g runs of K/g."""
        return (k - 1) // self.k_tilde + 1


@dataclass(frozen=True)
class MemoryAccounting:
    """Per-cache memory in file units, split into data and key parts."""

    M: Fraction
    M_D: Fraction
    M_K: Fraction


@dataclass(frozen=True, eq=False)
class FileLibrary:
    """N files of F bits each, reproducible from a 64-bit seed."""

    files: np.ndarray  # shape (N, F), uint8 bits
    seed: int | None = None

    @property
    def N(self) -> int:
        return self.files.shape[0]

    @property
    def F(self) -> int:
        return self.files.shape[1]

    def file(self, n: int) -> np.ndarray:
        """File n, 1-based."""
        return self.files[n - 1]

    @classmethod
    def generate(cls, N: int, F: int, seed: int) -> "FileLibrary":
        bits = np.empty((N, F), dtype=np.uint8)
        for n in range(N):
            rng = np.random.default_rng([seed, _FILE_STREAM, n + 1])
            bits[n] = rng.integers(0, 2, F, dtype=np.uint8)
        return cls(files=bits, seed=seed)

    @classmethod
    def from_bits(cls, files) -> "FileLibrary":
        bits = np.atleast_2d(np.asarray(files, dtype=np.uint8))
        return cls(files=bits)


def key_stream_rng(seed: int, key_id: int) -> np.random.Generator:
    """Dedicated RNG stream for one key, independent of the file streams."""
    return np.random.default_rng([seed, _KEY_STREAM, key_id])


def validate_params(
    K: int,
    L: int,
    N: int,
    F: int,
    i: int | None = None,
    case: Case | str | None = None,
) -> SystemParams:
    """Check a raw parameter set and derive the case and split quantities.

    With i given the case is inferred from gcd(i, K); the keyless corner
    points at M = 1 and M = N/L have no i and must be requested explicitly
    via case.  Raises ParamError (or DivisibilityError) with the reason.
    """
    if isinstance(case, str):
        case = Case(case)
    if not (1 <= L < K):
        raise ParamError(f"need 1 <= L < K, got L={L}, K={K}")
    if N < K:
        raise ParamError(f"need N >= K files, got N={N}, K={K}")
    if F < 1:
        raise ParamError(f"need F >= 1, got F={F}")

    if case in (Case.FULL_KEY, Case.CODED_PLACEMENT):
        if i is not None:
            raise ParamError(f"case {case.value} does not take a placement parameter i")
        if case is Case.CODED_PLACEMENT and F % L:
            raise DivisibilityError(f"coded placement needs L | F, got F={F}, L={L}")
        return SystemParams(K=K, L=L, N=N, F=F, case=case)

    if i is None:
        raise ParamError("the uncoded-data memory points need the placement parameter i")
    if i < 1:
        raise ParamError(f"need i >= 1, got i={i}")
    if i * L > K:
        raise ParamError(f"need i*L <= K, got i*L={i * L} > K={K}")

    g = math.gcd(i, K)
    k_tilde, i_tilde = K // g, i // g
    inferred = Case.COPRIME if g == 1 else Case.GROUPED
    if case is not None and case is not inferred:
        raise ParamError(f"gcd(i={i}, K={K}) = {g} implies case {inferred.value}, not {case.value}")

    if inferred is Case.COPRIME:
        if F % (K * L):
            raise DivisibilityError(f"coprime case needs K*L | F, got F={F}, K*L={K * L}")
    else:
        if F % (k_tilde * (L + 1)):
            raise DivisibilityError(
                f"grouped case needs (K/g)*(L+1) | F, got F={F}, (K/g)*(L+1)={k_tilde * (L + 1)}"
            )
        if (k_tilde - i_tilde * L) > 0 and 2 * k_tilde < L + 1:
            raise ParamError(
                f"grouped key placement needs 2*K/g >= L+1, got 2*K/g={2 * k_tilde}, L+1={L + 1}"
            )
    return SystemParams(K=K, L=L, N=N, F=F, case=inferred, i=i, g=g, k_tilde=k_tilde, i_tilde=i_tilde)


def min_file_size(K: int, L: int, i: int | None = None, case: Case | str | None = None) -> int:
    """Smallest F >= 64 meeting the case's subpacketization requirement."""
    if isinstance(case, str):
        case = Case(case)
    if case is Case.FULL_KEY:
        unit = 1
    elif case is Case.CODED_PLACEMENT:
        unit = L
    else:
        if i is None:
            raise ParamError("need i to size the uncoded-data cases")
        g = math.gcd(i, K)
        unit = K * L if g == 1 else (K // g) * (L + 1)
    return unit * -(-64 // unit)


def accessible_caches(params: SystemParams, k: int) -> tuple[int, ...]:
    """The L cyclically consecutive cache indices user k reads, starting at k."""
    if not (1 <= k <= params.K):
        raise IndexError(f"user index {k} outside 1..{params.K}")
    return tuple((k - 1 + t) % params.K + 1 for t in range(params.L))


def memory_accounting(params: SystemParams) -> MemoryAccounting:
    """Exact per-cache memory (file units) for the parameter set's case."""
    K, L, N = params.K, params.L, params.N
    if params.case is Case.FULL_KEY:
        return MemoryAccounting(M=Fraction(1), M_D=Fraction(0), M_K=Fraction(1))
    if params.case is Case.CODED_PLACEMENT:
        m = Fraction(N, L)
        return MemoryAccounting(M=m, M_D=m, M_K=Fraction(0))

    i = params.i
    m_d = Fraction(i * N, K)
    shrink = (1 - Fraction(i * L, K)) ** 2
    if params.case is Case.COPRIME:
        m_k = Fraction(K, L) * shrink
    else:
        m_k = Fraction(2 * K, params.g * (L + 1)) * shrink
    return MemoryAccounting(M=m_d + m_k, M_D=m_d, M_K=m_k)


def min_secure_memory(K: int, N: int) -> Fraction:
    """Least per-cache memory (in files) any secure scheme needs: one file."""
    if N < K:
        raise ParamError(f"the bound requires N >= K, got N={N}, K={K}")
    return Fraction(1)


def validate_demand(params: SystemParams, demand) -> tuple[int, ...]:
    """Check a demand vector: K file indices, each in 1..N."""
    d = tuple(int(x) for x in demand)
    if len(d) != params.K:
        raise ParamError(f"demand vector has {len(d)} entries, expected K={params.K}")
    for k, dk in enumerate(d, start=1):
        if not (1 <= dk <= params.N):
            raise ParamError(f"demand d_{k}={dk} outside 1..{params.N}")
    return d
