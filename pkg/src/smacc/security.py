"""Security checks: one-time-pad discipline and an exact wiretap oracle.

The wiretapper sees only the broadcast payload bits.  Two independent
checks cover the security condition:

* structural_audit verifies the one-time-pad discipline on a concrete
  delivery: every payload XORed with a full-length key, every key id
  used exactly once.
* mutual_information_oracle treats the whole placement/delivery pipeline
  as a black box and measures I(broadcast; library) on a tiny instance by
  enumerating every key realization against every (or a sampled set of)
  library realizations.  All probabilities are exact rationals; the
  secure scheme must come out at exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .delivery import encode_deliver
from .errors import CaseMismatchError, ExactnessError, TooLargeError
from .placement import KeySet, place
from .system_model import Case, FileLibrary, SystemParams

MAX_ORACLE_STATES = 1 << 32


@dataclass(frozen=True)
class AuditReport:
    """Outcome of the one-time-pad audit; empty violations means pass."""

    passed: bool
    violations: tuple[str, ...]
    transmissions: int
    keys_used: int


def structural_audit(transmissions, keyset: KeySet) -> AuditReport:
    """Audit one delivery's key usage.

    Passes iff every transmission is padded by a key of exactly its
    payload length and every key in the keyset is used exactly once.
    Cache contents are not part of the wiretapper's view and are not
    inspected here.
    """
    violations: list[str] = []
    used: dict[int, list[int]] = {}
    for tx in transmissions:
        if tx.key_id == 0:
            violations.append(f"Unencrypted: transmission {tx.index} carries no key")
            continue
        used.setdefault(tx.key_id, []).append(tx.index)
        if tx.key_id > len(keyset):
            violations.append(f"UnknownKey: transmission {tx.index} cites key {tx.key_id}")
            continue
        key = keyset.key(tx.key_id)
        if key.size != tx.payload.size:
            violations.append(
                f"LengthMismatch: transmission {tx.index} has {tx.payload.size} payload bits "
                f"but key {tx.key_id} has {key.size}"
            )
    for key_id, indices in sorted(used.items()):
        if len(indices) > 1:
            violations.append(f"KeyReuse: key {key_id} used by transmissions {indices}")
    for key_id in range(1, len(keyset) + 1):
        if key_id not in used:
            violations.append(f"UnusedKey: key {key_id} never used")
    return AuditReport(
        passed=not violations,
        violations=tuple(violations),
        transmissions=len(tuple(transmissions)),
        keys_used=len(used),
    )


@dataclass(frozen=True)
class WiretapInstance:
    """A tiny scenario small enough for exhaustive key enumeration.

    file_mode 'exhaustive' enumerates every library realization;
    'sampled' draws sample_count seeded realizations.  Keys are always
    enumerated exhaustively.  keyed=False runs the insecure variant.
    """

    params: SystemParams
    demand: tuple[int, ...]
    file_mode: str = "sampled"
    sample_count: int = 128
    seed: int = 0
    keyed: bool = True

    def __post_init__(self):
        if self.file_mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown file_mode {self.file_mode!r}")

    @property
    def file_bits(self) -> int:
        return self.params.N * self.params.F

    @property
    def key_bits(self) -> int:
        return self.params.key_count * self.params.key_bits if self.keyed else 0

    @property
    def states(self) -> int:
        files = 2 ** self.file_bits if self.file_mode == "exhaustive" else self.sample_count
        return files * 2 ** self.key_bits


@dataclass(frozen=True)
class OracleResult:
    """Exact mutual information between broadcast and library.

    independent is True iff the broadcast's conditional distribution was
    identical for every library realization seen, which makes the mutual
    information exactly zero with no rounding involved.  When dependence
    exists, value carries the exact rational mutual information of the
    enumerated ensemble, or None if it is not a rational number of bits.
    """

    independent: bool
    value: Fraction | None
    file_bits: int
    key_bits: int
    states: int

    @property
    def positive(self) -> bool:
        return not self.independent


def _bits_of_int(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - b)) & 1 for b in range(width)], dtype=np.uint8)


def _keyset_from_int(params: SystemParams, realization: int) -> KeySet:
    count, width = params.key_count, params.key_bits
    keys = []
    for idx in range(count):
        chunk = (realization >> ((count - 1 - idx) * width)) & ((1 << width) - 1)
        keys.append(_bits_of_int(chunk, width))
    group_of = ()
    if params.case is Case.GROUPED:
        group_of = tuple((key_id - 1) % params.g + 1 for key_id in range(1, count + 1))
    return KeySet(keys=tuple(keys), parts=params.subkey_parts, group_of=group_of)


def _broadcast_bits(params: SystemParams, files: np.ndarray, keyset: KeySet | None,
                    demand: tuple[int, ...], keyed: bool) -> tuple[int, ...]:
    library = FileLibrary.from_bits(files)
    placed = place(params, library, rng_seed=0, keyset=keyset)
    delivered = encode_deliver(params, library, placed, demand, keyed=keyed)
    return tuple(int(b) for b in delivered.payload_bits())


def _library_realizations(inst: WiretapInstance):
    N, F = inst.params.N, inst.params.F
    if inst.file_mode == "exhaustive":
        total = inst.file_bits
        for w in range(2 ** total):
            yield _bits_of_int(w, total).reshape(N, F)
    else:
        rng = np.random.default_rng([inst.seed, 0x6F7261636C65])
        for _ in range(inst.sample_count):
            yield rng.integers(0, 2, (N, F), dtype=np.uint8)


def _exact_log2(value: Fraction) -> Fraction:
    """log2 of a rational that must be an exact power of two."""
    num, den = value.numerator, value.denominator
    if num < 1 or (num & (num - 1)) or (den & (den - 1)):
        raise ExactnessError(f"log2({value}) is irrational; cannot report an exact result")
    return Fraction(num.bit_length() - den.bit_length())


def mutual_information_oracle(inst: WiretapInstance) -> OracleResult:
    """Measure I(broadcast; library) over the instance's ensemble, exactly.

    Runs the real pipeline for every (library, key) state.  If the
    broadcast distribution is identical for all observed libraries the
    result is exactly zero; otherwise the exact positive value of the
    enumerated ensemble is computed from the joint counts.
    """
    if inst.states > MAX_ORACLE_STATES:
        raise TooLargeError(
            f"{inst.states} states exceed the {MAX_ORACLE_STATES} enumeration bound; "
            "shrink F, N, or the sample count"
        )
    params = inst.params
    key_realizations = range(2 ** inst.key_bits) if inst.keyed else (None,)

    joint: dict[bytes, dict[tuple[int, ...], int]] = {}
    for files in _library_realizations(inst):
        w_key = files.tobytes()
        conditional = joint.setdefault(w_key, {})
        for realization in key_realizations:
            keyset = _keyset_from_int(params, realization) if inst.keyed else None
            x = _broadcast_bits(params, files, keyset, inst.demand, inst.keyed)
            conditional[x] = conditional.get(x, 0) + 1

    conditionals = list(joint.values())

    def normalized(counts: dict) -> dict:
        w_total = sum(counts.values())
        return {x: Fraction(c, w_total) for x, c in counts.items()}

    first = normalized(conditionals[0])
    if all(normalized(c) == first for c in conditionals[1:]):
        return OracleResult(independent=True, value=Fraction(0),
                            file_bits=inst.file_bits, key_bits=inst.key_bits,
                            states=inst.states)

    # I = sum p(x,w) log2( p(x,w) / (p(x) p(w)) ) with exact counts.
    total = sum(sum(c.values()) for c in conditionals)
    marginal_x: dict[tuple[int, ...], int] = {}
    for conditional in conditionals:
        for x, c in conditional.items():
            marginal_x[x] = marginal_x.get(x, 0) + c
    value = Fraction(0)
    try:
        for conditional in conditionals:
            c_w = sum(conditional.values())
            for x, c in conditional.items():
                ratio = Fraction(c * total, marginal_x[x] * c_w)
                value += Fraction(c, total) * _exact_log2(ratio)
    except ExactnessError:
        value = None
    return OracleResult(independent=False, value=value,
                        file_bits=inst.file_bits, key_bits=inst.key_bits,
                        states=inst.states)


def entropy_accounting(params: SystemParams) -> tuple[Fraction, Fraction]:
    """(upper bound on H(broadcast), H(broadcast | library)) in bits.

    The broadcast is at most its payload size; given the library it still
    carries the full entropy of the one-time keys, which matches that
    size, so the pair certifies zero leakage for every keyed case.
    """
    K, L, F = params.K, params.L, params.F
    if params.case is Case.FULL_KEY:
        upper = Fraction(K * F)
    elif params.case in (Case.COPRIME, Case.GROUPED):
        upper = K * (1 - Fraction(params.i * L, K)) ** 2 * F
    else:
        raise CaseMismatchError("the keyless coded placement sends nothing to account for")
    given = Fraction(params.key_count * params.key_bits)
    if upper > given:
        raise AssertionError(f"key entropy {given} cannot cover broadcast entropy {upper}")
    return upper, given
