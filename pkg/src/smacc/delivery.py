"""Delivery phase: build the encrypted broadcast and decode it per user.

For the uncoded-data placements, each user still needs the K - iL
subfiles of its demanded file that none of its caches hold.  Arranging
those needs in a table (row j, user k -> subfile <i(L+k-1)+j>) makes each
row, after a permutation that sorts entries by subfile index, an index
coding round with symmetric consecutive side information: the row-j
receiver window has U = j-1 unknowns before its wanted position and
D = K-iL-j after.  Every row is AIR-encoded into K-iL symbols and each
symbol is XORed with a fresh one-time key before broadcast.  The grouped
case runs the same machinery per group of K/g users with (K/g, i/g).

At M = 1 the broadcast is the K whole files, each under its own key; at
M = N/L there is nothing to send.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gf2
from .errors import CaseMismatchError, DecodeError, KeyExhaustedError, NotCoprimeError, ParamError
from .index_coding import decode_receiver, mod1
from .placement import Placement, user_subfile_indices
from .system_model import (
    Case,
    FileLibrary,
    SystemParams,
    accessible_caches,
    validate_demand,
)


@dataclass(frozen=True, eq=False)
class DemandTable:
    """Missing-subfile schedule: per group, entry [j-1][k-1] is the index
    of the subfile of its demanded file that the group's k-th user still
    needs in round j."""

    rows: int
    entries: tuple[np.ndarray, ...]  # one (rows x group-size) array per group

    def group(self, g: int) -> np.ndarray:
        return self.entries[g - 1]


@dataclass(frozen=True, eq=False)
class Transmission:
    """One broadcast symbol: coded subfile payload XOR one-time key."""

    index: int
    group: int     # 0 when the case has no groups
    row: int       # demand-table row j; 0 for the full-key case
    column: int    # AIR column c; the user index for the full-key case
    key_id: int    # 0 for the unkeyed (insecure) variant
    payload: np.ndarray


@dataclass(frozen=True, eq=False)
class Delivery:
    """The broadcast plus its public header (demand vector, sizes)."""

    params: SystemParams
    demand: tuple[int, ...]
    transmissions: tuple[Transmission, ...]
    keyed: bool = True

    def payload_bits(self) -> np.ndarray:
        """All payload bits in broadcast order (the wiretapper's view)."""
        if not self.transmissions:
            return np.zeros(0, dtype=np.uint8)
        return np.concatenate([t.payload for t in self.transmissions])


def effective_group_params(params: SystemParams) -> tuple[int, int]:
    """(K, i) of one group's subproblem: (K, i) itself when coprime."""
    if params.case is Case.COPRIME:
        return params.K, params.i
    if params.case is Case.GROUPED:
        return params.k_tilde, params.i_tilde
    raise CaseMismatchError(f"no demand table for case {params.case.value}")


def build_demand_table(params: SystemParams, demand) -> DemandTable:
    """Subfile indices every user still needs, per group and round."""
    d = validate_demand(params, demand)
    k_eff, i_eff = effective_group_params(params)
    rows = k_eff - i_eff * params.L
    entries = []
    for g in range(params.groups):
        table = np.zeros((rows, k_eff), dtype=np.int64)
        for j in range(1, rows + 1):
            for k in range(1, k_eff + 1):
                table[j - 1, k - 1] = mod1(i_eff * (params.L + k - 1) + j, k_eff)
        entries.append(table)
    return DemandTable(rows=rows, entries=tuple(entries))


def row_permutation(k_eff: int, i_eff: int, L: int, j: int) -> tuple[int, ...]:
    """User order that sorts row j by subfile index.

    Returns (j_1, ..., j_K): position p belongs to the unique user j_p
    with <i(j_p + L - 1) + j> = p, so after reordering, position p of the
    row holds subfile p of user j_p's demanded file.
    """
    if np.gcd(i_eff, k_eff) != 1:
        raise NotCoprimeError(f"row permutation needs gcd(i, K) = 1, got i={i_eff}, K={k_eff}")
    inv = pow(i_eff, -1, k_eff)
    return tuple(mod1(inv * (p - j) - (L - 1), k_eff) for p in range(1, k_eff + 1))


def permute_row(params: SystemParams, j: int, row_payloads: list[np.ndarray]) -> list[np.ndarray]:
    """Reorder one demand-table row's subfile payloads by subfile index.

    row_payloads[k-1] is the group's k-th user's needed subfile in round
    j; the result places user j_p's payload at position p.
    """
    k_eff, i_eff = effective_group_params(params)
    if len(row_payloads) != k_eff:
        raise ParamError(f"row has {len(row_payloads)} entries, expected {k_eff}")
    perm = row_permutation(k_eff, i_eff, params.L, j)
    return [row_payloads[user - 1] for user in perm]


def _subfile(library: FileLibrary, params: SystemParams, n: int, index: int) -> np.ndarray:
    pieces = np.split(library.file(n), params.subfiles_per_file)
    return pieces[index - 1]


def _coded_row_symbols(params: SystemParams, library: FileLibrary,
                       demand: tuple[int, ...], group: int, j: int,
                       table: DemandTable) -> list[np.ndarray]:
    """AIR-encode the permuted row j of one group's demand table."""
    k_eff, _ = effective_group_params(params)
    rows = table.rows
    base = (group - 1) * k_eff if params.case is Case.GROUPED else 0
    payloads = []
    for k in range(1, k_eff + 1):
        idx = int(table.group(group if params.case is Case.GROUPED else 1)[j - 1, k - 1])
        payloads.append(_subfile(library, params, demand[base + k - 1], idx))
    permuted = permute_row(params, j, payloads)
    air = gf2.build_air(k_eff, rows).matrix
    coded = gf2.matmul(air.T, np.vstack(permuted))
    return [coded[c] for c in range(rows)]


def encode_deliver(params: SystemParams, library: FileLibrary, placement: Placement,
                   demand, keyed: bool = True) -> Delivery:
    """Build the broadcast for a demand vector.

    keyed=False produces the insecure variant (no key XOR), used only as
    the baseline for the security oracle.
    """
    d = validate_demand(params, demand)
    keyset = placement.keyset
    transmissions: list[Transmission] = []

    def key_bits(key_id: int, length: int) -> np.ndarray:
        if not keyed:
            return np.zeros(length, dtype=np.uint8)
        if key_id > len(keyset):
            raise KeyExhaustedError(f"key {key_id} requested but only {len(keyset)} exist")
        bits = keyset.key(key_id)
        if bits.size != length:
            raise KeyExhaustedError(f"key {key_id} has {bits.size} bits, payload needs {length}")
        return bits

    if params.case is Case.FULL_KEY:
        for k in range(1, params.K + 1):
            payload = library.file(d[k - 1]) ^ key_bits(k, params.F)
            transmissions.append(Transmission(
                index=len(transmissions) + 1, group=0, row=0, column=k,
                key_id=k if keyed else 0, payload=payload,
            ))
        return Delivery(params=params, demand=d, transmissions=tuple(transmissions), keyed=keyed)

    if params.case is Case.CODED_PLACEMENT:
        return Delivery(params=params, demand=d, transmissions=(), keyed=keyed)

    table = build_demand_table(params, d)
    rows = table.rows
    k_eff, _ = effective_group_params(params)
    for group in range(1, params.groups + 1):
        for j in range(1, rows + 1):
            symbols = _coded_row_symbols(params, library, d, group, j, table)
            for c in range(1, rows + 1):
                batch = (j - 1) * rows + c
                if params.case is Case.GROUPED:
                    key_id = (batch - 1) * params.g + group
                    tx_group = group
                else:
                    key_id = batch
                    tx_group = 0
                payload = symbols[c - 1] ^ key_bits(key_id, params.subfile_bits)
                transmissions.append(Transmission(
                    index=len(transmissions) + 1, group=tx_group, row=j, column=c,
                    key_id=key_id if keyed else 0, payload=payload,
                ))
    return Delivery(params=params, demand=d, transmissions=tuple(transmissions), keyed=keyed)


def _accessible_data(placement: Placement, k: int) -> dict[tuple[int, int], np.ndarray]:
    """(file, index) -> bits over everything user k's caches store."""
    found: dict[tuple[int, int], np.ndarray] = {}
    for cache in accessible_caches(placement.params, k):
        for share in placement.caches.data_at(cache):
            found[(share.file, share.index)] = share.bits
    return found


def reconstruct_keys(placement: Placement, k: int) -> dict[int, np.ndarray]:
    """Rebuild every key user k is entitled to from its caches alone.

    Coprime: solve the L adjacent AIR rows against the L coded sub-keys.
    Grouped: collect the L+1 plain sub-keys of each of the group's keys.
    Full-key: the whole keys stored in the accessible caches.
    """
    params = placement.params
    caches = accessible_caches(params, k)

    if params.case is Case.FULL_KEY:
        return {
            share.key: share.bits
            for cache in caches
            for share in placement.caches.keys_at(cache)
        }

    if params.case is Case.COPRIME:
        air = gf2.build_air(params.K, params.L).matrix
        window = air[[c - 1 for c in caches]]
        coded: dict[int, dict[int, np.ndarray]] = {}
        for cache in caches:
            for share in placement.caches.keys_at(cache):
                coded.setdefault(share.key, {})[share.index] = share.bits
        key_ids = sorted(coded)
        rows = []
        for cache in caches:
            row = []
            for key_id in key_ids:
                if cache not in coded[key_id]:
                    raise DecodeError(f"user {k} lacks coded sub-key {cache} of key {key_id}")
                row.append(coded[key_id][cache])
            rows.append(np.concatenate(row) if row else np.zeros(0, dtype=np.uint8))
        if not key_ids:
            return {}
        # one elimination recovers the sub-keys of every key at once
        subkeys = gf2.solve(window, np.vstack(rows))
        width = params.subkey_bits
        keys = {}
        for pos, key_id in enumerate(key_ids):
            chunk = subkeys[:, pos * width:(pos + 1) * width]
            keys[key_id] = chunk.reshape(-1)
        return keys

    if params.case is Case.GROUPED:
        group = params.group_of_user(k)
        wanted = {
            key_id for key_id in range(1, params.key_count + 1)
            if placement.keyset.group_of[key_id - 1] == group
        }
        parts: dict[int, dict[int, np.ndarray]] = {}
        for cache in caches:
            for share in placement.caches.keys_at(cache):
                if share.key in wanted:
                    parts.setdefault(share.key, {})[share.index] = share.bits
        keys = {}
        for key_id in sorted(wanted):
            have = parts.get(key_id, {})
            missing = [t for t in range(1, params.subkey_parts + 1) if t not in have]
            if missing:
                raise DecodeError(f"user {k} lacks sub-keys {missing} of key {key_id}")
            keys[key_id] = np.concatenate([have[t] for t in range(1, params.subkey_parts + 1)])
        return keys

    return {}


def decode_all_files(params: SystemParams, placement: Placement, k: int) -> list[np.ndarray]:
    """Coded placement: user k rebuilds the entire library from its caches."""
    if params.case is not Case.CODED_PLACEMENT:
        raise CaseMismatchError(f"decode_all_files applies to coded placement, not {params.case.value}")
    caches = accessible_caches(params, k)
    air = gf2.build_air(params.K, params.L).matrix
    window_inv = gf2.inverse(air[[c - 1 for c in caches]])
    coded: dict[int, dict[int, np.ndarray]] = {}
    for cache in caches:
        for share in placement.caches.data_at(cache):
            coded.setdefault(share.file, {})[share.index] = share.bits
    files = []
    for n in range(1, params.N + 1):
        stacked = np.vstack([coded[n][c] for c in caches])
        files.append(np.concatenate(list(gf2.matmul(window_inv, stacked))))
    return files


def decode_user(params: SystemParams, placement: Placement, delivery: Delivery,
                k: int, d_k: int | None = None) -> np.ndarray:
    """Recover user k's demanded file, bit-exactly, from the broadcast and
    the caches user k can access (nothing else).

    The demand vector is public delivery metadata; d_k, when given, is
    checked against it.
    """
    if not (1 <= k <= params.K):
        raise ParamError(f"user index {k} outside 1..{params.K}")
    demand = delivery.demand
    if d_k is not None and demand[k - 1] != d_k:
        raise ParamError(f"demand mismatch: header says d_{k}={demand[k - 1]}, caller says {d_k}")
    d_k = demand[k - 1]

    if params.case is Case.CODED_PLACEMENT:
        return decode_all_files(params, placement, k)[d_k - 1]

    keys = reconstruct_keys(placement, k) if delivery.keyed else {}

    def strip(tx: Transmission) -> np.ndarray:
        if not delivery.keyed:
            return tx.payload
        if tx.key_id not in keys:
            raise DecodeError(f"user {k} cannot rebuild key {tx.key_id} for transmission {tx.index}")
        return tx.payload ^ keys[tx.key_id]

    if params.case is Case.FULL_KEY:
        for tx in delivery.transmissions:
            if tx.column == k:
                return strip(tx)
        raise DecodeError(f"no transmission addressed to user {k}")

    k_eff, i_eff = effective_group_params(params)
    group = params.group_of_user(k) if params.case is Case.GROUPED else 1
    local_k = mod1(k, k_eff)
    base = (group - 1) * k_eff if params.case is Case.GROUPED else 0
    rows = k_eff - i_eff * params.L

    cached = _accessible_data(placement, k)
    pieces: dict[int, np.ndarray] = {}
    for idx in set(user_subfile_indices(params, k)):
        pieces[idx] = cached[(d_k, idx)]

    tx_group = group if params.case is Case.GROUPED else 0
    by_slot = {(tx.row, tx.column): tx for tx in delivery.transmissions if tx.group == tx_group}
    for j in range(1, rows + 1):
        codeword = [strip(by_slot[(j, c)]) for c in range(1, rows + 1)]
        perm = row_permutation(k_eff, i_eff, params.L, j)
        target = mod1(i_eff * (params.L + local_k - 1) + j, k_eff)
        side_positions = _side_positions(target, j, rows, k_eff)
        side_info = {}
        for p in side_positions:
            owner = perm[p - 1]
            side_info[p] = cached[(demand[base + owner - 1], p)]
        decoded = decode_receiver(codeword, side_info, target, k_eff, j - 1, rows - j)
        pieces[target] = decoded

    parts = params.subfiles_per_file
    if set(pieces) != set(range(1, parts + 1)):
        raise DecodeError(f"user {k} assembled subfiles {sorted(pieces)} of {parts}")
    return np.concatenate([pieces[idx] for idx in range(1, parts + 1)])


def _side_positions(target: int, j: int, rows: int, k_eff: int) -> list[int]:
    """Positions the row-j receiver at `target` knows: everything outside
    the U = j-1 before / D = rows-j after window around its position."""
    window = {mod1(target - (j - 1) + t, k_eff) for t in range(rows)}
    return [p for p in range(1, k_eff + 1) if p not in window]


def measured_rate(transmissions, F: int) -> Fraction:
    """Broadcast size in file units: total payload bits / F, exact."""
    total = sum(int(tx.payload.size) for tx in transmissions)
    return Fraction(total, F)
