"""Cache placement: data subfiles and key shares for every memory point.

Four placements exist, one per corner-point family:

* full-key: cache k stores one whole F-bit uniform key and no data.
* coprime (gcd(i, K) = 1): each file splits into K subfiles and cache k
  stores the i consecutive subfiles <(k-1)i+1>..<ki> of every file; the
  (K-iL)^2 keys of F/K bits each split into L sub-keys that are encoded
  with a K x L AIR matrix, cache k holding coded sub-key k of every key.
* grouped (g = gcd(i, K) != 1): the coprime data placement with K/g
  subfiles, which replicates data across caches k, k+K/g, ...; keys are
  generated in batches of g (one per user group), each split into L+1
  plain sub-keys laid out in a length-2K vector that is right-rotated by
  L-1 before being dealt out two sub-keys per cache.
* coded placement: each file splits into L subfiles encoded with a
  K x L AIR matrix; cache k stores coded subfile k of every file, and the
  L adjacent coded subfiles any user sees recover every file with no
  transmission at all.

Every quantity is bit-exact; cache payloads always total M*F bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .errors import CaseMismatchError
from .index_coding import mod1
from .system_model import Case, FileLibrary, SystemParams, key_stream_rng


@dataclass(frozen=True, eq=False)
class DataShare:
    """One data item in a cache: subfile `index` of file `file`, or the
    AIR-coded combination stored at column `index` when coded."""

    file: int
    index: int
    bits: np.ndarray
    coded: bool = False

    @property
    def label(self) -> str:
        return f"C[{self.file},{self.index}]" if self.coded else f"W[{self.file},{self.index}]"


@dataclass(frozen=True, eq=False)
class KeyShare:
    """One key item in a cache: sub-key `index` of key `key` (plain), the
    AIR-coded sub-key at column `index` (coded), or the whole key
    (index 0)."""

    key: int
    index: int
    bits: np.ndarray
    coded: bool = False

    @property
    def label(self) -> str:
        if self.index == 0:
            return f"K[{self.key}]"
        mark = "cK" if self.coded else "K"
        return f"{mark}[{self.key}]({self.index})"


@dataclass(frozen=True, eq=False)
class KeySet:
    """All one-time keys of a placement, in key-id order (1-based)."""

    keys: tuple[np.ndarray, ...]
    parts: int
    group_of: tuple[int, ...] = ()
    seed: int | None = None

    def key(self, key_id: int) -> np.ndarray:
        return self.keys[key_id - 1]

    def __len__(self) -> int:
        return len(self.keys)

    def subkeys(self, key_id: int) -> list[np.ndarray]:
        """Split a key into its equal `parts` sub-keys, first bits first."""
        return np.split(self.key(key_id), self.parts)


@dataclass(frozen=True, eq=False)
class CacheContents:
    """Per-cache item lists; index caches 1-based via the accessors."""

    data: tuple[tuple[DataShare, ...], ...]
    keys: tuple[tuple[KeyShare, ...], ...]

    def data_at(self, cache: int) -> tuple[DataShare, ...]:
        return self.data[cache - 1]

    def keys_at(self, cache: int) -> tuple[KeyShare, ...]:
        return self.keys[cache - 1]

    def bits_at(self, cache: int) -> int:
        return sum(int(s.bits.size) for s in self.data[cache - 1]) + sum(
            int(s.bits.size) for s in self.keys[cache - 1]
        )


@dataclass(frozen=True, eq=False)
class Placement:
    """Everything the server wrote in the placement phase."""

    params: SystemParams
    caches: CacheContents
    keyset: KeySet


def _generate_keys(params: SystemParams, seed: int) -> tuple[np.ndarray, ...]:
    return tuple(
        key_stream_rng(seed, key_id).integers(0, 2, params.key_bits, dtype=np.uint8)
        for key_id in range(1, params.key_count + 1)
    )


def place_full_keys(params: SystemParams, rng_seed: int) -> tuple[CacheContents, KeySet]:
    """M = 1 placement: cache k holds the whole F-bit key k, nothing else."""
    if params.case is not Case.FULL_KEY:
        raise CaseMismatchError(f"full-key placement called for case {params.case.value}")
    keys = _generate_keys(params, rng_seed)
    keyset = KeySet(keys=keys, parts=1, seed=rng_seed)
    cache_keys = tuple((KeyShare(key=k, index=0, bits=keys[k - 1]),) for k in range(1, params.K + 1))
    empty_data = tuple(() for _ in range(params.K))
    return CacheContents(data=empty_data, keys=cache_keys), keyset


def cached_subfile_indices(params: SystemParams, cache: int) -> tuple[int, ...]:
    """Subfile indices stored in a cache under uncoded data placement."""
    parts = params.subfiles_per_file
    step = params.i if params.case is Case.COPRIME else params.i_tilde
    return tuple(mod1((cache - 1) * step + r, parts) for r in range(1, step + 1))


def user_subfile_indices(params: SystemParams, k: int) -> tuple[int, ...]:
    """The i*L consecutive subfile indices user k can read from its caches."""
    parts = params.subfiles_per_file
    step = params.i if params.case is Case.COPRIME else params.i_tilde
    return tuple(mod1((k - 1) * step + r, parts) for r in range(1, step * params.L + 1))


def place_data_uncoded(params: SystemParams, library: FileLibrary) -> tuple[tuple[DataShare, ...], ...]:
    """Uncoded data payloads for the coprime and grouped cases."""
    if params.case not in (Case.COPRIME, Case.GROUPED):
        raise CaseMismatchError(f"uncoded data placement called for case {params.case.value}")
    parts = params.subfiles_per_file
    payloads = []
    for cache in range(1, params.K + 1):
        items = []
        for n in range(1, params.N + 1):
            pieces = np.split(library.file(n), parts)
            for idx in cached_subfile_indices(params, cache):
                items.append(DataShare(file=n, index=idx, bits=pieces[idx - 1]))
        payloads.append(tuple(items))
    return tuple(payloads)


def place_keys_coprime(params: SystemParams, rng_seed: int) -> tuple[tuple[tuple[KeyShare, ...], ...], KeySet]:
    """Key payloads for gcd(i, K) = 1: AIR-coded sub-keys, one per cache.

    Each of the (K-iL)^2 keys splits into L sub-keys; encoding them with
    the K x L AIR matrix gives one coded sub-key per cache, and any user's
    L adjacent coded sub-keys invert back to the whole key.
    """
    if params.case is not Case.COPRIME:
        raise CaseMismatchError(f"coprime key placement called for case {params.case.value}")
    keys = _generate_keys(params, rng_seed)
    keyset = KeySet(keys=keys, parts=params.L, seed=rng_seed)
    air = gf2.build_air(params.K, params.L).matrix
    payloads: list[list[KeyShare]] = [[] for _ in range(params.K)]
    for key_id in range(1, len(keys) + 1):
        subkeys = np.vstack(keyset.subkeys(key_id))
        coded = gf2.matmul(air, subkeys)
        for cache in range(1, params.K + 1):
            payloads[cache - 1].append(
                KeyShare(key=key_id, index=cache, bits=coded[cache - 1], coded=True)
            )
    return tuple(tuple(p) for p in payloads), keyset


def grouped_key_vector(params: SystemParams, batch: int) -> tuple[tuple[int, int], ...]:
    """Slot labels (key_id, part) of one batch's length-2K layout vector.

    Group j's segment lists parts <1>, <2>, ..., <2K/g> cyclically modulo
    L+1 of that group's key; the whole vector is then right-rotated by
    L-1 positions.
    """
    g, k_tilde, parts = params.g, params.k_tilde, params.subkey_parts
    vec = []
    for group in range(1, g + 1):
        key_id = (batch - 1) * g + group
        for t in range(1, 2 * k_tilde + 1):
            vec.append((key_id, mod1(t, parts)))
    shift = (params.L - 1) % len(vec)
    return tuple(vec[-shift:] + vec[:-shift]) if shift else tuple(vec)


def place_keys_grouped(params: SystemParams, rng_seed: int) -> tuple[tuple[tuple[KeyShare, ...], ...], KeySet]:
    """Key payloads for g = gcd(i, K) != 1: shifted plain sub-keys.

    Per batch, the g keys' L+1 sub-keys are laid out in the length-2K
    vector, rotated right by L-1, and dealt out two slots per cache, so
    every user's 2L accessible slots contain all L+1 sub-keys of its
    group's key.
    """
    if params.case is not Case.GROUPED:
        raise CaseMismatchError(f"grouped key placement called for case {params.case.value}")
    keys = _generate_keys(params, rng_seed)
    group_of = tuple((key_id - 1) % params.g + 1 for key_id in range(1, len(keys) + 1))
    keyset = KeySet(keys=keys, parts=params.subkey_parts, group_of=group_of, seed=rng_seed)
    payloads: list[list[KeyShare]] = [[] for _ in range(params.K)]
    for batch in range(1, params.batches + 1):
        vec = grouped_key_vector(params, batch)
        for cache in range(1, params.K + 1):
            for slot in (2 * (cache - 1), 2 * (cache - 1) + 1):
                key_id, part = vec[slot]
                bits = keyset.subkeys(key_id)[part - 1]
                payloads[cache - 1].append(KeyShare(key=key_id, index=part, bits=bits))
    return tuple(tuple(p) for p in payloads), keyset


def place_data_coded(params: SystemParams, library: FileLibrary) -> CacheContents:
    """M = N/L placement: cache k stores AIR-coded subfile k of every file."""
    if params.case is not Case.CODED_PLACEMENT:
        raise CaseMismatchError(f"coded data placement called for case {params.case.value}")
    air = gf2.build_air(params.K, params.L).matrix
    payloads: list[list[DataShare]] = [[] for _ in range(params.K)]
    for n in range(1, params.N + 1):
        pieces = np.vstack(np.split(library.file(n), params.L))
        coded = gf2.matmul(air, pieces)
        for cache in range(1, params.K + 1):
            payloads[cache - 1].append(
                DataShare(file=n, index=cache, bits=coded[cache - 1], coded=True)
            )
    empty_keys = tuple(() for _ in range(params.K))
    return CacheContents(data=tuple(tuple(p) for p in payloads), keys=empty_keys)


def place(params: SystemParams, library: FileLibrary, rng_seed: int = 0,
          keyset: KeySet | None = None) -> Placement:
    """Run the placement phase for the parameter set's case.

    An explicit keyset (with the right key count, length, and parts)
    substitutes for seeded key generation; the security oracle uses this
    to enumerate key realizations exactly.
    """
    if params.case is Case.FULL_KEY:
        caches, generated = place_full_keys(params, rng_seed)
        if keyset is not None:
            caches = CacheContents(
                data=caches.data,
                keys=tuple(
                    (KeyShare(key=k, index=0, bits=keyset.key(k)),)
                    for k in range(1, params.K + 1)
                ),
            )
        return Placement(params=params, caches=caches, keyset=keyset or generated)

    if params.case is Case.CODED_PLACEMENT:
        caches = place_data_coded(params, library)
        return Placement(params=params, caches=caches, keyset=KeySet(keys=(), parts=1))

    data = place_data_uncoded(params, library)
    if keyset is None:
        if params.case is Case.COPRIME:
            key_payloads, keyset = place_keys_coprime(params, rng_seed)
        else:
            key_payloads, keyset = place_keys_grouped(params, rng_seed)
    else:
        key_payloads = _key_payloads_from(params, keyset)
    caches = CacheContents(data=data, keys=key_payloads)
    return Placement(params=params, caches=caches, keyset=keyset)


def _key_payloads_from(params: SystemParams, keyset: KeySet) -> tuple[tuple[KeyShare, ...], ...]:
    """Rebuild per-cache key shares from explicitly supplied keys."""
    if params.case is Case.COPRIME:
        air = gf2.build_air(params.K, params.L).matrix
        payloads: list[list[KeyShare]] = [[] for _ in range(params.K)]
        for key_id in range(1, len(keyset) + 1):
            coded = gf2.matmul(air, np.vstack(keyset.subkeys(key_id)))
            for cache in range(1, params.K + 1):
                payloads[cache - 1].append(
                    KeyShare(key=key_id, index=cache, bits=coded[cache - 1], coded=True)
                )
        return tuple(tuple(p) for p in payloads)
    payloads = [[] for _ in range(params.K)]
    for batch in range(1, params.batches + 1):
        vec = grouped_key_vector(params, batch)
        for cache in range(1, params.K + 1):
            for slot in (2 * (cache - 1), 2 * (cache - 1) + 1):
                key_id, part = vec[slot]
                bits = keyset.subkeys(key_id)[part - 1]
                payloads[cache - 1].append(KeyShare(key=key_id, index=part, bits=bits))
    return tuple(tuple(p) for p in payloads)
