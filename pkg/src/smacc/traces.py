"""CSV trace writers for placements, deliveries, curves, and reports.

All rationals are written as exact numerator/denominator columns with a
6-decimal rendering alongside.  Payload bits are hex-packed big-endian:
the first payload bit is the most significant bit of the first byte,
zero-padded at the tail.  Every writer produces byte-identical output
for identical inputs.
"""

from __future__ import annotations

import csv
from fractions import Fraction

import numpy as np

from .placement import Placement
from .delivery import Delivery
from .tradeoff import GapEvaluation, RateCurve


def payload_hex(bits: np.ndarray) -> str:
    """Hex rendering of a bit vector, first bit = MSB of the first byte."""
    if bits.size == 0:
        return ""
    return np.packbits(bits, bitorder="big").tobytes().hex()


def _dec(value: Fraction) -> str:
    return f"{float(value):.6f}"


def write_placement_manifest(path, placement: Placement) -> None:
    """Rows: (cache_id, item_kind, item_id, bit_length, offset)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cache_id", "item_kind", "item_id", "bit_length", "offset"])
        for cache in range(1, placement.params.K + 1):
            offset = 0
            for share in placement.caches.data_at(cache):
                kind = "coded_subfile" if share.coded else "subfile"
                w.writerow([cache, kind, share.label, share.bits.size, offset])
                offset += int(share.bits.size)
            for share in placement.caches.keys_at(cache):
                if share.index == 0:
                    kind = "key"
                elif share.coded:
                    kind = "coded_subkey"
                else:
                    kind = "subkey"
                w.writerow([cache, kind, share.label, share.bits.size, offset])
                offset += int(share.bits.size)


def write_delivery_trace(path, delivery: Delivery) -> None:
    """Rows: (tx_index, group, row_j, air_column, key_id, bit_length, payload_hex)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["tx_index", "group", "row_j", "air_column", "key_id", "bit_length", "payload_hex"])
        for tx in delivery.transmissions:
            w.writerow([tx.index, tx.group, tx.row, tx.column, tx.key_id,
                        tx.payload.size, payload_hex(tx.payload)])


def write_curves(path, K: int, L: int, N: int,
                 curves: dict[str, RateCurve], samples_per_curve: int = 65) -> None:
    """Rows: (k, l, n, scheme, m_num, m_den, m, r_num, r_den, r, corner_flag).

    Each scheme contributes its corner vertices plus evenly spaced
    envelope samples across its memory span.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "l", "n", "scheme", "m_num", "m_den", "m",
                    "r_num", "r_den", "r", "corner_flag"])
        for scheme in sorted(curves):
            curve = curves[scheme]
            rows = []
            for m, r in curve.vertices:
                rows.append((m, r, 1))
            lo, hi = curve.min_memory, curve.max_memory
            for s in range(samples_per_curve):
                m = lo + (hi - lo) * Fraction(s, samples_per_curve - 1)
                if any(m == v[0] for v in curve.vertices):
                    continue
                rows.append((m, curve.rate_at(m), 0))
            for m, r, corner in sorted(rows):
                w.writerow([K, L, N, scheme, m.numerator, m.denominator, _dec(m),
                            r.numerator, r.denominator, _dec(r), corner])


def write_gap_report(path, evaluation: GapEvaluation) -> None:
    """Rows: (k, l, n, m_num, m_den, m, ratio_num, ratio_den, ratio, bound, pass)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "l", "n", "m_num", "m_den", "m",
                    "ratio_num", "ratio_den", "ratio", "bound", "pass"])
        for s in evaluation.samples:
            w.writerow([evaluation.K, evaluation.L, evaluation.N,
                        s.M.numerator, s.M.denominator, _dec(s.M),
                        s.ratio.numerator, s.ratio.denominator, _dec(s.ratio),
                        evaluation.bound, int(s.ok)])


def write_security_report(path, rows) -> None:
    """Rows: (instance_id, file_bits, key_bits, mi_num, mi_den, verdict).

    A row's num/den cells are blank when the enumerated ensemble's mutual
    information is provably positive but not a rational number of bits.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["instance_id", "file_bits", "key_bits",
                    "mutual_information_num", "mutual_information_den", "verdict"])
        for instance_id, result, verdict in rows:
            num = result.value.numerator if result.value is not None else ""
            den = result.value.denominator if result.value is not None else ""
            w.writerow([instance_id, result.file_bits, result.key_bits, num, den, verdict])
