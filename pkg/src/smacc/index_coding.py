"""Single unicast index coding with symmetric, consecutive side information.

K receivers each want one of K equal-length messages.  Receiver k is
missing the U messages cyclically before its own and the D messages after
it; the remaining K-(U+D+1) consecutive messages are its side information.
Encoding all K messages with a K x (U+D+1) AIR matrix yields a codeword of
length U+D+1 from which every receiver can recover its message, because
its unknowns line up with an invertible window of adjacent matrix rows.

Indices are 1-based throughout, with cyclic wrap-around modulo K.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .errors import LengthMismatchError, ParamError, SideInfoError


def mod1(x: int, k: int) -> int:
    """Cyclic index in 1..k (the wrap-around convention used everywhere)."""
    return (x - 1) % k + 1


@dataclass(frozen=True, eq=False)
class SuicpInstance:
    """One index coding problem: K messages, each receiver missing the
    U previous and D next messages besides its own."""

    K: int
    U: int
    D: int
    messages: tuple[np.ndarray, ...]

    def __post_init__(self):
        code_length(self.K, self.U, self.D)
        if len(self.messages) != self.K:
            raise ParamError(f"expected {self.K} messages, got {len(self.messages)}")
        lengths = {msg.shape[-1] for msg in self.messages}
        if len(lengths) > 1:
            raise LengthMismatchError(f"unequal message lengths: {sorted(lengths)}")

    def unknown_positions(self, k: int) -> list[int]:
        """Positions receiver k cannot see: the cyclic window <k-U>..<k+D>."""
        return [mod1(k - self.U + t, self.K) for t in range(self.U + self.D + 1)]

    def side_info_positions(self, k: int) -> list[int]:
        """Positions in receiver k's side information: <k+D+1>..<k-U-1>."""
        return [mod1(k + self.D + 1 + t, self.K) for t in range(self.K - self.U - self.D - 1)]


def code_length(K: int, U: int, D: int) -> int:
    """Achievable index code length U + D + 1 symbols."""
    if K < 1 or U < 0 or D < 0:
        raise ParamError(f"need K >= 1 and U, D >= 0, got K={K}, U={U}, D={D}")
    if U + D >= K:
        raise ParamError(f"need U + D < K, got U={U}, D={D}, K={K}")
    return U + D + 1


def encode(inst: SuicpInstance) -> list[np.ndarray]:
    """Encode the K messages into U+D+1 coded symbols.

    Symbol c is the XOR of the messages whose AIR matrix row has a one in
    column c, i.e. the codeword is x A for A = build_air(K, U+D+1).
    """
    ell = code_length(inst.K, inst.U, inst.D)
    a = gf2.build_air(inst.K, ell).matrix
    stacked = np.vstack(inst.messages)
    coded = gf2.matmul(a.T, stacked)
    return [coded[c] for c in range(ell)]


def decode_receiver(
    codeword: list[np.ndarray],
    side_info: dict[int, np.ndarray],
    k: int,
    K: int,
    U: int,
    D: int,
) -> np.ndarray:
    """Recover message k from the codeword and the side information.

    side_info maps each position in <k+D+1>..<k-U-1> to its message.  The
    known messages' row contributions are stripped from the codeword and
    the remaining (U+D+1)-dimensional system on the cyclically adjacent
    unknown rows is solved; the window is invertible for an AIR matrix.
    """
    ell = code_length(K, U, D)
    if len(codeword) != ell:
        raise LengthMismatchError(f"codeword has {len(codeword)} symbols, expected {ell}")
    window = [mod1(k - U + t, K) for t in range(ell)]
    expected = {mod1(p, K) for p in range(1, K + 1)} - set(window)
    if set(side_info) != expected:
        raise SideInfoError(
            f"receiver {k} needs side info at positions {sorted(expected)}, "
            f"got {sorted(side_info)}"
        )

    a = gf2.build_air(K, ell).matrix
    residual = np.vstack(codeword).copy()
    for pos, msg in side_info.items():
        row = a[pos - 1]
        for c in range(ell):
            if row[c]:
                residual[c] ^= msg

    window_rows = a[[p - 1 for p in window]]
    unknowns = gf2.solve(window_rows.T, residual)
    return unknowns[U]
