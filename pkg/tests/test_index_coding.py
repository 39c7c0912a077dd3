"""Index coding with symmetric consecutive side information."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smacc import index_coding as ic
from smacc.errors import LengthMismatchError, ParamError, SideInfoError


def random_messages(K, bits, seed):
    rng = np.random.default_rng(seed)
    return tuple(rng.integers(0, 2, bits, dtype=np.uint8) for _ in range(K))


def make_side_info(inst, k):
    return {p: inst.messages[p - 1] for p in inst.side_info_positions(k)}


class TestCodeLength:
    def test_paper_values(self):
        assert ic.code_length(7, 1, 2) == 4

    def test_only_own_message_missing(self):
        assert ic.code_length(5, 0, 0) == 1

    def test_empty_side_information(self):
        assert ic.code_length(6, 2, 3) == 6

    def test_window_too_large(self):
        with pytest.raises(ParamError):
            ic.code_length(4, 2, 2)


class TestEncode:
    def test_all_xor_when_no_side_window(self):
        # U = D = 0: the matrix is the all-ones column
        msgs = random_messages(3, 8, seed=1)
        inst = ic.SuicpInstance(K=3, U=0, D=0, messages=msgs)
        coded = ic.encode(inst)
        assert len(coded) == 1
        assert np.array_equal(coded[0], msgs[0] ^ msgs[1] ^ msgs[2])

    def test_matches_matrix_product(self):
        # K=3, U=0, D=1 uses the 3x2 matrix [[1,0],[0,1],[1,1]]
        msgs = random_messages(3, 5, seed=2)
        inst = ic.SuicpInstance(K=3, U=0, D=1, messages=msgs)
        coded = ic.encode(inst)
        expected0 = msgs[0] ^ msgs[2]
        expected1 = msgs[1] ^ msgs[2]
        assert np.array_equal(coded[0], expected0)
        assert np.array_equal(coded[1], expected1)

    def test_zero_messages_encode_to_zero(self):
        msgs = tuple(np.zeros(4, dtype=np.uint8) for _ in range(5))
        inst = ic.SuicpInstance(K=5, U=1, D=1, messages=msgs)
        assert not np.concatenate(ic.encode(inst)).any()

    def test_codeword_length(self):
        inst = ic.SuicpInstance(K=7, U=1, D=2, messages=random_messages(7, 4, 0))
        assert len(ic.encode(inst)) == ic.code_length(7, 1, 2)

    def test_unequal_lengths_rejected(self):
        msgs = (np.zeros(3, dtype=np.uint8), np.zeros(4, dtype=np.uint8))
        with pytest.raises(LengthMismatchError):
            ic.SuicpInstance(K=2, U=0, D=0, messages=msgs)

    def test_linearity(self):
        a = random_messages(4, 6, seed=3)
        b = random_messages(4, 6, seed=4)
        xor = tuple(x ^ y for x, y in zip(a, b))
        enc = lambda msgs: ic.encode(ic.SuicpInstance(K=4, U=0, D=1, messages=msgs))
        for ca, cb, cx in zip(enc(a), enc(b), enc(xor)):
            assert np.array_equal(ca ^ cb, cx)


class TestDecodeReceiver:
    def test_xor_cancellation(self):
        msgs = random_messages(3, 4, seed=5)
        inst = ic.SuicpInstance(K=3, U=0, D=0, messages=msgs)
        coded = ic.encode(inst)
        got = ic.decode_receiver(coded, make_side_info(inst, 1), 1, 3, 0, 0)
        assert np.array_equal(got, msgs[0])

    def test_roundtrip_k5(self):
        # 50 random message sets at once: extra sets ride along as extra
        # bit columns, which the linear code handles identically
        msgs = random_messages(5, 50 * 4, seed=6)
        inst = ic.SuicpInstance(K=5, U=1, D=2, messages=msgs)
        coded = ic.encode(inst)
        for k in range(1, 6):
            got = ic.decode_receiver(coded, make_side_info(inst, k), k, 5, 1, 2)
            assert np.array_equal(got, msgs[k - 1])

    def test_zero_messages_decode_to_zero(self):
        msgs = tuple(np.zeros(6, dtype=np.uint8) for _ in range(4))
        inst = ic.SuicpInstance(K=4, U=1, D=0, messages=msgs)
        coded = ic.encode(inst)
        for k in range(1, 5):
            assert not ic.decode_receiver(coded, make_side_info(inst, k), k, 4, 1, 0).any()

    def test_side_info_mismatch(self):
        msgs = random_messages(5, 4, seed=7)
        inst = ic.SuicpInstance(K=5, U=1, D=1, messages=msgs)
        coded = ic.encode(inst)
        good = make_side_info(inst, 2)
        bad = dict(list(good.items())[:-1])
        with pytest.raises(SideInfoError):
            ic.decode_receiver(coded, bad, 2, 5, 1, 1)

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_property(self, data):
        K = data.draw(st.integers(2, 10))
        U = data.draw(st.integers(0, K - 1))
        D = data.draw(st.integers(0, K - 1 - U))
        seed = data.draw(st.integers(0, 2**30))
        msgs = random_messages(K, 50 * 3, seed)
        inst = ic.SuicpInstance(K=K, U=U, D=D, messages=msgs)
        coded = ic.encode(inst)
        assert len(coded) == U + D + 1
        for k in range(1, K + 1):
            got = ic.decode_receiver(coded, make_side_info(inst, k), k, K, U, D)
            assert np.array_equal(got, msgs[k - 1])


def test_full_grid_roundtrip():
    # every (U, D) for every K <= 10, multiple message sets per config
    for K in range(2, 11):
        for U in range(K):
            for D in range(K - U):
                msgs = random_messages(K, 50 * 2, seed=K * 1000 + U * 50 + D)
                inst = ic.SuicpInstance(K=K, U=U, D=D, messages=msgs)
                coded = ic.encode(inst)
                for k in range(1, K + 1):
                    got = ic.decode_receiver(coded, make_side_info(inst, k), k, K, U, D)
                    assert np.array_equal(got, msgs[k - 1]), (K, U, D, k)
