"""Parameter validation, topology, and memory accounting."""

from fractions import Fraction

import numpy as np
import pytest

from smacc.errors import DivisibilityError, ParamError
from smacc.system_model import (
    Case,
    FileLibrary,
    accessible_caches,
    memory_accounting,
    min_file_size,
    min_secure_memory,
    validate_demand,
    validate_params,
)


class TestValidateParams:
    def test_grouped_derivation(self):
        p = validate_params(K=6, L=2, N=6, F=18, i=2)
        assert p.case is Case.GROUPED
        assert (p.g, p.k_tilde, p.i_tilde) == (2, 3, 1)
        assert p.subfiles_per_file == 3 and p.subfile_bits == 6
        assert p.key_count == 2 and p.key_bits == 6 and p.subkey_parts == 3

    def test_coprime_derivation(self):
        p = validate_params(K=3, L=2, N=3, F=6, i=1)
        assert p.case is Case.COPRIME and p.g == 1
        assert p.key_count == 1 and p.key_bits == 2 and p.subkey_parts == 2

    def test_coverage_exceeds_caches(self):
        with pytest.raises(ParamError, match="i\\*L"):
            validate_params(K=4, L=2, N=4, F=8, i=3)

    def test_too_few_files(self):
        with pytest.raises(ParamError, match="N >= K"):
            validate_params(K=4, L=2, N=3, F=8, i=1)

    def test_bad_access_degree(self):
        with pytest.raises(ParamError):
            validate_params(K=3, L=3, N=3, F=6, i=1)
        with pytest.raises(ParamError):
            validate_params(K=3, L=0, N=3, F=6, i=1)

    @pytest.mark.parametrize("k,l,i,f", [
        (3, 2, 1, 7),   # coprime needs K*L | F
        (6, 2, 2, 10),  # grouped needs (K/g)*(L+1) | F
    ])
    def test_divisibility(self, k, l, i, f):
        with pytest.raises(DivisibilityError):
            validate_params(K=k, L=l, N=k, F=f, i=i)

    def test_coded_placement_divisibility(self):
        with pytest.raises(DivisibilityError):
            validate_params(K=5, L=3, N=5, F=7, case=Case.CODED_PLACEMENT)

    def test_keyless_cases_take_no_i(self):
        with pytest.raises(ParamError):
            validate_params(K=4, L=2, N=4, F=8, i=1, case=Case.FULL_KEY)

    def test_uncoded_cases_need_i(self):
        with pytest.raises(ParamError):
            validate_params(K=4, L=2, N=4, F=8)

    def test_full_coverage_edge(self):
        # i*L = K: grouped bookkeeping with zero keys and zero rounds
        p = validate_params(K=4, L=2, N=4, F=6, i=2)
        assert p.case is Case.GROUPED and p.key_count == 0 and p.batches == 0

    def test_min_file_size(self):
        assert min_file_size(3, 2, i=1) == 66        # smallest >= 64 divisible by 6
        assert min_file_size(6, 2, i=2) == 72        # divisible by K~*(L+1) = 9
        assert min_file_size(4, 2, case=Case.FULL_KEY) == 64
        assert min_file_size(5, 3, case=Case.CODED_PLACEMENT) == 66


class TestAccessibleCaches:
    def test_wraparound(self):
        p = validate_params(K=3, L=2, N=3, F=6, i=1)
        assert accessible_caches(p, 3) == (3, 1)

    def test_no_wrap(self):
        p = validate_params(K=6, L=2, N=6, F=18, i=2)
        assert accessible_caches(p, 1) == (1, 2)

    def test_long_window(self):
        p = validate_params(K=5, L=4, N=5, F=64, case=Case.FULL_KEY)
        assert accessible_caches(p, 4) == (4, 5, 1, 2)

    def test_out_of_range(self):
        p = validate_params(K=3, L=2, N=3, F=6, i=1)
        with pytest.raises(IndexError):
            accessible_caches(p, 4)

    def test_distinct_and_covering(self):
        for K in range(2, 9):
            for L in range(1, K):
                p = validate_params(K=K, L=L, N=K, F=64, case=Case.FULL_KEY)
                union = set()
                for k in range(1, K + 1):
                    caches = accessible_caches(p, k)
                    assert len(set(caches)) == L
                    union.update(caches)
                assert union == set(range(1, K + 1))


class TestMemoryAccounting:
    def test_grouped_example(self):
        p = validate_params(K=6, L=2, N=6, F=18, i=2)
        acc = memory_accounting(p)
        assert acc.M == Fraction(6, 3) + Fraction(2, 9) == Fraction(20, 9)
        assert acc.M_D == 2 and acc.M_K == Fraction(2, 9)

    def test_coprime_example(self):
        p = validate_params(K=3, L=2, N=3, F=6, i=1)
        acc = memory_accounting(p)
        assert acc.M == Fraction(7, 6)
        assert (acc.M_D, acc.M_K) == (1, Fraction(1, 6))

    def test_full_key(self):
        p = validate_params(K=5, L=2, N=5, F=64, case=Case.FULL_KEY)
        acc = memory_accounting(p)
        assert (acc.M, acc.M_D, acc.M_K) == (1, 0, 1)

    def test_coded_placement(self):
        p = validate_params(K=5, L=3, N=5, F=6, case=Case.CODED_PLACEMENT)
        acc = memory_accounting(p)
        assert (acc.M, acc.M_D, acc.M_K) == (Fraction(5, 3), Fraction(5, 3), 0)

    def test_split_always_adds_up(self):
        for K in range(2, 9):
            for L in range(1, K):
                for i in range(1, K // L + 1):
                    p = validate_params(K=K, L=L, N=K, F=min_file_size(K, L, i=i), i=i)
                    acc = memory_accounting(p)
                    assert acc.M == acc.M_D + acc.M_K


class TestMinSecureMemory:
    def test_basic(self):
        assert min_secure_memory(4, 8) == 1

    def test_single_user(self):
        assert min_secure_memory(1, 1) == 1

    def test_hypothesis_violated(self):
        with pytest.raises(ParamError):
            min_secure_memory(4, 3)


class TestFileLibrary:
    def test_reproducible(self):
        a = FileLibrary.generate(4, 32, seed=9)
        b = FileLibrary.generate(4, 32, seed=9)
        assert np.array_equal(a.files, b.files)

    def test_seed_sensitivity(self):
        a = FileLibrary.generate(4, 32, seed=9)
        b = FileLibrary.generate(4, 32, seed=10)
        assert not np.array_equal(a.files, b.files)

    def test_shape(self):
        lib = FileLibrary.generate(3, 12, seed=0)
        assert lib.N == 3 and lib.F == 12
        assert lib.file(2).shape == (12,)


class TestValidateDemand:
    def test_good(self):
        p = validate_params(K=3, L=2, N=3, F=6, i=1)
        assert validate_demand(p, [1, 2, 3]) == (1, 2, 3)

    def test_wrong_length(self):
        p = validate_params(K=3, L=2, N=3, F=6, i=1)
        with pytest.raises(ParamError):
            validate_demand(p, [1, 2])

    def test_out_of_range(self):
        p = validate_params(K=3, L=2, N=3, F=6, i=1)
        with pytest.raises(ParamError):
            validate_demand(p, [1, 2, 4])
