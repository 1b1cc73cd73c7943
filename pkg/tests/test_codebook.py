"""Codebook construction, index arithmetic, neighborhoods."""

import cmath
import itertools
import math

import numpy as np
import numpy.testing as npt
import pytest

from beamform.channel import ula_response
from beamform.codebook import (
    CodebookSpec,
    angle_of_index,
    has_distinct_columns,
    index_to_columns,
    invalid_solution_indices,
    materialize,
    neighbors,
    solution_index,
    steering_columns,
    steering_gram,
    valid_solutions,
)


class TestAngleOfIndex:
    def test_reference_points(self):
        assert angle_of_index(3, 3) == pytest.approx(3 * math.pi / 4)
        assert angle_of_index(7, 3) == pytest.approx(7 * math.pi / 4)
        assert angle_of_index(8, 3) == pytest.approx(2 * math.pi)
        assert angle_of_index(1, 1) == pytest.approx(math.pi)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            angle_of_index(0, 3)
        with pytest.raises(ValueError):
            angle_of_index(9, 3)


class TestSpecValidation:
    def test_counts(self):
        spec = CodebookSpec(8, 2, 3)
        assert spec.n_angles == 8
        assert spec.n_solutions == 64

    def test_too_many_chains_for_grid(self):
        with pytest.raises(ValueError):
            CodebookSpec(8, 3, 1)

    def test_bad_bits(self):
        with pytest.raises(ValueError):
            CodebookSpec(8, 1, 0)


class TestMaterialize:
    def test_columns_are_steering_vectors(self):
        spec = CodebookSpec(8, 2, 3)
        m = materialize((3, 7), spec)
        npt.assert_allclose(m[:, 0], ula_response(8, 3 * math.pi / 4), atol=1e-15)
        npt.assert_allclose(m[:, 1], ula_response(8, 7 * math.pi / 4), atol=1e-15)

    def test_entries_scalar_oracle(self):
        # element m of column q is exp(j*pi*m*sin(2 pi q / 2^bits)) / sqrt(n)
        spec = CodebookSpec(4, 1, 2)
        m = materialize((3,), spec)
        for row in range(4):
            want = cmath.exp(1j * math.pi * row * math.sin(2 * math.pi * 3 / 4)) / 2.0
            assert abs(m[row, 0] - want) < 1e-14

    def test_constant_modulus(self):
        spec = CodebookSpec(16, 2, 4)
        m = materialize((5, 12), spec)
        npt.assert_allclose(np.abs(m) ** 2, 1.0 / 16, atol=1e-14)

    def test_rejects_out_of_range(self):
        spec = CodebookSpec(8, 2, 3)
        with pytest.raises(ValueError):
            materialize((0, 3), spec)
        with pytest.raises(ValueError):
            materialize((1, 9), spec)

    def test_cached_columns_are_read_only(self):
        spec = CodebookSpec(8, 2, 3)
        with pytest.raises(ValueError):
            steering_columns(spec)[0, 0] = 0
        with pytest.raises(ValueError):
            steering_gram(spec)[0, 0] = 0


class TestSolutionIndex:
    def test_reference_value(self):
        spec = CodebookSpec(8, 2, 3)
        assert solution_index((2, 7), spec) == 15
        assert index_to_columns(15, spec) == (2, 7)

    def test_extremes(self):
        spec = CodebookSpec(8, 2, 3)
        assert solution_index((1, 1), spec) == 1
        assert solution_index((8, 8), spec) == 64

    def test_base_arithmetic_oracle(self):
        # p - 1 written in base 2^bits, most significant digit first
        spec = CodebookSpec(8, 3, 2)
        for tup in itertools.product(range(1, 5), repeat=3):
            want = (tup[0] - 1) * 16 + (tup[1] - 1) * 4 + (tup[2] - 1) + 1
            assert solution_index(tup, spec) == want

    def test_bijection_exhaustive(self):
        for n_rf, bits in [(2, 2), (2, 3), (1, 6), (3, 4), (2, 6), (4, 3)]:
            spec = CodebookSpec(2 ** bits, n_rf, bits)
            seen = set()
            for p in range(1, spec.n_solutions + 1):
                tup = index_to_columns(p, spec)
                assert solution_index(tup, spec) == p
                seen.add(tup)
            assert len(seen) == spec.n_solutions

    def test_out_of_range(self):
        spec = CodebookSpec(8, 2, 3)
        with pytest.raises(ValueError):
            index_to_columns(0, spec)
        with pytest.raises(ValueError):
            index_to_columns(65, spec)
        with pytest.raises(ValueError):
            solution_index((1, 2, 3), spec)


class TestValidity:
    def test_distinct_columns(self):
        assert has_distinct_columns((1, 2, 3))
        assert not has_distinct_columns((2, 2))

    def test_valid_solution_count(self):
        spec = CodebookSpec(8, 2, 3)
        sols = list(valid_solutions(spec))
        assert len(sols) == 8 * 7
        assert sols == sorted(sols, key=lambda t: solution_index(t, spec))

    def test_invalid_indices_complement(self):
        spec = CodebookSpec(8, 2, 3)
        invalid = invalid_solution_indices(spec)
        assert len(invalid) == 64 - 56
        valid_ps = {solution_index(t, spec) for t in valid_solutions(spec)}
        assert invalid == set(range(1, 65)) - valid_ps


class TestNeighbors:
    def test_interior_tuple(self):
        spec = CodebookSpec(8, 2, 3)
        got = neighbors((3, 7), spec)
        assert [n.indices for n in got] == [(2, 7), (4, 7), (3, 6), (3, 8)]
        assert [n.slot for n in got] == [1, 2, 3, 4]

    def test_boundary_clamp_omitted(self):
        spec = CodebookSpec(8, 2, 3)
        got = neighbors((1, 5), spec)
        assert [n.indices for n in got] == [(2, 5), (1, 4), (1, 6)]
        assert [n.slot for n in got] == [2, 3, 4]

    def test_duplicate_collision_omitted(self):
        spec = CodebookSpec(8, 2, 3)
        got = neighbors((3, 4), spec)
        assert [(n.slot, n.indices) for n in got] == [(1, (2, 4)), (4, (3, 5))]

    def test_size_bound_and_symmetry(self):
        rng = np.random.default_rng(9)
        for _ in range(300):
            bits = int(rng.integers(1, 5))
            n_rf = int(rng.integers(1, min(4, 2 ** bits) + 1))
            spec = CodebookSpec(2 ** bits, n_rf, bits)
            tup = tuple(
                int(q) + 1
                for q in rng.choice(spec.n_angles, size=n_rf, replace=False)
            )
            got = neighbors(tup, spec)
            assert len(got) <= 2 * n_rf
            for nb in got:
                back = [m.indices for m in neighbors(nb.indices, spec)]
                assert tup in back

    def test_empty_when_grid_saturated(self):
        # every entry used: all moves clamp or collide
        spec = CodebookSpec(4, 2, 1)
        assert neighbors((1, 2), spec) == []
