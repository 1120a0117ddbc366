"""Seeded system generation and the fixed verification population."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest

from kzmc import (
    INFINITY,
    ContractError,
    check_integrability,
    generate,
    mc_tower_system,
    rank1_system,
    residue_A,
    verification_suite,
)


class TestRank1:
    def test_deterministic(self):
        assert rank1_system(4, 7) == rank1_system(4, 7)
        assert rank1_system(4, 7) != rank1_system(4, 8)

    def test_all_residues_nonzero_scalars(self):
        for seed in range(12):
            system = rank1_system(5, seed)
            assert system.rank == 1
            for _, mat in system.pairs():
                value = mat.scalar_value()
                assert value is not None and value != 0

    def test_zero_label_infinity_residue_nonzero(self):
        for n in (2, 3, 4, 5):
            for seed in range(12):
                system = rank1_system(n, seed)
                value = residue_A(system, {0, INFINITY}).scalar_value()
                assert value != 0

    def test_needs_two_labels(self):
        with pytest.raises(ContractError):
            rank1_system(1, 0)


class TestTower:
    def test_deterministic_and_reproducible(self):
        first = mc_tower_system(4, 3)
        second = mc_tower_system(4, 3)
        assert first.system == second.system
        assert first.steps == second.steps

    def test_rank_budget(self):
        for n in (3, 4, 5):
            for seed in range(4):
                tower = mc_tower_system(n, seed)
                assert 1 <= tower.system.rank <= 3
                assert tower.system.n == n
                assert check_integrability(tower.system) == ()

    def test_two_step_tower(self):
        tower = mc_tower_system(3, 1, steps=2)
        assert len(tower.steps) == 2
        assert all(mu != 0 for mu in tower.steps)
        assert tower.system.rank <= 3

    def test_meta_records_reproduction_data(self):
        tower = mc_tower_system(3, 5)
        meta = tower.meta()
        assert meta["kind"] == "mc-tower"
        assert meta["n"] == 3 and meta["seed"] == 5
        assert meta["steps"] == [str(mu) for mu in tower.steps]

    def test_step_count_validated(self):
        with pytest.raises(ContractError):
            mc_tower_system(3, 0, steps=0)


class TestGenerateEntry:
    def test_kinds(self):
        assert generate("rank1", 3, 2).system == rank1_system(3, 2)
        assert (
            generate("mc-tower", 3, 2).system == mc_tower_system(3, 2).system
        )
        with pytest.raises(ContractError):
            generate("mystery", 3, 2)


class TestVerificationSuite:
    @pytest.fixture(scope="class")
    @staticmethod
    def suite():
        return verification_suite()

    def test_size_and_uniqueness(self, suite):
        assert len(suite) == 53
        names = [entry.name for entry in suite]
        assert len(set(names)) == 53

    def test_population_shape(self, suite):
        sizes = Counter(entry.system.n for entry in suite)
        assert set(sizes) == {3, 4, 5}
        assert sum(sizes.values()) == 53
        assert all(entry.system.rank <= 3 for entry in suite)
        assert all(isinstance(entry.mu, Fraction) for entry in suite)
        assert all(entry.mu != 0 for entry in suite)

    def test_parameter_avoids_infinity_spectrum(self, suite):
        """Every entry's parameter keeps the kernel at infinity trivial."""
        from kzmc import RationalMatrix, kernel_basis

        for entry in suite:
            a0inf = residue_A(entry.system, {0, INFINITY})
            shifted = a0inf - RationalMatrix.scalar(
                entry.system.rank, entry.mu
            )
            assert kernel_basis(shifted).dim == 0

    def test_deterministic(self, suite):
        again = verification_suite()
        assert [e.name for e in again] == [e.name for e in suite]
        assert all(
            a.system == b.system and a.mu == b.mu
            for a, b in zip(again, suite)
        )
