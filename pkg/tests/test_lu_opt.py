import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symfid.errors import DomainError
from symfid.localops import LocalOperator, apply_local
from symfid.lu_opt import (
    SpinorParam,
    alternating_maximize,
    local_overlap,
    lu_equality_check,
    max_overlap_independent,
    max_overlap_symmetric,
    su2_from_param,
    symmetric_overlap,
)
from symfid.symstate import SymState, dicke, random_sym_state, sym_to_dense


def random_q(rng, shape=()):
    q = rng.standard_normal(shape + (4,))
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


class TestSpinor:
    def test_identity(self):
        np.testing.assert_allclose(su2_from_param(SpinorParam([1, 0, 0, 0])).entries, np.eye(2))

    def test_flip(self):
        np.testing.assert_allclose(su2_from_param(SpinorParam([0, 0, 1, 0])).entries, [[0, -1], [1, 0]])

    @given(st.integers(0, 2**32 - 1))
    def test_special_unitary(self, seed):
        u = su2_from_param(SpinorParam.random(np.random.default_rng(seed)))
        assert abs(u.det - 1) < 1e-12
        np.testing.assert_allclose(u.entries @ u.entries.conj().T, np.eye(2), atol=1e-12)

    def test_non_unit(self):
        with pytest.raises(DomainError):
            SpinorParam([1, 1, 0, 0])


class TestOverlaps:
    def test_local_overlap_matches_dense(self, rng):
        psi, phi = random_sym_state(4, rng), random_sym_state(4, rng)
        ops = [su2_from_param(SpinorParam(random_q(rng))) for _ in range(4)]
        dense = np.vdot(sym_to_dense(psi).amps, apply_local(ops, sym_to_dense(phi)).amps)
        assert abs(local_overlap(psi, phi, ops) - dense) < 1e-13

    @pytest.mark.parametrize("n", [1, 4, 7, 10])
    def test_symmetric_overlap_matches_dense(self, n, rng):
        psi, phi = random_sym_state(n, rng), random_sym_state(n, rng)
        q = random_q(rng)
        op = su2_from_param(SpinorParam(q))
        dense = np.vdot(sym_to_dense(psi).amps, apply_local([op] * n, sym_to_dense(phi)).amps)
        assert abs(symmetric_overlap(psi, phi, q) - dense) < 1e-10

    def test_size_mismatch(self):
        with pytest.raises(DomainError):
            symmetric_overlap(dicke(3, 1), dicke(4, 1), np.array([1.0, 0, 0, 0]))


class TestAlternating:
    def test_monotone_ascent(self, rng):
        psi, phi = random_sym_state(5, rng), random_sym_state(5, rng)
        run = alternating_maximize(psi, phi, random_q(rng, (6, 5)))
        for b in range(6):
            h = run.history[b, : run.sweeps[b]]
            assert np.all(np.diff(h) >= -1e-13)

    def test_phase_freedom(self, rng):
        # U(2) adds nothing over SU(2): site phases leave the objective unchanged
        psi, phi = random_sym_state(4, rng), random_sym_state(4, rng)
        run = alternating_maximize(psi, phi, random_q(rng, (4,)))
        best = run.params[int(np.argmax(run.values))]
        ops = [su2_from_param(SpinorParam(q)) for q in best]
        base = abs(local_overlap(psi, phi, ops)) ** 2
        phased = [LocalOperator(np.exp(1j * t) * op.entries) for t, op in zip(rng.uniform(0, 6, 4), ops)]
        assert abs(abs(local_overlap(psi, phi, phased)) ** 2 - base) < 1e-12
        assert base == pytest.approx(run.value, abs=1e-12)

    def test_shape_checked(self):
        with pytest.raises(DomainError):
            alternating_maximize(dicke(3, 1), dicke(3, 1), np.ones((2, 4)))


class TestMaximize:
    def test_identity_optimum(self):
        assert max_overlap_independent(dicke(3, 1), dicke(3, 1), 5, 1) == pytest.approx(1.0, abs=1e-9)
        assert max_overlap_symmetric(dicke(3, 1), dicke(3, 1), 5, 1) == pytest.approx(1.0, abs=1e-9)

    def test_dicke_pair(self):
        ind = max_overlap_independent(dicke(4, 1), dicke(4, 2))
        sym = max_overlap_symmetric(dicke(4, 1), dicke(4, 2))
        assert 0 < sym < 1
        assert abs(ind - sym) < 1e-6

    def test_global_phase(self, rng):
        psi, phi = random_sym_state(4, rng), random_sym_state(4, rng)
        base = max_overlap_symmetric(psi, phi, 10, 3)
        rotated = SymState(4, np.exp(0.7j) * phi.coeffs)
        assert max_overlap_symmetric(psi, rotated, 10, 3) == pytest.approx(base, abs=1e-12)
        assert max_overlap_independent(SymState(4, -1j * psi.coeffs), phi, 10, 3) == pytest.approx(
            max_overlap_independent(psi, phi, 10, 3), abs=1e-12
        )

    def test_bounded(self, rng):
        psi, phi = random_sym_state(5, rng), random_sym_state(5, rng)
        assert max_overlap_independent(psi, phi, 5, 0) <= 1 + 1e-12

    def test_seeded(self, rng):
        psi, phi = random_sym_state(4, rng), random_sym_state(4, rng)
        assert max_overlap_independent(psi, phi, 4, 9) == max_overlap_independent(psi, phi, 4, 9)


class TestEqualityCheck:
    def test_three_qubits(self):
        results = lu_equality_check(3, 20, 20, 42)
        assert len(results) == 20
        assert max(abs(r.gap) for r in results) <= 1e-6

    def test_six_qubits(self):
        assert max(abs(r.gap) for r in lu_equality_check(6, 10, 20, 7)) <= 1e-6

    def test_superset(self):
        for r in lu_equality_check(4, 5, 10, 3):
            assert r.value_independent >= r.value_symmetric - 1e-9
            assert r.gap == r.value_independent - r.value_symmetric

    def test_equal_states(self, rng):
        psi = random_sym_state(5, rng)
        assert max_overlap_independent(psi, psi, 5, 0) == pytest.approx(1.0, abs=1e-9)
        assert max_overlap_symmetric(psi, psi, 5, 0) == pytest.approx(1.0, abs=1e-9)

    def test_order_independent(self):
        full = lu_equality_check(3, 4, 5, 11)
        assert [r.gap for r in full] == [r.gap for r in lu_equality_check(3, 4, 5, 11)]

    def test_bad_args(self):
        with pytest.raises(DomainError):
            lu_equality_check(3, 0)
