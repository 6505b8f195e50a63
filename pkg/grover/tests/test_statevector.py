import math

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from grover.circuits import (
    build_d2p,
    build_iterate,
    build_oracle,
    build_preparation,
    build_reflection,
    circuit_unitary,
)
from grover.exceptions import DomainError, OutOfSubspace
from grover.gates import CNOT, Circuit, H, MCPhase
from grover.solver import k_opt, solve
from grover.statevector import (
    SearchSpec,
    StateVector,
    amplify,
    apply_gate,
    marked_overlap,
    project_subspace,
    reflect_about,
    run,
    success_probability,
    uniform_superposition,
)
from grover.subspace import iterate_states


def random_state(rng, n):
    amplitudes = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return StateVector(n, amplitudes / np.linalg.norm(amplitudes))


def assert_equal_up_to_phase(actual, expected, atol):
    actual, expected = np.asarray(actual), np.asarray(expected)
    overlap = np.vdot(actual, expected)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    assert_allclose(actual * phase, expected, atol=atol)


class SearchSpecTests(SimpleTestCase):

    def test_derived_quantities(self):
        spec = SearchSpec(3, {2, 5})
        self.assertEqual((spec.N, spec.M), (8, 2))
        self.assertEqual(spec.lam, 0.25)

    def test_invalid_specs(self):
        for n, marked in ((2, set()), (1, {0, 1}), (2, {4}), (25, {0}), (2, [1, 1])):
            with self.assertRaises(DomainError):
                SearchSpec(n, marked)


class StateVectorTests(SimpleTestCase):

    def test_uniform_superposition(self):
        assert_allclose(uniform_superposition(1).amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)
        assert_allclose(uniform_superposition(2).amplitudes, [0.5] * 4, atol=1e-15)
        self.assertAlmostEqual(uniform_superposition(10).norm, 1.0, places=12)

    def test_size_guard(self):
        with self.assertRaises(DomainError):
            uniform_superposition(25)
        with self.assertRaises(DomainError):
            uniform_superposition(0)

    def test_rejects_unnormalized_amplitudes(self):
        with self.assertRaises(DomainError):
            StateVector(1, [1.0, 1.0])

    def test_amplitudes_are_read_only(self):
        state = uniform_superposition(2)
        with self.assertRaises(ValueError):
            state.amplitudes[0] = 1.0


class GateTests(SimpleTestCase):

    def test_hadamard_is_an_involution(self):
        state = random_state(np.random.default_rng(1), 3)
        twice = apply_gate(apply_gate(state, H(1)), H(1))
        assert_allclose(twice.amplitudes, state.amplitudes, atol=1e-12)

    def test_single_qubit_mcphase_is_a_phase(self):
        theta = 0.7
        result = apply_gate(uniform_superposition(1), MCPhase((0,), theta))
        assert_allclose(result.amplitudes, np.array([1, np.exp(1j * theta)]) / math.sqrt(2), atol=1e-15)

    def test_cnot_truth_table_is_little_endian(self):
        result = apply_gate(StateVector.basis(2, 1), CNOT(0, 1))
        assert_allclose(np.abs(result.amplitudes), [0, 0, 0, 1])

    def test_gate_outside_register(self):
        with self.assertRaises(DomainError):
            apply_gate(uniform_superposition(2), H(2))

    def test_norm_preserved_by_every_gate(self):
        rng = np.random.default_rng(8)
        spec = SearchSpec(5, {3, 17, 30})
        state = random_state(rng, 5)
        for gate in build_d2p(spec, solve(spec.lam, k_opt(spec.lam))):
            state = apply_gate(state, gate)
            self.assertAlmostEqual(state.norm, 1.0, places=10)


class RunTests(SimpleTestCase):

    def test_empty_circuit(self):
        state = random_state(np.random.default_rng(2), 2)
        assert_allclose(run(Circuit(2), state).amplitudes, state.amplitudes)

    def test_qubit_count_mismatch(self):
        with self.assertRaises(DomainError):
            run(Circuit(3), uniform_superposition(2))

    def test_single_query_finds_marked_state(self):
        spec = SearchSpec(2, {3})
        state = run(build_d2p(spec, solve(0.25, 1)), StateVector.basis(2, 0))
        self.assertAlmostEqual(success_probability(state, {3}), 1.0, places=12)

    def test_four_qubits_three_queries(self):
        spec = SearchSpec(4, {5})
        state = run(build_d2p(spec, solve(spec.lam, 3)), StateVector.basis(4, 0))
        self.assertGreaterEqual(success_probability(state, spec.marked), 1 - 1e-8)


class SuccessProbabilityTests(SimpleTestCase):

    def test_uniform(self):
        self.assertAlmostEqual(success_probability(uniform_superposition(4), {9}), 1 / 16, places=15)

    def test_basis_state(self):
        self.assertAlmostEqual(success_probability(StateVector.basis(3, 6), {6, 1}), 1.0)

    def test_invalid_index(self):
        with self.assertRaises(DomainError):
            success_probability(uniform_superposition(2), {4})


class ProjectionTests(SimpleTestCase):

    def test_uniform_state(self):
        spec = SearchSpec(4, {1, 2})
        projected, residual = project_subspace(uniform_superposition(4), spec)
        self.assertAlmostEqual(projected.a_R, math.sqrt(1 - spec.lam), places=12)
        self.assertAlmostEqual(projected.a_T, math.sqrt(spec.lam), places=12)
        self.assertLess(residual, 1e-12)

    def test_single_marked_basis_state_leaves_subspace(self):
        spec = SearchSpec(2, {1, 2})
        with self.assertRaises(OutOfSubspace):
            project_subspace(StateVector.basis(2, 1), spec)
        projected, residual = project_subspace(StateVector.basis(2, 1), spec, strict=False)
        self.assertAlmostEqual(projected.a_T, 1 / math.sqrt(2), places=12)
        self.assertAlmostEqual(projected.a_R, 0.0, places=12)
        self.assertAlmostEqual(residual, 1 / math.sqrt(2), places=12)

    def test_circuit_matches_two_dimensional_model(self):
        specs = [SearchSpec(n, {(2 ** n - 1) // 3}) for n in range(2, 11)]
        specs += [SearchSpec(n, set(range(1, 2 ** n, 2 ** n // m + 1))) for n in range(4, 11) for m in (2, 3)]
        for spec in specs:
            n = spec.n_qubits
            self.assertLessEqual(spec.lam, 0.25)
            schedule = solve(spec.lam, k_opt(spec.lam))
            model = iterate_states(spec.lam, schedule.alpha, schedule.theta1, schedule.theta2, schedule.k)
            state = run(build_preparation(n), StateVector.basis(n, 0))
            phases = (schedule.theta1, schedule.theta2)
            for i in range(schedule.k + 1):
                if i:
                    state = run(build_iterate(spec, schedule.alpha, phases[(i - 1) % 2]), state)
                projected, _ = project_subspace(state, spec)
                assert_equal_up_to_phase(projected.vector, model[i].vector, atol=1e-9)
            self.assertGreaterEqual(success_probability(state, spec.marked), 1 - 1e-8, msg=str(spec))


class ReflectionTests(SimpleTestCase):

    def test_zero_phase_is_identity(self):
        rng = np.random.default_rng(4)
        state, axis = random_state(rng, 3), random_state(rng, 3)
        assert_allclose(reflect_about(state, axis, 0.0).amplitudes, state.amplitudes, atol=1e-15)

    def test_uniform_axis_matches_circuit_reflection(self):
        rng = np.random.default_rng(6)
        for theta in (math.pi, 1.2, -0.4):
            state = random_state(rng, 4)
            dense = reflect_about(state, uniform_superposition(4), theta)
            gates = run(build_reflection(4, theta), state)
            assert_allclose(dense.amplitudes, gates.amplitudes, atol=1e-10)

    def test_oracle_touches_only_marked_amplitudes(self):
        spec = SearchSpec(4, {0, 6, 13})
        alpha = 0.9
        state = random_state(np.random.default_rng(12), 4)
        result = run(build_oracle(spec, alpha), state)
        for index in range(16):
            factor = np.exp(1j * alpha) if index in spec.marked else 1.0
            self.assertAlmostEqual(result.amplitudes[index], factor * state.amplitudes[index], places=14)
        unitary = circuit_unitary(build_oracle(spec, alpha))
        self.assertLess(np.max(np.abs(unitary - np.diag(np.diag(unitary)))), 1e-14)


class AmplificationTests(SimpleTestCase):

    def _initial_state(self, rng, n, marked, overlap):
        mask = np.zeros(2 ** n, dtype=bool)
        mask[list(marked)] = True
        amplitudes = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        inside = np.where(mask, amplitudes, 0)
        outside = np.where(mask, 0, amplitudes)
        amplitudes = (math.sqrt(overlap) * inside / np.linalg.norm(inside)
                      + math.sqrt(1 - overlap) * outside / np.linalg.norm(outside))
        return StateVector(n, amplitudes)

    def test_marked_overlap(self):
        rng = np.random.default_rng(0)
        init = self._initial_state(rng, 4, {3, 9}, 1 / 16)
        self.assertAlmostEqual(marked_overlap(init, {3, 9}), 1 / 16, places=12)

    def test_random_initial_states_reach_marked_set(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            n = int(rng.integers(3, 7))
            marked = set(rng.choice(2 ** n, size=int(rng.integers(1, 3)), replace=False).tolist())
            overlap = float(rng.uniform(0.005, 0.25))
            init = self._initial_state(rng, n, marked, overlap)
            schedule = solve(marked_overlap(init, marked), k_opt(marked_overlap(init, marked)))
            final = amplify(init, marked, schedule)
            self.assertGreaterEqual(success_probability(final, marked), 1 - 1e-8)

    def test_uniform_initial_state_matches_circuit(self):
        spec = SearchSpec(4, {7})
        schedule = solve(spec.lam, 3)
        dense = amplify(uniform_superposition(4), spec.marked, schedule)
        gates = run(build_d2p(spec, schedule), StateVector.basis(4, 0))
        assert_equal_up_to_phase(dense.amplitudes, gates.amplitudes, atol=1e-10)

    def test_overlap_mismatch(self):
        with self.assertRaises(DomainError):
            amplify(uniform_superposition(4), {7}, solve(0.25, 1))
