import numpy as np
import pytest

import vqekit as vk
from vqekit import AnsatzKind
from vqekit.ansatz import Circuit, GateOp, ParamExpr

from conftest import random_pauli_sum


def assert_gradient_matches_fd(h, circuit, params, ref, step=1e-5):
    got = vk.energy_and_gradient(h, circuit, params, ref)
    fd = vk.finite_difference_gradient(h, circuit, params, ref, step)
    big = np.abs(fd) > 1e-8
    if big.any():
        rel = np.abs(got.gradient[big] - fd[big]) / np.abs(fd[big])
        assert rel.max() <= 1e-6, rel.max()
    small = ~big
    if small.any():
        assert np.abs(got.gradient[small] - fd[small]).max() <= 1e-9


class TestEnergy:
    def test_neel_energy_heisenberg4(self):
        # only ZZ terms contribute on a product basis state
        h = vk.heisenberg_1d(4, -1.0)
        circuit = vk.build_ansatz(AnsatzKind.XYZ2F, 4, 1)
        ref = vk.basis_state(4, "1010")
        val = vk.energy(h, circuit, np.zeros(circuit.n_params), ref)
        assert abs(val - (-1.5)) < 1e-12

    def test_identity_hamiltonian(self, rng):
        h = vk.PauliSum(3, [(2.25, "III")])
        circuit = vk.build_ansatz(AnsatzKind.XYZ2F, 3, 1)
        params = rng.uniform(-np.pi, np.pi, circuit.n_params)
        assert abs(vk.energy(h, circuit, params, vk.basis_state(3, "010")) - 2.25) < 1e-12

    def test_variational_bound(self, rng):
        h = vk.heisenberg_1d(3, -1.0)
        e0, _ = vk.exact_ground_state(h)
        circuit = vk.build_ansatz(AnsatzKind.XYZ1F, 3, 2)
        for _ in range(10):
            params = rng.uniform(-np.pi, np.pi, circuit.n_params)
            assert vk.energy(h, circuit, params, vk.basis_state(3, "101")) >= e0 - 1e-9


class TestAdjointGradient:
    def test_unparameterized_circuit_gives_empty_gradient(self):
        ops = [GateOp("h", (0,)), GateOp("cnot", (0, 1)),
               GateOp("rx", (1,), (ParamExpr(None, 0.0, 0.4),))]
        circuit = Circuit(2, 0, ops, [0, len(ops)], [])
        h = vk.heisenberg_1d(2, -1.0)
        out = vk.energy_and_gradient(h, circuit, np.zeros(0), vk.basis_state(2, "00"))
        assert out.gradient.shape == (0,)

    @pytest.mark.parametrize("kind", list(AnsatzKind))
    def test_every_kind_matches_finite_differences(self, kind, rng):
        for n, L in [(3, 1), (5, 2)]:
            circuit = vk.build_ansatz(kind, n, L)
            h = random_pauli_sum(n, 6, rng)
            ref = vk.random_state(n, rng)
            params = rng.uniform(-np.pi, np.pi, circuit.n_params)
            assert_gradient_matches_fd(h, circuit, params, ref)

    def test_random_circuits_all_gates_shared_params(self, rng):
        """Hand-built circuits covering every gate kind, shared and scaled
        parameter expressions, against the finite-difference oracle."""
        from vqekit.statevector import GATE_SIGNATURES

        for _ in range(40):
            n = int(rng.integers(2, 6))
            n_params = int(rng.integers(1, 6))
            ops = []
            sites = [(1, "free", i) for i in range(n_params)]
            for _ in range(int(rng.integers(4, 14))):
                name = rng.choice(list(GATE_SIGNATURES))
                arity, n_angles = GATE_SIGNATURES[name]
                if arity == 1:
                    qubits = (int(rng.integers(n)),)
                else:
                    qubits = tuple(int(q) for q in rng.choice(n, 2, replace=False))
                exprs = []
                for _ in range(n_angles):
                    if rng.random() < 0.25:
                        exprs.append(ParamExpr(None, 0.0, float(rng.uniform(-np.pi, np.pi))))
                    else:
                        exprs.append(ParamExpr(
                            int(rng.integers(n_params)),
                            float(rng.choice([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])),
                            float(rng.uniform(-0.5, 0.5)),
                        ))
                ops.append(GateOp(name, qubits, tuple(exprs)))
            circuit = Circuit(n, n_params, ops, [0, len(ops)], sites)
            h = random_pauli_sum(n, 5, rng)
            ref = vk.random_state(n, rng)
            params = rng.uniform(-np.pi, np.pi, n_params)
            assert_gradient_matches_fd(h, circuit, params, ref)

    def test_mirrored_shared_parameters(self, rng):
        """Every (alpha, beta, theta, phi) appears in at least two ops."""
        circuit = vk.build_ansatz(AnsatzKind.XYZ2F, 4, 2)
        h = vk.heisenberg_1d(4, -1.0)
        ref = vk.basis_state(4, "1010")
        params = rng.uniform(-np.pi, np.pi, circuit.n_params)
        assert_gradient_matches_fd(h, circuit, params, ref)

    def test_energy_value_matches_expectation(self, rng):
        circuit = vk.build_ansatz(AnsatzKind.XYZ1F, 3, 2)
        h = random_pauli_sum(3, 4, rng)
        ref = vk.random_state(3, rng)
        params = rng.uniform(-np.pi, np.pi, circuit.n_params)
        out = vk.energy_and_gradient(h, circuit, params, ref)
        assert abs(out.energy - vk.energy(h, circuit, params, ref)) < 1e-12


class TestFiniteDifference:
    def test_quadratic_toy(self):
        # single Ry on <Z>: E(t) = cos(t), dE = -sin(t)
        ops = [GateOp("ry", (0,), (ParamExpr(0),))]
        circuit = Circuit(1, 1, ops, [0, 1], [(1, "free", 0)])
        h = vk.PauliSum(1, [(1.0, "Z")])
        ref = vk.basis_state(1, "0")
        t = 0.913
        fd = vk.finite_difference_gradient(h, circuit, np.array([t]), ref, 1e-5)
        assert abs(fd[0] - (-np.sin(t))) < 1e-9

    def test_zero_step_rejected(self):
        circuit = vk.build_ansatz(AnsatzKind.XYZ2F, 2, 1)
        h = vk.heisenberg_1d(2, -1.0)
        with pytest.raises(ValueError):
            vk.finite_difference_gradient(h, circuit, np.zeros(circuit.n_params),
                                          vk.basis_state(2, "10"), 0.0)


def test_gradient_at_minimum_below_tolerance():
    h = vk.heisenberg_1d(2, -1.0)
    circuit = vk.build_ansatz(AnsatzKind.XYZ2F, 2, 1)
    ref = vk.basis_state(2, "10")

    def fg(x):
        out = vk.energy_and_gradient(h, circuit, x, ref)
        return out.energy, out.gradient

    config = vk.BfgsConfig(gradient_tolerance=1e-8)
    x, f, iterations = vk.minimize_bfgs(fg, np.full(circuit.n_params, 0.3), config)
    _, grad = fg(x)
    assert np.max(np.abs(grad)) <= config.gradient_tolerance
    assert abs(f - (-1.5)) < 1e-8
