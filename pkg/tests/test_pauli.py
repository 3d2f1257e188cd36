import json

import numpy as np
import pytest
import scipy.linalg

import vqekit as vk
from vqekit.pauli import exact_ground_state

from conftest import FIXTURES, dense_pauli_sum, random_pauli_sum


class TestHeisenberg:
    def test_two_site_terms(self):
        h = vk.heisenberg_1d(2, -1.0)
        assert sorted(h.terms) == [(0.5, "XX"), (0.5, "YY"), (0.5, "ZZ")]

    def test_term_count_and_coeff(self):
        h = vk.heisenberg_1d(5, 2.0)
        assert len(h.terms) == 3 * 4
        assert all(c == -1.0 for c, _ in h.terms)

    def test_two_site_ground_energy(self):
        energy, _ = vk.exact_ground_state(vk.heisenberg_1d(2, -1.0))
        assert abs(energy - (-1.5)) < 1e-12

    def test_six_site_per_site_energy_matches_reference(self):
        # Table-derived anchor for the sign convention: -0.83119 per site
        energy, _ = vk.exact_ground_state(vk.heisenberg_1d(6, -1.0))
        assert abs(energy / 6 - (-0.83119)) < 1e-5

    def test_too_small(self):
        with pytest.raises(ValueError):
            vk.heisenberg_1d(1, -1.0)


class TestDisjointUnion:
    def test_padding_layout(self):
        a = vk.PauliSum(2, [(1.0, "XY")])
        b = vk.PauliSum(3, [(2.0, "ZIZ")])
        u = vk.disjoint_union(a, b)
        assert u.n_qubits == 5
        assert (1.0, "XYIII") in u.terms
        assert (2.0, "IIZIZ") in u.terms

    def test_union_with_empty(self):
        a = vk.heisenberg_1d(3, -1.0)
        b = vk.PauliSum(2, [])
        u = vk.disjoint_union(a, b)
        assert u.n_qubits == 5
        assert [s for _, s in u.terms] == [s + "II" for _, s in a.terms]

    def test_ground_energy_additivity(self):
        a = vk.heisenberg_1d(3, -1.0)
        b = vk.heisenberg_1d(4, -1.0)
        e_a, _ = vk.exact_ground_state(a)
        e_b, _ = vk.exact_ground_state(b)
        e_u, _ = vk.exact_ground_state(vk.disjoint_union(a, b))
        assert abs(e_u - (e_a + e_b)) < 1e-9

    def test_doubled_six_site_chain(self):
        # the doubled-chain composite used by the size-consistency table
        h6 = vk.heisenberg_1d(6, -1.0)
        e6, _ = vk.exact_ground_state(h6)
        e66, _ = vk.exact_ground_state(vk.disjoint_union(h6, h6))
        assert abs(e66 - 2 * e6) < 1e-9


class TestNumberPenalty:
    def test_two_qubit_expansion(self):
        p = vk.number_penalty(2, 1, 0, 1.0)
        expect = {"II": 1.0, "ZI": 0.5, "IZ": -0.5}
        got = {s: c for c, s in p.terms}
        assert set(got) == set(expect)
        for s, c in expect.items():
            assert abs(got[s] - c) < 1e-12

    def test_against_dense_oracle(self, rng):
        for n, n_up, n_down, beta in [(4, 1, 1, 1.0), (6, 2, 1, 0.7), (4, 2, 0, 2.5)]:
            p = vk.number_penalty(n, n_up, n_down, beta)
            got = dense_pauli_sum(p)
            # brute-force matrix arithmetic
            dim = 2**n
            n_up_diag = np.zeros(dim)
            n_down_diag = np.zeros(dim)
            for idx in range(dim):
                for q in range(0, n, 2):
                    n_up_diag[idx] += (idx >> q) & 1
                for q in range(1, n, 2):
                    n_down_diag[idx] += (idx >> q) & 1
            expect = np.diag(beta * (n_up_diag - n_up) ** 2 + beta * (n_down_diag - n_down) ** 2)
            np.testing.assert_allclose(got, expect, atol=1e-10)

    def test_zero_beta_empty(self):
        assert vk.number_penalty(4, 1, 1, 0.0).terms == []

    def test_correct_sector_has_zero_penalty(self):
        n, n_up, n_down = 6, 2, 1
        p = vk.number_penalty(n, n_up, n_down, 1.0)
        for idx in range(2**n):
            ups = sum((idx >> q) & 1 for q in range(0, n, 2))
            downs = sum((idx >> q) & 1 for q in range(1, n, 2))
            bits = "".join(str((idx >> q) & 1) for q in range(n))
            val = vk.expectation(p, vk.basis_state(n, bits))
            if (ups, downs) == (n_up, n_down):
                assert abs(val) < 1e-10
            else:
                assert val > 0.5

    def test_odd_qubits_rejected(self):
        with pytest.raises(ValueError):
            vk.number_penalty(3, 1, 0, 1.0)


class TestExpectation:
    def test_z_on_zero(self):
        assert vk.expectation(vk.PauliSum(1, [(1.0, "Z")]), vk.basis_state(1, "0")) == 1.0

    def test_singlet_energy(self):
        singlet = vk.Statevector(2, np.zeros(4, dtype=complex))
        singlet.amplitudes[1] = 1 / np.sqrt(2)   # |q0=1,q1=0>
        singlet.amplitudes[2] = -1 / np.sqrt(2)
        val = vk.expectation(vk.heisenberg_1d(2, -1.0), singlet)
        assert abs(val - (-1.5)) < 1e-12

    def test_matches_dense_oracle(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 9))
            h = random_pauli_sum(n, int(rng.integers(1, 12)), rng)
            psi = vk.random_state(n, rng)
            dense = dense_pauli_sum(h)
            expect = np.vdot(psi.amplitudes, dense @ psi.amplitudes).real
            assert abs(vk.expectation(h, psi) - expect) < 1e-10

    def test_linear_in_coefficients(self, rng):
        n = 4
        h1 = random_pauli_sum(n, 6, rng)
        psi = vk.random_state(n, rng)
        h2 = vk.PauliSum(n, [(3.5 * c, s) for c, s in h1.terms])
        assert abs(vk.expectation(h2, psi) - 3.5 * vk.expectation(h1, psi)) < 1e-10

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            vk.expectation(vk.PauliSum(2, []), vk.basis_state(1, "0"))


class TestExactGroundState:
    def test_single_qubit_z(self):
        energy, state = vk.exact_ground_state(vk.PauliSum(1, [(1.0, "Z")]))
        assert abs(energy - (-1.0)) < 1e-12
        assert abs(abs(state.amplitudes[1]) - 1.0) < 1e-10

    def test_residual_contract(self, rng):
        h = random_pauli_sum(5, 8, rng)
        energy, state = vk.exact_ground_state(h)
        residual = np.linalg.norm(h.apply(state.amplitudes) - energy * state.amplitudes)
        assert residual <= 1e-8

    def test_dense_and_iterative_agree_at_ten_qubits(self):
        h = vk.heisenberg_1d(10, -1.0)
        e_dense, _ = exact_ground_state(h, method="dense")
        e_iter, _ = exact_ground_state(h, method="iterative")
        assert abs(e_dense - e_iter) < 1e-8

    def test_qubit_cap(self):
        with pytest.raises(ValueError):
            vk.exact_ground_state(vk.PauliSum(21, [(1.0, "Z" * 21)]))


class TestHamiltonianFile:
    def test_round_trip(self, tmp_path):
        h = vk.heisenberg_1d(4, -1.0)
        hf = vk.HamiltonianFile(n_qubits=4, terms=h.terms,
                                metadata={"reference_bitstring": "1010", "J": -1.0})
        path = tmp_path / "h.json"
        vk.save_hamiltonian(hf, path)
        back = vk.load_hamiltonian(path)
        assert back == hf

    def test_round_trip_full_precision(self, tmp_path):
        coeff = -0.12345678901234567
        hf = vk.HamiltonianFile(n_qubits=1, terms=[(coeff, "Z")], metadata={})
        path = tmp_path / "h.json"
        vk.save_hamiltonian(hf, path)
        assert vk.load_hamiltonian(path).terms[0][0] == coeff

    def test_wrong_length_names_term_index(self, tmp_path):
        doc = {"format_version": 1, "n_qubits": 2,
               "terms": [{"pauli": "XX", "coeff": 1.0}, {"pauli": "X", "coeff": 1.0}],
               "metadata": {}}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(vk.HamiltonianFormatError, match="term 1"):
            vk.load_hamiltonian(path)

    def test_complex_coefficient_rejected(self, tmp_path):
        doc = {"format_version": 1, "n_qubits": 1,
               "terms": [{"pauli": "Z", "coeff": {"re": 1.0, "im": 2.0}}],
               "metadata": {}}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(vk.HamiltonianFormatError, match="Hermiticity"):
            vk.load_hamiltonian(path)

    def test_bad_letters_rejected(self, tmp_path):
        doc = {"format_version": 1, "n_qubits": 2,
               "terms": [{"pauli": "XQ", "coeff": 1.0}], "metadata": {}}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(vk.HamiltonianFormatError, match="term 0"):
            vk.load_hamiltonian(path)

    def test_committed_h4_fixture(self):
        hf = vk.load_hamiltonian(FIXTURES / "h4_sto3g_oao_r1.5.json")
        assert hf.n_qubits == 8
        assert hf.metadata["reference_bitstring"] == "10011001"
        assert "e_fci" in hf.metadata

    def test_h4_fixture_fci_matches_ed(self):
        """The stored FCI energy is the ED energy of the stored terms."""
        hf = vk.load_hamiltonian(FIXTURES / "h4_sto3g_oao_r1.5.json")
        energy, _ = vk.exact_ground_state(hf.to_pauli_sum())
        assert abs(energy - hf.metadata["e_fci"]) < 1e-6
        # Table-3-derived reference value
        assert abs(energy - (-1.99615)) < 2e-3


class TestPenalizedGroundState:
    def test_h4_penalty_expectation_vanishes(self):
        hf = vk.load_hamiltonian(FIXTURES / "h4_sto3g_oao_r1.5.json")
        h = hf.to_pauli_sum()
        penalty = vk.number_penalty(8, 2, 2, 1.0)
        h_pen = vk.PauliSum(8, h.terms + penalty.terms).merged()
        _, state = vk.exact_ground_state(h_pen)
        assert vk.expectation(penalty, state) <= 1e-8


def test_variational_bound_against_ed(rng):
    h = vk.heisenberg_1d(4, -1.0)
    e0, _ = vk.exact_ground_state(h)
    circuit = vk.build_ansatz(vk.AnsatzKind.XYZ2F, 4, 2)
    ref = vk.basis_state(4, "1010")
    for _ in range(20):
        params = rng.uniform(-np.pi, np.pi, circuit.n_params)
        assert vk.energy(h, circuit, params, ref) >= e0 - 1e-9


def test_merged_sums_duplicates():
    h = vk.PauliSum(2, [(1.0, "XY"), (0.5, "XY"), (-1.5, "XY"), (2.0, "ZZ")])
    merged = h.merged()
    assert merged.terms == [(2.0, "ZZ")]


def test_non_finite_coefficient_rejected():
    with pytest.raises(ValueError):
        vk.PauliSum(1, [(float("nan"), "Z")])
