"""Statevector VQE engine with size-consistent hardware-efficient ansatz
families, a Pauli-exponential compiler, and layerwise optimization."""

from .ansatz import (
    AnsatzKind,
    Circuit,
    GateOp,
    ParamExpr,
    ResourceCounts,
    asap_depth,
    build_ansatz,
    compile_pauli_rotation,
    compose_subsystem_params,
    embed_subsystem_params,
    pauli_bond_gates,
    prepare_product_state,
    resource_counts,
    run,
    u2_matrix,
)
from .gradient import (
    EnergyGradient,
    energy,
    energy_and_gradient,
    finite_difference_gradient,
)
from .optimize import (
    BfgsConfig,
    LayerRecord,
    LayerwiseResult,
    OptimizationError,
    RestartSpec,
    layerwise_vqe,
    minimize_bfgs,
    random_layer_params,
)
from .pauli import (
    HamiltonianFile,
    HamiltonianFormatError,
    PauliSum,
    disjoint_union,
    exact_ground_state,
    expectation,
    heisenberg_1d,
    load_hamiltonian,
    number_penalty,
    save_hamiltonian,
)
from .statevector import (
    GateMatrix,
    Statevector,
    apply_1q,
    apply_2q,
    basis_state,
    fidelity,
    gate_library,
    gate_matrix,
    inner_product,
    random_state,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
