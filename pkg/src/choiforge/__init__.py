"""Quantum channels in three equivalent representations plus a simulated
ancilla-assisted process-tomography pipeline that recovers canonical Kraus
operators from an opaque channel."""

from .channels import (
    ChoiMatrix,
    CpTpVerdict,
    KrausSet,
    NotCompletelyPositiveError,
    StinespringModel,
    ZOO_CHANNEL_NAMES,
    apply_kraus,
    apply_stinespring,
    check_cp_tp,
    choi_cp_tp_verdict,
    choi_to_kraus,
    haar_random_unitary,
    kraus_equivalent,
    kraus_to_choi,
    random_cptp,
    stinespring_to_choi,
    zoo_channel,
)
from .linalg import (
    HermitianEigenDecomposition,
    NotHermitianError,
    SchmidtDecomposition,
    adjoint,
    frobenius_distance,
    hermitian_eig,
    multiply,
    partial_trace,
    schmidt_decompose,
    tensor_product,
)
from .metrics import ResourceReport, choi_distance, process_fidelity, resource_report
from .tomography import (
    EXACT,
    MaxEntangled,
    NotMaximumSchmidtError,
    OpaqueChannel,
    SchmidtConditioningError,
    SchmidtInput,
    TomographyConfig,
    TomographyResult,
    default_kraus_threshold,
    hermitian_operator_basis,
    joint_output_state,
    prepare_max_entangled,
    prepare_schmidt_input,
    project_to_psd,
    reconstruct_from_max_entangled,
    reconstruct_from_schmidt,
    run_tomography,
    simulate_state_tomography,
)

__version__ = "0.1.0"

__all__ = [
    "EXACT",
    "ZOO_CHANNEL_NAMES",
    "ChoiMatrix",
    "CpTpVerdict",
    "HermitianEigenDecomposition",
    "KrausSet",
    "MaxEntangled",
    "NotCompletelyPositiveError",
    "NotHermitianError",
    "NotMaximumSchmidtError",
    "OpaqueChannel",
    "ResourceReport",
    "SchmidtConditioningError",
    "SchmidtDecomposition",
    "SchmidtInput",
    "StinespringModel",
    "TomographyConfig",
    "TomographyResult",
    "adjoint",
    "apply_kraus",
    "apply_stinespring",
    "check_cp_tp",
    "choi_cp_tp_verdict",
    "choi_distance",
    "choi_to_kraus",
    "default_kraus_threshold",
    "frobenius_distance",
    "haar_random_unitary",
    "hermitian_eig",
    "hermitian_operator_basis",
    "joint_output_state",
    "kraus_equivalent",
    "kraus_to_choi",
    "multiply",
    "partial_trace",
    "prepare_max_entangled",
    "prepare_schmidt_input",
    "process_fidelity",
    "project_to_psd",
    "random_cptp",
    "reconstruct_from_max_entangled",
    "reconstruct_from_schmidt",
    "resource_report",
    "run_tomography",
    "schmidt_decompose",
    "simulate_state_tomography",
    "stinespring_to_choi",
    "tensor_product",
    "zoo_channel",
]
