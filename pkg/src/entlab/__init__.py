"""Numerical workbench for bipartite pure-state entanglement at finite
truncation: spectral scales and majorization, LOCC/SLOCC synthesis and
simulation, fidelity and orbit alignment, embezzlement families, and
spectral-state flow diagnostics."""

from .embezzle import (
    EmbezzleReport,
    LambdaFamilySpec,
    TypeLabel,
    VdhBound,
    VdhSpec,
    catalytic_deviation,
    classify_itpfi,
    embezzle_report,
    family_kappa_profile,
    kappa_max_formula,
    lambda_family_measure,
    multipartite_lu_fidelity,
    orbit_trace_defect,
    vdh_bound,
    vdh_coefficients,
    vdh_state,
)
from .errors import (
    EntlabError,
    InfeasibleError,
    InvalidInputError,
    NoConnectorError,
    NotReducibleError,
    NumericalFailureError,
)
from .locc import (
    Branch,
    Instrument,
    LoccProtocol,
    LoccRound,
    MixingDecomposition,
    OneShotReport,
    OneWayProtocol,
    SloccResult,
    VerificationReport,
    instrument,
    locc_embezzle_feasible,
    locc_feasible,
    locc_protocol,
    locc_round,
    mixing_decomposition,
    nielsen_synthesize,
    one_shot_entanglement,
    one_way_branches,
    one_way_reduce,
    simulate,
    slocc,
    support_projector,
    verify_protocol,
)
from .quantum import (
    DensityMatrix,
    LocalIsometryPair,
    PureBipartiteState,
    SchmidtDecomposition,
    align_unitary,
    apply_local,
    bell_state,
    complete_isometry,
    connect_purifications,
    coupling_constant,
    density,
    fidelity,
    haar_unitaries,
    haar_unitary,
    lu_align_unitaries,
    lu_orbit_fidelity,
    marginal,
    orbit_distance_matrices,
    product_basis_state,
    pure_state,
    purify,
    random_density,
    random_pure_state,
    schmidt,
    sorted_eigh,
    state_from_schmidt,
    trace_distance,
    uhlmann_optimizer,
)
from .spectra import (
    AtomicMeasure,
    EntropyReport,
    MonotoneFunctionSpec,
    Spectrum,
    StepFunction,
    atomic_measure,
    distribution_function,
    entanglement_entropies,
    flat_spectrum,
    flow_act,
    flow_deviation,
    generalized_inverse,
    hs_distance,
    kappa_profile,
    l1_distance,
    majorizes,
    measure_distribution,
    monotone_Ef,
    orbit_distance,
    smear,
    spectral_scale,
    spectral_state,
    spectrum,
    state_spectrum,
    step_function,
    tensor_spectrum,
    tv_distance,
)

__version__ = "0.1.0"
