"""Agnostic boosting for phase states, at desk scale.

Dense statevector simulation of copy-based access to an unknown phase state,
weak agnostic learners for parities, decision trees, and DNFs built on the
noisy-parity primitive, a two-stage boosting loop (support recovery, then
coefficient estimation), and the analyses that sit around them: strong
agnostic learners, PAC learning of small depth-3 circuits, entanglement
profiles, discriminator checks, and the reduction from distributional
(real-valued label) learning to phase-state learning.
"""
from .access import (
    CopyLedger,
    CopySource,
    basis_sample,
    default_attempt_cap,
    magnitude_estimate,
    parity_overlap_sq_estimates,
    povm_norm_estimate,
    prepare_residual,
    sample_basis_counts,
    sample_fourier_counts,
    shots_for,
    swap_test_estimate,
)
from .analysis import (
    BipartitionCut,
    DiscriminatorReport,
    ResidualDiscriminatorReport,
    ResidualDistribution,
    bond_profile,
    hard_dnf_decomposition_check,
    hard_dnf_instance,
    junta_bond_bound,
    random_product_distribution,
    residual_discriminator_check,
    schmidt_rank,
    verify_discriminator,
)
from .boosting import (
    BoostingConfig,
    BoostResult,
    IterationRecord,
    StructureResult,
    agnostic_boost,
    estimate_projection_coefficients,
    parameter_learning,
    structure_learning,
)
from .concepts import (
    BooleanConcept,
    DecisionTree,
    Dnf,
    FourierSpectrum,
    Junta,
    Parity,
    ThresholdOfDnfs,
    concept_from_text,
    concept_to_text,
    dt_l1_norm,
    fourier_spectrum,
    load_concepts,
    random_concept,
    random_decision_tree,
    random_dnf,
    random_junta,
    random_parity,
    random_tac,
    save_concepts,
    spectral_concentration,
)
from .distributional import (
    DistributionalOutcome,
    LabelFunction,
    OverlapWindowReport,
    build_psi_D,
    distributional_learn,
    make_distributional_source,
    postselect_last_qubit,
    recover_labels,
    verify_overlap_window,
)
from .errors import (
    ConfigurationError,
    ContractViolationError,
    DegenerateResidualError,
    ParameterError,
    PhaseboostError,
    PostSelectionFailureError,
    PromiseViolationError,
    ResourceLimitError,
    ThresholdDegenerateError,
)
from .kernels import ACTIVE_BACKEND, available_backends, fwht_inplace, set_backend
from .learners import (
    AmplitudeSieve,
    LearningOutcome,
    SignHypothesis,
    agnostic_learn_dnf,
    agnostic_learn_dt,
    agnostic_learn_junta,
    agnostic_learn_junta_noboost,
    pac_learn_depth3,
)
from .statevec import (
    ParityDecomposition,
    ParitySpan,
    ProjectionReport,
    StateVector,
    basis_state,
    dump_state,
    fourier_amplitudes,
    load_state,
    make_corrupted_state,
    overlap,
    parity_signs,
    parity_state,
    phase_state_of,
    project_onto_span,
    random_state,
    uniform_state,
    walsh_hadamard,
    wht_array,
)
from .weak import (
    WeakLearner,
    agnostic_parity_learner,
    mansour_budget,
    parity_weak_learner,
    wal_decision_tree,
    wal_dnf,
)

__version__ = "0.1.0"
