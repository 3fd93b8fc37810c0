"""Desk-scale verification lab for a permutation/phase/Clifford unitary ensemble.

Exact Schur-Weyl machinery, twirl channels with exact and Monte-Carlo
paths, a toy keyed instantiation of the ensemble, and an experiment
harness that checks every identity and bound of the underlying analysis
at machine precision.
"""

from .errors import (
    CapacityError,
    ConsistencyError,
    DegenerateInputError,
    DomainError,
    PruLabError,
)
from .symgroup import (
    IrrepMatrices,
    Partition,
    PermutationT,
    all_permutations,
    character,
    partitions,
    specht_dim,
    standard_tableaux,
    weyl_dim,
    young_orthogonal_rep,
)
from .operators import (
    BooleanFunction,
    DenseOperator,
    DensityMatrix,
    PermutationD,
    StateVector,
    apply_to_registers,
    distinct_projector,
    partial_trace,
    perm_op,
    phase_op,
    sample_haar_unitary,
    subsystem_perm_op,
    tensor_power,
    trace_distance,
)
from .clifford import CliffordElement, enumerate_cliffords, sample_clifford
from .schur_weyl import (
    IsotypicBlock,
    IsotypicDecomposition,
    distinct_block,
    isotypic_projector,
    partial_trace_over_W,
    ratio_report,
    schur_weyl_basis,
    verify_decomposition,
)
from .twirls import (
    TwirlSpec,
    clifford_twirl,
    distinct_overlap_after_clifford,
    ensemble_twirl,
    haar_twirl_exact,
    haar_twirl_mc,
    haar_twirl_schur_weyl,
    pf_twirl,
    pf_twirl_basis_element,
    pf_twirl_distinct_formula,
    pf_twirl_mc,
)
from .pru import (
    PrfScheme,
    PrpScheme,
    PruKey,
    pru_average_state,
    pru_average_state_from_keys,
    pru_unitary,
    sample_key,
    sample_keys,
)
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    BoundCheck,
    build_state,
    gentle_normalize,
    run_security_experiment,
    strip_timing_fields,
)
from .checks import run_lemma_suite
from .cli import cli_main

__version__ = "0.1.0"
