"""Strategies for the elegant Bell inequality: construction, optimization,
structural verification, and the isometry-based self-test."""

from .family import (
    Block,
    BlochPoint,
    FamilySpec,
    bloch_export,
    build_family,
    d_operators,
    reference_experiment,
    single_block_spec,
)
from .optimizer import SeesawConfig, SeesawResult, random_start, seesaw
from .scenario import (
    CLASSICAL_BOUND,
    EBI_SIGNS,
    QUANTUM_MAX,
    Observable,
    Scenario,
    bell_operator,
    classical_max_bruteforce,
    correlation_table,
    correlator,
    ebi_value,
)
from .selftest import (
    IsometryOutput,
    SelfTestReport,
    SwapGadget,
    equivalence_check,
    eve_indistinguishability,
    junk_split,
    necessary_correlator,
    stora_prediction,
    swap_isometry,
)
from .structure import (
    BlockDecomposition,
    CheckReport,
    VerificationResult,
    check_anticommutation,
    check_maximal,
    check_support_preservation,
    extract_blocks,
    full_verification,
    verify_state_form,
)

__all__ = [
    "Block",
    "BlochPoint",
    "BlockDecomposition",
    "CheckReport",
    "CLASSICAL_BOUND",
    "EBI_SIGNS",
    "FamilySpec",
    "IsometryOutput",
    "Observable",
    "QUANTUM_MAX",
    "Scenario",
    "SeesawConfig",
    "SeesawResult",
    "SelfTestReport",
    "SwapGadget",
    "VerificationResult",
    "bell_operator",
    "bloch_export",
    "build_family",
    "check_anticommutation",
    "check_maximal",
    "check_support_preservation",
    "classical_max_bruteforce",
    "correlation_table",
    "correlator",
    "d_operators",
    "ebi_value",
    "equivalence_check",
    "eve_indistinguishability",
    "extract_blocks",
    "full_verification",
    "junk_split",
    "necessary_correlator",
    "random_start",
    "reference_experiment",
    "seesaw",
    "single_block_spec",
    "stora_prediction",
    "swap_isometry",
    "verify_state_form",
]
