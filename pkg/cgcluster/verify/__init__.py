from .report import VerificationReport, exit_code, render_table, reports_to_json
from .checks import (
    casimir_and_rank,
    check_antipoisson,
    check_block_traces,
    check_compat,
    check_double_logcanon,
    check_semi_invariance,
    numeric_omega,
)
from .identities import (
    check_diagonal_calculus,
    check_dj_samples,
    check_extra_variables,
    check_layouts,
    check_regularity,
    dj_engine,
)
from .toric import WeightMatrix, check_toric, recover_exchange_matrix, toric_weights

__all__ = [
    'VerificationReport',
    'WeightMatrix',
    'casimir_and_rank',
    'check_antipoisson',
    'check_block_traces',
    'check_compat',
    'check_diagonal_calculus',
    'check_dj_samples',
    'check_double_logcanon',
    'check_extra_variables',
    'check_layouts',
    'check_regularity',
    'check_semi_invariance',
    'check_toric',
    'dj_engine',
    'exit_code',
    'numeric_omega',
    'recover_exchange_matrix',
    'render_table',
    'reports_to_json',
    'toric_weights',
]
