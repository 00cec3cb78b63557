from .bracket import BracketContext, GradPair, double_bracket, grad_minor, sklyanin_bracket
from .cgmat import MinorSpec, aux_spec, dims, initial_cluster, initial_values, w0_values, zeta
from .diagcalc import OmegaMatrix, omega_formula, verify_prop_identities
from .exactla import SampleConfig, as_matrix, det, inverse, rank, sample_points

__all__ = [
    'BracketContext',
    'GradPair',
    'MinorSpec',
    'OmegaMatrix',
    'SampleConfig',
    'as_matrix',
    'aux_spec',
    'det',
    'dims',
    'double_bracket',
    'grad_minor',
    'initial_cluster',
    'initial_values',
    'inverse',
    'omega_formula',
    'rank',
    'sample_points',
    'sklyanin_bracket',
    'verify_prop_identities',
    'w0_values',
    'zeta',
]
