from .config import Config
from .config_loader import ConfigLoader
from .errors import (
    AdmissibilityError,
    CGClusterError,
    DimensionError,
    DomainError,
    MutationError,
    SamplingError,
    ScriptError,
    SingularityError,
    UnsupportedError,
)
from .json_encoder import FractionEncoder, dumps
from .logger import get_logger, setup_logging

__all__ = [
    'Config',
    'ConfigLoader',
    'FractionEncoder',
    'dumps',
    'get_logger',
    'setup_logging',
    'CGClusterError',
    'DimensionError',
    'DomainError',
    'SingularityError',
    'SamplingError',
    'MutationError',
    'AdmissibilityError',
    'ScriptError',
    'UnsupportedError',
]
