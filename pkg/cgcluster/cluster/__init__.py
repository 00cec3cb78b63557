from .quiver import ExtExchangeMatrix, Quiver, build_qcg, labeled_isomorphic
from .seeds import Seed, attach_initial_seed, mutate_seed, run_script
from .seq_s import SequenceSpec, gen_seq_S, verify_transform1
from .seq_t import gen_seq_T, verify_transform2

__all__ = [
    'ExtExchangeMatrix',
    'Quiver',
    'Seed',
    'SequenceSpec',
    'attach_initial_seed',
    'build_qcg',
    'gen_seq_S',
    'gen_seq_T',
    'labeled_isomorphic',
    'mutate_seed',
    'run_script',
    'verify_transform1',
    'verify_transform2',
]
