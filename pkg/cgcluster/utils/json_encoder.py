import json
from fractions import Fraction

import numpy as np


def fraction_to_json(value):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value.numerator)
        return f'{value.numerator}/{value.denominator}'
    return value


class FractionEncoder(json.JSONEncoder):
    def default(self, obj):
        if isinstance(obj, Fraction):
            return fraction_to_json(obj)
        if isinstance(obj, np.ndarray):
            return [self.default(x) if isinstance(x, (Fraction, np.ndarray)) else x for x in obj.tolist()]
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, (set, frozenset)):
            return sorted(obj)
        return json.JSONEncoder.default(self, obj)


def dumps(obj, indent=2):
    """Deterministic JSON text: sorted keys, Fractions as "p/q"."""
    return json.dumps(_normalize(obj), cls=FractionEncoder, indent=indent, sort_keys=True)


def _normalize(obj):
    # tuple keys are not valid JSON keys; (i, j) labels become "i,j"
    if isinstance(obj, dict):
        return {_key(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_normalize(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return fraction_to_json(obj)
    return obj


def _key(k):
    if isinstance(k, tuple):
        return ','.join(str(x) for x in k)
    return str(k)
