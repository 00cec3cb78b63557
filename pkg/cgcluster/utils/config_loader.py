import json
import os
import os.path
import warnings

from .config import Config

DEFAULT_MAIN_CONFIG = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
    'config', 'main.json',
)

SAMPLING_DEFAULTS = {
    'rng_seed': 42,
    'entry_bound': 1000,
    'num_points': 3,
    'max_retries': 200,
    'max_resamples': 10,
}

REPORT_DEFAULTS = {
    'n_values': [3, 4, 5],
    'checks': [],
    'workers': 1,
    'indent': 2,
}


class ConfigLoader:
    def __init__(
        self,
        main_config_path=DEFAULT_MAIN_CONFIG,
    ):
        self.config = Config()
        self.config['main'] = {}
        if os.path.isfile(main_config_path):
            self.config['main'] = self.load_config(main_config_path)
        else:
            warnings.warn(f'Config[main]: `{main_config_path}` does not exist!')
        # section paths are relative to the repository root, one level above config/
        root = os.path.dirname(os.path.dirname(os.path.abspath(main_config_path)))
        for k, v in self.config['main'].items():
            if k == '__COMMENT__':
                continue
            path = v if os.path.isabs(v) else os.path.normpath(os.path.join(root, v))
            if os.path.isfile(path):
                self.config[k] = self.load_config(path)
            else:
                warnings.warn(f'Config[{k}]: `{v}` does not exist!')

    @property
    def sampling(self):
        env_seed = os.environ.get('CGCL_SEED')
        return Config(SAMPLING_DEFAULTS).merged(**self.config.get('sampling', {})).merged(
            rng_seed=int(env_seed) if env_seed is not None else None,
        )

    @property
    def report(self):
        return Config(REPORT_DEFAULTS).merged(**self.config.get('report', {}))

    def load_config(self, config_path):
        with open(config_path, 'r') as f:
            config = json.load(f)
        return {k: v for k, v in config.items() if k != '__COMMENT__'}
