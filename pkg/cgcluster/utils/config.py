class Config(dict):
    __setattr__ = dict.__setitem__
    __delattr__ = dict.__delitem__

    def __getattr__(self, key):
        value = self.get(key, {})
        return Config(value) if isinstance(value, dict) else value

    def merged(self, **overrides):
        """Copy with non-None overrides applied, e.g. values coming from argparse."""
        config = Config(self)
        for k, v in overrides.items():
            if v is not None:
                config[k] = v
        return config
