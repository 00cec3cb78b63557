class CGClusterError(Exception):
    pass


class DimensionError(CGClusterError, ValueError):
    pass


class DomainError(CGClusterError, ValueError):
    pass


class SingularityError(CGClusterError, ZeroDivisionError):
    pass


class SamplingError(CGClusterError, RuntimeError):
    pass


class MutationError(CGClusterError, ValueError):
    pass


class AdmissibilityError(CGClusterError, ZeroDivisionError):
    def __init__(self, message, vertex=None, point_index=None):
        super().__init__(message)
        self.vertex = vertex
        self.point_index = point_index


class ScriptError(CGClusterError):
    def __init__(self, message, step_index, step=None):
        super().__init__(f'step {step_index}: {message}')
        self.step_index = step_index
        self.step = step


class UnsupportedError(CGClusterError, NotImplementedError):
    pass
