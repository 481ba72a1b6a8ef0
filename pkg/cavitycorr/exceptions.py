# exceptions


class CavityCorrError(Exception):
    def __init__(self, msg: str = ""):
        Exception.__init__(self, msg)
        self.msg = msg


class InvalidSubspace(CavityCorrError):
    pass


class NotNormalised(CavityCorrError):
    pass


class InvalidDensityMatrix(CavityCorrError):
    pass


class InvalidSubsystem(CavityCorrError):
    pass


class InvalidWindow(CavityCorrError):
    pass


class InvalidSchedule(CavityCorrError):
    pass


class InvalidTime(CavityCorrError):
    pass


class MethodNotAvailable(CavityCorrError):
    def __init__(self, mstr: str, reason: str = ""):
        CavityCorrError.__init__(self, f"{mstr} not available: {reason}" if reason else mstr)
        self.method_str = mstr


class StepSizeError(CavityCorrError):
    pass


class UnreachableTarget(CavityCorrError):
    pass


class InvariantViolation(CavityCorrError):
    def __init__(self, name: str, value: float = 0.0, tol: float = 0.0, seed: int = None):
        msg = f"{name}: violation {value:.3e} exceeds tolerance {tol:.1e}"
        if seed is not None:
            msg += f" (reproduce with --seed {seed})"
        CavityCorrError.__init__(self, msg)
        self.invariant = name
        self.value = value
        self.seed = seed


class InvalidConfig(CavityCorrError):
    def __init__(self, field: str, reason: str = ""):
        CavityCorrError.__init__(self, f"invalid value for '{field}': {reason}")
        self.field = field


class DataNotFound(CavityCorrError):
    pass


class InvalidResult(CavityCorrError):
    pass
