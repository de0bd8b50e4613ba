from enum import Enum, IntEnum


class SimulationMode(str, Enum):
    stable = "stable"
    balanced = "balanced"
    nash = "nash"


class NoiseKind(str, Enum):
    none = "none"
    uniform = "uniform"
    gauss = "gauss"


class OutcomeClass(str, Enum):
    valid = "valid"
    stable = "stable"
    balanced = "balanced"
    nash = "nash"


class ExitCode(IntEnum):
    ok = 0
    not_confirmed = 1
    undecided = 2
    diverged = 3
    input_error = 4
    internal_error = 5
