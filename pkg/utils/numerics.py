import numpy as np


def positive_part(value: float) -> float:
    return value if value > 0 else 0.0


def sup_norm(*vectors: np.ndarray) -> float:
    """Largest absolute entry over all given vectors (0 for empty input)."""
    norms = [float(np.max(np.abs(v))) for v in vectors if np.size(v)]
    return max(norms, default=0.0)
