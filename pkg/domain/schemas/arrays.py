from typing import Annotated

import numpy as np
from pydantic import BeforeValidator


def _as_float_array(value) -> np.ndarray:
    array = np.array(value, dtype=float)
    if array.ndim == 0:
        array = array.reshape(1)
    return array


FloatArray = Annotated[np.ndarray, BeforeValidator(_as_float_array)]
