"""Log-log slope of gap versus K."""

from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..exceptions import FitWindowError


GapSeries = Union[pd.DataFrame, Sequence[Tuple[int, float]], np.ndarray]


def _columns(data: GapSeries) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(data, pd.DataFrame):
        return data["K"].to_numpy(dtype=float), data["gap"].to_numpy(dtype=float)
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        # gap indexed by K = 0..len-1
        return np.arange(arr.shape[0], dtype=float), arr
    return arr[:, 0], arr[:, 1]


def default_window(k_max: float) -> Tuple[float, float]:
    """[K/10, K], which skips the initial transient."""
    return max(1.0, k_max / 10.0), k_max


def rate_fit(data: GapSeries, k_min: Optional[float] = None, k_max: Optional[float] = None) -> float:
    """Least-squares slope of log(gap) against log(K) over [k_min, k_max].

    Args:
        data: DataFrame with K and gap columns, (K, gap) pairs, or a gap array indexed by K

    Raises:
        FitWindowError: a nonpositive gap in the window, or fewer than two points
    """
    ks, gaps = _columns(data)
    lo, hi = default_window(float(ks.max()) if ks.size else 0.0)
    lo = lo if k_min is None else k_min
    hi = hi if k_max is None else k_max
    mask = (ks >= lo) & (ks <= hi) & (ks > 0)
    if mask.sum() < 2:
        raise FitWindowError("Fit window holds fewer than two points",
                             context={"k_min": lo, "k_max": hi})
    window = gaps[mask]
    if np.any(window <= 0):
        first = float(ks[mask][np.argmax(window <= 0)])
        raise FitWindowError(
            "Nonpositive gap in fit window; shrink the window or report exact convergence",
            context={"K": first, "k_min": lo, "k_max": hi}
        )
    slope, _ = np.polyfit(np.log(ks[mask]), np.log(window), 1)
    return float(slope)
