"""Per-iteration run records and their CSV form."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..exceptions import TraceError


@dataclass(frozen=True)
class TraceRow:
    """One recorded iterate."""

    k: int
    x: np.ndarray
    lam: np.ndarray
    objective: float
    primal_residual: float
    gap: Optional[float] = None

    def vector(self) -> np.ndarray:
        """(x, λ) stacked, the quantity compared by iterate_equivalence."""
        return np.concatenate([self.x, self.lam])


@dataclass
class Trace:
    """Rows k = 0..K of a run, the initial point included."""

    rows: List[TraceRow] = field(default_factory=list)
    algorithm: str = ""

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, k: int) -> TraceRow:
        return self.rows[k]

    def append(self, row: TraceRow) -> None:
        if self.rows and row.k <= self.rows[-1].k:
            raise TraceError(
                "Trace rows must have strictly increasing k",
                context={"last": self.rows[-1].k, "new": row.k}
            )
        self.rows.append(row)

    @property
    def xs(self) -> np.ndarray:
        return np.array([row.x for row in self.rows])

    @property
    def lams(self) -> np.ndarray:
        return np.array([row.lam for row in self.rows])

    @property
    def final(self) -> TraceRow:
        if not self.rows:
            raise TraceError("Empty trace")
        return self.rows[-1]

    def columns(self) -> List[str]:
        n = self.rows[0].x.shape[0] if self.rows else 0
        m = self.rows[0].lam.shape[0] if self.rows else 0
        return (
            ["k", "objective", "primal_residual", "gap"]
            + [f"x_{i}" for i in range(n)]
            + [f"lambda_{j}" for j in range(m)]
        )

    def to_frame(self) -> pd.DataFrame:
        records = [
            [row.k, row.objective, row.primal_residual,
             np.nan if row.gap is None else row.gap, *row.x, *row.lam]
            for row in self.rows
        ]
        frame = pd.DataFrame(records, columns=self.columns())
        frame["k"] = frame["k"].astype(int)
        return frame

    def to_csv(self, path: Union[str, Path, None] = None) -> Optional[str]:
        """Write the trace as CSV; unset gaps are empty fields.

        Returns the CSV text when no path is given.
        """
        return self.to_frame().to_csv(path, index=False, float_format="%.17g", na_rep="")


def build_trace(
    problem,
    pairs: Sequence[Tuple[np.ndarray, np.ndarray]],
    algorithm: str = "",
    gaps: Optional[Iterable[Optional[float]]] = None,
) -> Trace:
    """Turn a sequence of (x^k, λ^k) into a Trace with objective and residual columns."""
    gap_list = list(gaps) if gaps is not None else [None] * len(pairs)
    trace = Trace(algorithm=algorithm)
    for k, ((x, lam), gap) in enumerate(zip(pairs, gap_list)):
        trace.append(TraceRow(
            k=k,
            x=np.asarray(x, dtype=float),
            lam=np.asarray(lam, dtype=float),
            objective=float(problem.value(x)),
            primal_residual=problem.residual_norm(x),
            gap=None if gap is None or not np.isfinite(gap) else float(gap),
        ))
    return trace
