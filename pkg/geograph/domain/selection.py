from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, Sequence, TypeVar


class ScoredRecord(Protocol):
    val_acc_mean: float
    val_acc_std: float
    edge_density: float
    runs: int


R = TypeVar("R", bound=ScoredRecord)


@dataclass(frozen=True, slots=True)
class SelectionPolicy:
    """Defines which sweep record counts as "the optimum".

    Semantics (intentionally centralized):
    - best: highest mean validation accuracy; ties go to the lower edge density,
      then to the earlier record.
    - sparsest_within_one_se: among records whose mean validation accuracy is
      within one standard error of the best, the one with the lowest edge
      density (ties to the later record, i.e. the larger sparsity parameter
      for ascending sigma grids).

    Note: the tolerance is inclusive. A record exactly one standard error below
    the best is still a candidate.
    """

    tolerance_se: float = 1.0

    def best(self, records: Sequence[R]) -> R:
        best = records[0]
        for rec in records[1:]:
            if rec.val_acc_mean > best.val_acc_mean or (
                rec.val_acc_mean == best.val_acc_mean
                and rec.edge_density < best.edge_density
            ):
                best = rec
        return best

    def standard_error(self, record: ScoredRecord) -> float:
        return record.val_acc_std / math.sqrt(max(record.runs, 1))

    def sparsest_within_one_se(self, records: Sequence[R]) -> R:
        best = self.best(records)
        threshold = best.val_acc_mean - self.tolerance_se * self.standard_error(best)
        chosen = best
        for rec in records:
            if rec.val_acc_mean >= threshold and rec.edge_density <= chosen.edge_density:
                chosen = rec
        return chosen

    def beats(self, candidate: ScoredRecord, reference: ScoredRecord) -> bool:
        """Strict improvement in mean validation accuracy."""
        return candidate.val_acc_mean > reference.val_acc_mean
