"""Result record shared by the set-side and subspace-side resilience checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass
class ResilienceReport:
    """Outcome of one removal experiment.

    ``equal`` is always derived from the two ranks, never supplied, so a
    report can not disagree with its own numbers.  ``certificate`` is a
    PermCert, a GLCert, or None.  ``elapsed_s`` is wall-clock seconds.
    """

    mode: str
    n: int
    r: int
    s: int
    q: int | None
    field_str: str
    removed: tuple[int, ...]
    computed_rank: int
    formula_rank: int
    certificate: Any
    elapsed_s: float

    def __post_init__(self):
        if self.mode not in ("set", "q"):
            raise ValueError(f"bad mode {self.mode!r}")

    @property
    def equal(self) -> bool:
        return self.computed_rank == self.formula_rank
