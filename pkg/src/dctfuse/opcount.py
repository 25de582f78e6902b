"""Operation-count instrumentation for the fusion decision stage.

Counts model what the decision hardware would execute per block, so they
are incremented analytically by the measure implementations (the Python
code itself is vectorized).  The DCT butterflies are deliberately not
counted: complexity comparisons between focus measures exclude the
transform they all share.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict


@dataclass
class OpCounter:
    additions: int = 0
    multiplications: int = 0
    comparisons: int = 0
    conditional_increments: int = 0

    def add(self, additions=0, multiplications=0, comparisons=0, conditional_increments=0):
        if min(additions, multiplications, comparisons, conditional_increments) < 0:
            raise ValueError("operation counts are monotonic; negative increments not allowed")
        self.additions += additions
        self.multiplications += multiplications
        self.comparisons += comparisons
        self.conditional_increments += conditional_increments

    def merge(self, other: "OpCounter") -> None:
        """Fold a per-worker counter into this one."""
        self.add(other.additions, other.multiplications,
                 other.comparisons, other.conditional_increments)

    def as_dict(self) -> dict:
        return asdict(self)
