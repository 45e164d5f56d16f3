"""Result record shared by all estimators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class EstimateReport:
    """Final estimate plus the cost and diagnostics of one estimator run.

    ``flags`` collects diagnostic tags such as ``"coarse_fallthrough"``,
    ``"promise_unverified"``, ``"round_cap"`` or ``"iteration_cap"``.
    """

    estimate: float
    exact_flag: bool = False
    fallback_flag: bool = False
    rounds: int = 0
    queries: dict = field(default_factory=lambda: {"bis": 0, "is": 0})
    seed: int | None = None
    preset: str = "practical"
    flags: list[str] = field(default_factory=list)

    def add_flag(self, tag: str) -> None:
        if tag not in self.flags:
            self.flags.append(tag)

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "exact_flag": self.exact_flag,
            "fallback_flag": self.fallback_flag,
            "rounds": self.rounds,
            "queries": dict(self.queries),
            "seed": self.seed,
            "preset": self.preset,
            "flags": list(self.flags),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
