"""Small tagged results returned by budgeted and search procedures."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Exact:
    """The count is known exactly."""

    value: int


@dataclass(frozen=True)
class AtLeast:
    """A budgeted count stopped early; the true count is at least ``value``."""

    value: int


@dataclass(frozen=True)
class MoreThan:
    """The count exceeds ``bound``."""

    bound: float


@dataclass(frozen=True)
class AtMost:
    """The count is at most ``bound``."""

    bound: float


@dataclass(frozen=True)
class Below:
    """A size test concluded the set is smaller than the guess ``g``."""

    g: float
    probes: int = 0


@dataclass(frozen=True)
class Estimate:
    value: float
    probes: int = 0
    degenerate: bool = False
