"""Shared partial-outcome values.

Decision procedures never guess: any question outside the certified rule
set is answered by an explicit value carrying a machine-readable reason
code, so downstream callers (and the CLI exit code) can distinguish honest
partiality from definite verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass, field


# Reason codes used across modules.  Keep these stable: the partiality test
# suite greps for them.
REASON_BLOCK_COLLISION = "block-collision"
REASON_ADJACENT_OPPOSITE = "adjacent-opposite-sign"
REASON_ADJACENT_EQUAL = "adjacent-equal-sign"
REASON_CENTRAL_EXPONENT = "central-exponent-derivative"
REASON_NEGATIVE_LOWERING = "negative-exponent-lowering"
REASON_CENTER_ZERO_SEGMENT = "center-zero-segment"
REASON_MIXED_ROUTES = "mixed-derivative-routes"
REASON_MULTIPLICITY = "derivative-multiplicity"
REASON_DUAL_AMBIGUOUS = "dual-ambiguous"
REASON_DUAL_UNAVAILABLE = "dual-unavailable"
REASON_ORACLE_NEEDED = "oracle-needed"
REASON_EPS_COLLISION = "eps-collision"


@dataclass(frozen=True)
class Zero:
    """A derivative certified to vanish."""

    reason: str = ""


@dataclass(frozen=True)
class Unknown:
    """Outside the certified rule set; not an error."""

    reason: str


@dataclass(frozen=True)
class Vanishes:
    """An extended multi-segment certified to evaluate to zero."""

    reason: str


@dataclass(frozen=True)
class NeedsOracle:
    """Answer depends on facts delegated to an external oracle."""

    reason: str
    detail: dict = field(default_factory=dict, compare=False)
