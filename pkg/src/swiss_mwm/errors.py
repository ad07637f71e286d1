"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SwissError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SwissError, ValueError):
    """An argument violates a documented precondition."""


class UnknownPlayer(DomainError):
    """A record refers to a player id that is not in the tournament."""


class RepeatedPairing(DomainError):
    """Two players would meet for a second time."""


class DuplicateBye(DomainError):
    """A player would receive a second bye."""


class NoPerfectMatching(SwissError):
    """The graph structure does not admit a perfect matching."""


class TooLarge(DomainError):
    """Instance exceeds the guard for exhaustive enumeration."""


class AllPlayersHadBye(SwissError):
    """Every player has already received a bye; none can be selected."""


class EncodingOverflow(DomainError):
    """Scalar weight encoding cannot separate lexicographic levels."""


class NoLegalPairing(SwissError):
    """No perfect matching exists even after the color-relaxation fallback."""


class EmptySupport(DomainError):
    """An empirical strength file has no values inside the requested range."""


class CalibrationFailed(SwissError):
    """Outcome-model calibration could not reach the residual bound."""
