"""Exception hierarchy shared by all modules."""


class PetriError(Exception):
    """Base class for every error raised by petrisynth."""


class UnknownNodeError(PetriError, KeyError):
    """A place or transition name does not exist in the net."""

    def __str__(self):
        return Exception.__str__(self)


class InvalidNetError(PetriError, ValueError):
    """A net, game or unfolding violates a structural invariant."""


class FiringError(PetriError):
    """A transition (or step) was fired while not enabled."""


class UnsafeNetError(PetriError):
    """A firing would put a second token on a place."""


class ConflictError(FiringError):
    """Transitions of one concurrent step share a preset place."""


class NonDeterminismError(PetriError):
    """Two enabled transitions compete for the same place.

    ``place`` and ``transitions`` carry the witness.
    """

    def __init__(self, message, place=None, transitions=()):
        super().__init__(message)
        self.place = place
        self.transitions = tuple(transitions)


class ReorderError(PetriError):
    """An adjacent swap does not produce a valid trace."""


class ResourceLimitError(PetriError):
    """A configurable size guard was exceeded."""


class SoundnessAlarm(PetriError):
    """A solver reported SAT but the extracted strategy failed validation."""

    def __init__(self, message, report=None, artifacts=None):
        super().__init__(message)
        self.report = report
        self.artifacts = artifacts or {}
