"""Exception hierarchy.

Everything raised on purpose by this package derives from PhaseboostError so
callers can catch one type at a batch boundary. The CLI maps ParameterError
and ConfigurationError to exit code 2 and every other PhaseboostError to 3.
"""
from __future__ import annotations


class PhaseboostError(Exception):
    """Base class for all deliberate failures."""


class ParameterError(PhaseboostError, ValueError):
    """An argument is outside its documented range or structurally invalid."""


class ResourceLimitError(PhaseboostError):
    """A size guard tripped (qubit cap, SVD side cap, iteration cap)."""


class ConfigurationError(PhaseboostError):
    """A derived configuration is unusable at desk scale."""


class ContractViolationError(PhaseboostError):
    """A component broke a documented contract (e.g. duplicate parity labels)."""


class PostSelectionFailureError(PhaseboostError):
    """Residual preparation exhausted its attempt cap without a success."""


class DegenerateResidualError(PhaseboostError):
    """The requested residual has (numerically) zero norm."""


class PromiseViolationError(PhaseboostError):
    """An estimate contradicts a promised lower bound (mu assumption broken)."""


class ThresholdDegenerateError(PhaseboostError):
    """A derived search threshold fell below the resolution of the state space."""
