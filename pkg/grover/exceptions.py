"""
Error taxonomy shared by the numerics, the sweeps and the CLI.
"""
from django.core.exceptions import ValidationError


LARGE_LAMBDA_GUIDANCE = (
    "For 1/4 < lambda < 1/2 there is no significant quantum advantage: "
    "use a single query of standard Grover's search (non-deterministic) "
    "or any classical algorithm."
)


class DomainError(ValidationError):
    """An input lies outside the domain of the requested operation."""

    def __str__(self):
        return '; '.join(self.messages)


class NoConvergence(Exception):
    """The phase solver found no root from any of its starting points."""

    def __init__(self, message, lam=None, alpha=None, k=None):
        super().__init__(message)
        self.lam = lam
        self.alpha = alpha
        self.k = k


class OutOfSubspace(Exception):
    """A statevector has a component outside span{|R>, |T>}."""

    def __init__(self, residual):
        super().__init__(f"State leaves the {{|R>, |T>}} subspace (residual {residual:.3e})")
        self.residual = residual


class ExportError(Exception):
    """Writing an export file failed."""

    def __init__(self, path, error):
        super().__init__(f"Could not write {path}: {error}")
        self.path = path
