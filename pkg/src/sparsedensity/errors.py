"""Exception types shared across the package."""


class SparseDensityError(Exception):
    """Base class for package errors."""


class DictionaryError(SparseDensityError):
    """Unsupported dictionary kind or unsatisfiable sizing constraints."""


class QuadratureError(SparseDensityError):
    """Adaptive quadrature failed to converge; carries the offending pair."""


class ConfigError(SparseDensityError):
    """Invalid experiment or CLI configuration."""


class SolverError(SparseDensityError):
    """Solver failed (infeasible problem or iteration limit)."""

    def __init__(self, message, status="Infeasible", report=None):
        super().__init__(message)
        self.status = status
        self.report = report


class IllConditionedError(SparseDensityError):
    """Restricted Gram submatrix too ill-conditioned for a least-squares refit."""

    def __init__(self, message, condition_number):
        super().__init__(message)
        self.condition_number = condition_number


class BudgetExceededError(SparseDensityError):
    """Combinatorial enumeration budget exceeded."""
