"""Exception and warning types shared across the package.

Class names double as the error names reported by the CLI (exit-code
diagnostics), so they are kept short and stable.
"""


class NotHermitian(ValueError):
    """Input matrix is not Hermitian within the required tolerance."""


class DimensionMismatch(ValueError):
    """Vector/matrix dimensions are inconsistent with the declared split."""


class InvalidScenario(ValueError):
    """A state or observable violates its construction invariants."""


class SpecInvalid(ValueError):
    """A family specification violates normalization or ordering."""


class NotMaximal(RuntimeError):
    """Scenario does not reach the quantum maximum 4*sqrt(3)."""


class UnequalEigenspaceSplit(RuntimeError):
    """Restricted first observable does not split an eigenspace evenly."""


class NonYBlock(RuntimeError):
    """Third observable has a 2x2 block not proportional to Pauli Y."""


class TransposeMismatch(RuntimeError):
    """Bob's observables fail the blockwise transpose reconstruction."""


class NotInvolution(RuntimeError):
    """Derived operator expected to square to the identity does not."""


class UnsupportedDimension(ValueError):
    """Operation defined only for qubit (2-dimensional) parties."""


class ZeroEigenvalueWarning(UserWarning):
    """A near-zero eigenvalue was rounded to +1 by the spectral sign."""
