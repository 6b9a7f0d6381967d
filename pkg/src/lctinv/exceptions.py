"""Exception types raised across the package."""


class LCTError(ValueError):
    """Base class for all validation errors raised by lctinv."""


class DimensionError(LCTError):
    """Array shapes are inconsistent with each other or with the metric."""


class NotSymplecticError(LCTError):
    """A matrix expected to be in Sp(2D+, 2D-) fails the symplectic test."""


class MinimalUncertaintyError(LCTError):
    """A covariance does not describe a minimal-uncertainty Gaussian state."""


class NormalizabilityError(LCTError):
    """A Gaussian wavefunction cannot be normalized (Re(B) not positive definite)."""


class TruncationError(LCTError):
    """A truncated basis or quadrature window is too small for the requested accuracy."""
