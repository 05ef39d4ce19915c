"""Genus-2 Kleinian functions, period matrices, and the Abel map.

Numerical evaluation for hyperelliptic curves y^2 = f(x) of genus 2 via a
quadratically convergent Richelot-isogeny tower, cross-checked against a
theta-series oracle.
"""

from ._core import (
    AbelResult,
    CertificateError,
    Context,
    ConvergenceError,
    CurvePoint,
    Disk,
    InputError,
    on_curve_residual,
)

__all__ = [
    "AbelResult",
    "CertificateError",
    "Context",
    "ConvergenceError",
    "CurvePoint",
    "Disk",
    "InputError",
    "on_curve_residual",
]

__version__ = "0.1.0"
