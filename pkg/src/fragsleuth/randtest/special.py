"""Special functions backing the statistical tests.

``erfc`` delegates to the C library via :mod:`math`; ``igamc`` is the
regularized upper incomplete gamma function Q(a, x), delegated to
scipy.  Both carry the domain checks and accuracy the tests rely on
(erfc absolute error <= 1e-10 on |x| <= 10, igamc relative error
<= 1e-8), which the test suite verifies against high-precision oracles
and analytic identities.
"""

from __future__ import annotations

import math

from scipy.special import gammaincc

from ..errors import DomainError


def erfc(x: float) -> float:
    """Complementary error function."""
    if math.isnan(x) or math.isinf(x):
        raise DomainError(f"erfc requires finite x, got {x!r}")
    return math.erfc(x)


def igamc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0."""
    if not a > 0:
        raise DomainError(f"igamc requires a > 0, got {a!r}")
    if not x >= 0:
        raise DomainError(f"igamc requires x >= 0, got {x!r}")
    return float(gammaincc(a, x))
