"""Pinching constants and pinching quantities.

The quadratic pinching condition reads |A|^2 <= c |H|^2 - d with a
dimension-dependent coefficient c and an offset d that absorbs background
curvature.  This module computes the admissible c for each estimate regime
(exact rationals, so regime-boundary comparisons are not at the mercy of
rounding), the lower bound for d from the sectional-curvature and
derivative-of-curvature bounds, the gradient-estimate constant
kappa = 3/(n+2) - c, and evaluates the scalar pinching quantities

    f = c |H|^2 - |A|^2 - d          (flat / bounded background)
    Q = |Aring|^2 - (c - 1/n) |H|^2 - d Kbar   (space form)

on decomposed forms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidConstants, NonpositiveKappa, UnsupportedDimension
from .forms import Dims, MeanCurvature, PrincipalDecomposition

REGIMES = ("euclidean", "bounded_background", "space_form")


def c_n(n: int, regime: str = "general") -> Fraction:
    """Admissible pinching coefficient, as an exact fraction.

    ``general`` is min{4/(3n), 1/(n-2)}; ``codim_estimate`` is the slightly
    different constant the codimension estimate needs for n in {5, 6, 7}.
    Only stated for n >= 5.
    """
    if n < 5:
        raise UnsupportedDimension(f"pinching coefficient undefined for n={n} < 5")
    if regime == "general":
        return min(Fraction(4, 3 * n), Fraction(1, n - 2))
    if regime == "codim_estimate":
        if n >= 8:
            return Fraction(4, 3 * n)
        return Fraction(3 * (n + 1), 2 * n * (n + 2))
    raise ValueError(f"unknown regime {regime!r}")


def d_lower_bound(
    n: int,
    m: int,
    c: float | Fraction,
    K1: float,
    K2: float,
    L: float,
    rho: float = 1.0,
    theta: float = 1.0,
    vartheta: float = 1.0,
) -> float:
    """Lower bound for the pinching offset d under the background bounds.

    Assembles the four constants C1..C4 from (n, m, c, K1, K2, L) and the
    free Young parameters rho, theta, vartheta (all default 1) and returns

        max{ C1 (c - 1/n) / (2c),
             C2 n (c - 1/n) / 4,
             (n (c - 1/n) / 4) (C3 + sqrt(C3^2 + 8 C4 / (n (c - 1/n)))) }.

    Returns 0 when K1 + K2 = 0 and L = 0 (flat regime needs no offset).
    """
    c = float(c)
    if c <= 1.0 / n:
        raise InvalidConstants(f"need c > 1/n, got c={c} for n={n}")
    if min(K1, K2, L) < 0:
        raise InvalidConstants("curvature bounds K1, K2, L must be nonnegative")
    if min(rho, theta, vartheta) <= 0:
        raise InvalidConstants("rho, theta, vartheta must be positive")
    if K1 + K2 == 0 and L == 0:
        return 0.0
    g = c - 1.0 / n
    base = 4 * n * K1 + 2 * n * K2 + 2 * (n * c * K1 + K2) / g
    C1 = base + (rho * n * (m - 1) + n * (m - 2)
                 + 16.0 / 3.0 * rho * (n - 1) * (m - 1)) * (K1 + K2) + theta
    C2 = base + (n / rho + 16.0 / (3.0 * rho) * (n - 1)
                 + 8.0 / 3.0 * math.sqrt(n - 1) * (m - 2)) * (K1 + K2) + n * vartheta
    C3 = 2 * (n * c * K1 + K2) / g
    C4 = L * L / theta + 4 * L * L / vartheta if K1 + K2 != 0 else 0.0
    return max(
        C1 * g / (2 * c),
        C2 * n * g / 4,
        n * g / 4 * (C3 + math.sqrt(C3 * C3 + 8 * C4 / (n * g))),
    )


def kappa_n(n: int, c: float | Fraction) -> float:
    """Gradient-estimate constant 3/(n+2) - c; must be positive."""
    kappa = 3.0 / (n + 2) - float(c)
    if kappa <= 0:
        raise NonpositiveKappa(f"3/(n+2) - c = {kappa} <= 0 for n={n}, c={float(c)}")
    return kappa


def kato_background_constant(n: int, d: float) -> float:
    """Coefficient C(n, d) = n^4 d / (2 (n-1) (2n+1)) bounding the |w|^2 term.

    ``d`` is a caller-supplied positive parameter (the trace tensor w depends
    on the full background curvature, which is only tracked through bounds).
    """
    if d <= 0:
        raise InvalidConstants("C(n, d) needs d > 0")
    return n**4 * d / (2.0 * (n - 1) * (2 * n + 1))


def space_form_d_lower(n: int, c: float | Fraction) -> float:
    """Minimal offset 2n - 2/c preserving Q <= 0 in a negative space form."""
    return 2.0 * n - 2.0 / float(c)


@dataclass(frozen=True)
class PinchingConstants:
    """Pinching constants (c, d) plus the background regime they live in.

    ``regime`` is one of ``euclidean`` (flat, d >= 0), ``bounded_background``
    (sectional curvature in [-K1, K2], |first derivative| <= L; d must reach
    the assembled lower bound) or ``space_form`` (constant curvature Kbar;
    for Kbar < 0 requires d >= 2n - 2/c).  Equality with the lower bound is
    accepted but flagged with a warning, since the strictness needed by the
    maximum principle is analytic rather than numeric.
    """

    dims: Dims
    c: float
    d: float = 0.0
    regime: str = "euclidean"
    K1: float = 0.0
    K2: float = 0.0
    L: float = 0.0
    Kbar: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", float(self.c))
        n = self.dims.n
        if self.regime not in REGIMES:
            raise InvalidConstants(f"unknown regime {self.regime!r}")
        if self.c <= 1.0 / n:
            raise InvalidConstants(f"need c > 1/n = {1.0 / n}, got {self.c}")
        if self.regime == "euclidean":
            if self.d < 0:
                raise InvalidConstants("euclidean regime needs d >= 0")
        elif self.regime == "bounded_background":
            lower = d_lower_bound(n, self.dims.m, self.c, self.K1, self.K2, self.L)
            if self.d < lower:
                raise InvalidConstants(f"d={self.d} below lower bound {lower}")
            if self.d == lower and lower > 0:
                warnings.warn(
                    "d equals its lower bound; preservation needs strict inequality",
                    stacklevel=2,
                )
        else:
            if self.Kbar < 0:
                lower = space_form_d_lower(n, self.c)
                if self.d < lower:
                    raise InvalidConstants(
                        f"space form with Kbar<0 needs d >= 2n - 2/c = {lower}"
                    )
                if self.d == lower:
                    warnings.warn(
                        "d equals 2n - 2/c; preservation needs strict inequality",
                        stacklevel=2,
                    )

    @property
    def gamma(self) -> float:
        """c - 1/n, the denominator of most derived constants."""
        return self.c - 1.0 / self.dims.n


def pinching_f(
    decomp: PrincipalDecomposition, H: MeanCurvature, k: PinchingConstants
) -> float:
    """f = c |H|^2 - |A|^2 - d; positive exactly on pinched data."""
    return k.c * H.norm2 - decomp.a2 - k.d


def pinching_Q(
    decomp: PrincipalDecomposition, H: MeanCurvature, k: PinchingConstants
) -> float:
    """Q = |Aring|^2 - (c - 1/n) |H|^2 - d Kbar (space-form regime only)."""
    if k.regime != "space_form":
        raise InvalidConstants("Q is defined in the space_form regime")
    return decomp.a_ring2 - k.gamma * H.norm2 - k.d * k.Kbar
