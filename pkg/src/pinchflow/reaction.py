"""Zeroth-order (reaction) quantities of the evolution equations and their bounds.

R1 and R2 are the two quartic contractions driving d|A|^2/dt and d|H|^2/dt;
``reaction_gap`` is the combination whose nonnegativity on pinched data makes
the pinching function f a supersolution.  The remaining functions evaluate
both sides of the closed-form reaction estimates (flat specialization, the
boundary estimate, and the constant-curvature estimate for Q) and report the
slack.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConstants, NotPinched
from .forms import (
    MeanCurvature,
    NormalCurvature,
    PrincipalDecomposition,
    SecondFundamentalForm,
)


def r1(A: SecondFundamentalForm) -> float:
    """sum_{ab} (tr A^a A^b)^2 + sum_{ab} |[A^a, A^b]|^2."""
    comps = A.components
    gram = np.einsum("aij,bij->ab", comps, comps)
    prod = np.einsum("aip,bpj->abij", comps, comps)
    comm = prod - prod.transpose(1, 0, 2, 3)
    return float(np.sum(gram**2) + np.sum(comm**2))


def r2(A: SecondFundamentalForm, H: MeanCurvature) -> float:
    """sum_ij (sum_a H^a A^a_ij)^2."""
    ha = np.einsum("a,aij->ij", H.vector, A.components)
    return float(np.sum(ha**2))


def gram_norm2(A: SecondFundamentalForm) -> float:
    """sum_{ijpq} <A_ij, A_pq>^2 = sum_{ab} (tr A^a A^b)^2."""
    gram = np.einsum("aij,bij->ab", A.components, A.components)
    return float(np.sum(gram**2))


def reaction_gap(
    A: SecondFundamentalForm,
    H: MeanCurvature,
    rperp: NormalCurvature,
    c: float,
) -> float:
    """c sum|<A,H>|^2 - sum|<A,A>|^2 - sum|R^perp|^2.

    This is (half) the reaction part of the evolution of f; the pinching
    condition makes it nonnegative.
    """
    return c * r2(A, H) - gram_norm2(A) - rperp.norm2


@dataclass(frozen=True)
class ReactionReport:
    """Two-sided evaluation of a reaction estimate.

    ``slack = rhs_bound - lhs_bound``; a verified bound has slack above
    -tol at the working scale.  ``blowup_rhs``/``blowup_slack`` are filled
    only by the constant-curvature estimate when the stronger -const * Q^2
    bound applies.
    """

    R1: float
    R2: float
    reaction_gap: float
    lhs_bound: float
    rhs_bound: float
    slack: float
    context: str
    blowup_rhs: float | None = None
    blowup_slack: float | None = None


def _gap_from_decomp(
    decomp: PrincipalDecomposition, H: MeanCurvature, c: float
) -> tuple[SecondFundamentalForm, float, float, float]:
    from .forms import normal_curvature

    A = decomp.reconstruct()
    rperp = normal_curvature(A, decomp)
    return A, r1(A), r2(A, H), c * r2(A, H) - gram_norm2(A) - rperp.norm2


def lemma43_lower_bound(
    decomp: PrincipalDecomposition,
    H: MeanCurvature,
    f: float,
    c: float,
    d: float,
) -> ReactionReport:
    """Lower bound for the reaction part of the evolution of f (flat case).

    rhs_bound is the exact reaction gap, lhs_bound the closed-form
    2/(nc-1) f |A^-|^2 + nc/(nc-1) f |h_ring|^2; the gap dominates it for
    1/n < c <= 4/(3n), f > 0, d >= 0.
    """
    n = decomp.dims.n
    if f <= 0:
        raise NotPinched(f"reaction lower bound needs f > 0, got {f}")
    if not (1.0 / n < c <= 4.0 / (3 * n) * (1 + 1e-12)):
        raise InvalidConstants(f"reaction lower bound needs 1/n < c <= 4/(3n), got c={c}")
    _, R1, R2, gap = _gap_from_decomp(decomp, H, c)
    ncm1 = n * c - 1.0
    lhs = (2.0 / ncm1) * f * decomp.a_minus2 + (n * c / ncm1) * f * decomp.h_ring2
    return ReactionReport(
        R1=R1, R2=R2, reaction_gap=gap,
        lhs_bound=lhs, rhs_bound=gap, slack=gap - lhs,
        context="reaction-lower-bound-flat",
    )


def boundary_reaction_bound(
    decomp: PrincipalDecomposition,
    H: MeanCurvature,
    c: float,
    d: float,
    tol_boundary: float = 1e-9,
) -> ReactionReport:
    """Upper bound for 2 R1 - 2 c R2 on the pinching boundary |A|^2 = c|H|^2 - d.

    The substitution |H|^2 = (|Aring|^2 + d) / (c - 1/n) only holds on the
    boundary, so the data is checked to sit there first.
    """
    n = decomp.dims.n
    g = c - 1.0 / n
    if g <= 0:
        raise InvalidConstants(f"need c > 1/n, got c={c}")
    scale = max(1.0, decomp.a2, c * H.norm2)
    if abs(decomp.a2 - (c * H.norm2 - d)) > tol_boundary * scale:
        raise NotPinched(
            "data is not on the pinching boundary |A|^2 = c|H|^2 - d"
        )
    A = decomp.reconstruct()
    R1, R2 = r1(A), r2(A, H)
    lhs = 2 * R1 - 2 * c * R2
    am2, hr2 = decomp.a_minus2, decomp.h_ring2
    rhs = (
        (6 - 2 / (n * g)) * hr2 * am2
        + (3 - 2 / (n * g)) * am2**2
        - 2 * c * d / g * hr2
        - 4 * d / (n * g) * am2
        - 2 * d * d / (n * g)
    )
    return ReactionReport(
        R1=R1, R2=R2, reaction_gap=c * R2 - R1,
        lhs_bound=lhs, rhs_bound=rhs, slack=rhs - lhs,
        context="boundary-estimate",
    )


def cc_reaction_upper_bound(
    decomp: PrincipalDecomposition,
    H: MeanCurvature,
    Q: float,
    c: float,
    d: float,
    kbar: float,
) -> ReactionReport:
    """Zeroth-order estimate for the evolution of Q in a space form.

    lhs = 2 R1 - 2 c R2 - 2 n Kbar |Aring|^2 - 2 n Kbar (c - 1/n) |H|^2 (the
    exact homogeneous dQ/dt), rhs the displayed multi-line bound in terms of
    |h_ring|^2, |A^-|^2, Kbar and Q.  When Q <= 0, Kbar < 0,
    c <= min{4/(3n), 3/(n+2)} and d >= 2n - 2/c the report additionally
    carries the stronger bound lhs <= -(2/n)/(c - 1/n) Q^2 that forces Q to
    blow up in finite time.
    """
    n = decomp.dims.n
    g = c - 1.0 / n
    if g <= 0:
        raise InvalidConstants(f"need c > 1/n, got c={c}")
    A = decomp.reconstruct()
    R1, R2 = r1(A), r2(A, H)
    lhs = 2 * R1 - 2 * c * R2 - 2 * n * kbar * decomp.a_ring2 - 2 * n * kbar * g * H.norm2
    am2, hr2 = decomp.a_minus2, decomp.h_ring2
    dng = d / n / g
    rhs = (
        (6 - (2 / n) / g) * hr2 * am2
        + (3 - (2 / n) / g) * am2**2
        + 2 * (dng + d - 2 * n) * kbar * hr2
        + 4 * (dng - n) * kbar * am2
        + 2 * (n - dng) * d * kbar**2
        + 2 * (1 + (1 / n) / g) * hr2 * Q
        + (2 / n) / g * Q * (2 * am2 - Q)
        + 2 * (n - 2 * dng) * kbar * Q
    )
    blowup_rhs = blowup_slack = None
    eligible = (
        kbar < 0
        and Q <= 0
        and c <= min(4.0 / (3 * n), 3.0 / (n + 2)) * (1 + 1e-12)
        and d >= (2 * n - 2 / c) * (1 - 1e-12)
    )
    if eligible:
        blowup_rhs = -(2.0 / n) / g * Q * Q
        blowup_slack = blowup_rhs - lhs
    from .forms import normal_curvature

    gap = c * R2 - gram_norm2(A) - normal_curvature(A, decomp).norm2
    return ReactionReport(
        R1=R1, R2=R2, reaction_gap=gap,
        lhs_bound=lhs, rhs_bound=rhs, slack=rhs - lhs,
        context="space-form-Q",
        blowup_rhs=blowup_rhs, blowup_slack=blowup_slack,
    )
