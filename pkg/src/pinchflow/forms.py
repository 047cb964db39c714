"""Pointwise tensor algebra for the second fundamental form of a submanifold.

The central object is a stack of ``m`` symmetric ``n x n`` matrices
``A^alpha`` holding the components of the normal-bundle-valued second
fundamental form in an orthonormal frame.  From it we derive the mean
curvature vector, the splitting along the principal normal ``nu1 = H/|H|``
into ``h`` and ``A^-``, traceless parts, the normal curvature built from
commutators, and first-derivative samples with the Codazzi symmetries.

Everything is a plain float64 array at desk scale (n, m <= 16); values are
immutable after construction and all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMeanCurvature, InvalidSample

MAX_DIM = 16
TOL_H = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dims:
    """Tangent dimension n and codimension m."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if not (2 <= self.n <= MAX_DIM):
            raise ValueError(f"tangent dimension n={self.n} outside [2, {MAX_DIM}]")
        if not (1 <= self.m <= MAX_DIM):
            raise ValueError(f"codimension m={self.m} outside [1, {MAX_DIM}]")


@dataclass(frozen=True)
class SecondFundamentalForm:
    """m symmetric n x n component matrices A^alpha (units 1/length).

    Symmetry of every slot is exact (bitwise) and checked on construction;
    build from raw data via :func:`symmetrize` when in doubt.
    """

    dims: Dims
    components: np.ndarray  # shape (m, n, n)

    def __post_init__(self) -> None:
        comp = _freeze(self.components)
        object.__setattr__(self, "components", comp)
        if comp.shape != (self.dims.m, self.dims.n, self.dims.n):
            raise ValueError(f"components shape {comp.shape} does not match dims {self.dims}")
        if not np.array_equal(comp, comp.transpose(0, 2, 1)):
            raise ValueError("every A^alpha must equal its transpose exactly")

    @classmethod
    def from_components(cls, components: np.ndarray) -> "SecondFundamentalForm":
        components = np.asarray(components, dtype=np.float64)
        m, n, _ = components.shape
        return cls(Dims(n, m), components)

    def scaled(self, lam: float) -> "SecondFundamentalForm":
        return SecondFundamentalForm(self.dims, lam * self.components)

    @property
    def norm2(self) -> float:
        return float(np.sum(self.components**2))


def symmetrize(components: np.ndarray) -> SecondFundamentalForm:
    """Build a form from arbitrary (m, n, n) data by exact symmetrization."""
    components = np.asarray(components, dtype=np.float64)
    sym = 0.5 * (components + components.transpose(0, 2, 1))
    return SecondFundamentalForm.from_components(sym)


@dataclass(frozen=True)
class MeanCurvature:
    """Mean curvature vector H^alpha = tr A^alpha and its Euclidean norm."""

    vector: np.ndarray  # shape (m,)
    norm: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "vector", _freeze(self.vector))

    @property
    def norm2(self) -> float:
        return self.norm * self.norm


def mean_curvature(A: SecondFundamentalForm) -> MeanCurvature:
    vector = np.einsum("aii->a", A.components)
    return MeanCurvature(vector, float(np.linalg.norm(vector)))


@dataclass(frozen=True)
class PrincipalDecomposition:
    """Splitting A = A^- + h (x) nu1 along the principal normal.

    ``h_ij = <A_ij, nu1>`` is the second fundamental form in the principal
    direction, ``A^-`` the part orthogonal to it (vector-valued and traceless),
    ``h_ring`` the traceless part of h.  Squared norms are cached: the
    Pythagoras identities |A|^2 = |h|^2 + |A^-|^2 and
    |Aring|^2 = |h_ring|^2 + |A^-|^2 = |A|^2 - |H|^2/n hold by construction.
    """

    dims: Dims
    nu1: np.ndarray          # unit m-vector
    h: np.ndarray            # symmetric (n, n)
    a_minus: SecondFundamentalForm
    h_ring: np.ndarray       # traceless symmetric (n, n)
    a2: float                # |A|^2
    h2: float                # |h|^2
    a_minus2: float          # |A^-|^2
    h_ring2: float           # |h_ring|^2
    a_ring2: float           # |Aring|^2 = |h_ring|^2 + |A^-|^2

    def __post_init__(self) -> None:
        object.__setattr__(self, "nu1", _freeze(self.nu1))
        object.__setattr__(self, "h", _freeze(self.h))
        object.__setattr__(self, "h_ring", _freeze(self.h_ring))

    def reconstruct(self) -> SecondFundamentalForm:
        """A^- + h (x) nu1, exact to roundoff."""
        comps = self.a_minus.components + self.h[None, :, :] * self.nu1[:, None, None]
        return SecondFundamentalForm(self.dims, comps)


def principal_decompose(
    A: SecondFundamentalForm, tol_h: float = TOL_H
) -> PrincipalDecomposition:
    """Split A along nu1 = H/|H|.

    Raises :class:`DegenerateMeanCurvature` when |H| <= tol_h.
    """
    H = mean_curvature(A)
    if H.norm <= tol_h:
        raise DegenerateMeanCurvature(f"|H| = {H.norm:.3e} <= {tol_h:.1e}")
    n = A.dims.n
    nu1 = H.vector / H.norm
    h = np.einsum("a,aij->ij", nu1, A.components)
    a_minus = SecondFundamentalForm(
        A.dims, A.components - h[None, :, :] * nu1[:, None, None]
    )
    h_ring = h - (H.norm / n) * np.eye(n)
    h2 = float(np.sum(h**2))
    a_minus2 = a_minus.norm2
    h_ring2 = float(np.sum(h_ring**2))
    return PrincipalDecomposition(
        dims=A.dims,
        nu1=nu1,
        h=h,
        a_minus=a_minus,
        h_ring=h_ring,
        a2=A.norm2,
        h2=h2,
        a_minus2=a_minus2,
        h_ring2=h_ring2,
        a_ring2=h_ring2 + a_minus2,
    )


@dataclass(frozen=True)
class NormalCurvature:
    """Normal curvature R^perp_{ij alpha beta} of a flat ambient space.

    components[i, j, a, b] = sum_p (A^a_ip A^b_jp - A^b_ip A^a_jp), the
    commutator [A^a, A^b]_ij; antisymmetric in (i, j) and in (a, b).
    ``principal_slice[i, j, b]`` is the contraction of the first normal slot
    with nu1 and ``hat_part_norm2`` the squared norm of the part orthogonal
    to nu1 in both normal slots.
    """

    components: np.ndarray       # (n, n, m, m)
    principal_slice: np.ndarray  # (n, n, m)
    hat_part_norm2: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", _freeze(self.components))
        object.__setattr__(self, "principal_slice", _freeze(self.principal_slice))

    @property
    def norm2(self) -> float:
        """Full |R^perp|^2 over all four indices."""
        return float(np.sum(self.components**2))

    @property
    def principal_norm2(self) -> float:
        """sum_ij |R^perp_ij(nu1)|^2."""
        return float(np.sum(self.principal_slice**2))


def normal_curvature(
    A: SecondFundamentalForm, decomp: PrincipalDecomposition
) -> NormalCurvature:
    prod = np.einsum("aip,bjp->ijab", A.components, A.components)
    comp = prod - prod.transpose(0, 1, 3, 2)
    principal = np.einsum("a,ijab->ijb", decomp.nu1, comp)
    proj = np.eye(A.dims.m) - np.outer(decomp.nu1, decomp.nu1)
    hat = np.einsum("ijab,ac,bd->ijcd", comp, proj, proj)
    return NormalCurvature(comp, principal, float(np.sum(hat**2)))


def _tensor_asymmetry(T: np.ndarray) -> float:
    """Max deviation of T[a, i, j, k] from full symmetry in (i, j, k)."""
    worst = 0.0
    for perm in ((0, 1, 3, 2), (0, 2, 1, 3), (0, 2, 3, 1), (0, 3, 1, 2), (0, 3, 2, 1)):
        worst = max(worst, float(np.max(np.abs(T - T.transpose(*perm)))))
    return worst


@dataclass(frozen=True)
class GradientSample:
    """A sample of the covariant derivative of A with its principal splitting.

    ``tensor[a, i, j, k]`` models the alpha-component of the derivative of
    A_jk in the i-th tangent direction.  Derived slices store the pieces of
    the splitting used by the gradient estimates:

    * ``nabla_h[i, j, k]`` and ``nabla_aminus_nu1[i, j, k]`` (the nu1
      projection splits into these two; their sum is fully symmetric for a
      Codazzi sample),
    * ``hat_nabla_aminus[a, i, j, k]`` (part orthogonal to nu1 after removing
      the h-term),
    * ``nabla_normH[i]`` (derivative of |H|) and ``nabla_H_scaled[a, i]``
      holding |H| times the derivative of nu1.

    The projection of the derivative of A^- onto nu1 is forced to equal
    -<A^-, d nu1>, the relation obtained by differentiating <A^-, nu1> = 0,
    so the trace identities hold by construction whenever the raw tensor is
    fully symmetric in its three tangent indices.
    """

    dims: Dims
    tensor: np.ndarray            # (m, n, n, n)
    nu1: np.ndarray               # (m,)
    h_norm: float                 # |H| of the underlying point
    nabla_H: np.ndarray           # (m, n)  derivative of the H vector
    nabla_normH: np.ndarray       # (n,)
    nabla_nu1: np.ndarray         # (m, n)
    nabla_h: np.ndarray           # (n, n, n)  [i, j, k]
    nabla_aminus_nu1: np.ndarray  # (n, n, n)
    hat_nabla_aminus: np.ndarray  # (m, n, n, n)

    def __post_init__(self) -> None:
        for name in ("tensor", "nu1", "nabla_H", "nabla_normH", "nabla_nu1",
                     "nabla_h", "nabla_aminus_nu1", "hat_nabla_aminus"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))

    @property
    def nabla_nu1_scaled(self) -> np.ndarray:
        """|H| d nu1, the trace of the nu1-orthogonal part."""
        return self.h_norm * self.nabla_nu1

    @property
    def norm2(self) -> float:
        return float(np.sum(self.tensor**2))

    @property
    def nabla_H_norm2(self) -> float:
        return float(np.sum(self.nabla_H**2))

    def asymmetry(self) -> float:
        return _tensor_asymmetry(self.tensor)

    def scaled(self, lam: float) -> "GradientSample":
        """Linear rescaling of the derivative data at a fixed point."""
        return GradientSample(
            dims=self.dims,
            tensor=lam * self.tensor,
            nu1=self.nu1,
            h_norm=self.h_norm,
            nabla_H=lam * self.nabla_H,
            nabla_normH=lam * self.nabla_normH,
            nabla_nu1=lam * self.nabla_nu1,
            nabla_h=lam * self.nabla_h,
            nabla_aminus_nu1=lam * self.nabla_aminus_nu1,
            hat_nabla_aminus=lam * self.hat_nabla_aminus,
        )


def gradient_sample(
    decomp: PrincipalDecomposition, H: MeanCurvature, tensor: np.ndarray
) -> GradientSample:
    """Split a raw derivative tensor (m, n, n, n) at the point ``decomp``."""
    tensor = np.asarray(tensor, dtype=np.float64)
    m, n = decomp.dims.m, decomp.dims.n
    if tensor.shape != (m, n, n, n):
        raise ValueError(f"tensor shape {tensor.shape}, expected {(m, n, n, n)}")
    nu1 = decomp.nu1
    nabla_H = np.einsum("aijj->ai", tensor)
    nabla_normH = np.einsum("a,ai->i", nu1, nabla_H)
    nabla_nu1 = (nabla_H - np.outer(nu1, nabla_normH)) / H.norm
    # <dA^-, nu1> = -<A^-, d nu1>
    nabla_aminus_nu1 = -np.einsum("ajk,ai->ijk", decomp.a_minus.components, nabla_nu1)
    proj = np.einsum("a,aijk->ijk", nu1, tensor)
    nabla_h = proj - nabla_aminus_nu1
    hat = tensor - proj[None, :, :, :] * nu1[:, None, None, None]
    hat_nabla_aminus = hat - np.einsum("jk,ai->aijk", decomp.h, nabla_nu1)
    return GradientSample(
        dims=decomp.dims,
        tensor=tensor,
        nu1=nu1,
        h_norm=H.norm,
        nabla_H=nabla_H,
        nabla_normH=nabla_normH,
        nabla_nu1=nabla_nu1,
        nabla_h=nabla_h,
        nabla_aminus_nu1=nabla_aminus_nu1,
        hat_nabla_aminus=hat_nabla_aminus,
    )


@dataclass(frozen=True)
class FrameIdentityResiduals:
    """Residuals of the three splitting identities of the derivative norms."""

    full: float       # |dA|^2 vs sum of the two projected squares
    mean: float       # |dH|^2 vs |H|^2 |d nu1|^2 + |d|H||^2
    a_minus: float    # |dA^-|^2 vs hat part + nu1 projection

    def max_abs(self) -> float:
        return max(abs(self.full), abs(self.mean), abs(self.a_minus))


def frame_identity_residuals(
    decomp: PrincipalDecomposition,
    grad: GradientSample,
    tol_sym: float = 1e-9,
) -> FrameIdentityResiduals:
    """Check the orthogonal-splitting identities of the derivative norms.

    Raises :class:`InvalidSample` when the sample breaks the Codazzi (full
    tangent-index symmetry) constraint beyond ``tol_sym`` relative to scale.
    """
    scale = max(1.0, float(np.max(np.abs(grad.tensor))))
    if grad.asymmetry() > tol_sym * scale:
        raise InvalidSample(
            f"derivative tensor asymmetry {grad.asymmetry():.3e} exceeds "
            f"{tol_sym:.1e} x scale"
        )
    hat_plus_h = grad.hat_nabla_aminus + np.einsum(
        "jk,ai->aijk", decomp.h, grad.nabla_nu1
    )
    proj_sum = grad.nabla_aminus_nu1 + grad.nabla_h
    full = grad.norm2 - (float(np.sum(hat_plus_h**2)) + float(np.sum(proj_sum**2)))
    mean = grad.nabla_H_norm2 - (
        grad.h_norm**2 * float(np.sum(grad.nabla_nu1**2))
        + float(np.sum(grad.nabla_normH**2))
    )
    nabla_aminus = grad.hat_nabla_aminus + (
        grad.nabla_aminus_nu1[None] * grad.nu1[:, None, None, None]
    )
    a_minus = float(np.sum(nabla_aminus**2)) - (
        float(np.sum(grad.hat_nabla_aminus**2))
        + float(np.sum(grad.nabla_aminus_nu1**2))
    )
    return FrameIdentityResiduals(full, mean, a_minus)
