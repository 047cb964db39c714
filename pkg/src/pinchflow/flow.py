"""ODE-reduced mean-curvature-flow families and their diagnostics.

Every family here is homogeneous: the second fundamental form is constant in
space, so the flow collapses to an ODE on a few radii, Laplacian and
gradient terms vanish identically, and the evolution equations can be
cross-checked against exact solutions.  Supported families:

* shrinking round sphere in flat space,
* shrinking round cylinder (sphere factor times a line; also useful as a
  static diagnostic for the cylindrical ratio),
* product of two round spheres (genuinely codimension two),
* geodesic sphere in a negatively curved space form.

The sphere and cylinder are the classical model solutions; the product and
the hyperbolic geodesic sphere are artifact-chosen oracle families that let
the codimension and space-form diagnostics be exercised with closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PinchingConstants, pinching_Q, pinching_f
from .errors import (
    DegenerateMeanCurvature,
    InvalidConstants,
    NonpositiveZ,
    PastBlowup,
)
from .forms import Dims, SecondFundamentalForm, mean_curvature, principal_decompose
from .reaction import r1, r2

R_MIN = 1e-6
FD_STEP = 1e-5
CSV_HEADER = "t,param1,param2,A2,H2,h2,Aminus2,f,Q,ratio_pinch,ratio_codim,ratio_cyl"


def _diag_form(dims: Dims, blocks: list[tuple[int, int, int, float]]) -> SecondFundamentalForm:
    """Diagonal form from (slot, start, stop, value) blocks."""
    comps = np.zeros((dims.m, dims.n, dims.n))
    for slot, start, stop, value in blocks:
        for i in range(start, stop):
            comps[slot, i, i] = value
    return SecondFundamentalForm(dims, comps)


@dataclass(frozen=True)
class SphereFlow:
    """Round sphere of radius r0 in flat space, n >= 2, any codimension."""

    n: int
    m: int
    r0: float
    kind = "sphere"
    kbar = 0.0
    param_names = ("r",)

    def blowup_time(self) -> float:
        return self.r0**2 / (2.0 * self.n)

    def exact_params(self, t: float) -> tuple[float, ...]:
        s = self.r0**2 - 2.0 * self.n * t
        if s <= 0:
            raise PastBlowup(f"t={t} at or past blow-up T={self.blowup_time()}")
        return (math.sqrt(s),)

    def rates(self, params: tuple[float, ...]) -> tuple[float, ...]:
        return (-self.n / params[0],)

    def form(self, params: tuple[float, ...]) -> SecondFundamentalForm:
        dims = Dims(self.n, self.m)
        return _diag_form(dims, [(0, 0, self.n, 1.0 / params[0])])


@dataclass(frozen=True)
class CylinderFlow:
    """S^{n-1}(r0) x R in flat space; the sphere factor shrinks."""

    n: int
    m: int
    r0: float
    kind = "cylinder"
    kbar = 0.0
    param_names = ("r",)

    def blowup_time(self) -> float:
        return self.r0**2 / (2.0 * (self.n - 1))

    def exact_params(self, t: float) -> tuple[float, ...]:
        s = self.r0**2 - 2.0 * (self.n - 1) * t
        if s <= 0:
            raise PastBlowup(f"t={t} at or past blow-up T={self.blowup_time()}")
        return (math.sqrt(s),)

    def rates(self, params: tuple[float, ...]) -> tuple[float, ...]:
        return (-(self.n - 1) / params[0],)

    def form(self, params: tuple[float, ...]) -> SecondFundamentalForm:
        dims = Dims(self.n, self.m)
        return _diag_form(dims, [(0, 0, self.n - 1, 1.0 / params[0])])


@dataclass(frozen=True)
class ProductSpheresFlow:
    """S^p(a0) x S^q(b0), codimension-two normal structure (m >= 2)."""

    p: int
    q: int
    m: int
    a0: float
    b0: float
    kind = "product"
    kbar = 0.0
    param_names = ("a", "b")

    def __post_init__(self) -> None:
        if self.p < 1 or self.q < 1:
            raise ValueError("both sphere factors need dimension >= 1")
        if self.m < 2:
            raise ValueError("product of spheres needs m >= 2 normal slots")
        if self.a0 <= 0 or self.b0 <= 0:
            raise ValueError("radii must be positive")

    @property
    def n(self) -> int:
        return self.p + self.q

    def blowup_time(self) -> float:
        return min(self.a0**2 / (2.0 * self.p), self.b0**2 / (2.0 * self.q))

    def exact_params(self, t: float) -> tuple[float, ...]:
        sa = self.a0**2 - 2.0 * self.p * t
        sb = self.b0**2 - 2.0 * self.q * t
        if sa <= 0 or sb <= 0:
            raise PastBlowup(f"t={t} at or past blow-up T={self.blowup_time()}")
        return (math.sqrt(sa), math.sqrt(sb))

    def rates(self, params: tuple[float, ...]) -> tuple[float, ...]:
        return (-self.p / params[0], -self.q / params[1])

    def form(self, params: tuple[float, ...]) -> SecondFundamentalForm:
        dims = Dims(self.n, self.m)
        a, b = params
        return _diag_form(
            dims, [(0, 0, self.p, 1.0 / a), (1, self.p, self.n, 1.0 / b)]
        )


@dataclass(frozen=True)
class HyperbolicSphereFlow:
    """Geodesic sphere of radius r0 in a space form of curvature kbar < 0."""

    n: int
    m: int
    r0: float
    kbar: float = -1.0
    kind = "hyperbolic"
    param_names = ("r",)

    def __post_init__(self) -> None:
        if self.kbar >= 0:
            raise ValueError("hyperbolic family needs kbar < 0")

    @property
    def kappa(self) -> float:
        return math.sqrt(-self.kbar)

    def blowup_time(self) -> float:
        # cosh(kappa r(t)) = cosh(kappa r0) exp(n kbar t) reaches 1
        return math.log(math.cosh(self.kappa * self.r0)) / (self.n * self.kappa**2)

    def exact_params(self, t: float) -> tuple[float, ...]:
        ch = math.cosh(self.kappa * self.r0) * math.exp(self.n * self.kbar * t)
        if ch <= 1.0:
            raise PastBlowup(f"t={t} at or past blow-up T={self.blowup_time()}")
        return (math.acosh(ch) / self.kappa,)

    def rates(self, params: tuple[float, ...]) -> tuple[float, ...]:
        kr = self.kappa * params[0]
        return (-self.n * self.kappa / math.tanh(kr),)

    def form(self, params: tuple[float, ...]) -> SecondFundamentalForm:
        dims = Dims(self.n, self.m)
        lam = self.kappa / math.tanh(self.kappa * params[0])
        return _diag_form(dims, [(0, 0, self.n, lam)])


Family = SphereFlow | CylinderFlow | ProductSpheresFlow | HyperbolicSphereFlow

FAMILY_KINDS = {
    "sphere": SphereFlow,
    "cylinder": CylinderFlow,
    "product": ProductSpheresFlow,
    "hyperbolic": HyperbolicSphereFlow,
}


@dataclass(frozen=True)
class FlowState:
    """A family at a given time, with the radii as the full state."""

    family: Family
    t: float
    params: tuple[float, ...]

    def form(self) -> SecondFundamentalForm:
        return self.family.form(self.params)


def exact_state(family: Family, t: float) -> FlowState:
    return FlowState(family, t, family.exact_params(t))


def step_rk4(state: FlowState, dt: float, r_min: float = R_MIN) -> FlowState:
    """One classical fourth-order step of the radius ODE."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    fam = state.family
    y = np.array(state.params)

    def rate(v: np.ndarray) -> np.ndarray:
        if np.any(v <= r_min):
            raise PastBlowup("radius collapsed inside an RK4 stage")
        return np.array(fam.rates(tuple(v)))

    k1 = rate(y)
    k2 = rate(y + 0.5 * dt * k1)
    k3 = rate(y + 0.5 * dt * k2)
    k4 = rate(y + dt * k3)
    new = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    if np.any(new <= r_min):
        raise PastBlowup(f"radius fell to {new.min():.3e} <= r_min={r_min:.1e}")
    return FlowState(fam, state.t + dt, tuple(float(v) for v in new))


@dataclass(frozen=True)
class TimeSeriesRecord:
    """One diagnostics row; Q is NaN outside the space-form regime."""

    t: float
    params: tuple[float, ...]
    A2: float
    H2: float
    h2: float
    Aminus2: float
    f: float
    Q: float
    ratio_pinch: float
    ratio_codim: float
    ratio_cyl: float


def diagnostics(state: FlowState, constants: PinchingConstants) -> TimeSeriesRecord:
    """All scalar diagnostics of the snapshot form at ``state``."""
    fam = state.family
    if constants.regime == "space_form" and constants.Kbar != fam.kbar:
        raise InvalidConstants(
            f"constants Kbar={constants.Kbar} but family has kbar={fam.kbar}"
        )
    A = state.form()
    H = mean_curvature(A)
    if H.norm <= 1e-12:
        raise DegenerateMeanCurvature("flow snapshot has |H| = 0")
    dec = principal_decompose(A)
    f = pinching_f(dec, H, constants)
    q = pinching_Q(dec, H, constants) if constants.regime == "space_form" else math.nan
    n = fam.n
    return TimeSeriesRecord(
        t=state.t,
        params=state.params,
        A2=dec.a2,
        H2=H.norm2,
        h2=dec.h2,
        Aminus2=dec.a_minus2,
        f=f,
        Q=q,
        ratio_pinch=dec.a2 / H.norm2,
        ratio_codim=dec.a_minus2 / f if f > 0 else math.nan,
        ratio_cyl=dec.a2 - H.norm2 / (n - 1),
    )


def simulate(
    family: Family,
    constants: PinchingConstants,
    dt: float,
    t_end: float,
    every: int = 1,
    r_min: float = R_MIN,
) -> list[TimeSeriesRecord]:
    """Fixed-step RK4 time series with records every ``every`` steps.

    The step is halved whenever a radius gets within 10 dt |rate| of
    collapse; integration stops at t_end or when a radius reaches r_min.
    """
    state = FlowState(family, 0.0, family.exact_params(0.0))
    records = [diagnostics(state, constants)]
    step = dt
    k = 0
    while state.t < t_end:
        rates = family.rates(state.params)
        while any(
            r < 10.0 * step * abs(v) for r, v in zip(state.params, rates)
        ) and step > 1e-12:
            step *= 0.5
        try:
            state = step_rk4(state, min(step, t_end - state.t), r_min)
        except PastBlowup:
            break
        k += 1
        if k % every == 0:
            records.append(diagnostics(state, constants))
        if min(state.params) <= r_min:
            break
    return records


@dataclass(frozen=True)
class EvolutionResidual:
    """Relative mismatch between exact d/dt and the reaction-only right side."""

    t: float
    dA2_dt: float
    dH2_dt: float
    reaction_A2: float
    reaction_H2: float
    residual_A2: float
    residual_H2: float


def evolution_residual(state: FlowState, h: float = FD_STEP) -> EvolutionResidual:
    """Centered finite difference of |A|^2, |H|^2 against the reaction terms.

    For homogeneous families the Laplacian and all gradient squares vanish,
    so the exact time derivatives must match 2 R1 (plus the space-form
    terms 4 Kbar |H|^2 - 2n Kbar |A|^2) and 2 R2 + 2n Kbar |H|^2.
    """
    fam = state.family
    t = state.t

    def norms(tt: float) -> tuple[float, float]:
        A = fam.form(fam.exact_params(tt))
        return A.norm2, mean_curvature(A).norm2

    a_plus, h_plus = norms(t + h)
    a_minus_, h_minus_ = norms(t - h)
    dA2 = (a_plus - a_minus_) / (2 * h)
    dH2 = (h_plus - h_minus_) / (2 * h)
    A = fam.form(fam.exact_params(t))
    H = mean_curvature(A)
    kbar, n = fam.kbar, fam.n
    reaction_A2 = 2 * r1(A) + 4 * kbar * H.norm2 - 2 * n * kbar * A.norm2
    reaction_H2 = 2 * r2(A, H) + 2 * n * kbar * H.norm2
    return EvolutionResidual(
        t=t,
        dA2_dt=dA2,
        dH2_dt=dH2,
        reaction_A2=reaction_A2,
        reaction_H2=reaction_H2,
        residual_A2=abs(dA2 - reaction_A2) / max(1.0, abs(reaction_A2)),
        residual_H2=abs(dH2 - reaction_H2) / max(1.0, abs(reaction_H2)),
    )


@dataclass(frozen=True)
class BlowupVerdict:
    """Verdict of the mean-curvature lower-barrier sweep along a family.

    ``barrier_ok`` refers to the flat-model barrier
    |H(t)|^2 >= 1/(1/|H_0|^2 - 2t/n); ``equality`` flags when it is attained
    (round sphere).  ``adjusted_ok`` checks the curvature-corrected barrier
    solving u' = (2/n) u^2 + 2n kbar u, the sharp comparison for kbar < 0
    (hyperbolic geodesic spheres attain it); for kbar = 0 the two coincide.
    ``tmax_ok`` reports whether the family's blow-up time respects
    T <= n / (2 |H_0|^2).
    """

    barrier_ok: bool
    equality: bool
    adjusted_ok: bool
    tmax_ok: bool
    worst_margin: float          # min over samples of |H|^2/barrier - 1
    worst_adjusted_margin: float


def _flat_barrier(h0sq: float, n: int, t: float) -> float:
    denom = 1.0 / h0sq - 2.0 * t / n
    return math.inf if denom <= 0 else 1.0 / denom


def _adjusted_barrier(h0sq: float, n: int, kbar: float, t: float) -> float:
    if kbar == 0.0:
        return _flat_barrier(h0sq, n, t)
    c = n * n * kbar
    denom = math.exp(-2.0 * n * kbar * t) * (1.0 / h0sq + 1.0 / c) - 1.0 / c
    return math.inf if denom <= 0 else 1.0 / denom


def blowup_bound_check(
    family: Family, n_times: int = 1000, rel_tol: float = 1e-9
) -> BlowupVerdict:
    """Sweep the barrier inequalities along the exact solution."""
    if family.kbar > 0:
        raise InvalidConstants("barrier sweep assumes kbar <= 0")
    n = family.n
    t_max = family.blowup_time()
    A0 = family.form(family.exact_params(0.0))
    h0sq = mean_curvature(A0).norm2
    worst = math.inf
    worst_adj = math.inf
    equality = True
    for i in range(n_times):
        t = t_max * i / n_times
        A = family.form(family.exact_params(t))
        h2 = mean_curvature(A).norm2
        bar = _flat_barrier(h0sq, n, t)
        margin = h2 / bar - 1.0 if math.isfinite(bar) else -1.0
        worst = min(worst, margin)
        if abs(margin) > 1e-6:
            equality = False
        adj = _adjusted_barrier(h0sq, n, family.kbar, t)
        worst_adj = min(worst_adj, h2 / adj - 1.0 if math.isfinite(adj) else -1.0)
    return BlowupVerdict(
        barrier_ok=worst >= -rel_tol,
        equality=equality,
        adjusted_ok=worst_adj >= -rel_tol,
        tmax_ok=t_max <= n / (2.0 * h0sq) * (1 + rel_tol),
        worst_margin=worst,
        worst_adjusted_margin=worst_adj,
    )


def quotient_identity_residual(
    w: np.ndarray,
    z: np.ndarray,
    W: np.ndarray,
    Z: np.ndarray,
    dt: float,
    dx: float,
) -> float:
    """Max-norm residual of the quotient evolution identity on a periodic grid.

    For fields w, z with dw/dt = laplacian(w) + W and dz/dt = laplacian(z) + Z,
    the quotient satisfies

        (d/dt - laplacian)(w/z) = (2/z) <grad(w/z), grad z> + W/z - (w/z^2) Z.

    Both sides are discretized with second-order centered stencils and one
    forward Euler step, so the residual shrinks at O(dx^2) + O(dt).
    """
    w = np.asarray(w, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if np.any(z <= 0):
        raise NonpositiveZ("z must be strictly positive")

    def lap(u: np.ndarray) -> np.ndarray:
        return (np.roll(u, -1) - 2 * u + np.roll(u, 1)) / dx**2

    def grad(u: np.ndarray) -> np.ndarray:
        return (np.roll(u, -1) - np.roll(u, 1)) / (2 * dx)

    w_next = w + dt * (lap(w) + W)
    z_next = z + dt * (lap(z) + Z)
    if np.any(z_next <= 0):
        raise NonpositiveZ("z stepped to a nonpositive value; shrink dt")
    q = w / z
    lhs = (w_next / z_next - q) / dt - lap(q)
    rhs = 2.0 / z * grad(q) * grad(z) + W / z - w / z**2 * Z
    return float(np.max(np.abs(lhs - rhs)))


# ----------------------------------------------------------------------
# CSV time series
# ----------------------------------------------------------------------

def _csv_num(x: float) -> str:
    return "NaN" if math.isnan(x) else format(x, ".17g")


def record_row(rec: TimeSeriesRecord) -> str:
    p1 = rec.params[0]
    p2 = rec.params[1] if len(rec.params) > 1 else math.nan
    vals = (rec.t, p1, p2, rec.A2, rec.H2, rec.h2, rec.Aminus2,
            rec.f, rec.Q, rec.ratio_pinch, rec.ratio_codim, rec.ratio_cyl)
    return ",".join(_csv_num(v) for v in vals)


def write_csv(records: list[TimeSeriesRecord], path: str) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(record_row(rec) + "\n")


def read_csv(path: str) -> list[TimeSeriesRecord]:
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            vals = [float(tok) for tok in line.split(",")]
            params = (vals[1],) if math.isnan(vals[2]) else (vals[1], vals[2])
            records.append(
                TimeSeriesRecord(
                    t=vals[0], params=params, A2=vals[3], H2=vals[4], h2=vals[5],
                    Aminus2=vals[6], f=vals[7], Q=vals[8], ratio_pinch=vals[9],
                    ratio_codim=vals[10], ratio_cyl=vals[11],
                )
            )
    return records
