"""Vortical velocity fields, stream functions, impulses and far-field dipoles.

The 2-d vortical field of a localized vorticity omega with total strength
varpi is

    V = perp-grad[ (1/gamma2) log|.| * omega - (varpi/gamma2) log|. - xi*| ],

where xi* is the phantom-vortex center placed outside the fluid so that V
is square integrable near infinity.  In 3-d the Biot-Savart law is used
directly,

    V(x) = (1/gamma3) int omega(y) x (x - y)/|x - y|^3 dy,

and no phantom is needed.  The vortex impulse is

    m = -int omega (x - xi*)^perp dx   (n = 2),
    m = -(1/2) int omega x x dx        (n = 3),

and every such field tends to the dipole -(1/gamma_n) grad(m.x/|x|^n).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import GAMMA2, GAMMA3
from .errors import QuadratureToleranceError, SingularEvaluationError

SINGULAR_RADIUS = 1e-9


def perp(v):
    """(v1, v2) -> (-v2, v1), applied along the last axis."""
    out = np.empty_like(v)
    out[..., 0] = -v[..., 1]
    out[..., 1] = v[..., 0]
    return out


@dataclass
class VorticityModel:
    """Point vortices, a radial patch, or a sampled 3-d vorticity field.

    kind "point-set": centers (M, 2) strictly below {x2 = 0}, strengths
    (M,), phantom center in the closed upper half-plane.  kind
    "radial-patch": radially symmetric profile omega(r) sampled on
    [0, radius] about a center, support strictly inside the fluid.
    kind "sampled-3d": positions (N, 3), vector vorticity samples (N, 3)
    and quadrature weights (N,) supplied at ingestion.
    """

    kind: str = "point-set"
    centers: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    strengths: np.ndarray = field(default_factory=lambda: np.zeros(0))
    phantom: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0]))
    patch_center: np.ndarray | None = None
    patch_radius: float = 0.0
    patch_r: np.ndarray | None = None
    patch_omega: np.ndarray | None = None
    positions3d: np.ndarray | None = None
    omega3d: np.ndarray | None = None
    weights3d: np.ndarray | None = None

    def __post_init__(self):
        self.centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        if self.centers.size == 0:
            self.centers = np.zeros((0, 2))
        self.strengths = np.atleast_1d(np.asarray(self.strengths, dtype=float))
        self.phantom = np.asarray(self.phantom, dtype=float)
        for name in ("patch_center", "patch_r", "patch_omega", "positions3d",
                     "omega3d", "weights3d"):
            v = getattr(self, name)
            if v is not None:
                setattr(self, name, np.asarray(v, dtype=float))

    # -- constructors ----------------------------------------------------

    @classmethod
    def point_vortices(cls, centers, strengths, phantom=(0.0, 1.0)):
        return cls(kind="point-set", centers=centers, strengths=strengths,
                   phantom=phantom).validate()

    @classmethod
    def single_point_vortex(cls, strength, center=(0.0, -1.0), phantom=(0.0, 1.0)):
        return cls.point_vortices([center], [strength], phantom)

    @classmethod
    def radial_patch(cls, center, radius, r_nodes, omega_values,
                     phantom=(0.0, 1.0)):
        return cls(kind="radial-patch", phantom=phantom,
                   patch_center=center, patch_radius=float(radius),
                   patch_r=r_nodes, patch_omega=omega_values).validate()

    @classmethod
    def sampled_3d(cls, positions, omega, weights):
        return cls(kind="sampled-3d", positions3d=positions, omega3d=omega,
                   weights3d=weights).validate()

    # -- invariants -------------------------------------------------------

    def validate(self, divergence_tol=1e-8, check_divergence=False):
        if self.kind == "point-set":
            if len(self.centers) != len(self.strengths):
                raise ValueError("centers and strengths must pair up")
            if np.any(self.centers[:, 1] >= 0.0):
                raise ValueError("point vortices must lie strictly below the surface")
            if self.phantom[1] < 0.0:
                raise ValueError("phantom center must lie in the closed upper half-plane")
        elif self.kind == "radial-patch":
            if self.patch_center is None or self.patch_r is None:
                raise ValueError("radial patch needs center and profile samples")
            if self.patch_center[1] + self.patch_radius >= 0.0:
                raise ValueError("patch support must be strictly inside the fluid")
            if self.patch_r[0] < 0 or self.patch_r[-1] > self.patch_radius + 1e-12:
                raise ValueError("profile samples must live on [0, radius]")
        elif self.kind == "sampled-3d":
            n = len(self.positions3d)
            if self.omega3d.shape != (n, 3) or self.weights3d.shape != (n,):
                raise ValueError("sampled-3d arrays must share their leading size")
            if check_divergence:
                d = weak_divergence_3d(self)
                if d > divergence_tol:
                    raise ValueError(
                        f"sampled vorticity has weak divergence {d:.3e} > {divergence_tol:.1e}")
        else:
            raise ValueError(f"unknown vorticity kind {self.kind!r}")
        return self

    @property
    def dimension(self):
        return 3 if self.kind == "sampled-3d" else 2

    def total_strength(self):
        """Total circulation: sum of point strengths or the patch integral
        (exact for the piecewise-linear profile)."""
        if self.kind == "point-set":
            return float(np.sum(self.strengths))
        if self.kind == "radial-patch":
            return float(_cumulative_circulation(self, self.patch_radius))
        raise ValueError("total strength is a 2-d notion here")

    def scaled_to_strength(self, varpi):
        """Same geometry, strengths rescaled so the total equals varpi."""
        if self.kind == "point-set":
            tot = self.total_strength()
            if tot == 0.0:
                raise ValueError("cannot rescale a zero-strength model")
            return VorticityModel.point_vortices(
                self.centers, self.strengths * (varpi / tot), self.phantom)
        if self.kind == "radial-patch":
            tot = self.total_strength()
            return VorticityModel.radial_patch(
                self.patch_center, self.patch_radius, self.patch_r,
                self.patch_omega * (varpi / tot), self.phantom)
        raise ValueError("rescaling applies to 2-d models")

    # -- serialization ----------------------------------------------------

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "point-set":
            d["centers"] = self.centers.tolist()
            d["strengths"] = self.strengths.tolist()
            d["phantom"] = self.phantom.tolist()
        elif self.kind == "radial-patch":
            d["phantom"] = self.phantom.tolist()
            d["patch"] = {
                "center": self.patch_center.tolist(),
                "radius": self.patch_radius,
                "profile": np.column_stack([self.patch_r, self.patch_omega]).tolist(),
            }
        else:
            d["positions"] = self.positions3d.ravel().tolist()
            d["omega"] = self.omega3d.ravel().tolist()
            d["weights"] = self.weights3d.tolist()
        return d

    @classmethod
    def from_dict(cls, d):
        kind = d["kind"]
        if kind == "point-set":
            return cls.point_vortices(d["centers"], d["strengths"],
                                      d.get("phantom", (0.0, 1.0)))
        if kind == "radial-patch":
            p = d["patch"]
            prof = np.asarray(p["profile"], dtype=float)
            return cls.radial_patch(p["center"], p["radius"], prof[:, 0],
                                    prof[:, 1], d.get("phantom", (0.0, 1.0)))
        if kind == "sampled-3d":
            pos = np.asarray(d["positions"], dtype=float).reshape(-1, 3)
            om = np.asarray(d["omega"], dtype=float).reshape(-1, 3)
            return cls.sampled_3d(pos, om, d["weights"])
        raise ValueError(f"unknown vorticity kind {kind!r}")

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class ImpulseVector:
    """Vortex impulse m with its dimension tag."""

    m: np.ndarray
    n: int

    def __post_init__(self):
        self.m = np.asarray(self.m, dtype=float)
        if not np.all(np.isfinite(self.m)):
            raise ValueError("impulse has non-finite components")


# ---------------------------------------------------------------------------
# 2-d kernels
# ---------------------------------------------------------------------------

def _point_kernel(x, xi):
    """(x - xi)^perp / |x - xi|^2 for x (..., 2) against one center."""
    d = x - xi
    r2 = np.sum(d * d, axis=-1)
    if np.any(r2 < SINGULAR_RADIUS**2):
        raise SingularEvaluationError(f"evaluation at vortex center {xi}")
    return perp(d) / r2[..., None]


def _patch_quadrature_nodes(model, n_r, n_theta):
    rho = model.patch_radius
    r = (np.arange(n_r) + 0.5) * (rho / n_r)
    th = 2.0 * np.pi * np.arange(n_theta) / n_theta
    rr, tt = np.meshgrid(r, th, indexing="ij")
    pts = np.stack([rr * np.cos(tt), rr * np.sin(tt)], axis=-1)
    pts = pts.reshape(-1, 2) + model.patch_center
    om = np.interp(rr.ravel(), model.patch_r, model.patch_omega, right=0.0)
    wq = (rr.ravel() * (rho / n_r) * (2.0 * np.pi / n_theta))
    return pts, om * wq


def _patch_velocity_quadrature(model, x, n_r, n_theta):
    """Polar tensor-product trapezoid sum of the point kernel over the patch.

    Inside the support a one-cell shell around the target is excluded;
    the analytic correction for the excluded locally-uniform (Rankine)
    disk is zero velocity at its own center.
    """
    pts, wq = _patch_quadrature_nodes(model, n_r, n_theta)
    cell = model.patch_radius / n_r
    flat = x.reshape(-1, 2)
    out = np.zeros_like(flat)
    chunk = max(1, int(2e6 / max(len(pts), 1)))
    for i0 in range(0, len(flat), chunk):
        xs = flat[i0:i0 + chunk]
        d = xs[:, None, :] - pts[None, :, :]
        r2 = np.sum(d * d, axis=-1)
        mask = r2 > cell * cell
        ker = np.where(mask, 1.0, 0.0)[..., None] * perp(d)
        with np.errstate(divide="ignore", invalid="ignore"):
            ker = np.where(mask[..., None], ker / np.maximum(r2, 1e-300)[..., None], 0.0)
        out[i0:i0 + chunk] = np.tensordot(ker, wq, axes=([1], [0]))
    return out.reshape(x.shape) / GAMMA2


def _cumulative_circulation(model, r):
    """Gamma(r) = 2 pi int_0^r omega(s) s ds, integrating the piecewise-linear
    profile exactly (keeps the induced velocity C^1 across profile nodes)."""
    rn, wn = model.patch_r, model.patch_omega
    seg = 0.5 * (wn[1:] + wn[:-1]) * (rn[1:] ** 2 - rn[:-1] ** 2) / 2.0 \
        + (wn[1:] - wn[:-1]) * (rn[1:] - rn[:-1]) ** 2 / 12.0
    # exact int_{r_i}^{r_{i+1}} (w_i + slope (s - r_i)) s ds, rearranged
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    rq = np.minimum(np.asarray(r, dtype=float), rn[-1])
    idx = np.clip(np.searchsorted(rn, rq, side="right") - 1, 0, len(rn) - 2)
    r0, r1 = rn[idx], rn[idx + 1]
    w0, w1 = wn[idx], wn[idx + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(r1 > r0, (w1 - w0) / np.maximum(r1 - r0, 1e-300), 0.0)
    t = rq - r0
    partial = w0 * (rq**2 - r0**2) / 2.0 + slope * (t**2 * (2.0 * rq + r0) / 6.0)
    return GAMMA2 * (cum[idx] + partial)


def _patch_velocity_radial(model, x):
    """Azimuthal closed form Gamma(r)/(2 pi r) for a radially symmetric patch."""
    d = x - model.patch_center
    r = np.sqrt(np.sum(d * d, axis=-1))
    gam = _cumulative_circulation(model, r)
    with np.errstate(divide="ignore", invalid="ignore"):
        speed = np.where(r > 0, gam / (GAMMA2 * np.maximum(r, 1e-300)), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        unit = np.where(r[..., None] > 0, perp(d) / np.maximum(r, 1e-300)[..., None], 0.0)
    return speed[..., None] * unit


def biot_savart_2d(model, x, method="auto", tol=1e-8):
    """Vortical velocity V at x for a 2-d model (phantom term included).

    Point sets use the closed-form kernel.  Radial patches default to the
    exact azimuthal form (the converged limit of the polar quadrature);
    method="quadrature" forces the adaptive polar-grid trapezoid sum.
    """
    x = np.asarray(x, dtype=float)
    if model.kind == "point-set":
        out = np.zeros_like(x)
        for xi, s in zip(model.centers, model.strengths):
            out += (s / GAMMA2) * _point_kernel(x, xi)
    elif model.kind == "radial-patch":
        if method == "quadrature":
            out = _adaptive_patch_velocity(model, x, tol)
        else:
            out = _patch_velocity_radial(model, x)
    else:
        raise ValueError("biot_savart_2d needs a 2-d model")
    varpi = model.total_strength()
    if varpi != 0.0:
        out -= (varpi / GAMMA2) * _point_kernel(x, model.phantom)
    return out


def _adaptive_patch_velocity(model, x, tol):
    n_r, n_theta = 48, 96
    prev = _patch_velocity_quadrature(model, x, n_r, n_theta)
    for _ in range(5):
        n_r *= 2
        n_theta *= 2
        cur = _patch_velocity_quadrature(model, x, n_r, n_theta)
        if np.max(np.abs(cur - prev)) < 3.0 * tol:
            # Richardson step for the O(h^2) midpoint rule
            return cur + (cur - prev) / 3.0
        prev = cur
    raise QuadratureToleranceError(
        f"patch quadrature did not reach tol={tol:.1e} at {n_r}x{n_theta}")


def stream_function_2d(model, x):
    """Bracketed potential of the 2-d V definition (log kernels, phantom)."""
    x = np.asarray(x, dtype=float)
    if model.kind == "point-set":
        out = np.zeros(x.shape[:-1])
        for xi, s in zip(model.centers, model.strengths):
            d = x - xi
            r2 = np.sum(d * d, axis=-1)
            if np.any(r2 < SINGULAR_RADIUS**2):
                raise SingularEvaluationError(f"evaluation at vortex center {xi}")
            out += (s / GAMMA2) * 0.5 * np.log(r2)
    elif model.kind == "radial-patch":
        # mean-value identity: the circular average of log|x - y| over
        # |y - c| = s is log(max(|x - c|, s)); outside the support this is
        # exactly (varpi_patch / gamma2) log r
        d = x - model.patch_center
        r = np.atleast_1d(np.sqrt(np.sum(d * d, axis=-1)))
        shape = r.shape
        r = r.ravel()
        rho = model.patch_radius
        varpi_patch = float(_cumulative_circulation(model, rho))
        out = np.where(r >= rho,
                       (varpi_patch / GAMMA2) * np.log(np.maximum(r, 1e-300)), 0.0)
        inside = r < rho
        if np.any(inside):
            ri = r[inside]
            # log r * int_0^r w s ds + int_r^rho w(s) s log s ds, dense grid
            s_dense = np.linspace(0.0, rho, 4096)
            w_dense = np.interp(s_dense, model.patch_r, model.patch_omega)
            head = np.log(np.maximum(ri, 1e-300)) * _cumulative_circulation(model, ri) / GAMMA2
            integ = w_dense * s_dense * np.log(np.maximum(s_dense, 1e-300))
            cum_tail = np.concatenate(
                [[0.0], np.cumsum(0.5 * (integ[1:] + integ[:-1]) * np.diff(s_dense))])
            tail = np.interp(rho, s_dense, cum_tail) - np.interp(ri, s_dense, cum_tail)
            out[inside] = head + tail
        out = out.reshape(shape)
        if np.ndim(np.sum(d * d, axis=-1)) == 0:
            out = float(out[0])
    else:
        raise ValueError("stream_function_2d needs a 2-d model")
    varpi = model.total_strength()
    if varpi != 0.0:
        d = x - model.phantom
        r2 = np.sum(d * d, axis=-1)
        if np.any(r2 < SINGULAR_RADIUS**2):
            raise SingularEvaluationError("evaluation at the phantom center")
        out -= (varpi / GAMMA2) * 0.5 * np.log(r2)
    return out


def velocity_excluding(model, x, skip_index):
    """V at x with point vortex skip_index's own singular kernel removed."""
    if model.kind != "point-set":
        raise ValueError("self-exclusion applies to point vortices")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for i, (xi, s) in enumerate(zip(model.centers, model.strengths)):
        if i == skip_index:
            continue
        out += (s / GAMMA2) * _point_kernel(x, xi)
    varpi = model.total_strength()
    if varpi != 0.0:
        out -= (varpi / GAMMA2) * _point_kernel(x, model.phantom)
    return out


# ---------------------------------------------------------------------------
# 3-d Biot-Savart
# ---------------------------------------------------------------------------

def biot_savart_3d(model, x, shell_warn=True):
    """(1/gamma3) int omega(y) x (x - y)/|x - y|^3 dy by weighted quadrature."""
    if model.kind != "sampled-3d":
        raise ValueError("biot_savart_3d needs a sampled-3d model")
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1, 3)
    pos, om, w = model.positions3d, model.omega3d, model.weights3d
    out = np.zeros_like(flat)
    shell = _sample_spacing(pos)
    chunk = max(1, int(2e6 / max(len(pos), 1)))
    for i0 in range(0, len(flat), chunk):
        xs = flat[i0:i0 + chunk]
        d = xs[:, None, :] - pos[None, :, :]
        r = np.sqrt(np.sum(d * d, axis=-1))
        if shell_warn and shell > 0 and np.any(r < 2.0 * shell):
            est = np.max(w) * np.max(np.linalg.norm(om, axis=1)) / max(shell, 1e-30) ** 2
            warnings.warn(
                f"evaluation inside the quadrature-singular shell; error may reach {est:.2e}",
                stacklevel=2)
        r3 = np.maximum(r, 1e-300) ** 3
        ker = np.cross(om[None, :, :], d) / r3[..., None]
        out[i0:i0 + chunk] = np.tensordot(ker, w, axes=([1], [0]))
    return out.reshape(x.shape) / GAMMA3


def _sample_spacing(pos):
    take = pos[:: max(1, len(pos) // 64)]
    d = np.linalg.norm(take[:, None, :] - pos[None, :, :], axis=-1)
    d[d == 0] = np.inf
    return float(np.median(np.min(d, axis=1)))


def net_vorticity_3d(model):
    """int omega dx by the sample quadrature; ~0 for divergence-free fields."""
    if model.kind != "sampled-3d":
        raise ValueError("net_vorticity_3d needs a sampled-3d model")
    return model.omega3d.T @ model.weights3d


def weak_divergence_3d(model, n_tests=5, seed=7):
    """max_j |int omega . grad(phi_j)| over Gaussian test functions phi_j.

    A divergence-free omega (tangential at boundaries) makes every such
    pairing vanish; this is the discrete divergence check used by the
    model invariant.
    """
    rng = np.random.default_rng(seed)
    pos, om, w = model.positions3d, model.omega3d, model.weights3d
    lo, hi = pos.min(axis=0), pos.max(axis=0)
    scale = float(np.max(hi - lo)) + 1e-12
    worst = 0.0
    for _ in range(n_tests):
        c = lo + (hi - lo) * rng.random(3)
        s = (0.35 + 0.4 * rng.random()) * scale
        d = pos - c
        phi_grad = -2.0 * d / s**2 * np.exp(-np.sum(d * d, axis=1) / s**2)[:, None]
        worst = max(worst, abs(float(np.sum(np.sum(om * phi_grad, axis=1) * w))))
    return worst


# ---------------------------------------------------------------------------
# impulses, moments, far fields
# ---------------------------------------------------------------------------

def vortex_impulse(model):
    """m = -int omega (x - xi*)^perp dx (2-d) or -(1/2) int omega x x dx (3-d)."""
    if model.kind == "point-set":
        m = np.zeros(2)
        for xi, s in zip(model.centers, model.strengths):
            m -= s * perp(xi - model.phantom)
        return ImpulseVector(m, 2)
    if model.kind == "radial-patch":
        # radial symmetry collapses the first moment to the centroid
        m = -model.total_strength() * perp(model.patch_center - model.phantom)
        return ImpulseVector(m, 2)
    mom = np.cross(model.omega3d, model.positions3d)
    return ImpulseVector(-0.5 * mom.T @ model.weights3d, 3)


def dipole_far_field(m, x, n=None):
    """-(1/gamma_n) grad(m.x / |x|^n) evaluated at x (the far field of V)."""
    if isinstance(m, ImpulseVector):
        n = m.n
        m = m.m
    if n is None:
        n = len(np.atleast_1d(m))
    m = np.asarray(m, dtype=float)
    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    if np.any(r2 < SINGULAR_RADIUS**2):
        raise SingularEvaluationError("dipole far field is singular at the origin")
    gamma = GAMMA2 if n == 2 else GAMMA3
    rn = r2 ** (n / 2.0)
    grad = m / rn[..., None] - n * np.sum(m * x, axis=-1)[..., None] * x / (rn * r2)[..., None]
    return -grad / gamma


def moment_norm(model, k):
    """int |x|^k |omega| dx; point masses contribute |xi|^k |varpi|."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if model.kind == "point-set":
        if len(model.centers) == 0:
            return 0.0
        r = np.linalg.norm(model.centers, axis=1)
        return float(np.sum(r**k * np.abs(model.strengths)))
    if model.kind == "radial-patch":
        # weights returned by the node builder already carry omega * area
        pts, wq = _patch_quadrature_nodes(model, 256, 256)
        r = np.linalg.norm(pts, axis=1)
        return float(np.sum(r**k * np.abs(wq)))
    r = np.linalg.norm(model.positions3d, axis=1)
    return float(np.sum(r**k * np.linalg.norm(model.omega3d, axis=1) * model.weights3d))


def singular_integral_sup(model, s, probes):
    """sup over probes of the quadrature of int |omega(y)| / |x - y|^s dy."""
    probes = np.asarray(probes, dtype=float)
    if model.kind == "radial-patch":
        pts, wq = _patch_quadrature_nodes(model, 128, 128)
        dim = 2
    elif model.kind == "sampled-3d":
        pts, wq = model.positions3d, np.linalg.norm(model.omega3d, axis=1) * model.weights3d
        dim = 3
    else:
        raise ValueError("singular integral bound applies to distributed vorticity")
    if not 0 < s < dim:
        raise ValueError("exponent s must lie in (0, n)")
    d = probes[:, None, :] - pts[None, :, :]
    r = np.maximum(np.linalg.norm(d, axis=-1), 1e-6)
    return float(np.max((r ** (-s)) @ np.abs(wq)))


def patch_norms(model, p):
    """(L^1, L^p) norms of a radial patch profile, by polar quadrature."""
    r, w = model.patch_r, np.abs(model.patch_omega)
    l1 = GAMMA2 * np.trapezoid(w * r, r)
    lp = (GAMMA2 * np.trapezoid(w**p * r, r)) ** (1.0 / p)
    return float(l1), float(lp)
