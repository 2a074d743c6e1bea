"""Steady-wave solver: F(psi, eta, varpi) = 0 plus the advection condition.

Unknown ordering mirrors the upper-triangular linearized structure: an
outer quasi-Newton iteration on eta preconditioned by (g - sigma d_XX)^-1
(the G2 kernel), an inner Picard refresh of psi (harmonic extension of
the kinematic trace plus the strip Poisson solve of f1), and a scalar
update of the wave speed from the advection condition

    c = (u - own singular kernel)(xi),    xi = (0, -1),

whose leading term is the phantom-vortex velocity -varpi/(4 pi) e1.  For
g = sigma = 1 the converged family obeys c1(varpi) ~ -varpi/(4 pi) and
eta ~ (varpi^2/4 pi^2) (g - sigma d_XX)^{-1} ((X^2-1)/(1+X^2)^2).

Radial-patch models run in frozen-patch mode: c is set by the advection
formula at the patch centroid (or supplied), and interior streamline
constancy of the vorticity is not enforced; states are flagged as not
dynamically consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import GridConfig, PhysicalParams
from .errors import NonConvergenceError, StrongTensionError
from .halfplane import HalfPlaneGrid, HarmonicExtension, StripPoisson, weight_w
from .surface import (
    SurfaceProfile,
    apply_surface_kernel,
    assemble_f1,
    boundary_data,
    dynamic_residual,
    flatten_coords,
    residual_F,
    surface_vortical,
    unflatten_depth,
)
from .vorticity import (
    VorticityModel,
    biot_savart_2d,
    velocity_excluding,
    vortex_impulse,
)

VORTEX_DEPTH = np.array([0.0, -1.0])


class StreamFunction:
    """Irrotational-part stream function: harmonic + strip-source parts."""

    def __init__(self, grid, harmonic=None, strip=None):
        self.grid = grid
        self.harmonic = harmonic
        self.strip = strip

    def deriv_rows(self, dx_order=0, dy_order=0):
        out = np.zeros((self.grid.ny, self.grid.nx))
        if self.harmonic is not None:
            out += self.harmonic.deriv_rows(dx_order, dy_order)
        if self.strip is not None:
            out += self.strip.deriv_rows(dx_order, dy_order)
        return out

    def eval_points(self, x, y, dx_order=0, dy_order=0):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(x.shape)
        if self.harmonic is not None:
            out += self.harmonic.eval_points(x, y, dx_order, dy_order)
        if self.strip is not None:
            out += self.strip.eval_points(x, y, dx_order, dy_order)
        return out

    def at_vortex(self, grid, dx_order=0, dy_order=0):
        """Exact value at the flattened vortex point (0, -1) (a grid node)."""
        row = int(grid.strip_rows[-1])
        col = int(np.argmin(np.abs(grid.x)))
        return float(self.deriv_rows(dx_order, dy_order)[row, col])


def _even_symmetrize(values):
    return 0.5 * (values + np.roll(values[::-1], 1))


@dataclass
class WaveState:
    """Converged (or attempted) wave: profile, stream function, speed."""

    profile: SurfaceProfile
    psi: StreamFunction
    c1: float
    varpi: float
    params: PhysicalParams
    model: VorticityModel
    grid: HalfPlaneGrid
    residuals: dict = field(default_factory=dict)
    converged: bool = False
    iterations: int = 0
    dynamically_consistent: bool = True
    history: list = field(default_factory=list)

    @property
    def c(self):
        return np.array([self.c1, 0.0])

    @property
    def eta(self):
        return self.profile.eta

    def impulse(self):
        return vortex_impulse(self.model)

    def surface_traces(self):
        """(psi_X, psi_Y) on T."""
        return self.psi.deriv_rows(1, 0)[0], self.psi.deriv_rows(0, 1)[0]

    def surface_velocity(self):
        """Physical velocity components on S = (X, eta(X))."""
        psi_x, psi_y = self.surface_traces()
        v1, v2, _ = surface_vortical(self.model, self.profile, self.varpi)
        eta_x = self.profile.eta_x
        return -psi_y + v1, psi_x - eta_x * psi_y + v2

    def velocity_at(self, points, parts=False):
        """Physical velocity u = perp-grad psi + V at scattered points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x, x2 = pts[:, 0], pts[:, 1]
        eta_here = _trig_interp(self.profile.eta, self.grid, x)
        etax_here = _trig_interp(self.profile.eta_x, self.grid, x)
        cut = self.params.cutoff
        y = unflatten_depth(eta_here, cut, x2)
        a = cut(y)
        ay = cut.deriv(y, 1)
        jac = 1.0 + eta_here * ay
        psi_x = self.psi.eval_points(x, y, 1, 0)
        psi_y = self.psi.eval_points(x, y, 0, 1)
        dpsi_dx2 = psi_y / jac
        dpsi_dx1 = psi_x - (etax_here * a / jac) * psi_y
        grad_phi = np.column_stack([-dpsi_dx2, dpsi_dx1])
        v = biot_savart_2d(self.model, pts) if self.varpi != 0.0 else np.zeros_like(pts)
        if parts:
            return grad_phi + v, grad_phi, v
        return grad_phi + v

    def kinematic_residual(self):
        """(u - c) . N on S (unnormalized by <eta_X>), physical coordinates."""
        u1, u2 = self.surface_velocity()
        eta_x = self.profile.eta_x
        norm = np.sqrt(1.0 + eta_x**2)
        return (-eta_x * (u1 - self.c1) + u2) / norm

    def summary(self):
        return {
            "varpi": self.varpi,
            "c1": self.c1,
            "eta_max": float(np.max(self.eta)),
            "eta_min": float(np.min(self.eta)),
            "eta_sup": float(np.max(np.abs(self.eta))),
            "converged": self.converged,
            "iterations": self.iterations,
            "residual_field": self.residuals.get("field", np.nan),
            "residual_boundary": self.residuals.get("boundary", np.nan),
            "residual_advection": self.residuals.get("advection", np.nan),
            "odd_part_max": self.residuals.get("odd_part", np.nan),
            "dynamically_consistent": self.dynamically_consistent,
        }


def _trig_interp(values, grid, x):
    from .halfplane import _fourier_rows_at

    return _fourier_rows_at(values[None, :], grid, np.atleast_1d(x))[0]


def default_model(varpi, phantom=(0.0, 1.0)):
    """Single point vortex of strength varpi at depth (0, -1)."""
    return VorticityModel.single_point_vortex(varpi, center=tuple(VORTEX_DEPTH),
                                              phantom=phantom)


def _advection_velocity(state_psi, model, grid):
    """u at the vortex center minus its own singular kernel, flattened
    evaluation at the node (0, -1) where the map is the identity."""
    if model.kind == "point-set":
        i_self = int(np.argmin(np.linalg.norm(model.centers - VORTEX_DEPTH, axis=1)))
        v_excl = velocity_excluding(model, VORTEX_DEPTH, i_self)
    else:
        # radial patch: own field vanishes at the centroid by symmetry
        v_excl = biot_savart_2d(
            VorticityModel(kind="point-set", phantom=model.phantom),
            model.patch_center)
        varpi = model.total_strength()
        from .config import GAMMA2
        from .vorticity import _point_kernel, perp
        v_excl = -(varpi / GAMMA2) * _point_kernel(
            np.asarray(model.patch_center, dtype=float), model.phantom)
        del perp
    psi_grad = np.array([
        -state_psi.at_vortex(grid, 0, 1),   # -psi_Y -> u1 part
        state_psi.at_vortex(grid, 1, 0),    # +psi_X -> u2 part
    ])
    return psi_grad + v_excl


def advection_residual(state):
    """c - [perp-grad psi + V excluding the vortex's own kernel] at xi."""
    if state.model.kind not in ("point-set", "radial-patch"):
        raise ValueError("advection applies to 2-d models")
    vel = _advection_velocity(state.psi, state.model, state.grid)
    return state.c - vel


def solve_wave(varpi, params=None, model=None, grid=None, init=None,
               tol=1e-10, max_outer=50, inner_picard=2, varpi_max=0.5,
               frozen_c=None):
    """Solve the flattened system together with the advection condition.

    Returns a WaveState with field, boundary and advection residuals at or
    below tol (weighted sup norms).  varpi = 0 returns the trivial state.
    """
    params = (params or PhysicalParams()).validate(solving=True)
    grid = grid or HalfPlaneGrid.from_config(GridConfig())
    if abs(varpi) > varpi_max:
        raise ValueError(f"|varpi| exceeds the configured bound {varpi_max}")
    if model is None:
        model = default_model(varpi)
    elif abs(model.total_strength() - varpi) > 1e-12 * max(1.0, abs(varpi)):
        model = model.scaled_to_strength(varpi)
    patch_mode = model.kind == "radial-patch"

    x = grid.x
    if init is not None:
        eta = init.profile.eta.copy()
        c1 = init.c1 if frozen_c is None else frozen_c
    else:
        eta = np.zeros(grid.nx)
        c1 = 0.0
    w_top = weight_w(x, 0.0)
    w_all = weight_w(x[None, :], grid.y[:, None])
    max_aprime = params.cutoff.max_abs_deriv()

    psi = StreamFunction(grid)
    if varpi == 0.0:
        state = WaveState(SurfaceProfile.zero(x), psi, 0.0, 0.0, params,
                          model, grid, residuals={"field": 0.0, "boundary": 0.0,
                                                  "advection": 0.0, "odd_part": 0.0},
                          converged=True, iterations=0)
        return state

    if init is None:
        # phantom-only advection seed
        c1 = float(_advection_velocity(psi, model, grid)[0]) \
            if frozen_c is None else frozen_c

    history = []
    converged = False
    for it in range(1, max_outer + 1):
        if np.max(np.abs(eta)) * max_aprime >= 1.0:
            raise NonConvergenceError("flattening bound ||eta|| ||a'|| < 1 violated")
        if params.strong_tension_margin(c1) <= 0.0:
            raise StrongTensionError("sigma <= c1^2/(4g) at an iterate")

        profile = SurfaceProfile(x, eta)
        v1, v2, psi_v = surface_vortical(model, profile, varpi)
        hb = _even_symmetrize(-c1 * eta - psi_v)
        harmonic = HarmonicExtension(hb, grid, decay_warn=False)

        # inner Picard on psi through the strip source f1
        strip = psi.strip
        contraction = np.nan
        prev_delta = None
        for _ in range(inner_picard):
            trial = StreamFunction(grid, harmonic, strip)
            f1 = assemble_f1(trial, profile, params, grid)
            if np.max(np.abs(f1)) < 1e-300:
                strip_new = None
            else:
                strip_new = StripPoisson(f1[grid.strip_rows], grid)
            delta = _strip_delta(strip, strip_new, grid)
            if prev_delta is not None and prev_delta > 0:
                contraction = delta / prev_delta
            prev_delta = delta
            strip = strip_new
            if delta == 0.0:
                break
        psi = StreamFunction(grid, harmonic, strip)

        # boundary update, preconditioned by the G2 kernel
        f2res = dynamic_residual(psi, profile, varpi, model, c1, params,
                                 v_surface=(v1, v2))
        eta_new = _even_symmetrize(
            eta - apply_surface_kernel(f2res, params, c1, "G2", grid=grid))

        # wave speed from the advection condition
        if frozen_c is None:
            c1_new = float(_advection_velocity(psi, model, grid)[0])
        else:
            c1_new = frozen_c

        # residuals of the full system at the new iterate
        profile_new = SurfaceProfile(x, eta_new)
        res_b = float(np.max(w_top * np.abs(
            dynamic_residual(psi, profile_new, varpi, model, c1_new, params))))
        f1_now = assemble_f1(psi, profile_new, params, grid)
        target = HarmonicExtension(
            _even_symmetrize(boundary_data(profile_new, varpi, model, c1_new)),
            grid, decay_warn=False).deriv_rows(0, 0)
        if np.max(np.abs(f1_now)) > 1e-300:
            target = target + StripPoisson(f1_now[grid.strip_rows], grid).values_rows()
        res_f = float(np.max(w_all * np.abs(psi.deriv_rows(0, 0) - target)))
        adv = 0.0 if frozen_c is not None else float(abs(
            c1_new - _advection_velocity(psi, model, grid)[0]))
        odd = profile_new.odd_part_max()
        history.append({"iteration": it, "field": res_f, "boundary": res_b,
                        "advection": adv, "odd_part": odd,
                        "picard_contraction": contraction,
                        "c1": c1_new, "eta_sup": float(np.max(np.abs(eta_new)))})
        eta, c1 = eta_new, c1_new
        if max(res_f, res_b, adv) <= tol:
            converged = True
            break

    profile = SurfaceProfile(x, eta)
    state = WaveState(profile, psi, c1, varpi, params, model, grid,
                      residuals={"field": history[-1]["field"],
                                 "boundary": history[-1]["boundary"],
                                 "advection": history[-1]["advection"],
                                 "odd_part": history[-1]["odd_part"]},
                      converged=converged, iterations=len(history),
                      dynamically_consistent=not patch_mode and frozen_c is None,
                      history=history)
    if not converged:
        raise NonConvergenceError(
            f"no convergence in {max_outer} outer iterations "
            f"(field {history[-1]['field']:.2e}, boundary {history[-1]['boundary']:.2e})",
            residuals=state.residuals)
    return state


def _strip_delta(old, new, grid):
    if old is None and new is None:
        return 0.0
    a = old.values_rows() if old is not None else 0.0
    b = new.values_rows() if new is not None else 0.0
    return float(np.max(np.abs(b - a)))


def state_residual_F(state):
    """Public residual pair on a WaveState (surface.residual_F wrapper)."""
    return residual_F(state.psi, state.profile, state.varpi, state.c1,
                      state.params, state.model, state.grid)


@dataclass
class ContinuationRecord:
    """Ordered sweep results; strictly monotone varpi, every entry converged."""

    entries: list = field(default_factory=list)
    truncated_reason: str = ""

    def append(self, state, diagnostics=None):
        if self.entries and not (
                abs(state.varpi) > abs(self.entries[-1]["varpi"])):
            raise ValueError("sweep strengths must be strictly monotone")
        row = state.summary()
        if diagnostics:
            row.update(diagnostics)
        self.entries.append(row)

    def varpis(self):
        return np.array([e["varpi"] for e in self.entries])

    def column(self, key):
        return np.array([e.get(key, np.nan) for e in self.entries])


def continuation_sweep(varpis, params=None, model_template=None, grid=None,
                       tol=1e-10, diagnostics_fn=None, max_halvings=3):
    """Warm-started solves along a monotone strength grid.

    On a failed step the increment from the last good strength is halved
    (up to max_halvings refinement solves) to rebuild a usable warm start;
    if the target still fails, the record is truncated with the reason.
    """
    params = params or PhysicalParams()
    grid = grid or HalfPlaneGrid.from_config(GridConfig())
    record = ContinuationRecord()
    varpis = list(varpis)
    if not varpis:
        return record
    state = None
    last_good = 0.0
    for target in varpis:
        try:
            state = _solve_with_halving(target, last_good, state, params,
                                        model_template, grid, tol, max_halvings)
        except (NonConvergenceError, StrongTensionError, ValueError) as exc:
            record.truncated_reason = f"varpi={target}: {exc}"
            break
        diag = diagnostics_fn(state) if diagnostics_fn else None
        record.append(state, diag)
        last_good = target
    return record


def _solve_with_halving(target, last_good, warm, params, model_template,
                        grid, tol, max_halvings):
    def make_model(v):
        if model_template is None:
            return default_model(v)
        return model_template.scaled_to_strength(v)

    try:
        return solve_wave(target, params, make_model(target), grid,
                          init=warm, tol=tol)
    except NonConvergenceError:
        if max_halvings <= 0:
            raise
    lo, state = last_good, warm
    for _ in range(max_halvings):
        mid = 0.5 * (lo + target)
        state = solve_wave(mid, params, make_model(mid), grid, init=state,
                           tol=tol)
        lo = mid
    return solve_wave(target, params, make_model(target), grid, init=state,
                      tol=tol)
