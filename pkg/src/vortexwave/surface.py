"""Flattened free-surface system: nonlinearities, multipliers, residuals.

The flattening x1 = X, x2 = Y + eta(X) a(Y) maps the fluid domain onto
{Y < 0} whenever ||eta||_inf ||a'||_inf < 1.  Writing J = 1 + eta a_Y,
the field equation Delta_x psi = 0 becomes

    psi_XX + psi_YY - f1(psi, eta) = 0,

with f1 cubic in eta and supported in the strip {-1 < Y < 0} (three
groups, linear/quadratic/cubic in eta).  On T the traces obey
psi_{x2} = psi_Y and psi_{x1} = psi_X - eta_X psi_Y (the cutoff is even,
so a'(0) = 0), and the Bernoulli condition

    1/2 |u|^2 - c . u + g eta - sigma eta_XX (1 + eta_X^2)^{-3/2} = 0,
    u = (-psi_Y + V1, psi_X - eta_X psi_Y + V2) on T,

expands into g eta - sigma eta_XX + c1 psi_Y - c1 V1 - f2 = 0 up to the
curvature correction.  f2 collects the velocity quadratics; both V
components are evaluated on the physical surface (X, eta(X)).

The surface Fourier multipliers:
    Ghat  = 1/(sigma k^2 - |c||k| + g)   (needs sigma > c^2/4g),
    G2hat = 1/(sigma k^2 + g)            (kernel e^{-sqrt(g/sigma)|X|}
                                          / (2 sqrt(sigma g)), mass 1/g),
    G1hat = Ghat - G2hat.
"""

from __future__ import annotations

import numpy as np

from .errors import MappingDegeneracyError, StrongTensionError
from .halfplane import HalfPlaneField, HalfPlaneGrid, spectral_x_deriv
from .vorticity import biot_savart_2d, stream_function_2d


class SurfaceProfile:
    """Surface elevation samples on the X grid with spectral derivatives."""

    def __init__(self, x, eta):
        self.x = np.asarray(x, dtype=float)
        self.eta = np.asarray(eta, dtype=float)
        if self.eta.shape != self.x.shape:
            raise ValueError("eta must be sampled on the X nodes")
        if not np.all(np.isfinite(self.eta)):
            raise ValueError("eta must be finite")
        self._grid = HalfPlaneGrid(x=self.x, y=np.array([0.0, -1.0]))

    @classmethod
    def zero(cls, x):
        return cls(x, np.zeros_like(np.asarray(x, dtype=float)))

    def deriv(self, order):
        return spectral_x_deriv(self.eta[None, :], self._grid, order)[0]

    @property
    def eta_x(self):
        return self.deriv(1)

    @property
    def eta_xx(self):
        return self.deriv(2)

    def odd_part_max(self):
        """Deviation from evenness in X on the periodic grid."""
        flipped = np.roll(self.eta[::-1], 1)
        return 0.5 * float(np.max(np.abs(self.eta - flipped)))

    def symmetrized(self):
        flipped = np.roll(self.eta[::-1], 1)
        return SurfaceProfile(self.x, 0.5 * (self.eta + flipped))


def flatten_coords(eta_at_x, cutoff, x, y, check=True):
    """Physical depth x2 = Y + eta(X) a(Y) of flattened coordinates (X, Y)."""
    y = np.asarray(y, dtype=float)
    eta_at_x = np.asarray(eta_at_x, dtype=float)
    if check:
        jac = 1.0 + eta_at_x * cutoff.deriv(y, 1)
        if np.any(jac <= 0.0):
            raise MappingDegeneracyError("1 + eta a'(Y) lost positivity")
    return y + eta_at_x * cutoff(y)


def unflatten_depth(eta_at_x, cutoff, x2, iters=8):
    """Invert x2 = Y + eta a(Y) for Y (Newton; the correction is tiny)."""
    y = np.asarray(x2, dtype=float).copy()
    for _ in range(iters):
        res = y + eta_at_x * cutoff(y) - x2
        jac = 1.0 + eta_at_x * cutoff.deriv(y, 1)
        y -= res / jac
    return y


def _psi_rows(psi, dx_order, dy_order):
    if hasattr(psi, "deriv_rows"):
        return psi.deriv_rows(dx_order, dy_order)
    if isinstance(psi, HalfPlaneField):
        return psi.deriv(dx_order, dy_order)
    raise TypeError("psi must expose deriv_rows or be a HalfPlaneField")


def assemble_f1(psi, profile, params, grid):
    """Flattened-Laplacian source f1(psi, eta), exactly zero below Y = -1.

    Term-for-term the printed three groups (linear, quadratic and cubic
    in eta); equal to (psi_XX + psi_YY) - J^3 Delta_x psi for the
    flattening Jacobian J = 1 + eta a_Y.
    """
    rows = grid.strip_rows
    y = grid.y[rows]
    a, ay, ayy = params.cutoff_samples(y)
    a, ay, ayy = a[:, None], ay[:, None], ayy[:, None]

    eta = profile.eta[None, :]
    eta_x = profile.eta_x[None, :]
    eta_xx = profile.eta_xx[None, :]

    psi_y = _psi_rows(psi, 0, 1)[rows]
    psi_yy = _psi_rows(psi, 0, 2)[rows]
    psi_xx = _psi_rows(psi, 2, 0)[rows]
    psi_xy = _psi_rows(psi, 1, 1)[rows]

    lin = (ay * eta * psi_yy - a * eta_xx * psi_y - ayy * eta * psi_y
           + 3.0 * ay * eta * psi_xx - 2.0 * a * eta_x * psi_xy)
    quad = (a**2 * eta_x**2 * psi_yy - 2.0 * a * ay * eta * eta_xx * psi_y
            + 2.0 * a * ay * eta_x**2 * psi_y + 3.0 * ay**2 * eta**2 * psi_xx
            - 4.0 * a * ay * eta * eta_x * psi_xy)
    cub = eta * (a**2 * ay * eta_x**2 * psi_yy - a * ay**2 * eta * eta_xx * psi_y
                 - a**2 * ayy * eta_x**2 * psi_y + 2.0 * a * ay**2 * eta_x**2 * psi_y
                 + ay**3 * eta**2 * psi_xx - 2.0 * a * ay**2 * eta * eta_x * psi_xy)

    out = np.zeros((grid.ny, grid.nx))
    out[rows] = -(lin + quad + cub)
    return out


def surface_vortical(model, profile, varpi):
    """(V1, V2, psi_V) on the physical surface (X, eta(X))."""
    if model is None or varpi == 0.0:
        z = np.zeros_like(profile.eta)
        return z, z.copy(), z.copy()
    pts = np.column_stack([profile.x, profile.eta])
    v = biot_savart_2d(model, pts)
    psi_v = stream_function_2d(model, pts)
    return v[:, 0], v[:, 1], psi_v


def assemble_f2(psi, profile, varpi, model, sigma, grid=None,
                v_surface=None):
    """Surface nonlinearity f2 on T, per the printed formula:

        f2 = -1/2 (V1^2 - 2 psi_Y V1 + V2^2 + 2 psi_X V2 + psi_Y^2 + psi_X^2)
             + eta_X psi_Y (V2 + psi_X) - 1/2 eta_X^2 psi_Y^2
             + sigma ((1 + eta_X^2)^{3/2} - 1) eta_XX.

    The non-capillary part equals -1/2 |u|^2 on T.  Pass sigma=0 for the
    pure velocity quadratics.
    """
    if psi is None:
        psi_x = np.zeros_like(profile.eta)
        psi_y = np.zeros_like(profile.eta)
    else:
        psi_x = _psi_rows(psi, 1, 0)[0]
        psi_y = _psi_rows(psi, 0, 1)[0]
    if v_surface is None:
        v1, v2, _ = surface_vortical(model, profile, varpi)
    else:
        v1, v2 = v_surface
    eta_x = profile.eta_x
    eta_xx = profile.eta_xx
    out = -0.5 * (v1**2 - 2.0 * psi_y * v1 + v2**2 + 2.0 * psi_x * v2
                  + psi_y**2 + psi_x**2)
    out += eta_x * psi_y * (v2 + psi_x) - 0.5 * eta_x**2 * psi_y**2
    if sigma:
        out += sigma * ((1.0 + eta_x**2) ** 1.5 - 1.0) * eta_xx
    return out


# ---------------------------------------------------------------------------
# surface Fourier multipliers
# ---------------------------------------------------------------------------

def surface_multiplier(k, params, c1, kernel):
    k = np.abs(np.asarray(k, dtype=float))
    g, sigma = params.g, params.sigma
    g2 = 1.0 / (sigma * k**2 + g)
    if kernel == "G2":
        return g2
    if params.strong_tension_margin(c1) <= 0.0:
        raise StrongTensionError(
            f"sigma={sigma} <= c1^2/(4 g) = {c1 * c1 / (4 * g):.3e}")
    full = 1.0 / (sigma * k**2 - abs(c1) * k + g)
    if kernel == "G":
        return full
    if kernel == "G1":
        return full - g2
    raise ValueError("kernel must be one of 'G', 'G1', 'G2'")


def apply_surface_kernel(rhs, params, c1=0.0, kernel="G2", grid=None, x=None):
    """Convolution with G, G1 or G2 as a Fourier multiplier on the X grid."""
    rhs = np.asarray(rhs, dtype=float)
    if grid is None:
        grid = HalfPlaneGrid(x=np.asarray(x, dtype=float),
                             y=np.array([0.0, -1.0]))
    mult = surface_multiplier(grid.k, params, c1, kernel)
    return np.fft.irfft(np.fft.rfft(rhs) * mult, n=grid.nx)


def g2_kernel_samples(x, params):
    """Real-space G2 kernel (1/(2 sqrt(sigma g))) e^{-sqrt(g/sigma)|X|}."""
    lam = np.sqrt(params.g / params.sigma)
    return np.exp(-lam * np.abs(np.asarray(x, dtype=float))) \
        / (2.0 * np.sqrt(params.sigma * params.g))


def linearize_trivial(dpsi, deta, params, grid=None, x=None):
    """Frechet derivative of the operator at the trivial state:
    diag(identity, g - sigma d^2/dX^2)."""
    deta = np.asarray(deta, dtype=float)
    if grid is None:
        grid = HalfPlaneGrid(x=np.asarray(x, dtype=float),
                             y=np.array([0.0, -1.0]))
    deta_xx = spectral_x_deriv(deta[None, :], grid, 2)[0]
    return dpsi, params.g * deta - params.sigma * deta_xx


# ---------------------------------------------------------------------------
# the full residual
# ---------------------------------------------------------------------------

def boundary_data(profile, varpi, model, c1):
    """Dirichlet trace of psi on T: the kinematic condition integrated once,
    psi + psi_V(X, eta(X)) + c1 eta = 0."""
    _, _, psi_v = surface_vortical(model, profile, varpi)
    return -c1 * profile.eta - psi_v


def dynamic_residual(psi, profile, varpi, model, c1, params,
                     v_surface=None):
    """Pointwise Bernoulli residual on T in flattened variables:

        g eta - sigma eta_XX (1+eta_X^2)^{-3/2} + c1 psi_Y - c1 V1 - f2_quad,

    which vanishes iff 1/2|u|^2 - c.u + g eta = sigma curvature on S.
    """
    if v_surface is None:
        v1, v2, _ = surface_vortical(model, profile, varpi)
    else:
        v1, v2 = v_surface
    f2q = assemble_f2(psi, profile, varpi, model, 0.0, v_surface=(v1, v2))
    eta_x = profile.eta_x
    curv = profile.eta_xx / (1.0 + eta_x**2) ** 1.5
    if psi is None:
        psi_y = np.zeros_like(profile.eta)
    else:
        psi_y = _psi_rows(psi, 0, 1)[0]
    return (params.g * profile.eta - params.sigma * curv
            + c1 * psi_y - c1 * v1 - f2q)


def residual_F(psi, profile, varpi, c1, params, model, grid):
    """Residual pair (F1, F2) of the flattened system.

    F1 = psi - [strip Poisson solve of f1(psi, eta) + harmonic extension
    of the kinematic trace]; F2 is the dynamic residual above.  At the
    trivial state both components linearize to diag(id, g - sigma d_XX).
    """
    from .halfplane import harmonic_extension, strip_poisson_solve

    f1 = assemble_f1(psi, profile, params, grid)
    hb = boundary_data(profile, varpi, model, c1)
    target = harmonic_extension(hb, grid).values
    if np.max(np.abs(f1)) > 0.0:
        target = target + strip_poisson_solve(f1, grid).values
    psi_vals = _psi_rows(psi, 0, 0)
    field_res = HalfPlaneField(grid, psi_vals - target)
    bdry_res = dynamic_residual(psi, profile, varpi, model, c1, params)
    return field_res, bdry_res
