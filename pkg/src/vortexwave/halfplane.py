"""Dirichlet and strip-source Poisson problems on the lower half-plane.

Two explicit kernels drive everything:

* the Poisson kernel for {Y < 0}, applied as the Fourier multiplier
  exp(|k| Y) on decaying boundary data, with a fitted A/(1 + X^2) far-edge
  closure whose extension A (1 - Y)/(X^2 + (1 - Y)^2) is handled in closed
  form;
* the image-charge Green's kernel for the strip source problem,

      G(X, Y; W, Z) = -(1/4 pi) [ log(|W-X|^2 + |Z-Y|^2)
                                  - log(|W-X|^2 + |Z+Y|^2) ],

  applied per wavenumber:  Ghat_k(Y, Z) = (1/2|k|) (e^{-|k||Y-Z|}
  - e^{|k|(Y+Z)}), with the k = 0 mode -max(Y, Z).

Note the orientation: the kernel G above is positive (log of the image
ratio), so Psi = int f G solves Delta Psi = -f.  `strip_green_solve`
keeps that orientation; the solver-facing `StripPoisson` flips the sign
and solves Delta Psi = f, Psi = 0 on T directly.

Weighted norms use w(X, Y) = (X^2 + (1-Y)^2)/(1-Y) >= 1, the algebraic
weight enforcing dipole-rate decay.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .config import GridConfig
from .errors import SupportError

_NEG_CLIP = -700.0  # exp underflow guard


def weight_w(x, y=0.0):
    """w(X, Y) = (X^2 + (1 - Y)^2)/(1 - Y); equals 1 + X^2 on T."""
    x = np.asarray(x, dtype=float)
    t = 1.0 - np.asarray(y, dtype=float)
    return (x * x + t * t) / t


class HalfPlaneGrid:
    """Uniform FFT grid in X on [-L, L), monotone rows from Y = 0 to -H."""

    def __init__(self, x=None, y=None, config=None):
        if config is not None:
            config.validate()
            x = config.x_nodes()
            y = config.y_nodes()
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        if self.y[0] != 0.0 or np.any(np.diff(self.y) >= 0):
            raise ValueError("y rows must start at 0 and decrease")
        self.nx = len(self.x)
        self.ny = len(self.y)
        self.half_width = -float(self.x[0])
        self.dx = float(self.x[1] - self.x[0])
        # period 2L: wavenumbers j*pi/L
        self.k = np.fft.rfftfreq(self.nx, d=self.dx) * 2.0 * math.pi
        self.strip_rows = np.where(self.y >= -1.0 - 1e-12)[0]

    @classmethod
    def from_config(cls, config):
        return cls(config=config)

    def row_weights(self):
        """Trapezoid weights along the (decreasing) Y rows, positive."""
        w = np.zeros(self.ny)
        dy = -np.diff(self.y)
        w[:-1] += 0.5 * dy
        w[1:] += 0.5 * dy
        return w


def spectral_x_deriv(values, grid, order):
    if order == 0:
        return values.copy()
    vhat = np.fft.rfft(values, axis=-1)
    mult = (1j * grid.k) ** order
    if order % 2 == 1 and grid.nx % 2 == 0:
        mult[-1] = 0.0  # drop the unpaired Nyquist mode for odd derivatives
    return np.fft.irfft(vhat * mult, n=grid.nx, axis=-1)


def fornberg_weights(z0, z, m):
    """Finite-difference weights at z0 for derivatives 0..m on nodes z."""
    n = len(z)
    c = np.zeros((n, m + 1))
    c1, c4 = 1.0, z[0] - z0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2, c5 = 1.0, c4
        c4 = z[i] - z0
        for j in range(i):
            c3 = z[i] - z[j]
            c2 *= c3
            if j == i - 1:
                for v in range(mn, 0, -1):
                    c[i, v] = c1 * (v * c[i - 1, v - 1] - c5 * c[i - 1, v]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for v in range(mn, 0, -1):
                c[j, v] = (c4 * c[j, v] - v * c[j, v - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


def y_derivative(values, y, order, npts=None):
    """Derivative along monotone rows by local Fornberg stencils (4th order)."""
    if order == 0:
        return values.copy()
    ny = len(y)
    npts = min(ny, npts or (order + 4))
    out = np.empty_like(values)
    for j in range(ny):
        lo = min(max(0, j - npts // 2), ny - npts)
        w = fornberg_weights(y[j], y[lo:lo + npts], order)[:, order]
        out[j] = w @ values[lo:lo + npts]
    return out


class HalfPlaneField:
    """Scalar samples on a HalfPlaneGrid with derivative access to order 3.

    X derivatives are spectral, Y derivatives use 4th-order nonuniform
    stencils; fields built by the solvers carry an `analytic` handle with
    exact derivatives which takes precedence.
    """

    def __init__(self, grid, values, analytic=None):
        self.grid = grid
        self.values = np.asarray(values, dtype=float)
        if self.values.shape != (grid.ny, grid.nx):
            raise ValueError("values must be shaped (ny, nx)")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")
        self.analytic = analytic

    def deriv(self, dx_order=0, dy_order=0):
        if self.analytic is not None:
            return self.analytic.deriv_rows(dx_order, dy_order)
        out = spectral_x_deriv(self.values, self.grid, dx_order)
        if dy_order:
            out = y_derivative(out, self.grid.y, dy_order)
        return out

    def trace(self):
        return self.values[0].copy()

    def __add__(self, other):
        return HalfPlaneField(self.grid, self.values + other.values)

    def __sub__(self, other):
        return HalfPlaneField(self.grid, self.values - other.values)

    def to_csv(self, path, meta=None, fmt="%.12e"):
        X, Y = np.meshgrid(self.grid.x, self.grid.y)
        data = np.column_stack([X.ravel(), Y.ravel(), self.values.ravel()])
        np.savetxt(path, data, fmt=fmt, delimiter=",", header="X,Y,value",
                   comments="")
        if meta is not None:
            with open(str(path) + ".meta.json", "w") as fh:
                json.dump(meta, fh, indent=1, sort_keys=True)


# ---------------------------------------------------------------------------
# harmonic extension
# ---------------------------------------------------------------------------

def _poisson_bump(x, y, dx_order=0, dy_order=0):
    """Derivatives of (1-Y)/(X^2 + (1-Y)^2) = Im 1/(X - i(1-Y)).

    With w = X - i(1 - Y): d/dX -> d/dw, d/dY -> i d/dw, so the (a, b)
    derivative is Im[i^b (-1)^(a+b) (a+b)! / w^(a+b+1)].
    """
    w = np.asarray(x, dtype=float) - 1j * (1.0 - np.asarray(y, dtype=float))
    m = dx_order + dy_order
    return np.imag((1j ** dy_order) * (-1.0) ** m * math.factorial(m)
                   / w ** (m + 1))


class HarmonicExtension:
    """Bounded harmonic extension of decaying boundary data.

    Values along Y come from the multiplier exp(|k| Y); the fitted
    C/(1 + X^2) tail is extended in closed form, which both kills
    periodization ringing and makes the canonical decaying datum exact.
    """

    def __init__(self, h, grid, fit_tail=True, decay_warn=True):
        h = np.asarray(h, dtype=float)
        if h.shape != (grid.nx,):
            raise ValueError("boundary data must live on the X grid")
        self.grid = grid
        self.tail_coeff = 0.0
        if decay_warn:
            self._check_decay(h, grid)
        if fit_tail:
            edge = int(0.02 * grid.nx)
            window = np.r_[np.arange(edge), np.arange(grid.nx - edge, grid.nx)]
            coeff = float(np.mean(h[window] * (1.0 + grid.x[window] ** 2)))
            resid = h - coeff / (1.0 + grid.x**2)
            if np.max(np.abs(resid)) <= 1.05 * np.max(np.abs(h)) + 1e-300:
                self.tail_coeff = coeff
                h = resid
        self.hhat = np.fft.rfft(h)

    @staticmethod
    def _check_decay(h, grid):
        cw = np.abs(h) * (1.0 + grid.x**2)
        edge = int(0.01 * grid.nx) + 1
        mid = cw[(np.abs(grid.x) < 0.5 * grid.half_width)]
        scale = float(np.median(mid)) + 1e-300
        if max(np.max(cw[:edge]), np.max(cw[-edge:])) > 4.0 * scale + 1e-13:
            warnings.warn(
                "boundary data does not decay like 1/X^2; half-plane "
                "truncation may pollute the extension", stacklevel=3)

    def _multiplier(self, y, dx_order, dy_order):
        k = self.grid.k
        damp = np.exp(np.maximum(np.multiply.outer(np.asarray(y, dtype=float), k),
                                 _NEG_CLIP))
        mult = (1j * k) ** dx_order * k**dy_order
        if dx_order % 2 == 1 and self.grid.nx % 2 == 0:
            mult = mult.copy()
            mult[-1] = 0.0
        return damp * mult

    def deriv_rows(self, dx_order=0, dy_order=0, y=None):
        y = self.grid.y if y is None else np.atleast_1d(y)
        coeff = self.hhat[None, :] * self._multiplier(y, dx_order, dy_order)
        out = np.fft.irfft(coeff, n=self.grid.nx, axis=-1)
        if self.tail_coeff:
            X, Y = np.meshgrid(self.grid.x, y)
            out += self.tail_coeff * _poisson_bump(X, Y, dx_order, dy_order)
        return out

    def values_rows(self, y=None):
        return self.deriv_rows(0, 0, y=y)

    def field(self):
        return HalfPlaneField(self.grid, self.deriv_rows(0, 0), analytic=self)

    def eval_points(self, x, y, dx_order=0, dy_order=0):
        """Exact evaluation at scattered points by direct Fourier summation."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        k = self.grid.k
        scale = np.full(len(k), 2.0)
        scale[0] = 1.0
        if self.grid.nx % 2 == 0:
            scale[-1] = 1.0
        mult = (1j * k) ** dx_order * k**dy_order
        if dx_order % 2 == 1 and self.grid.nx % 2 == 0:
            mult = mult.copy()
            mult[-1] = 0.0
        coeff = self.hhat * mult * scale / self.grid.nx
        out = np.zeros(x.shape, dtype=float)
        x0 = self.grid.x[0]
        chunk = max(1, int(4e6 / max(len(x), 1)))
        for i0 in range(0, len(k), chunk):
            kk = k[i0:i0 + chunk]
            damp = np.exp(np.maximum(np.multiply.outer(y, kk), _NEG_CLIP))
            phase = np.exp(1j * np.multiply.outer(x - x0, kk))
            out += np.real((phase * damp) @ coeff[i0:i0 + chunk])
        if self.tail_coeff:
            out += self.tail_coeff * _poisson_bump(x, y, dx_order, dy_order)
        return out


def harmonic_extension(h, grid, fit_tail=True):
    """Bounded harmonic extension of boundary samples h; trace equals h."""
    return HarmonicExtension(h, grid, fit_tail=fit_tail).field()


# ---------------------------------------------------------------------------
# strip Poisson solver
# ---------------------------------------------------------------------------

class StripPoisson:
    """Solution of Delta Psi = f in {Y<0}, Psi = 0 on T, supp f in the strip.

    Per wavenumber the source density (piecewise linear on the strip rows)
    is integrated against the 1-d Green's function in closed form, so row
    values are exact for the interpolated density and all exponentials
    carry nonpositive arguments.
    """

    def __init__(self, f_strip, grid):
        self.grid = grid
        rows = grid.strip_rows
        self.z = grid.y[rows]            # 0 down to -1
        self.fhat = np.fft.rfft(np.asarray(f_strip, dtype=float), axis=-1)
        if self.fhat.shape[0] != len(rows):
            raise ValueError("strip source must be sampled on the strip rows")
        self._values = None
        self._dvalues = None

    def _assemble(self):
        if self._values is not None:
            return
        grid = self.grid
        k = grid.k[1:]                      # k = 0 handled separately
        y = grid.y
        z = self.z
        fh = self.fhat.T                    # (nk, nz)
        val = np.zeros((len(y), len(grid.k)), dtype=complex)
        dval = np.zeros_like(val)

        for l in range(len(z) - 1):
            a, b = z[l], z[l + 1]           # a > b
            h = a - b
            fa, fb = fh[1:, l], fh[1:, l + 1]
            s = (fa - fb) / h
            kk = k
            inv = 1.0 / kk
            inv2 = inv * inv
            # J+(c) = int_b^a e^{k(Z-c)} phi dZ, valid for c >= a
            # J-(c) = int_b^a e^{-k(Z-c)} phi dZ, valid for c <= b
            above = y >= a - 1e-15
            below = y <= b + 1e-15
            ya, yb = y[above], y[below]
            ea = np.exp(np.maximum(np.multiply.outer(a - ya, kk), _NEG_CLIP))
            eb = np.exp(np.maximum(np.multiply.outer(b - ya, kk), _NEG_CLIP))
            d_above = ea * (fa * inv - s * inv2) - eb * (fb * inv - s * inv2)
            em_a = np.exp(np.maximum(np.multiply.outer(yb - a, kk), _NEG_CLIP))
            em_b = np.exp(np.maximum(np.multiply.outer(yb - b, kk), _NEG_CLIP))
            d_below = em_a * (-fa * inv - s * inv2) - em_b * (-fb * inv - s * inv2)
            # image part, valid for every row: c = -Y >= 0 >= a
            ia = np.exp(np.maximum(np.multiply.outer(y + a, kk), _NEG_CLIP))
            ib = np.exp(np.maximum(np.multiply.outer(y + b, kk), _NEG_CLIP))
            img = ia * (fa * inv - s * inv2) - ib * (fb * inv - s * inv2)
            # Psi_hat += -(1/2k) (D - I); dPsi/dY uses dD = -k D (above),
            # +k D (below), dI = +k I
            val[above, 1:] += -(0.5 * inv) * d_above
            val[below, 1:] += -(0.5 * inv) * d_below
            val[:, 1:] += (0.5 * inv) * img
            dval[above, 1:] += 0.5 * d_above
            dval[below, 1:] += -0.5 * d_below
            dval[:, 1:] += 0.5 * img

        # k = 0 mode: G = max(Y, Z)
        f0 = self.fhat[:, 0]
        intf = np.zeros(len(z) - 1, dtype=complex)
        intzf = np.zeros(len(z) - 1, dtype=complex)
        for l in range(len(z) - 1):
            a, b = z[l], z[l + 1]
            h = a - b
            fa, fb = f0[l], f0[l + 1]
            intf[l] = 0.5 * (fa + fb) * h
            # int_b^a Z phi(Z) dZ with phi linear
            s = (fa - fb) / h
            intzf[l] = fb * (a * a - b * b) / 2.0 + s * (h * h * (2.0 * a + b) / 6.0)
        for l in range(len(z) - 1):
            a, b = z[l], z[l + 1]
            above = y >= a - 1e-15
            below = y <= b + 1e-15
            val[above, 0] += y[above] * intf[l]
            dval[above, 0] += intf[l]
            val[below, 0] += intzf[l]
        self._values = val
        self._dvalues = dval

    def deriv_rows(self, dx_order=0, dy_order=0):
        self._assemble()
        grid = self.grid
        if dy_order == 0:
            base = self._values
        elif dy_order == 1:
            base = self._dvalues
        elif dy_order == 2:
            # ODE identity: Psi_YY = k^2 Psi + f
            base = grid.k[None, :] ** 2 * self._values
            extra = np.zeros((grid.ny, len(grid.k)), dtype=complex)
            extra[grid.strip_rows] = self.fhat
            base = base + extra
        else:
            raise ValueError("strip potential derivatives available to order 2 in Y")
        mult = (1j * grid.k) ** dx_order
        if dx_order % 2 == 1 and grid.nx % 2 == 0:
            mult = mult.copy()
            mult[-1] = 0.0
        return np.fft.irfft(base * mult, n=grid.nx, axis=-1)

    def values_rows(self):
        return self.deriv_rows(0, 0)

    def field(self):
        return HalfPlaneField(self.grid, self.values_rows(), analytic=self)

    def eval_points(self, x, y, dx_order=0, dy_order=0):
        """Scattered evaluation: exact in X (Fourier sum), cubic Hermite in Y."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        rows_v = self.deriv_rows(dx_order, 0)
        rows_d = self.deriv_rows(dx_order, 1)
        yy = self.grid.y
        out_v = _fourier_rows_at(rows_v, self.grid, x)
        out_d = _fourier_rows_at(rows_d, self.grid, x)
        return _hermite_y(yy, out_v, out_d, y, dy_order)


def _fourier_rows_at(rows, grid, x):
    """Evaluate row-wise samples at arbitrary X by trigonometric interpolation."""
    rhat = np.fft.rfft(rows, axis=-1)
    scale = np.full(len(grid.k), 2.0)
    scale[0] = 1.0
    if grid.nx % 2 == 0:
        scale[-1] = 1.0
    coeff = rhat * (scale / grid.nx)
    phase = np.exp(1j * np.multiply.outer(x - grid.x[0], grid.k))
    return np.real(coeff @ phase.T)


def _hermite_y(ynodes, vals, dvals, y, dy_order):
    """Cubic Hermite interpolation (and its first derivative) along Y."""
    t = -ynodes
    tq = -np.asarray(y, dtype=float)
    idx = np.clip(np.searchsorted(t, tq, side="right") - 1, 0, len(t) - 2)
    h = t[idx + 1] - t[idx]
    s = (tq - t[idx]) / h
    # vals shaped (ny, npts): pick per-point rows
    pick = np.arange(len(tq))
    v0 = vals[idx, pick]
    v1 = vals[idx + 1, pick]
    d0 = -dvals[idx, pick] * h
    d1 = -dvals[idx + 1, pick] * h
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    if dy_order == 0:
        return h00 * v0 + h10 * d0 + h01 * v1 + h11 * d1
    dh00 = 6 * s**2 - 6 * s
    dh10 = 3 * s**2 - 4 * s + 1
    dh01 = -6 * s**2 + 6 * s
    dh11 = 3 * s**2 - 2 * s
    ddt = (dh00 * v0 + dh10 * d0 + dh01 * v1 + dh11 * d1) / h
    if dy_order == 1:
        return -ddt
    raise ValueError("Hermite evaluation supports dy_order 0 or 1")


def strip_poisson_solve(f, grid):
    """Delta Psi = f with Psi = 0 on T for f supported in the strip [-1, 0]."""
    values = f.values if isinstance(f, HalfPlaneField) else np.asarray(f, dtype=float)
    _check_strip_support(values, grid)
    sp = StripPoisson(values[grid.strip_rows], grid)
    return sp.field()


def strip_green_solve(f, grid):
    """Psi(x) = int f(W, Z) G dW dZ with the image-charge kernel G above.

    G is the positive log-ratio kernel, so the result solves
    Delta Psi = -f with Psi = 0 on T.
    """
    field = strip_poisson_solve(f, grid)
    return HalfPlaneField(grid, -field.values, analytic=_Negated(field.analytic))


class _Negated:
    def __init__(self, inner):
        self._inner = inner

    def deriv_rows(self, dx_order=0, dy_order=0):
        return -self._inner.deriv_rows(dx_order, dy_order)

    def eval_points(self, x, y, dx_order=0, dy_order=0):
        return -self._inner.eval_points(x, y, dx_order, dy_order)


def strip_green_kernel(x, y, w, z):
    """Pointwise image-charge kernel G(X,Y,W,Z) used by strip_green_solve."""
    r2 = (w - x) ** 2 + (z - y) ** 2
    r2_img = (w - x) ** 2 + (z + y) ** 2
    return -(np.log(r2) - np.log(r2_img)) / (4.0 * math.pi)


def strip_green_kernel_periodic(x, y, w, z, half_width):
    """2L-periodized image-charge kernel, summed in closed form:

        sum_n G(X + 2Ln, ...) = -(1/4 pi) log[ (cosh(q(Z-Y)) - cos(q(W-X)))
                                              / (cosh(q(Z+Y)) - cos(q(W-X))) ],

    q = pi/L.  This is the continuum kernel the FFT-based solver realizes;
    brute-force quadrature against it is the dense-double-quadrature oracle.
    """
    q = math.pi / half_width
    cosx = np.cos(q * (w - x))
    num = np.cosh(q * (z - y)) - cosx
    den = np.cosh(q * (z + y)) - cosx
    return -np.log(num / den) / (4.0 * math.pi)


def _check_strip_support(values, grid):
    below = grid.y < -1.0 - 1e-12
    if np.any(below):
        floor = 1e-13 * (np.max(np.abs(values)) + 1e-300)
        if np.max(np.abs(values[below])) > floor:
            raise SupportError("strip source must vanish for Y <= -1")


# ---------------------------------------------------------------------------
# the solution operator K
# ---------------------------------------------------------------------------

def dirichlet_K(eta, varpi, f, model, c1, params, grid):
    """Linear solution operator of the flattened problem, as printed:
    strip_green_solve(f) plus the harmonic extension of
    c1*eta - psi_V(X, eta(X)).

    The solver itself composes the same primitives with the orientation
    fixed by the physical Bernoulli condition (see solver.residual_F).
    """
    from .vorticity import stream_function_2d

    eta = np.asarray(eta, dtype=float)
    if model is not None and abs(varpi) > 0:
        pts = np.column_stack([grid.x, eta])
        psi_v = stream_function_2d(model, pts)
    else:
        psi_v = np.zeros(grid.nx)
    boundary = c1 * eta - psi_v
    out = harmonic_extension(boundary, grid).values
    if f is not None:
        fv = f.values if isinstance(f, HalfPlaneField) else np.asarray(f, dtype=float)
        if np.max(np.abs(fv)) > 0:
            out = out + strip_green_solve(fv, grid).values
    return HalfPlaneField(grid, out)


# ---------------------------------------------------------------------------
# weighted norms
# ---------------------------------------------------------------------------

@dataclass
class WeightedNormReport:
    order: int
    alpha: float | None
    value: float
    grid_descriptor: str

    def __post_init__(self):
        if self.value < 0 or not np.isfinite(self.value):
            raise ValueError("weighted norm must be finite and nonnegative")


def _holder_seminorm_1d(vals, x, alpha, weight):
    dx = x[1] - x[0]
    smax = max(1, int(np.floor((1.0 - 1e-12) / dx)))
    best = np.zeros_like(vals)
    for s in range(1, smax + 1):
        diff = np.abs(vals[s:] - vals[:-s]) / (s * dx) ** alpha
        best[:-s] = np.maximum(best[:-s], diff)
        best[s:] = np.maximum(best[s:], diff)
    return float(np.max(weight * best))


def weighted_norm(data, order=0, alpha=None, grid=None, x=None):
    """Discrete weighted Hoelder norm: sum over |beta| <= order of
    sup w |d^beta f|, plus (alpha given) the top-order local seminorm
    sampled over axis-aligned node pairs within unit distance.

    `data` is a HalfPlaneField, or 1-d boundary samples with `x` (or a
    grid supplying its X nodes).  The grid-sampled seminorm is a lower
    bound of the continuum one.
    """
    if isinstance(data, HalfPlaneField):
        grid = data.grid
        w2 = weight_w(grid.x[None, :], grid.y[:, None])
        total = 0.0
        tops = []
        for a in range(order + 1):
            for b in range(order + 1 - a):
                d = data.deriv(a, b)
                total += float(np.max(w2 * np.abs(d)))
                if a + b == order:
                    tops.append(d)
        if alpha is not None:
            for d in tops:
                best = np.zeros_like(d)
                dx = grid.dx
                smax = max(1, int(np.floor((1.0 - 1e-12) / dx)))
                for s in range(1, smax + 1):
                    diff = np.abs(d[:, s:] - d[:, :-s]) / (s * dx) ** alpha
                    best[:, :-s] = np.maximum(best[:, :-s], diff)
                    best[:, s:] = np.maximum(best[:, s:], diff)
                for j in range(1, len(grid.y)):
                    gap = grid.y[j - 1] - grid.y[j]
                    if gap < 1.0:
                        diff = np.abs(d[j] - d[j - 1]) / gap**alpha
                        best[j] = np.maximum(best[j], diff)
                        best[j - 1] = np.maximum(best[j - 1], diff)
                total += float(np.max(w2 * best))
        desc = f"{grid.nx}x{grid.ny} half-plane grid"
        return WeightedNormReport(order, alpha, total, desc)

    vals = np.asarray(data, dtype=float)
    if x is None:
        if grid is None:
            raise ValueError("boundary samples need their X nodes")
        x = grid.x
    x = np.asarray(x, dtype=float)
    wts = weight_w(x, 0.0)
    total = 0.0
    tops = []
    line_grid = grid or HalfPlaneGrid(x=x, y=np.array([0.0, -1.0]))
    for m in range(order + 1):
        d = spectral_x_deriv(vals[None, :], line_grid, m)[0] if m else vals
        total += float(np.max(wts * np.abs(d)))
        if m == order:
            tops.append(d)
    if alpha is not None:
        for d in tops:
            total += _holder_seminorm_1d(d, x, alpha, wts)
    return WeightedNormReport(order, alpha, total, f"{len(x)} boundary nodes")
