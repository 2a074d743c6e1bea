"""Physical parameters, the vertical cutoff, and grid geometry.

Conventions used throughout the package:

* the fluid at rest fills the lower half-plane {x2 < 0} (2-d) or
  half-space {x3 < 0} (3-d); gravity points down,
* gamma_n is the surface area of the unit sphere in R^n
  (gamma_2 = 2*pi, gamma_3 = 4*pi),
* perp of a vector: (v1, v2)^perp = (-v2, v1), and the perpendicular
  gradient is (-d/dx2, d/dx1),
* the flattening map is x1 = X, x2 = Y + eta(X) * a(Y) with a vertical
  cutoff a supported in [-1, 1], a(0) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

GAMMA2 = 2.0 * math.pi
GAMMA3 = 4.0 * math.pi


class Cutoff:
    """Vertical cutoff a(Y) = (1 - Y^2)^3 on [-1, 0], zero below.

    Even in Y, a(0) = 1, supported in [-1, 1], with two continuous
    derivatives (all that f1 assembly consumes).  a'(0) = 0 and
    a'(-1) = 0, so the flattening map is the identity on the surface
    row and at the depth of the point vortex.
    """

    support = 1.0

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        inside = np.abs(y) < 1.0
        out = np.zeros_like(y)
        out[inside] = (1.0 - y[inside] ** 2) ** 3
        return out if out.ndim else float(out)

    def deriv(self, y, order=1):
        y = np.asarray(y, dtype=float)
        inside = np.abs(y) < 1.0
        out = np.zeros_like(y)
        s = y[inside]
        if order == 1:
            out[inside] = -6.0 * s * (1.0 - s**2) ** 2
        elif order == 2:
            out[inside] = -6.0 * (1.0 - s**2) ** 2 + 24.0 * s**2 * (1.0 - s**2)
        else:
            raise ValueError("cutoff derivatives available up to order 2")
        return out if out.ndim else float(out)

    def max_abs_deriv(self):
        s = np.linspace(0.0, 1.0, 4001)
        return float(np.max(np.abs(-6.0 * s * (1.0 - s**2) ** 2)))


@dataclass
class PhysicalParams:
    """Gravity, surface tension, decay bookkeeping and the cutoff.

    sigma > 0 is required on the solver path (strong surface tension);
    diagnostics accept sigma = 0 fields.  eps_decay is the algebraic
    decay margin recorded with tail fits; moment_order is the vorticity
    moment exponent k used to validate models (k > 4 in 2-d).
    """

    g: float = 1.0
    sigma: float = 1.0
    eps_decay: float = 0.1
    moment_order: float = 5.0
    cutoff: Cutoff = field(default_factory=Cutoff)

    def validate(self, solving=False):
        if not self.g > 0:
            raise ValueError("g must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if solving and not self.sigma > 0:
            raise ValueError("solver path requires sigma > 0")
        if not 0 < self.eps_decay < 1.0 / 9.0:
            raise ValueError("eps_decay must lie in (0, 1/9)")
        if not self.moment_order > 4:
            raise ValueError("moment_order must exceed 4")
        if abs(float(self.cutoff(0.0)) - 1.0) > 1e-13:
            raise ValueError("cutoff must satisfy a(0) = 1")
        return self

    def cutoff_samples(self, y):
        """Samples of (a, a', a'') on the given Y nodes."""
        a = self.cutoff
        return a(y), a.deriv(y, 1), a.deriv(y, 2)

    def strong_tension_margin(self, c1):
        """sigma - c1^2 / (4 g); must stay positive for the G multiplier."""
        return self.sigma - c1 * c1 / (4.0 * self.g)


@dataclass
class GridConfig:
    """Half-plane grid: uniform FFT grid in X, strip-refined rows in Y.

    X covers [-L, L) with nx nodes (power of two).  Y runs from 0 down
    to -depth: uniform spacing inside the source strip [-1, 0] (where
    the flattening cutoff lives), geometric coarsening below.
    """

    half_width: float = 400.0
    nx: int = 8192
    depth: float = 40.0
    ny: int = 136

    def validate(self):
        if self.nx < 16 or (self.nx & (self.nx - 1)) != 0:
            raise ValueError("nx must be a power of two (>= 16)")
        if self.half_width <= 0 or self.depth <= 1.0:
            raise ValueError("half_width must be positive and depth > 1")
        if self.ny < 24:
            raise ValueError("ny must be at least 24")
        return self

    @property
    def dx(self):
        return 2.0 * self.half_width / self.nx

    def x_nodes(self):
        return -self.half_width + self.dx * np.arange(self.nx)

    def y_nodes(self):
        """Monotone decreasing from 0 to -depth, with a node at Y = -1."""
        n_strip = max(25, int(round(0.38 * self.ny)))
        n_deep = self.ny - n_strip
        strip = np.linspace(0.0, -1.0, n_strip)
        # geometric spacing below the strip, first step matching the strip's
        h0 = 1.0 / (n_strip - 1)
        r = _geometric_ratio(self.depth - 1.0, h0, n_deep)
        steps = h0 * r ** np.arange(n_deep)
        steps *= (self.depth - 1.0) / steps.sum()
        deep = -1.0 - np.cumsum(steps)
        deep[-1] = -self.depth
        return np.concatenate([strip, deep])


def _geometric_ratio(total, h0, n, iters=80):
    """Ratio r with h0 * (r + r^2 + ... + r^n) ... solved for sum = total."""
    if n <= 0:
        raise ValueError("need at least one deep node")
    lo, hi = 1.0 + 1e-12, 4.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        s = h0 * (mid * (mid**n - 1.0) / (mid - 1.0))
        if s < total:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
