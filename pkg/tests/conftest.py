import numpy as np
import pytest

from vortexwave.config import GridConfig, PhysicalParams
from vortexwave.halfplane import HalfPlaneGrid


class AnalyticRows:
    """psi-like adapter with exact derivative rows of a manufactured field.

    derivs maps (dx_order, dy_order) -> callable(X, Y); missing entries
    raise, keeping tests honest about what they exercise.
    """

    def __init__(self, grid, derivs):
        self.grid = grid
        self.derivs = derivs

    def deriv_rows(self, dx_order=0, dy_order=0):
        fn = self.derivs[(dx_order, dy_order)]
        X, Y = np.meshgrid(self.grid.x, self.grid.y)
        return fn(X, Y)

    def eval_points(self, x, y, dx_order=0, dy_order=0):
        return self.derivs[(dx_order, dy_order)](np.asarray(x), np.asarray(y))


def make_grid(L=20.0, nx=256, n_strip=41, n_deep=30, depth=8.0):
    x = -L + (2.0 * L / nx) * np.arange(nx)
    strip = np.linspace(0.0, -1.0, n_strip)
    deep = np.linspace(-1.0, -depth, n_deep + 1)[1:]
    return HalfPlaneGrid(x=x, y=np.concatenate([strip, deep]))


@pytest.fixture
def params():
    return PhysicalParams().validate()


@pytest.fixture
def small_grid_fx():
    return make_grid()


@pytest.fixture(scope="session")
def default_grid():
    return HalfPlaneGrid.from_config(GridConfig())
