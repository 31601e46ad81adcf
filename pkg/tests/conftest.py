import numpy as np
import pytest

from ballcover.shape_model import Grid, parse_shape, rasterize
from ballcover.geom_core import Point2

SQUARE_TEXT = (
    "intersect{ halfplane 1 0 1 halfplane -1 0 1 "
    "halfplane 0 1 1 halfplane 0 -1 1 }"
)
STADIUM_TEXT = "union{ disk -1 0 1 disk 1 0 1 " + SQUARE_TEXT + " }"


def make_grid(text: str, bbox, n: int) -> Grid:
    h = (bbox[2] - bbox[0]) / n
    return rasterize(parse_shape(text), bbox, h)


def random_grid(rng: np.random.Generator, n: int) -> Grid:
    """Random blobby occupancy: union of a few random disks on [0,1]^2."""
    k = int(rng.integers(1, 5))
    h = 1.0 / n
    xs = h * (np.arange(n) + 0.5)
    X, Y = np.meshgrid(xs, xs)
    occ = np.zeros((n, n), dtype=bool)
    for _ in range(k):
        cx, cy = rng.uniform(0.1, 0.9, 2)
        r = rng.uniform(0.05, 0.35)
        occ |= (X - cx) ** 2 + (Y - cy) ** 2 <= r * r
    return Grid(h=h, origin=Point2(float(xs[0]), float(xs[0])), occupancy=occ)


def brute_force_edt_sq(target: np.ndarray) -> np.ndarray:
    """O(N^2 * M) exact squared cell distances to the nearest True cell."""
    out = np.full(target.shape, np.inf)
    ty, tx = np.nonzero(target)
    if ty.size == 0:
        return out
    for iy in range(target.shape[0]):
        for ix in range(target.shape[1]):
            out[iy, ix] = np.min((ty - iy) ** 2 + (tx - ix) ** 2)
    return out


@pytest.fixture(scope="session")
def disk_grid_256():
    return make_grid("disk 0 0 1", (-1.5, -1.5, 1.5, 1.5), 256)


@pytest.fixture(scope="session")
def square_grid_256():
    return make_grid(SQUARE_TEXT, (-1.5, -1.5, 1.5, 1.5), 256)


@pytest.fixture(scope="session")
def stadium_grid_256():
    return make_grid(STADIUM_TEXT, (-2.5, -1.5, 2.5, 1.5), 256)
