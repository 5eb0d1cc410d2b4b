"""
Voxelization of a CityMap into a dense occupancy lattice for grid planners.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, NamedTuple, Tuple

import numpy as np

from .city_map import CityMap
from .errors import GridBudgetError
from .geometry import Vec3

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 10.0
DEFAULT_CELL_BUDGET = 2_000_000


class GridIndex(NamedTuple):
    """Cell coordinates; tuple ordering gives the lexicographic tie-break."""
    i: int
    j: int
    k: int


@dataclass(frozen=True)
class OccupancyGrid:
    """
    Dense boolean lattice covering the map bounds.

    Attributes:
        resolution: Cell edge length in meters
        origin: World position of the lower corner of cell (0, 0, 0)
        occupancy: Boolean array of shape (nx, ny, nz), True = blocked
    """
    resolution: float
    origin: Vec3
    occupancy: np.ndarray = field(repr=False, compare=False)
    _axes: Tuple[np.ndarray, np.ndarray, np.ndarray] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.resolution > 0:
            raise ValueError(f"resolution must be > 0, got {self.resolution}")
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.ndim != 3 or min(occ.shape) < 1:
            raise ValueError(f"occupancy must be a non-empty 3D array, got shape {occ.shape}")
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)
        object.__setattr__(self, "_axes", tuple(
            _cell_centers(o, self.resolution, n)
            for o, n in zip(self.origin.as_tuple(), occ.shape)
        ))

    @property
    def dims(self) -> Tuple[int, int, int]:
        return tuple(int(n) for n in self.occupancy.shape)

    @property
    def cell_count(self) -> int:
        return int(self.occupancy.size)

    def in_bounds(self, index: GridIndex) -> bool:
        nx, ny, nz = self.occupancy.shape
        return 0 <= index[0] < nx and 0 <= index[1] < ny and 0 <= index[2] < nz

    def is_free(self, index: GridIndex) -> bool:
        return self.in_bounds(index) and not bool(self.occupancy[index[0], index[1], index[2]])

    def cell_center(self, index: GridIndex) -> Vec3:
        ax, ay, az = self._axes
        return Vec3(float(ax[index[0]]), float(ay[index[1]]), float(az[index[2]]))

    def index_of(self, p: Vec3) -> GridIndex:
        """Cell containing p, clamped to the lattice."""
        idx = []
        for value, o, n in zip(p.as_tuple(), self.origin.as_tuple(), self.occupancy.shape):
            c = int(math.floor((value - o) / self.resolution))
            idx.append(min(max(c, 0), n - 1))
        return GridIndex(*idx)

    def cells_near(self, p: Vec3, radius_cells: int) -> List[GridIndex]:
        """Free cells in the cube of half-width radius_cells around p, nearest first."""
        center = self.index_of(p)
        found = []
        for di in range(-radius_cells, radius_cells + 1):
            for dj in range(-radius_cells, radius_cells + 1):
                for dk in range(-radius_cells, radius_cells + 1):
                    idx = GridIndex(center.i + di, center.j + dj, center.k + dk)
                    if self.is_free(idx):
                        found.append((self.cell_center(idx).distance_to(p), idx))
        found.sort()
        return [idx for _, idx in found]

    def iter_free(self) -> Iterator[GridIndex]:
        for i, j, k in zip(*np.nonzero(~self.occupancy)):
            yield GridIndex(int(i), int(j), int(k))


def _cell_centers(origin: float, resolution: float, n: int) -> np.ndarray:
    centers = origin + (np.arange(n, dtype=float) + 0.5) * resolution
    centers.setflags(write=False)
    return centers


def voxelize(city: CityMap, resolution: float = DEFAULT_RESOLUTION,
             cell_budget: int = DEFAULT_CELL_BUDGET) -> OccupancyGrid:
    """
    Rasterize a map: a cell is occupied iff its center is not free.

    Cell centers falling outside the bounds (when an extent is not a multiple
    of the resolution) are marked occupied.

    Raises:
        ValueError: Non-positive resolution
        GridBudgetError: Lattice larger than cell_budget
    """
    if not resolution > 0:
        raise ValueError(f"resolution must be > 0, got {resolution}")
    b_lo, b_hi = city.bounds_arrays()
    dims = tuple(max(1, int(math.ceil((hi - lo) / resolution))) for lo, hi in zip(b_lo, b_hi))
    cells = dims[0] * dims[1] * dims[2]
    if cells > cell_budget:
        raise GridBudgetError(cells, cell_budget)

    axes = [_cell_centers(o, resolution, n) for o, n in zip(b_lo, dims)]
    inside = [(ax >= lo) & (ax <= hi) for ax, lo, hi in zip(axes, b_lo, b_hi)]
    occupancy = ~(inside[0][:, None, None] & inside[1][None, :, None] & inside[2][None, None, :])

    inf_lo, inf_hi = city.inflated_arrays
    for lo, hi in zip(inf_lo, inf_hi):
        spans = []
        for axis in range(3):
            hits = np.nonzero((axes[axis] >= lo[axis]) & (axes[axis] <= hi[axis]))[0]
            if hits.size == 0:
                break
            spans.append(slice(int(hits[0]), int(hits[-1]) + 1))
        else:
            occupancy[spans[0], spans[1], spans[2]] = True

    logger.debug("voxelized %s cells at %.2f m, %.1f%% occupied",
                 dims, resolution, 100.0 * occupancy.mean())
    return OccupancyGrid(resolution=float(resolution), origin=city.bounds_min, occupancy=occupancy)
