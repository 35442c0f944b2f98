"""Truncated half-space discretization and sampled fields.

The computational domain is [-L, L]^{n-1} x {graded vertical levels}.  The
horizontal lattice is uniform with periodic wrap (2L/h must be a power of
two so spectral transforms are cheap); the vertical ladder refines
geometrically toward the boundary, where both the decay weights and the tent
measure concentrate.

Grids and fields are immutable after construction.
"""

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .quadrature import vertical_weights


class GridError(ValueError):
    pass


def _is_power_of_two(m):
    return m >= 1 and (m & (m - 1)) == 0


@dataclass(frozen=True)
class HalfSpaceGrid:
    """Uniform periodic horizontal lattice times a graded vertical ladder."""

    dim: int
    extent: float          # L; horizontal domain [-L, L]^{n-1}
    step: float            # h
    levels: tuple          # strictly increasing positive vertical levels

    def __post_init__(self):
        if self.dim < 2:
            raise GridError("dim must be >= 2")
        if self.extent <= 0 or self.step <= 0 or self.step > self.extent:
            raise GridError("need 0 < h <= L")
        m = 2.0 * self.extent / self.step
        if abs(m - round(m)) > 1e-9 or not _is_power_of_two(int(round(m))):
            raise GridError("2L/h must be a power of two")
        lv = np.asarray(self.levels, dtype=float)
        if lv.size == 0 or lv[0] <= 0 or np.any(np.diff(lv) <= 0):
            raise GridError("levels must be strictly increasing and positive")

    @property
    def n_horizontal(self):
        return int(round(2.0 * self.extent / self.step))

    @property
    def horizontal_shape(self):
        return (self.n_horizontal,) * (self.dim - 1)

    @property
    def shape(self):
        return (len(self.levels),) + self.horizontal_shape

    @property
    def horizontal_axis(self):
        return -self.extent + self.step * np.arange(self.n_horizontal)

    def horizontal_points(self):
        """Meshgrid of horizontal coordinates, shape (*horizontal_shape, n-1)."""
        ax = self.horizontal_axis
        mesh = np.meshgrid(*([ax] * (self.dim - 1)), indexing="ij")
        return np.stack(mesh, axis=-1)

    def points(self):
        """All grid points, shape (*shape, n)."""
        hp = self.horizontal_points()
        m = len(self.levels)
        out = np.empty((m,) + hp.shape[:-1] + (self.dim,))
        out[..., :-1] = hp[None]
        for l, xn in enumerate(self.levels):
            out[l, ..., -1] = xn
        return out

    def vertical_weights(self, extend_to_zero=True):
        return vertical_weights(np.asarray(self.levels), extend_to_zero)

    @property
    def cell_area(self):
        """Horizontal cell measure h^(n-1)."""
        return self.step ** (self.dim - 1)

    def boundary_template(self):
        return BoundaryField(dim=self.dim, extent=self.extent, step=self.step,
                             rank=0, values=np.zeros(self.horizontal_shape))

    def descriptor(self):
        return {"dim": self.dim, "extent": self.extent, "step": self.step,
                "levels": list(map(float, self.levels))}


@dataclass(frozen=True)
class GridSection:
    """Rectangular sub-block of a grid (result of interior_restrict)."""

    dim: int
    horizontal_axes: tuple  # one coordinate array per horizontal direction
    levels: tuple

    @property
    def shape(self):
        return (len(self.levels),) + tuple(len(a) for a in self.horizontal_axes)


def _component_shape(rank, dim):
    return {0: (), 1: (dim,), 2: (dim, dim)}[rank]


@dataclass(frozen=True)
class SampledField:
    """Scalar/vector/tensor samples on a HalfSpaceGrid (or a section of one)."""

    grid: object
    rank: int
    values: np.ndarray

    def __post_init__(self):
        want = self.grid.shape + _component_shape(self.rank, self.grid.dim)
        if self.values.shape != want:
            raise GridError(f"value shape {self.values.shape} != expected {want}")
        if not np.all(np.isfinite(self.values)):
            raise GridError("field contains non-finite values")
        self.values.setflags(write=False)

    @classmethod
    def zeros(cls, grid, rank=0):
        shape = grid.shape + _component_shape(rank, grid.dim)
        return cls(grid=grid, rank=rank, values=np.zeros(shape))

    def magnitude(self):
        """Pointwise Euclidean magnitude, collapsing component axes."""
        if self.rank == 0:
            vals = np.abs(self.values)
        else:
            axes = tuple(range(self.values.ndim - self.rank, self.values.ndim))
            vals = np.sqrt(np.sum(self.values ** 2, axis=axes))
        return SampledField(grid=self.grid, rank=0, values=vals)

    def map_values(self, fn):
        return SampledField(grid=self.grid, rank=self.rank, values=fn(self.values))

    def __add__(self, other):
        if self.grid != other.grid or self.rank != other.rank:
            raise GridError("mismatched fields")
        return self.map_values(lambda v: v + other.values)

    def __sub__(self, other):
        return self + other.map_values(lambda v: -v)

    def __mul__(self, c):
        return self.map_values(lambda v: v * c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class BoundaryField:
    """Field sampled on the horizontal lattice (lives on the boundary)."""

    dim: int
    extent: float
    step: float
    rank: int
    values: np.ndarray

    def __post_init__(self):
        n_h = int(round(2.0 * self.extent / self.step))
        want = (n_h,) * (self.dim - 1) + _component_shape(self.rank, self.dim)
        if self.values.shape != want:
            raise GridError(f"value shape {self.values.shape} != expected {want}")
        if not np.all(np.isfinite(self.values)):
            raise GridError("field contains non-finite values")
        self.values.setflags(write=False)

    @property
    def horizontal_shape(self):
        return (int(round(2.0 * self.extent / self.step)),) * (self.dim - 1)

    @property
    def horizontal_axis(self):
        n_h = int(round(2.0 * self.extent / self.step))
        return -self.extent + self.step * np.arange(n_h)

    @property
    def cell_area(self):
        return self.step ** (self.dim - 1)

    def matches(self, grid):
        return (self.dim == grid.dim and self.extent == grid.extent
                and self.step == grid.step)

    def map_values(self, fn):
        return BoundaryField(dim=self.dim, extent=self.extent, step=self.step,
                             rank=self.rank, values=fn(self.values))

    def __mul__(self, c):
        return self.map_values(lambda v: v * c)

    __rmul__ = __mul__


def make_grid(dim, extent, step, level_spec):
    """Build a grid with a geometric vertical ladder.

    level_spec: dict with keys "min", "ratio", "count" (ratio >= 1; ratio 1
    gives a uniform ladder starting at "min").
    """
    lo = float(level_spec["min"])
    ratio = float(level_spec["ratio"])
    count = int(level_spec["count"])
    if lo <= 0 or ratio < 1.0 or count < 1:
        raise GridError("level_spec needs min > 0, ratio >= 1, count >= 1")
    if ratio == 1.0:
        levels = lo * np.arange(1, count + 1)
    else:
        levels = lo * ratio ** np.arange(count)
    return HalfSpaceGrid(dim=dim, extent=float(extent), step=float(step),
                         levels=tuple(levels))


def sample(grid, func, rank):
    """Sample a closed-form function at every grid node.

    func receives points of shape (..., n) and must return values of shape
    (...,) for rank 0, (..., n) for rank 1, (..., n, n) for rank 2.
    """
    vals = np.asarray(func(grid.points()), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise GridError("sampled function produced non-finite values")
    return SampledField(grid=grid, rank=rank, values=vals)


def sample_boundary(dim, extent, step, func, rank):
    """Sample a closed form on the horizontal lattice."""
    tmpl = HalfSpaceGrid(dim=dim, extent=extent, step=step, levels=(1.0,))
    pts = tmpl.horizontal_points()
    vals = np.asarray(func(pts), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise GridError("sampled function produced non-finite values")
    return BoundaryField(dim=dim, extent=extent, step=step, rank=rank, values=vals)


def interior_restrict(fld, margin):
    """Restrict to nodes at distance >= margin from the lateral truncation
    boundary and with x_n >= margin."""
    grid = fld.grid
    if margin < 0 or margin >= grid.extent:
        raise GridError("margin must satisfy 0 <= margin < L")
    if isinstance(grid, GridSection):
        axes = grid.horizontal_axes
        levels = np.asarray(grid.levels)
        lo_edges = [a[0] for a in axes]
        hi_edges = [a[-1] for a in axes]
    else:
        ax = grid.horizontal_axis
        axes = (ax,) * (grid.dim - 1)
        levels = np.asarray(grid.levels)
        lo_edges = [-grid.extent] * (grid.dim - 1)
        hi_edges = [grid.extent - grid.step] * (grid.dim - 1)

    keep_axes = []
    for a, lo, hi in zip(axes, lo_edges, hi_edges):
        keep_axes.append((a - lo >= margin - 1e-12) & (hi - a >= margin - 1e-12))
    keep_lv = levels >= margin - 1e-12
    if not keep_lv.any() or any(not k.any() for k in keep_axes):
        raise GridError("interior restriction is empty")

    vals = fld.values[keep_lv]
    for axis, k in enumerate(keep_axes, start=1):
        vals = np.compress(k, vals, axis=axis)
    section = GridSection(
        dim=grid.dim,
        horizontal_axes=tuple(a[k] for a, k in zip(axes, keep_axes)),
        levels=tuple(levels[keep_lv]),
    )
    return SampledField(grid=section, rank=fld.rank, values=np.ascontiguousarray(vals))


# --- serialization -----------------------------------------------------------

def save_field(fld, path_prefix):
    """Write flat little-endian float64 binary plus a JSON sidecar."""
    vals = np.ascontiguousarray(fld.values, dtype="<f8")
    with open(str(path_prefix) + ".bin", "wb") as fh:
        fh.write(vals.tobytes())
    if isinstance(fld, BoundaryField):
        meta = {"kind": "boundary", "dim": fld.dim, "extent": fld.extent,
                "step": fld.step, "rank": fld.rank}
    else:
        meta = {"kind": "sampled", "rank": fld.rank}
        meta.update(fld.grid.descriptor())
    meta["shape"] = list(vals.shape)
    with open(str(path_prefix) + ".json", "w") as fh:
        json.dump(meta, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_field(path_prefix):
    with open(str(path_prefix) + ".json") as fh:
        meta = json.load(fh)
    raw = np.fromfile(str(path_prefix) + ".bin", dtype="<f8")
    vals = raw.reshape(meta["shape"]).astype(float)
    if meta["kind"] == "boundary":
        return BoundaryField(dim=meta["dim"], extent=meta["extent"],
                             step=meta["step"], rank=meta["rank"], values=vals)
    grid = HalfSpaceGrid(dim=meta["dim"], extent=meta["extent"],
                         step=meta["step"], levels=tuple(meta["levels"]))
    return SampledField(grid=grid, rank=meta["rank"], values=vals)


def export_slice_csv(fld, path, level_index=0):
    """CSV export of a 1-D slice along the first horizontal axis."""
    if isinstance(fld, BoundaryField):
        ax = fld.horizontal_axis
        vals = fld.values
    else:
        ax = fld.grid.horizontal_axis
        vals = fld.values[level_index]
    # take the row through the middle of any remaining horizontal axes
    while vals.ndim > 1 + (0 if fld.rank == 0 else fld.rank):
        vals = vals[:, vals.shape[1] // 2]
    flat = vals.reshape(len(ax), -1)
    with open(path, "w") as fh:
        fh.write("x," + ",".join(f"c{k}" for k in range(flat.shape[1])) + "\n")
        for x, row in zip(ax, flat):
            fh.write(f"{x!r}," + ",".join(repr(v) for v in row) + "\n")
