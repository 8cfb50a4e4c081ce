"""
Structured Cartesian cell-centered mesh with two-point flux geometry
"""
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import numpy as np

SIDES = ("xmin", "xmax", "ymin", "ymax", "zmin", "zmax")


@dataclass(frozen=True)
class Face:
    """
    One mesh face. Boundary faces have right_cell == -1 and
    distance == left_half (cell center to face center).
    """
    left_cell: int
    right_cell: int
    area: float
    distance: float
    normal_axis: int
    left_half: float
    right_half: float

    @property
    def is_boundary(self) -> bool:
        return self.right_cell < 0


@dataclass
class RockField:
    """Per-cell absolute permeability (m^2) and porosity"""
    permeability: np.ndarray
    porosity: np.ndarray

    def __post_init__(self):
        self.permeability = np.asarray(self.permeability, dtype=float).ravel()
        self.porosity = np.asarray(self.porosity, dtype=float).ravel()
        if self.permeability.shape != self.porosity.shape:
            raise ValueError(
                f"Permeability ({self.permeability.size}) and porosity "
                f"({self.porosity.size}) lengths differ"
            )
        if not np.all(self.permeability > 0):
            raise ValueError("Permeability must be strictly positive")
        if not np.all((self.porosity > 0) & (self.porosity <= 1)):
            raise ValueError("Porosity must lie in (0, 1]")

    @classmethod
    def uniform(cls, n_cells: int, permeability: float, porosity: float) -> "RockField":
        return cls(np.full(n_cells, permeability), np.full(n_cells, porosity))

    @property
    def n_cells(self) -> int:
        return self.permeability.size

    def check_mesh(self, mesh: "CartesianMesh") -> None:
        if self.n_cells != mesh.n_cells:
            raise ValueError(f"Rock field has {self.n_cells} values, mesh has {mesh.n_cells} cells")


class CartesianMesh:
    """
    Box mesh with lexicographic cell ids: id = i + nx*j + nx*ny*k
    """

    def __init__(
        self,
        dims: Sequence[int],
        cell_size: Sequence[float],
        origin: Sequence[float] = (0.0, 0.0, 0.0)
    ):
        if len(dims) != 3 or len(cell_size) != 3 or len(origin) != 3:
            raise ValueError("dims, cell_size and origin must have three entries")
        if any(int(d) < 1 for d in dims):
            raise ValueError(f"All mesh dims must be >= 1, got {tuple(dims)}")
        if any(float(h) <= 0 for h in cell_size):
            raise ValueError(f"All cell sizes must be > 0, got {tuple(cell_size)}")

        self.dims = tuple(int(d) for d in dims)
        self.cell_size = np.asarray(cell_size, dtype=float)
        self.origin = np.asarray(origin, dtype=float)
        self.n_cells = int(np.prod(self.dims))
        self.cell_volume = float(np.prod(self.cell_size))
        self.volumes = np.full(self.n_cells, self.cell_volume)

        # (i, j, k) per cell id
        k, j, i = np.unravel_index(np.arange(self.n_cells), self.dims[::-1])
        self.ijk = np.stack([i, j, k], axis=1)
        self.centers = self.origin + (self.ijk + 0.5) * self.cell_size

        self._build_interior_faces()
        self._build_boundary_faces()

    @property
    def strides(self) -> Tuple[int, int, int]:
        nx, ny, _ = self.dims
        return (1, nx, nx * ny)

    def face_area(self, axis: int) -> float:
        others = [a for a in range(3) if a != axis]
        return float(self.cell_size[others[0]] * self.cell_size[others[1]])

    def _build_interior_faces(self):
        ids = np.arange(self.n_cells)
        left, right, area, distance, axis = [], [], [], [], []
        for ax in range(3):
            mask = self.ijk[:, ax] < self.dims[ax] - 1
            lc = ids[mask]
            left.append(lc)
            right.append(lc + self.strides[ax])
            area.append(np.full(lc.size, self.face_area(ax)))
            distance.append(np.full(lc.size, self.cell_size[ax]))
            axis.append(np.full(lc.size, ax))

        self.face_left = np.concatenate(left).astype(np.int64)
        self.face_right = np.concatenate(right).astype(np.int64)
        self.face_area_values = np.concatenate(area)
        self.face_distance = np.concatenate(distance)
        self.face_axis = np.concatenate(axis).astype(np.int64)
        self.face_left_half = 0.5 * self.face_distance
        self.face_right_half = 0.5 * self.face_distance

    def _build_boundary_faces(self):
        ids = np.arange(self.n_cells)
        cell, side, axis = [], [], []
        for ax in range(3):
            for upper in (False, True):
                target = self.dims[ax] - 1 if upper else 0
                cells = ids[self.ijk[:, ax] == target]
                cell.append(cells)
                side.append(np.full(cells.size, 2 * ax + int(upper)))
                axis.append(np.full(cells.size, ax))

        self.bface_cell = np.concatenate(cell).astype(np.int64)
        self.bface_side = np.concatenate(side).astype(np.int64)
        self.bface_axis = np.concatenate(axis).astype(np.int64)
        self.bface_area = np.array([self.face_area(ax) for ax in self.bface_axis])
        self.bface_half = 0.5 * self.cell_size[self.bface_axis]
        # outward normal sign: -1 on the min side, +1 on the max side
        self.bface_sign = np.where(self.bface_side % 2 == 1, 1.0, -1.0)
        self.bface_center = self.centers[self.bface_cell].copy()
        rows = np.arange(self.bface_cell.size)
        self.bface_center[rows, self.bface_axis] += self.bface_sign * self.bface_half

    @property
    def n_interior_faces(self) -> int:
        return self.face_left.size

    @property
    def n_boundary_faces(self) -> int:
        return self.bface_cell.size

    @property
    def extent(self) -> np.ndarray:
        return self.cell_size * np.asarray(self.dims)

    def cell_id(self, i: int, j: int, k: int) -> int:
        nx, ny, nz = self.dims
        if not (0 <= i < nx and 0 <= j < ny and 0 <= k < nz):
            raise ValueError(f"Cell index ({i}, {j}, {k}) outside mesh {self.dims}")
        return i + nx * j + nx * ny * k

    def cell_index(self, cell: int) -> Tuple[int, int, int]:
        if not 0 <= cell < self.n_cells:
            raise ValueError(f"Cell id {cell} outside [0, {self.n_cells})")
        i, j, k = self.ijk[cell]
        return int(i), int(j), int(k)

    def face(self, f: int) -> Face:
        return Face(
            left_cell=int(self.face_left[f]),
            right_cell=int(self.face_right[f]),
            area=float(self.face_area_values[f]),
            distance=float(self.face_distance[f]),
            normal_axis=int(self.face_axis[f]),
            left_half=float(self.face_left_half[f]),
            right_half=float(self.face_right_half[f])
        )

    def boundary_face(self, b: int) -> Face:
        half = float(self.bface_half[b])
        return Face(
            left_cell=int(self.bface_cell[b]),
            right_cell=-1,
            area=float(self.bface_area[b]),
            distance=half,
            normal_axis=int(self.bface_axis[b]),
            left_half=half,
            right_half=0.0
        )

    def interior_faces(self) -> Iterator[Face]:
        for f in range(self.n_interior_faces):
            yield self.face(f)

    def __repr__(self) -> str:
        return f"CartesianMesh(dims={self.dims}, cell_size={tuple(self.cell_size)})"


def build_mesh(
    dims: Sequence[int],
    cell_size: Sequence[float],
    origin: Sequence[float] = (0.0, 0.0, 0.0)
) -> CartesianMesh:
    """
    Build a structured mesh

    Args:
        dims: Cell counts (nx, ny, nz), each >= 1
        cell_size: Cell edge lengths (dx, dy, dz), each > 0
        origin: Lower corner of the domain

    Returns:
        CartesianMesh
    """
    return CartesianMesh(dims, cell_size, origin)


def cell_centers(mesh: CartesianMesh) -> np.ndarray:
    return mesh.centers


def face_transmissibility(face: Face, rock: RockField) -> float:
    """
    Two-point transmissibility of an interior face

    T = area * K_h / distance, with K_h the distance-weighted harmonic
    mean of the two cell permeabilities.
    """
    if face.is_boundary:
        raise ValueError("face_transmissibility needs an interior face")
    k_left = rock.permeability[face.left_cell]
    k_right = rock.permeability[face.right_cell]
    k_harm = (face.left_half + face.right_half) / (face.left_half / k_left + face.right_half / k_right)
    return float(face.area * k_harm / face.distance)


def boundary_transmissibility(face: Face, rock: RockField) -> float:
    """Half-cell transmissibility between a cell center and its boundary face"""
    return float(face.area * rock.permeability[face.left_cell] / face.left_half)


def transmissibilities(mesh: CartesianMesh, rock: RockField) -> np.ndarray:
    """Vectorized face_transmissibility over all interior faces"""
    k_left = rock.permeability[mesh.face_left]
    k_right = rock.permeability[mesh.face_right]
    k_harm = mesh.face_distance / (mesh.face_left_half / k_left + mesh.face_right_half / k_right)
    return mesh.face_area_values * k_harm / mesh.face_distance


def boundary_transmissibilities(mesh: CartesianMesh, rock: RockField) -> np.ndarray:
    return mesh.bface_area * rock.permeability[mesh.bface_cell] / mesh.bface_half


def assign_boundary_tags(mesh: CartesianMesh, regions: Sequence) -> np.ndarray:
    """
    Map boundary faces to region indices

    Args:
        mesh: Mesh
        regions: Objects with ``side`` and optional ``lower``/``upper``
            corners bounding the face centers

    Returns:
        Region index per boundary face, -1 where no region matches
    """
    tags = np.full(mesh.n_boundary_faces, -1, dtype=np.int64)
    tol = 1e-9 * float(np.max(mesh.extent))
    for index, region in enumerate(regions):
        side = getattr(region.side, 'value', region.side)
        mask = mesh.bface_side == SIDES.index(side)
        if region.lower is not None:
            mask &= np.all(mesh.bface_center >= np.asarray(region.lower) - tol, axis=1)
        if region.upper is not None:
            mask &= np.all(mesh.bface_center <= np.asarray(region.upper) + tol, axis=1)
        tags[mask] = index
    return tags
