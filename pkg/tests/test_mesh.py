"""
Tests for the structured mesh, transmissibilities and rock fields
"""
import numpy as np
import pytest
from pydantic import ValidationError

from config.schemas import BoundaryConditionSpec, BoundaryRegion, RockSpec, Side, SyntheticFieldSpec
from physics.mesh import (
    RockField, assign_boundary_tags, boundary_transmissibility, build_mesh, cell_centers,
    face_transmissibility, transmissibilities
)
from utils.field_loader import load_rock_field, read_raster, synthetic_field


class TestBuildMesh:
    """Test suite for mesh construction"""

    def test_counts(self):
        """Cells, interior faces and boundary faces of a 3 x 2 x 1 mesh"""
        mesh = build_mesh((3, 2, 1), (1.0, 2.0, 0.5))
        assert mesh.n_cells == 6
        assert mesh.n_interior_faces == 2 * 2 + 3 * 1
        assert mesh.n_boundary_faces == 2 + 2 + 3 + 3 + 6 + 6
        np.testing.assert_allclose(mesh.volumes, 1.0)

    def test_single_cell(self):
        mesh = build_mesh((1, 1, 1), (2.0, 3.0, 4.0))
        assert mesh.n_cells == 1
        assert mesh.n_interior_faces == 0
        assert mesh.n_boundary_faces == 6
        assert mesh.cell_volume == pytest.approx(24.0)

    def test_lexicographic_ids(self):
        mesh = build_mesh((4, 3, 2), (1.0, 1.0, 1.0))
        assert mesh.cell_id(1, 2, 1) == 1 + 4 * 2 + 12 * 1
        for cell in range(mesh.n_cells):
            assert mesh.cell_id(*mesh.cell_index(cell)) == cell

    def test_centers(self):
        mesh = build_mesh((2, 1, 1), (2.0, 1.0, 1.0), origin=(10.0, 0.0, 0.0))
        np.testing.assert_allclose(cell_centers(mesh), [[11.0, 0.5, 0.5], [13.0, 0.5, 0.5]])

    @pytest.mark.parametrize("dims,sizes", [
        ((0, 1, 1), (1.0, 1.0, 1.0)),
        ((2, 1, 1), (1.0, -1.0, 1.0)),
        ((2, 1), (1.0, 1.0)),
    ])
    def test_invalid(self, dims, sizes):
        """Non-positive counts or sizes raise ValueError"""
        with pytest.raises(ValueError):
            build_mesh(dims, sizes)

    def test_cell_index_out_of_range(self):
        mesh = build_mesh((2, 2, 1), (1.0, 1.0, 1.0))
        with pytest.raises(ValueError):
            mesh.cell_id(2, 0, 0)
        with pytest.raises(ValueError):
            mesh.cell_index(4)

    def test_boundary_face_centers(self):
        mesh = build_mesh((2, 1, 1), (1.0, 1.0, 1.0))
        xmin = mesh.bface_center[mesh.bface_side == 0]
        xmax = mesh.bface_center[mesh.bface_side == 1]
        np.testing.assert_allclose(xmin[:, 0], 0.0)
        np.testing.assert_allclose(xmax[:, 0], 2.0)


class TestTransmissibility:
    """Test suite for two-point transmissibilities"""

    def test_harmonic_mean(self):
        """T = area * K_h / d with K_h the harmonic mean on a uniform mesh"""
        mesh = build_mesh((2, 1, 1), (2.0, 1.0, 1.0))
        rock = RockField(np.array([1e-12, 3e-12]), np.array([0.2, 0.2]))
        k_h = 2.0 / (1.0 / 1e-12 + 1.0 / 3e-12)
        expected = 1.0 * k_h / 2.0
        assert face_transmissibility(mesh.face(0), rock) == pytest.approx(expected)
        np.testing.assert_allclose(transmissibilities(mesh, rock), [expected])

    def test_uniform_field(self):
        mesh = build_mesh((3, 3, 1), (1.0, 1.0, 2.0))
        rock = RockField.uniform(mesh.n_cells, 5e-20, 0.15)
        np.testing.assert_allclose(transmissibilities(mesh, rock), 2.0 * 5e-20)

    def test_vectorized_matches_per_face(self):
        mesh = build_mesh((3, 2, 2), (1.0, 2.0, 3.0))
        rng = np.random.default_rng(0)
        rock = RockField(10 ** rng.uniform(-20, -14, mesh.n_cells), np.full(mesh.n_cells, 0.1))
        per_face = [face_transmissibility(face, rock) for face in mesh.interior_faces()]
        np.testing.assert_allclose(transmissibilities(mesh, rock), per_face)

    def test_boundary_face_rejected(self):
        mesh = build_mesh((2, 1, 1), (1.0, 1.0, 1.0))
        rock = RockField.uniform(2, 1e-12, 0.2)
        with pytest.raises(ValueError):
            face_transmissibility(mesh.boundary_face(0), rock)
        assert boundary_transmissibility(mesh.boundary_face(0), rock) == pytest.approx(1e-12 / 0.5)


class TestRockField:
    """Test suite for rock field validation"""

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            RockField(np.ones(3), np.ones(2))

    def test_nonpositive_permeability(self):
        with pytest.raises(ValueError):
            RockField(np.array([1e-12, 0.0]), np.array([0.1, 0.1]))

    def test_porosity_range(self):
        with pytest.raises(ValueError):
            RockField(np.array([1e-12]), np.array([1.5]))

    def test_mesh_check(self):
        mesh = build_mesh((2, 2, 1), (1.0, 1.0, 1.0))
        with pytest.raises(ValueError):
            RockField.uniform(3, 1e-12, 0.2).check_mesh(mesh)


def test_boundary_tags_later_regions_override():
    """A boxed region on the same side overrides a whole-side region"""
    mesh = build_mesh((1, 4, 1), (1.0, 1.0, 1.0))
    whole = BoundaryRegion(side=Side.XMIN, condition=BoundaryConditionSpec())
    patch = BoundaryRegion(side=Side.XMIN, upper=(0.0, 1.0, 1.0), condition=BoundaryConditionSpec())
    tags = assign_boundary_tags(mesh, [whole, patch])

    xmin = np.flatnonzero(mesh.bface_side == 0)
    assert list(tags[xmin]) == [1, 0, 0, 0]
    assert np.all(tags[mesh.bface_side != 0] == -1)


class TestFieldLoader:
    """Test suite for rock property ingestion"""

    def test_read_raster(self, tmp_path):
        path = tmp_path / "perm.txt"
        np.savetxt(path, [1.0, 2.0, 3.0, 4.0])
        np.testing.assert_allclose(read_raster(str(path), 4, 1e-5), [1e-5, 2e-5, 3e-5, 4e-5])

    def test_raster_length_mismatch(self, tmp_path):
        """A raster that does not match the mesh raises ValueError"""
        path = tmp_path / "perm.txt"
        np.savetxt(path, [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            read_raster(str(path), 4)

    def test_missing_raster_fails_validation(self, tmp_path):
        with pytest.raises(ValidationError):
            RockSpec(permeability_file=str(tmp_path / "missing.txt"), porosity=0.2)

    def test_rock_spec_needs_sources(self):
        with pytest.raises(ValidationError):
            RockSpec(porosity=0.2)
        with pytest.raises(ValidationError):
            RockSpec(permeability=1e-12)

    def test_synthetic_field_in_range_and_seeded(self):
        """Log-uniform synthetic field clamped into the quoted range"""
        low, high = 1.377e-20, 2.117e-15
        first = synthetic_field((10, 6, 4), (low, high), seed=7)
        second = synthetic_field((10, 6, 4), (low, high), seed=7)
        other = synthetic_field((10, 6, 4), (low, high), seed=8)

        assert first.size == 240
        assert first.min() >= low and first.max() <= high
        np.testing.assert_array_equal(first, second)
        assert not np.array_equal(first, other)
        # log-scale spread covers several decades
        assert np.log10(first.max() / first.min()) > 2

    def test_synthetic_uniform_porosity(self):
        values = synthetic_field((8, 8, 1), (0.002, 0.1), seed=3, log_scale=False)
        assert values.min() >= 0.002 and values.max() <= 0.1

    def test_load_priority(self, tmp_path):
        """Raster beats constant, constant beats synthetic"""
        mesh = build_mesh((2, 2, 1), (1.0, 1.0, 1.0))
        path = tmp_path / "perm.txt"
        np.savetxt(path, [1.0, 2.0, 3.0, 4.0])
        spec = RockSpec(
            permeability=7.0,
            permeability_file=str(path),
            permeability_scale=1e-12,
            porosity=0.3,
            synthetic=SyntheticFieldSpec(seed=0, porosity_range=(0.01, 0.02))
        )
        rock = load_rock_field(spec, mesh)
        np.testing.assert_allclose(rock.permeability, [1e-12, 2e-12, 3e-12, 4e-12])
        np.testing.assert_allclose(rock.porosity, 0.3)

    def test_load_synthetic(self):
        mesh = build_mesh((5, 3, 2), (1.0, 1.0, 1.0))
        spec = RockSpec(synthetic=SyntheticFieldSpec(seed=1, porosity_range=(0.002, 0.1)))
        rock = load_rock_field(spec, mesh)
        assert rock.n_cells == 30
        assert rock.porosity.min() >= 0.002 and rock.porosity.max() <= 0.1
