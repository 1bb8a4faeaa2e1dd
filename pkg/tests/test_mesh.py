import numpy as np
import pytest

from plembed import MeshError, ParseError, PolyMesh, load_off, parse_off

from conftest import CUBE_OFF, TETRA_OFF


class TestParseOff:
    def test_cube_fan_triangulation(self, cube_mesh):
        assert cube_mesh.vertices.shape == (8, 3)
        # six quads split into two triangles each
        assert cube_mesh.faces.shape == (12, 3)

    def test_tetra(self, tetra_mesh):
        assert tetra_mesh.vertices.shape == (4, 3)
        assert tetra_mesh.faces.shape == (4, 3)

    def test_comments_and_blank_lines(self):
        text = "# a comment\nOFF\n\n3 1 3  # counts\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n"
        m = parse_off(text)
        assert m.vertices.shape == (3, 3)
        assert m.faces.shape == (1, 3)

    def test_extra_vertex_fields_ignored(self):
        # some writers append colors after the coordinates
        text = "OFF\n3 1 3\n0 0 0 255 0 0\n1 0 0 255 0 0\n0 1 0 255 0 0\n3 0 1 2\n"
        m = parse_off(text)
        assert np.array_equal(m.vertices[1], [1.0, 0.0, 0.0])

    def test_missing_header(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_off("3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n")

    def test_empty_document(self):
        with pytest.raises(ParseError):
            parse_off("# nothing\n\n")

    def test_bad_counts_line(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_off("OFF\n3 1\n")

    def test_truncated_body(self):
        with pytest.raises(ParseError):
            parse_off("OFF\n3 1 3\n0 0 0\n1 0 0\n")

    def test_bad_vertex_coordinate(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_off("OFF\n3 1 3\n0 0 x\n1 0 0\n0 1 0\n3 0 1 2\n")

    def test_bad_face_line(self):
        with pytest.raises(ParseError, match="line 6"):
            parse_off("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1\n")

    def test_face_index_out_of_range(self):
        with pytest.raises(MeshError):
            parse_off("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 9\n")

    def test_load_off(self, cube_off_path):
        m = load_off(cube_off_path)
        assert m.faces.shape == (12, 3)


class TestPolyMesh:
    def test_repeated_vertex_in_face(self):
        v = np.eye(3)
        with pytest.raises(MeshError, match="repeats"):
            PolyMesh(v, np.array([[0, 1, 1]]))

    def test_degenerate_face(self):
        v = np.array([[0.0, 0, 0], [1.0, 0, 0], [2.0, 0, 0]])
        with pytest.raises(MeshError, match="degenerate"):
            PolyMesh(v, np.array([[0, 1, 2]]))

    def test_arrays_frozen(self, cube_mesh):
        with pytest.raises(ValueError):
            cube_mesh.vertices[0, 0] = 5.0

    def test_closed_manifold_cube(self, cube_mesh):
        cube_mesh.require_closed_manifold()
        assert len(cube_mesh.edge_faces) == 18  # 12 cube edges + 6 face diagonals

    def test_open_mesh_rejected(self):
        m = parse_off("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n")
        with pytest.raises(MeshError, match="closed manifold"):
            m.require_closed_manifold()

    def test_inconsistent_orientation_rejected(self, tetra_mesh):
        flipped = tetra_mesh.faces.copy()
        flipped[0] = flipped[0][::-1]
        m = PolyMesh(tetra_mesh.vertices, flipped)
        with pytest.raises(MeshError, match="same direction"):
            m.require_closed_manifold()

    def test_signed_volume_cube(self, cube_mesh):
        assert cube_mesh.signed_volume() == pytest.approx(8.0, rel=1e-14)
        # already outward, so normalization is the identity
        assert cube_mesh.oriented_outward() is cube_mesh

    def test_oriented_outward_flips_inward_mesh(self, cube_mesh):
        inward = PolyMesh(cube_mesh.vertices, cube_mesh.faces[:, ::-1])
        assert inward.signed_volume() == pytest.approx(-8.0, rel=1e-14)
        m = inward.oriented_outward()
        assert m.signed_volume() == pytest.approx(8.0, rel=1e-14)

    def test_tetra_volume(self, tetra_mesh):
        m = tetra_mesh.oriented_outward()
        # vertices (1,1,1),(1,-1,-1),(-1,1,-1),(-1,-1,1): volume 8/3
        assert m.signed_volume() == pytest.approx(8.0 / 3.0, rel=1e-14)

    def test_face_normal_unit(self, tetra_mesh):
        for k in range(4):
            assert np.linalg.norm(tetra_mesh.face_normal(k)) == pytest.approx(1.0, rel=1e-14)

    def test_vertex_faces_cube(self, cube_mesh):
        # each cube corner meets 3 quads; diagonals give 3 + 1..2 triangles
        for v in range(8):
            ks = cube_mesh.vertex_faces(v)
            assert len(ks) in (4, 5)
            assert all(v in cube_mesh.faces[k] for k in ks)

    def test_translation_leaves_volume(self, cube_mesh):
        m = PolyMesh(cube_mesh.vertices + np.array([10.0, -3.0, 2.0]), cube_mesh.faces)
        assert m.signed_volume() == pytest.approx(cube_mesh.signed_volume(), rel=1e-12)
