import json
import math
import os
import subprocess
import sys

import pytest

K4_DOC = json.dumps(
    {
        "vertices": ["a", "b", "c", "d"],
        "edges": [["a", "b", 1], ["a", "c", 1], ["a", "d", 1], ["b", "c", 1], ["b", "d", 1], ["c", "d", 1]],
    }
)

STAR_DOC = json.dumps(
    {
        "edges": [
            ["h", "x", 1],
            ["h", "y", 1],
            ["h", "z", 1],
            ["x", "y", 1.99],
            ["x", "z", 1.99],
            ["y", "z", 1.99],
        ],
        "kappa": 0.0,
    }
)

UNIT_Q = "1,1,1,1,1,1"
SQUARE_Q = "1,1.4142135623730951,1,1,1.4142135623730951,1"
TRIPOD_Q = "1,1,1,1.99,1.99,1.99"


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "plembed", *args],
        capture_output=True,
        text=True,
        env=env,
    )


def payload(result):
    assert result.stdout, f"no stdout; stderr: {result.stderr}"
    doc = json.loads(result.stdout)
    assert doc["schema_version"] == 1
    return doc


@pytest.fixture
def k4_path(tmp_path):
    p = tmp_path / "k4.json"
    p.write_text(K4_DOC)
    return str(p)


@pytest.fixture
def star_path(tmp_path):
    p = tmp_path / "star.json"
    p.write_text(STAR_DOC)
    return str(p)


class TestWaldCommand:
    def test_unit_quadruple_spherical(self):
        r = run_cli("wald", "--quadruple", UNIT_Q)
        assert r.returncode == 0
        doc = payload(r)
        assert doc["classification"] == "spherical"
        expect = math.acos(-1.0 / 3.0) ** 2
        assert doc["roots"][0]["kappa"] == pytest.approx(expect, rel=1e-6)
        assert "cayley_menger" in doc and "search_interval" in doc

    def test_square_flat(self):
        r = run_cli("wald", "--quadruple", SQUARE_Q)
        assert r.returncode == 0
        doc = payload(r)
        assert doc["classification"] == "flat"
        assert any(root["kappa"] == 0.0 for root in doc["roots"])

    def test_floats_round_trip(self):
        doc = payload(run_cli("wald", "--quadruple", UNIT_Q))
        again = json.loads(json.dumps(doc))
        assert again["roots"][0]["kappa"] == doc["roots"][0]["kappa"]

    def test_bad_quadruple_arity(self):
        r = run_cli("wald", "--quadruple", "1,1,1,1,1")
        assert r.returncode == 2
        assert r.stderr.startswith("error:")

    def test_bad_quadruple_metric(self):
        r = run_cli("wald", "--quadruple", "1,1,1,5,1,1")
        assert r.returncode == 2

    def test_deterministic_output(self):
        a = run_cli("wald", "--quadruple", UNIT_Q)
        b = run_cli("wald", "--quadruple", UNIT_Q)
        assert a.stdout == b.stdout


class TestEmbedCheckCommand:
    def test_feasible(self):
        r = run_cli("embed-check", "--quadruple", UNIT_Q, "--kappa", "0")
        assert r.returncode == 0
        doc = payload(r)
        assert doc["verdict"] is True and doc["realized"] is True

    def test_infeasible_exit_one(self):
        r = run_cli("embed-check", "--quadruple", TRIPOD_Q, "--kappa", "0")
        assert r.returncode == 1
        doc = payload(r)
        assert doc["verdict"] is False
        assert doc["witness"][0] == "excess"

    def test_spherical_domain_error(self):
        r = run_cli("embed-check", "--quadruple", TRIPOD_Q, "--kappa", "9")
        assert r.returncode == 2

    def test_dim_choice(self):
        r = run_cli("embed-check", "--quadruple", UNIT_Q, "--kappa", "0", "--dim", "2")
        doc = payload(r)
        # the regular simplex needs three dimensions
        assert doc["realized"] is False


class TestCheckLocalCommand:
    def test_k4_feasible(self, k4_path):
        r = run_cli("check-local", "--graph", k4_path, "--vertex", "a", "--kappa", "0")
        assert r.returncode == 0
        doc = payload(r)
        assert doc["verdict"] is True and doc["vertex"] == "a"

    def test_star_hub_fails(self, star_path):
        r = run_cli("check-local", "--graph", star_path, "--vertex", "h", "--kappa", "0")
        assert r.returncode == 1
        doc = payload(r)
        assert doc["witness"] == [["x", "y", "z"], "excess"]

    def test_kappa_from_document(self, star_path):
        r = run_cli("check-local", "--graph", star_path, "--vertex", "h")
        assert r.returncode == 1

    def test_missing_kappa(self, k4_path):
        r = run_cli("check-local", "--graph", k4_path, "--vertex", "a")
        assert r.returncode == 2

    def test_unknown_vertex(self, k4_path):
        r = run_cli("check-local", "--graph", k4_path, "--vertex", "zz", "--kappa", "0")
        assert r.returncode == 2

    def test_missing_file(self, tmp_path):
        r = run_cli("check-local", "--graph", str(tmp_path / "nope.json"), "--vertex", "a", "--kappa", "0")
        assert r.returncode == 2


class TestCheckGlobalCommand:
    def test_k4(self, k4_path):
        r = run_cli("check-global", "--graph", k4_path, "--kappa", "0")
        assert r.returncode == 0
        assert payload(r)["verdict"] is True

    def test_star_witness_names_hub(self, star_path):
        r = run_cli("check-global", "--graph", star_path)
        assert r.returncode == 1
        doc = payload(r)
        assert doc["witness"][0] == "h"
        assert doc["witness"][2] == "excess"

    def test_flag_overrides_document(self, star_path):
        # a strongly negative curvature cannot rescue a flat-infeasible star
        r = run_cli("check-global", "--graph", star_path, "--kappa", "-5")
        assert r.returncode == 1

    def test_no_kappa_anywhere(self, k4_path):
        r = run_cli("check-global", "--graph", k4_path)
        assert r.returncode == 2


class TestQcBoundCommand:
    def test_cube_bound(self, cube_off_path):
        r = run_cli("qc-bound", "--mesh", str(cube_off_path))
        assert r.returncode == 0
        doc = payload(r)
        assert doc["bound"] == 2.0
        assert doc["reflex"] == []

    def test_table_goes_to_stderr(self, cube_off_path):
        r = run_cli("qc-bound", "--mesh", str(cube_off_path), "--table")
        assert r.returncode == 0
        assert "bound: 2" in r.stderr
        payload(r)  # stdout remains a clean JSON document


class TestWedgeCommand:
    def test_right_angle(self):
        r = run_cli("wedge", "--n", "3", "--k", "1", "--angles", repr(math.pi / 2.0))
        doc = payload(r)
        assert doc["inner"] == 2.0 and doc["maximal"] == 2.0

    def test_two_angle_wedge(self):
        r = run_cli("wedge", "--n", "4", "--k", "1", "--angles", f"{math.pi / 2},{math.pi / 2}")
        assert payload(r)["inner"] == 4.0

    def test_zero_angle_rejected(self):
        assert run_cli("wedge", "--n", "3", "--k", "1", "--angles", "0").returncode == 2

    def test_wrong_angle_count(self):
        assert run_cli("wedge", "--n", "4", "--k", "1", "--angles", "1.0").returncode == 2


class TestFaceCountCommand:
    def test_tetrahedron(self):
        doc = payload(run_cli("face-count-bound", "--faces", "4", "--n", "3"))
        assert doc["inner"] == 3.0

    def test_guard(self):
        assert run_cli("face-count-bound", "--faces", "3", "--n", "3").returncode == 2


class TestIndexBoundCommand:
    def test_value(self):
        doc = payload(run_cli("index-bound", "--n", "3", "--inner", "2.0"))
        assert doc["bound"] == 18.0

    def test_guard(self):
        assert run_cli("index-bound", "--n", "3", "--inner", "0.5").returncode == 2


class TestLinkVolumeCommand:
    def test_exact_cube(self, cube_off_path):
        doc = payload(run_cli("link-volume", "--mesh", str(cube_off_path), "--vertex", "0"))
        assert doc["value"] == 0.125

    def test_dual(self, cube_off_path):
        doc = payload(run_cli("link-volume", "--mesh", str(cube_off_path), "--vertex", "0", "--dual"))
        assert doc["value"] == pytest.approx(0.125, abs=1e-14)

    def test_monte_carlo_fields(self, cube_off_path):
        r = run_cli(
            "link-volume", "--mesh", str(cube_off_path), "--vertex", "0",
            "--method", "monte-carlo", "--samples", "20000", "--seed", "5",
        )
        doc = payload(r)
        assert doc["samples"] == 20000 and doc["seed"] == 5
        assert abs(doc["value"] - 0.125) <= 4.0 * doc["stderr"]

    def test_monte_carlo_byte_deterministic(self, cube_off_path):
        args = (
            "link-volume", "--mesh", str(cube_off_path), "--vertex", "2",
            "--method", "monte-carlo", "--samples", "30000", "--seed", "11",
        )
        assert run_cli(*args).stdout == run_cli(*args).stdout

    def test_seed_env_variable(self, cube_off_path):
        base = (
            "link-volume", "--mesh", str(cube_off_path), "--vertex", "1",
            "--method", "monte-carlo", "--samples", "20000",
        )
        via_env = run_cli(*base, env_extra={"PLEMBED_SEED": "7"})
        via_flag = run_cli(*base, "--seed", "7")
        assert via_env.stdout == via_flag.stdout

    def test_bad_vertex(self, cube_off_path):
        r = run_cli("link-volume", "--mesh", str(cube_off_path), "--vertex", "99")
        assert r.returncode == 2


class TestFoldCommand:
    def test_doubling(self):
        doc = payload(run_cli("fold", "--theta", repr(math.pi), "--point", f"1,{math.pi / 2}"))
        assert doc["image"] == [1.0, math.pi]
        assert doc["contraction"] is False

    def test_contraction(self):
        doc = payload(
            run_cli("fold", "--theta", repr(4 * math.pi), "--point", f"0.5,{2 * math.pi}", "--contraction")
        )
        assert doc["image"][0] == 0.5
        assert doc["image"][1] == pytest.approx(math.pi, rel=1e-15)

    def test_angle_out_of_range(self):
        r = run_cli("fold", "--theta", "1.0", "--point", "1,2.0")
        assert r.returncode == 2


class TestBzElementCommand:
    def test_frozen_heights(self):
        doc = payload(run_cli("bz-element", "--template", "1,1,1", "--base", "0.9,0.9,0.9"))
        assert doc["apex_height"] == pytest.approx(0.2516611478423584, rel=1e-12)
        assert doc["max_defect"] == pytest.approx(0.026688909408631667, rel=1e-12)

    def test_obj_export(self, tmp_path):
        obj = tmp_path / "el.obj"
        r = run_cli("bz-element", "--template", "1,1,1", "--base", "0.9,0.9,0.9", "--obj", str(obj))
        assert r.returncode == 0
        text = obj.read_text()
        assert text.startswith("# pleated element\n")
        assert payload(r)["obj"] == str(obj)

    def test_non_acute_template(self):
        assert run_cli("bz-element", "--template", "3,4,5", "--base", "3,4,5").returncode == 2


class TestCurveCurvatureCommand:
    LEG = repr(2.0 * math.sin(0.1))
    SPAN = repr(2.0 * math.sin(0.2))

    def test_menger_unit_circle(self):
        doc = payload(run_cli("curve-curvature", "--triple", f"{self.LEG},{self.LEG},{self.SPAN}"))
        assert doc["value"] == pytest.approx(1.0, rel=1e-12)

    def test_finsler_haantjes_mode(self):
        doc = payload(
            run_cli(
                "curve-curvature",
                "--triple",
                f"{self.LEG},{self.LEG},{self.SPAN}",
                "--mode",
                "finsler-haantjes",
            )
        )
        assert doc["value"] == pytest.approx(0.8736477805708911, rel=1e-13)

    def test_bad_mode(self):
        r = run_cli("curve-curvature", "--triple", "1,1,1", "--mode", "gauss")
        assert r.returncode == 2


class TestOutputAndUsage:
    def test_output_file(self, tmp_path):
        out = tmp_path / "res.json"
        r = run_cli("index-bound", "--n", "3", "--inner", "1.0", "--output", str(out))
        assert r.returncode == 0
        assert r.stdout == ""
        assert json.loads(out.read_text())["bound"] == 9.0

    def test_output_file_keeps_exit_code(self, tmp_path):
        out = tmp_path / "res.json"
        r = run_cli("embed-check", "--quadruple", TRIPOD_Q, "--kappa", "0", "--output", str(out))
        assert r.returncode == 1
        assert json.loads(out.read_text())["verdict"] is False

    def test_unknown_subcommand(self):
        assert run_cli("frobnicate").returncode == 2

    def test_missing_required_flag(self):
        assert run_cli("wald").returncode == 2

    def test_sorted_keys(self):
        r = run_cli("index-bound", "--n", "3", "--inner", "2.0")
        keys = [line.split('"')[1] for line in r.stdout.splitlines() if line.startswith('  "')]
        assert keys == sorted(keys)
