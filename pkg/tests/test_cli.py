import json
import subprocess
import sys

import pytest

from bbloc import cli
from bbloc.models import load_model

from conftest import fixture_path, load_fixture


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "bbloc.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc.returncode, proc.stdout, proc.stderr


class TestComplexCommand:
    def test_hollow_triangle_report(self):
        code, out, _ = run_cli("complex", "--model", str(fixture_path("hollow-triangle")))
        assert code == 0
        assert "pure\ttrue" in out
        assert "cone_points\t(none)" in out

    def test_bott_samelson_cone_points(self):
        code, out, _ = run_cli("complex", "--model", str(fixture_path("bott-samelson")))
        assert code == 0
        assert "cone_points\t--- 121" in out

    def test_malformed_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{ this is not json")
        code, _, err = run_cli("complex", "--model", str(bad))
        assert code == 2
        assert "line" in err

    def test_missing_file(self):
        code, _, err = run_cli("complex", "--model", "/nonexistent.json")
        assert code == 2


class TestCoeffsCommand:
    def test_line_conic(self):
        code, out, _ = run_cli("coeffs", "--model", str(fixture_path("line-conic")))
        assert code == 0
        assert "f0<f1\t3\t2" in out
        assert "degree\t3" in out

    def test_trapezoid(self):
        code, out, _ = run_cli("coeffs", "--model", str(fixture_path("f1-trapezoid")))
        assert code == 0
        assert "degree\t3" in out

    def test_sr_all_ones(self):
        code, out, _ = run_cli("coeffs", "--model", str(fixture_path("hollow-triangle")))
        assert code == 0
        rows = [l for l in out.splitlines() if "\t1\t" in l]
        assert len(rows) == 3


class TestDensityCommand:
    def test_interior_exterior_and_wall(self, tmp_path):
        pts = tmp_path / "pts.json"
        pts.write_text(json.dumps({"points": [["1/3", "1/5"], ["7", "9/2"], ["1/2", "1/2"]]}))
        code, out, _ = run_cli(
            "density",
            "--model", str(fixture_path("square")),
            "--points", str(pts),
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[1].startswith("1/3,1/5\t1\t1")
        assert lines[2].startswith("7,9/2\t0\t0")
        assert "non-generic, skipped" in lines[3]


class TestVerifyCommand:
    @pytest.mark.parametrize(
        "name",
        [
            "hollow-triangle", "line-conic", "p1", "p2", "square",
            "p1xp1", "f1-trapezoid", "octahedron-tilted", "bott-samelson",
            "hilbert4",
        ],
    )
    def test_all_fixtures_pass(self, name):
        code, out, _ = run_cli("verify", "--model", str(fixture_path(name)))
        assert code == 0, out
        assert "FAIL" not in out

    def test_corrupted_fixture_fails(self, tmp_path):
        data = json.loads(fixture_path("bott-samelson").read_text())
        data["maximal_chains"][0]["v"] = 5
        data["maximal_chains"][0]["witnesses"] = None
        bad = tmp_path / "bad-bs.json"
        bad.write_text(json.dumps(data))
        code, out, _ = run_cli("verify", "--model", str(bad))
        assert code == 1
        assert "FAIL\ttangent-cone-identity" in out


class TestSvgCommand:
    def test_writes_figure(self, tmp_path):
        out = tmp_path / "fig.svg"
        code, _, _ = run_cli(
            "svg", "--model", str(fixture_path("f1-trapezoid")), "--out", str(out)
        )
        assert code == 0
        text = out.read_text()
        assert text.startswith("<?xml")
        assert "svg" in text

    def test_three_dimensional_rejected(self, tmp_path):
        code, _, err = run_cli(
            "svg",
            "--model", str(fixture_path("octahedron-tilted")),
            "--out", str(tmp_path / "x.svg"),
        )
        assert code == 2
        assert "2-dimensional" in err


class TestDeterminism:
    def test_reports_byte_identical(self):
        a = run_cli("coeffs", "--model", str(fixture_path("octahedron-tilted")), "--format", "json")
        b = run_cli("coeffs", "--model", str(fixture_path("octahedron-tilted")), "--format", "json")
        assert a == b

    def test_svg_byte_identical(self, tmp_path):
        f1, f2 = tmp_path / "a.svg", tmp_path / "b.svg"
        run_cli("svg", "--model", str(fixture_path("square")), "--out", str(f1))
        run_cli("svg", "--model", str(fixture_path("square")), "--out", str(f2))
        assert f1.read_bytes() == f2.read_bytes()


class TestRoundTrip:
    @pytest.mark.parametrize("name", ["f1-trapezoid", "square", "hollow-triangle"])
    def test_export_reimport_preserves_coefficients_and_density(self, name, rng):
        from bbloc.coefficients import chain_v
        from bbloc.measures import density_at, dh_from_model, total_mass

        model = load_fixture(name)
        data = cli._coeffs_data(model)
        again = load_model(data["as_generic"])
        orig = {tuple(map(str, c)): chain_v(model, c) for c in model.maximal_chains()}
        back = {c: chain_v(again, c) for c in again.maximal_chains()}
        assert orig == back
        dh1, dh2 = dh_from_model(model), dh_from_model(again)
        assert total_mass(dh1) == total_mass(dh2)
        if model.kind == "toric":
            from conftest import random_interior_points

            for p in random_interior_points(model, rng, 5):
                assert density_at(dh1, p) == density_at(dh2, p)


def test_density_on_singular_measure_is_an_input_error(tmp_path):
    pts = tmp_path / "pts.json"
    pts.write_text('{"points": [["1/2", "1/3", "1/5"]]}')
    code, _, err = run_cli(
        "density",
        "--model", str(fixture_path("hollow-triangle")),
        "--points", str(pts),
    )
    assert code == 2
    assert "singular" in err


def test_verify_reports_na_for_non_pure_sr(tmp_path):
    model = tmp_path / "impure.json"
    model.write_text(
        json.dumps(
            {
                "kind": "sr",
                "name": "impure",
                "vertices": 4,
                "facets": [[1, 2, 3], [4]],
            }
        )
    )
    code, out, _ = run_cli("verify", "--model", str(model))
    assert code == 0
    assert "SKIP\tpurity\tn/a (input not pure)" in out
