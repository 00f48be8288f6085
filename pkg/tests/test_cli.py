from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from sdslink.cli import EXIT_RESOURCE, EXIT_USER, infer_table, main


def invoke(args: list[str], stdin: str | None = None):
    return CliRunner().invoke(main, args, input=stdin)


def as_json(args: list[str], stdin: str | None = None) -> dict:
    result = invoke(args + ["--format", "json"], stdin)
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


def test_infer_table_order() -> None:
    assert infer_table("y^2 + x*y + z").names == ("y", "x", "z")
    assert infer_table("y + x", "x y z").names == ("x", "y", "z")


def test_split_text_and_json() -> None:
    result = invoke(["split", "--var", "x", "--emit", "all"], "x^2+x*y^2")
    assert result.exit_code == 0
    assert result.output.splitlines()[:4] == ["h = -1/4*y^4", "g = 1/2*y^2", "p = 1/2*y^2", "v = 1"]
    report = as_json(["split", "--var", "x"], "x^2+x*y^2")
    assert report["results"]["h"] == "-1/4*y^4"
    assert set(report) == {"command", "inputs_digest", "results", "version"}


def test_json_is_byte_identical_across_runs() -> None:
    args = ["split", "--var", "x", "--var", "y", "--degree", "8", "--format", "json"]
    first = invoke(args, "x^2 + y^2 + x*z^3 + y*z^4 + z^7")
    second = invoke(args, "x^2 + y^2 + x*z^3 + y*z^4 + z^7")
    assert first.output == second.output


def test_timing_only_on_request() -> None:
    report = as_json(["classify", "--timing"], "x1*x2+x3^3+x4^3")
    assert "timing_seconds" in report
    assert "timing_seconds" not in as_json(["classify"], "x1*x2+x3^3+x4^3")


def test_split_from_file_with_chart(tmp_path: Path) -> None:
    src = tmp_path / "f.txt"
    src.write_text("# a comment\nx^2*t^2 + y^2*t^2 + x*z^3 + z^4\n")
    result = invoke(["split", str(src), "--var", "x", "--var", "y", "--chart", "t", "--degree", "6"])
    assert result.exit_code == 0, result.output
    assert result.output.startswith("h = ")


def test_split_of_zero_reports_precondition() -> None:
    result = invoke(["split", "--var", "x"], "0")
    assert result.exit_code == EXIT_USER
    assert "multiplicity precondition" in result.output


@pytest.mark.parametrize(
    ("args", "stdin"),
    [
        (["split", "--var", "x"], "x^2 +* y"),
        (["split", "--var", "x"], "x*y + z^2"),
        (["classify"], "x^2 + y^2 + 1"),
        (["classify", "--point", "x=oops"], "x^2 + y^2"),
        (["family", "dims", "--family", "9"], None),
        (["split", "/nonexistent/file", "--var", "x"], None),
    ],
)
def test_user_errors_exit_2(args: list[str], stdin: str | None) -> None:
    result = invoke(args, stdin)
    assert result.exit_code == EXIT_USER, result.output


def test_parse_error_reports_offset() -> None:
    result = invoke(["split", "--var", "x"], "x^2 +* y")
    assert "byte" in result.output


def test_resource_guard_exit_3() -> None:
    result = invoke(["toric-link", "--builtin", "cA4", "--bound", "1"])
    assert result.exit_code == EXIT_RESOURCE, result.output


def test_classify_with_point() -> None:
    report = as_json(["classify", "--point", "z=1"], "x^2 + y^2 + (z - 1)^3")
    assert report["results"]["label"] == "A_2"
    assert as_json(["classify"], "x1*x2+x3^3+x4^3")["results"]["index"] == 2


def test_family_dims() -> None:
    report = as_json(["family", "dims", "--jobs", "2"])
    assert list(report["results"]["dims"].values()) == [77, 74, 70, 65, 59, 52, 44, 44, 44, 44, 35]


def test_family_construct() -> None:
    report = as_json(["family", "construct", "--family", "3"])
    assert "a_3" not in report["results"]["f"]
    assert report["results"]["conditions"] == [2, 3]


def test_family_check(tmp_path: Path) -> None:
    coeffs = tmp_path / "c.txt"
    coeffs.write_text("xi_2 = 0\na_3 = 0\nb_4 = y^4\na_2 = 0\n")
    result = invoke(["family", "check", "--family", "4", "--coefficients", str(coeffs), "--no-residual"])
    assert result.exit_code == 0
    assert "4:b_4: FAIL (witness y^4)" in result.output
    assert "not a member" in result.output


def test_family_generality(tmp_path: Path) -> None:
    coeffs = tmp_path / "c.txt"
    coeffs.write_text("a_2 = y*z\nd_6 = y^6 + z^6\n")
    report = as_json(["family", "generality", "--family", "cA5", "--coefficients", str(coeffs)])
    assert report["results"]["passed"] and report["results"]["point_count"] == 4


def test_toric_link_builtin() -> None:
    report = as_json(["toric-link", "--builtin", "cA4"])
    res = report["results"]
    assert res["strict_transform"]["orders"] == res["expected_orders"] == [5, 6]
    assert res["flop_wall"]["points"] == 10
    assert res["kawakita"]["passed"]


def test_toric_link_from_file(data_dir: Path) -> None:
    report = as_json(["toric-link", str(data_dir / "ambient_p113.link")])
    kinds = [s["kind"] for s in report["results"]["steps"]]
    assert kinds == ["divisorial-contraction", "wall-crossing", "divisorial-contraction"]
    report = as_json(["toric-link", str(data_dir / "cA4.link")])
    assert report["results"]["strict_transform"]["orders"] == [5, 6]


def test_toric_link_text_output(data_dir: Path) -> None:
    result = invoke(["toric-link", str(data_dir / "ambient_p113.link")])
    assert result.exit_code == 0
    assert "[1] wall-crossing at ray (y, z, alpha)" in result.output
