# stdlib
import csv
import io
import json

# 3rd party
import pytest
from click.testing import CliRunner, Result
from domdf_python_tools.paths import PathPlus

# this package
from popcert.__main__ import main

problem_file = """\
name "univariate"
vars x
minimize 1/4*x^4 + 1/8*x^3 - 2*x^2 - 3/2*x + 7
subject_to
-x^2 + 5 >= 0
"""


def _invoke(*args: str) -> Result:
	runner = CliRunner()
	return runner.invoke(main, args=list(args), catch_exceptions=False)


@pytest.mark.parametrize(
		"point, exit_code, verdict",
		[
				("x=2", 0, "certified"),
				("x=-2", 2, "not-certified"),
				('{"x": 2}', 0, "certified"),
				],
		)
def test_certify_exit_codes(point: str, exit_code: int, verdict: str):
	result = _invoke("certify", "--problem", "builtin:univariate", "--point", point, "--output", "json")

	assert result.exit_code == exit_code
	data = json.loads(result.stdout)
	assert data["verdict"] == verdict
	assert data["order"] == 2
	assert data["n0"] == 3
	assert data["ni"] == [2]


def test_certify_problem_file(tmp_pathplus: PathPlus):
	(tmp_pathplus / "univariate.pop").write_text(problem_file)

	result = _invoke("certify", "-p", str(tmp_pathplus / "univariate.pop"), "--point", "x=2", "--output", "json")
	assert result.exit_code == 0
	assert json.loads(result.stdout)["problem"] == "univariate"


def test_certify_text_output():
	result = _invoke("certify", "--problem", "builtin:univariate", "--point", "x=-2")

	assert result.exit_code == 2
	assert result.stdout.startswith("Problem:             univariate\n")
	assert "Solution | Residual l1 | Residual l2 | Verdict" in result.stdout
	assert "not-certified" in result.stdout


def test_certify_json_deterministic():
	args = ("certify", "--problem", "builtin:univariate", "--point", "x=2", "--output", "json")

	first = json.loads(_invoke(*args).stdout)
	second = json.loads(_invoke(*args).stdout)

	assert set(first.pop("time_ms")) == {"assemble", "solve_l1", "solve_l2"}
	second.pop("time_ms")
	assert first == second


def test_certify_norm_l1():
	result = _invoke(
			"certify",
			"--problem",
			"builtin:univariate",
			"--point",
			"x=2",
			"--norm",
			"l1",
			"--output",
			"json",
			)

	assert result.exit_code == 0
	data = json.loads(result.stdout)
	assert data["residual_l2"] is None
	assert data["status"] == {"l1": "optimal", "l2": None}


def test_certify_order():
	result = _invoke("certify", "-p", "builtin:univariate", "--point", "x=2", "--order", "3", "--output", "json")
	assert result.exit_code == 0
	assert json.loads(result.stdout)["order"] == 3


def test_certify_refine():
	result = _invoke(
			"certify",
			"-p",
			"builtin:bivariate",
			"--point",
			"x1=-0.992,x2=0.125",
			"--refine",
			"--output",
			"json",
			)

	assert result.exit_code == 0
	data = json.loads(result.stdout)
	assert data["verdict"] == "certified"
	assert data["refined_point"] == pytest.approx([-0.992, 0.125], abs=5e-3)


def test_certify_dump_kkt(tmp_pathplus: PathPlus):
	dump = tmp_pathplus / "kkt.csv"
	result = _invoke("certify", "-p", "builtin:univariate", "--point", "x=2", "--dump-kkt", str(dump))

	assert result.exit_code == 0
	rows = list(csv.reader(io.StringIO(dump.read_text())))
	assert rows[0] == [
			"lambda",
			"lambda_0{1,2}",
			"lambda_0{1,3}",
			"lambda_0{2,3}",
			"lambda_0{1,2,3}",
			"lambda_1{1,2}",
			"rhs",
			]
	assert len(rows) == 6


@pytest.mark.parametrize(
		"args, message",
		[
				pytest.param(("-p", "builtin:univariate", "--point", "x=3"), "candidate is infeasible", id="infeasible"),
				pytest.param(
						("-p", "builtin:univariate", "--point", "x=3", "--refine"),
						"constraint 1 evaluates to -4.0",
						id="infeasible_refine",
						),
				pytest.param(("-p", "builtin:univariate", "--point", "y=1"), "unknown variable 'y'", id="point"),
				pytest.param(
						("-p", "builtin:univariate", "--point", "x=2", "--order", "1"),
						"relaxation order 1 is below the minimum order 2",
						id="order",
						),
				pytest.param(("-p", "builtin:nope", "--point", "x=2"), "No bundled problem 'nope'", id="builtin"),
				pytest.param(
						("-p", "builtin:univariate", "--point", "x=2", "--tol-cert", "0"),
						"tol_cert must be positive",
						id="tolerance",
						),
				],
		)
def test_certify_errors(args, message: str):
	result = _invoke("certify", *args)

	assert result.exit_code == 1
	assert "Error: " in result.output
	assert message in result.output


def test_certify_syntax_error(tmp_pathplus: PathPlus):
	(tmp_pathplus / "bad.pop").write_text('name "bad"\nvars x\nminimize y\nsubject_to\nx >= 0\n')

	result = _invoke("certify", "-p", str(tmp_pathplus / "bad.pop"), "--point", "x=1")
	assert result.exit_code == 1
	assert "line 3, column 10: unknown variable 'y'" in result.output


def test_certify_missing_file(tmp_pathplus: PathPlus):
	result = _invoke("certify", "-p", str(tmp_pathplus / "missing.pop"), "--point", "x=1")
	assert result.exit_code == 1


@pytest.mark.parametrize(
		"args",
		[
				pytest.param(("certify", "-p", "builtin:univariate"), id="missing_point"),
				pytest.param(("certify", "-p", "builtin:univariate", "--point", "x=2", "--norm", "l3"), id="norm"),
				pytest.param(
						("certify", "-p", "builtin:univariate", "--point", "x=2", "--max-minor-order", "0"),
						id="minor_order",
						),
				],
		)
def test_usage_errors(args):
	assert _invoke(*args).exit_code == 1


def test_inspect():
	result = _invoke("inspect", "--problem", "builtin:univariate")

	assert result.exit_code == 0
	assert result.stdout.splitlines() == [
			"problem = univariate",
			"variables = x",
			"n = 1",
			"d_min = 2",
			"order = 2",
			"n0 = 3",
			"ni = [2]",
			"constraints = 1",
			"\tg1: -x^2 + 5.0 >= 0  (inequality, lower, line 6)",
			"basis = 1, x, x^2",
			]


def test_inspect_wb2():
	result = _invoke("inspect", "-p", "builtin:wb2")

	assert result.exit_code == 0
	lines = result.stdout.splitlines()
	assert "variables = x1, x2, x3" in lines
	assert "d_min = 1" in lines
	assert "order = 1" in lines
	assert "n0 = 4" in lines
	assert "constraints = 12" in lines
	assert "basis = 1, x1, x2, x3" in lines
	assert sum(line.startswith("\tg") for line in lines) == 12


def test_inspect_wb2_order_2():
	result = _invoke("inspect", "-p", "builtin:wb2", "--order", "2")

	assert result.exit_code == 0
	lines = result.stdout.splitlines()
	assert "d_min = 1" in lines
	assert "order = 2" in lines
	assert "n0 = 10" in lines
	assert f"ni = [{', '.join(['4'] * 12)}]" in lines


def test_inspect_help_mentions_order_2():
	result = _invoke("inspect", "--help")

	assert result.exit_code == 0
	assert "--order 2" in " ".join(result.stdout.split())


def test_inspect_order_too_small():
	result = _invoke("inspect", "-p", "builtin:univariate", "--order", "1")

	assert result.exit_code == 1
	assert "relaxation order 1 is below the minimum order 2" in result.output


def test_oracle_json():
	result = _invoke("oracle", "-p", "builtin:univariate", "--starts", "20", "--output", "json")

	assert result.exit_code == 0
	data = json.loads(result.stdout)
	assert data["problem"] == "univariate"
	assert data["best_point"] == pytest.approx([2.0], abs=1e-5)
	assert data["best_value"] == pytest.approx(1.0, abs=1e-8)
	assert len(data["basins"]) == 2


def test_oracle_text():
	result = _invoke("oracle", "-p", "builtin:univariate", "--starts", "20", "--seed", "3")

	assert result.exit_code == 0
	lines = result.stdout.splitlines()
	assert lines[:2] == ["problem = univariate", "basins = 2"]
	assert lines[2] == "\t1.000000 at x = 2.000000"
	assert lines[3] == "\t5.000000 at x = -2.000000"
