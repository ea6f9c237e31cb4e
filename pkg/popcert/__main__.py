#!/usr/bin/env python
#
#  __main__.py
"""
Command-line interface.

Exit codes for ``popcert certify``: ``0`` certified, ``2`` not certified, ``1`` error.
"""
#
#  Copyright © 2024 The popcert developers
#
#  Permission is hereby granted, free of charge, to any person obtaining a copy
#  of this software and associated documentation files (the "Software"), to deal
#  in the Software without restriction, including without limitation the rights
#  to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
#  copies of the Software, and to permit persons to whom the Software is
#  furnished to do so, subject to the following conditions:
#
#  The above copyright notice and this permission notice shall be included in all
#  copies or substantial portions of the Software.
#
#  THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
#  EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF
#  MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT.
#  IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM,
#  DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR
#  OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE
#  OR OTHER DEALINGS IN THE SOFTWARE.
#

# stdlib
import json
import logging
import sys
from typing import Any, NoReturn, Optional

# 3rd party
import click
from consolekit import click_group
from consolekit.options import auto_default_option, flag_option, verbose_option
from domdf_python_tools.stringlist import DelimitedList, StringList

# this package
from popcert.certifier import CertifyConfig, certify, minimum_order
from popcert.errors import OrderTooSmallError, PopcertError
from popcert.kkt import assemble, dump_csv
from popcert.moments import localizing_order
from popcert.multiindex import basis, basis_size, monomial_text
from popcert.problem_io import emit_report, load_problem, parse_point

__all__ = ["main", "certify_command", "inspect_command", "oracle_command"]

EXIT_CERTIFIED = 0
EXIT_ERROR = 1
EXIT_NOT_CERTIFIED = 2


class _ClickHandler(logging.Handler):
	"""
	Sends log records to standard error through :func:`click.echo`.
	"""

	def emit(self, record: logging.LogRecord) -> None:
		try:
			click.echo(self.format(record), err=True)
		except Exception:  # pragma: no cover
			self.handleError(record)


def _configure_logging(verbose: int) -> None:
	logger = logging.getLogger("popcert")
	if not any(isinstance(h, _ClickHandler) for h in logger.handlers):
		handler = _ClickHandler()
		handler.setFormatter(logging.Formatter("%(levelname)s: %(name)s: %(message)s"))
		logger.addHandler(handler)
	logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _fail(error: Exception) -> NoReturn:
	click.echo(f"Error: {error}", err=True)
	sys.exit(EXIT_ERROR)


class _PopcertGroup(click.Group):
	"""
	Reports usage errors in subcommands with exit code ``1``, keeping ``2`` for "not certified".
	"""

	def invoke(self, ctx: click.Context) -> Any:
		try:
			return super().invoke(ctx)
		except click.UsageError as e:
			e.exit_code = EXIT_ERROR
			raise


@click_group(cls=_PopcertGroup)
def main() -> None:
	"""
	Certify global optimality of candidate points of polynomial optimization problems.
	"""


problem_option = click.option(
		"-p",
		"--problem",
		"problem_path",
		required=True,
		metavar="PATH",
		help="The problem file, or builtin:NAME for a bundled problem.",
		)

output_option = auto_default_option(
		"--output",
		type=click.Choice(["text", "json"]),
		default="text",
		help="The output format.",
		)


@verbose_option()
@output_option
@click.option("--dump-kkt", type=click.Path(dir_okay=False, writable=True), default=None, help="Write the KKT system to this CSV file.")
@flag_option("--refine", help="Polish the candidate with SLSQP before certifying it.")
@flag_option("--scale-rows", help="Equilibrate the rows of the KKT system.")
@click.option("--max-minor-order", type=click.IntRange(min=1), default=None, help="Cap on the size of the principal minors.")
@auto_default_option("--tol-comp", type=float, default=1e-9, help="Complementarity threshold.")
@auto_default_option("--tol-feas", type=float, default=1e-6, help="Feasibility tolerance for the candidate.")
@auto_default_option("--tol-cert", type=float, default=1e-4, help="Threshold on the normalized residual.")
@auto_default_option("--norm", type=click.Choice(["l1", "l2", "both"]), default="both", help="Which residual norms to minimize.")
@click.option("--order", type=int, default=None, help="The relaxation order. Defaults to the minimum order.")
@click.option("--point", "point_spec", required=True, metavar="SPEC", help="The candidate, as name=value pairs or a JSON object.")
@problem_option
@main.command(name="certify")
def certify_command(
		problem_path: str,
		point_spec: str,
		order: Optional[int],
		norm: str,
		tol_cert: float,
		tol_feas: float,
		tol_comp: float,
		max_minor_order: Optional[int],
		scale_rows: bool,
		refine: bool,
		dump_kkt: Optional[str],
		output: str,
		verbose: int,
		) -> None:
	"""
	Certify that a candidate point is a global minimizer.
	"""

	_configure_logging(verbose)

	try:
		problem = load_problem(problem_path)
		point = parse_point(point_spec, problem)
		config = CertifyConfig(
				order=order,
				norm=norm,  # type: ignore[arg-type]
				tol_feas=tol_feas,
				tol_comp=tol_comp,
				tol_cert=tol_cert,
				max_minor_order=max_minor_order,
				scale_rows=scale_rows,
				refine=refine,
				).validate()

		report = certify(problem, point, config)

		if dump_kkt is not None:
			x = report.refined_point if report.refined_point is not None else point.values
			system = assemble(problem, x, report.order, config)
			if scale_rows:
				system = system.scale_rows()
			dump_csv(system, dump_kkt)

	except (PopcertError, OSError, ValueError) as e:
		_fail(e)

	click.echo(emit_report(report, output), nl=False)  # type: ignore[arg-type]

	if "numerical-failure" in report.status.values():
		sys.exit(EXIT_ERROR)
	sys.exit(EXIT_CERTIFIED if report.certified else EXIT_NOT_CERTIFIED)


@verbose_option()
@click.option(
		"--order",
		type=click.IntRange(min=1),
		default=None,
		help="The relaxation order to report sizes for. Defaults to the minimum order.",
		)
@problem_option
@main.command(name="inspect")
def inspect_command(problem_path: str, order: Optional[int], verbose: int) -> None:
	"""
	Show the relaxation sizes and canonical constraints of a problem.

	The bundled wb2 power-flow problem has minimum order 1,
	but its global and local optima are only told apart with --order 2.
	"""

	_configure_logging(verbose)

	try:
		problem = load_problem(problem_path)
	except (PopcertError, OSError) as e:
		_fail(e)

	d_min = minimum_order(problem)
	d = d_min if order is None else order
	if d < d_min:
		_fail(OrderTooSmallError(d, d_min))

	sizes = [basis_size(problem.n, d - localizing_order(g)) for g in problem.constraints]

	buf = StringList()
	buf.append(f"problem = {problem.name}")
	buf.append(f"variables = {DelimitedList(problem.variables):, }")
	buf.append(f"n = {problem.n}")
	buf.append(f"d_min = {d_min}")
	buf.append(f"order = {d}")
	buf.append(f"n0 = {basis_size(problem.n, d)}")
	buf.append(f"ni = [{DelimitedList(sizes):, }]")
	buf.append(f"constraints = {len(problem.constraints)}")

	with buf.with_indent_size(1):
		for idx, (g, origin) in enumerate(zip(problem.constraints, problem.provenance), start=1):
			buf.append(f"g{idx}: {g.to_text(problem.variables)} >= 0  ({origin.kind}, {origin.side}, line {origin.line})")

	monomials = DelimitedList(monomial_text(alpha, problem.variables) for alpha in basis(problem.n, d))
	buf.append(f"basis = {monomials:, }")
	buf.blankline(ensure_single=True)

	click.echo(str(buf), nl=False)
	sys.exit(0)


@verbose_option()
@output_option
@auto_default_option("--seed", type=int, default=42, help="Seed for the random starting points.")
@auto_default_option("--starts", type=click.IntRange(min=1), default=100, help="The number of starting points.")
@problem_option
@main.command(name="oracle")
def oracle_command(problem_path: str, starts: int, seed: int, output: str, verbose: int) -> None:
	"""
	Search for local minima from random starting points.
	"""

	# this package
	from popcert.oracle import multistart_minimize

	_configure_logging(verbose)

	try:
		problem = load_problem(problem_path)
		outcome = multistart_minimize(problem, starts=starts, seed=seed)
	except (PopcertError, OSError) as e:
		_fail(e)

	if output == "json":
		data = {
				"problem": problem.name,
				"best_point": list(outcome.best_point),
				"best_value": outcome.best_value,
				"basins": [{"point": list(b.point), "value": b.value} for b in outcome.basins],
				}
		click.echo(json.dumps(data, indent=2))
	else:
		buf = StringList()
		buf.append(f"problem = {problem.name}")
		buf.append(f"basins = {len(outcome.basins)}")
		with buf.with_indent_size(1):
			for b in outcome.basins:
				coordinates = DelimitedList(f"{name} = {value:.6f}" for name, value in zip(problem.variables, b.point))
				buf.append(f"{b.value:.6f} at {coordinates:, }")
		buf.blankline(ensure_single=True)
		click.echo(str(buf), nl=False)

	sys.exit(0)


if __name__ == "__main__":
	sys.exit(main())
