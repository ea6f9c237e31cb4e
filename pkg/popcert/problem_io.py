#!/usr/bin/env python
#
#  problem_io.py
"""
Reading problem files and candidate points, and writing certificate reports.

Problem files are line oriented:

.. code-block:: text

	name "univariate"
	vars x
	minimize 1/4*x^4 + 1/8*x^3 - 2*x^2 - 3/2*x + 7
	subject_to
	-x^2 + 5 >= 0

Constraints may be ``e >= c``, ``e <= c``, ``e == c`` or ``lo <= e <= hi``.
``#`` starts a comment.
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
import re
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

# 3rd party
from domdf_python_tools.paths import PathPlus
from domdf_python_tools.stringlist import DelimitedList, StringList
from domdf_python_tools.typing import PathLike
from typing_extensions import Literal

# this package
from popcert.errors import (
		DuplicateVariableError,
		EmptyConstraintsError,
		InconsistentBoundError,
		PointSpecError,
		ProblemSyntaxError,
		UnknownVariableError
		)
from popcert.multiindex import MultiIndex
from popcert.polynomial import Polynomial, linear_combine

__all__ = [
		"RawConstraint",
		"ConstraintOrigin",
		"PopProblem",
		"CandidatePoint",
		"CertificateReport",
		"parse_problem",
		"load_problem",
		"canonicalize",
		"canonical_rows",
		"parse_point",
		"emit_report",
		]

_TOKEN_RE = re.compile(
		r"""
		(?P<space>[ \t\r]+)
		|(?P<comment>\#.*)
		|(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
		|(?P<string>"[^"]*")
		|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)
		|(?P<op>>=|<=|==|[-+*^/,])
		""",
		re.VERBOSE,
		)

_COMPARISONS = {">=", "<=", "=="}


class _Token(NamedTuple):
	kind: str
	text: str
	column: int


class RawConstraint(NamedTuple):
	"""
	A constraint as written in a problem file, before canonicalization.
	"""

	#: ``"ge"`` for ``e >= c``, ``"le"`` for ``e <= c``, ``"eq"`` for ``e == c`` and ``"range"`` for ``lo <= e <= hi``.
	kind: Literal["ge", "le", "eq", "range"]

	#: The polynomial expression ``e``.
	expression: Polynomial

	#: The constant for ``ge``, ``eq`` and ``range`` constraints.
	lower: Optional[float] = None

	#: The constant for ``le``, ``eq`` and ``range`` constraints.
	upper: Optional[float] = None

	#: The 1-based line number in the problem file, or ``0`` if unknown.
	line: int = 0


class ConstraintOrigin(NamedTuple):
	"""
	Records where a canonical constraint :math:`g_i(x) \\geq 0` came from.
	"""

	#: The kind of source constraint.
	kind: Literal["inequality", "equality", "bound"]

	#: ``"lower"`` for ``e - c`` and ``"upper"`` for ``c - e``.
	side: Literal["lower", "upper"]

	#: The index of the source constraint (0-based, in file order).
	source: int

	#: The 1-based line number in the problem file, or ``0`` if unknown.
	line: int = 0


class PopProblem(NamedTuple):
	"""
	A polynomial optimization problem: minimize ``objective`` subject to every ``constraints[i] >= 0``.
	"""

	name: str
	variables: Tuple[str, ...]
	objective: Polynomial
	constraints: Tuple[Polynomial, ...]
	provenance: Tuple[ConstraintOrigin, ...]

	@property
	def n(self) -> int:
		"""
		The number of variables.
		"""

		return len(self.variables)

	def to_text(self) -> str:
		"""
		Returns the problem in the problem file grammar, with every constraint in canonical ``g >= 0`` form.
		"""

		name = self.name.replace('"', "'")

		buf = StringList()
		buf.append(f'name "{name}"')
		buf.append(f"vars {' '.join(self.variables)}")
		buf.append(f"minimize {self.objective.to_text(self.variables)}")
		buf.append("subject_to")
		for constraint in self.constraints:
			buf.append(f"{constraint.to_text(self.variables)} >= 0")
		buf.blankline(ensure_single=True)

		return str(buf)


class CandidatePoint(NamedTuple):
	"""
	A candidate point :math:`\\hat{x}`, in problem variable order.
	"""

	values: Tuple[float, ...]

	def __len__(self) -> int:  # type: ignore[override]
		return len(self.values)


class CertificateReport(NamedTuple):
	"""
	The outcome of certifying a candidate point.
	"""

	problem: str
	order: int
	n0: int
	ni: Tuple[int, ...]
	multipliers_total: int
	multipliers_fixed_zero: int
	residual_l1: Optional[float]
	residual_l2: Optional[float]
	verdict: Literal["certified", "not-certified"]
	objective_value: float
	feasibility_margin: float
	iterations_l1: Optional[int]
	iterations_l2: Optional[int]
	time_ms: Mapping[str, float]
	status: Mapping[str, Optional[str]]
	variables: Tuple[str, ...] = ()
	candidate: Tuple[float, ...] = ()
	refined_point: Optional[Tuple[float, ...]] = None
	multipliers: Mapping[str, float] = MappingProxyType({})

	@property
	def multipliers_free(self) -> int:
		"""
		The number of multipliers that were not fixed to zero.
		"""

		return self.multipliers_total - self.multipliers_fixed_zero

	@property
	def certified(self) -> bool:
		return self.verdict == "certified"

	def to_json_dict(self) -> Dict[str, Any]:
		"""
		Returns the report as a dictionary with the JSON key order.
		"""

		data: Dict[str, Any] = {
				"problem": self.problem,
				"order": self.order,
				"n0": self.n0,
				"ni": list(self.ni),
				"multipliers_total": self.multipliers_total,
				"multipliers_fixed_zero": self.multipliers_fixed_zero,
				"residual_l1": self.residual_l1,
				"residual_l2": self.residual_l2,
				"verdict": self.verdict,
				"objective_value": self.objective_value,
				"feasibility_margin": self.feasibility_margin,
				"iterations_l1": self.iterations_l1,
				"iterations_l2": self.iterations_l2,
				"time_ms": {key: self.time_ms.get(key, 0.0) for key in ("assemble", "solve_l1", "solve_l2")},
				"status": {"l1": self.status.get("l1"), "l2": self.status.get("l2")},
				}

		if self.refined_point is not None:
			data["refined_point"] = list(self.refined_point)

		return data


class _LineParser:
	"""
	Recursive-descent parser over the tokens of one line.
	"""

	def __init__(self, line: str, lineno: int, variables: Sequence[str] = ()):
		self.lineno = lineno
		self.variables = {name: idx for idx, name in enumerate(variables)}
		self.n = len(variables)
		self.tokens: List[_Token] = []
		self.pos = 0
		self._end_column = len(line) + 1

		offset = 0
		while offset < len(line):
			match = _TOKEN_RE.match(line, offset)
			if match is None:
				raise ProblemSyntaxError(f"unexpected character {line[offset]!r}", lineno, offset + 1)

			kind = match.lastgroup
			assert kind is not None
			if kind == "comment":
				break
			if kind != "space":
				self.tokens.append(_Token(kind, match.group(), offset + 1))
			offset = match.end()

	def bind(self, variables: Sequence[str]) -> None:
		self.variables = {name: idx for idx, name in enumerate(variables)}
		self.n = len(variables)

	def error(self, message: str, token: Optional[_Token] = None) -> ProblemSyntaxError:
		column = self._end_column if token is None else token.column
		return ProblemSyntaxError(message, self.lineno, column)

	@property
	def empty(self) -> bool:
		return not self.tokens

	def peek(self, offset: int = 0) -> Optional[_Token]:
		if self.pos + offset < len(self.tokens):
			return self.tokens[self.pos + offset]
		return None

	def next(self, expected: str) -> _Token:
		token = self.peek()
		if token is None:
			raise self.error(f"expected {expected}, got end of line")
		self.pos += 1
		return token

	def at_op(self, *ops: str, offset: int = 0) -> bool:
		token = self.peek(offset)
		return token is not None and token.kind == "op" and token.text in ops

	def expect_end(self) -> None:
		token = self.peek()
		if token is not None:
			raise self.error(f"unexpected {token.text!r}", token)

	def keyword(self) -> _Token:
		token = self.next("a keyword")
		if token.kind != "ident":
			raise self.error(f"expected a keyword, got {token.text!r}", token)
		return token

	def number(self) -> Fraction:
		token = self.next("a number")
		if token.kind != "number":
			raise self.error(f"expected a number, got {token.text!r}", token)
		value = Fraction(token.text)

		if self.at_op('/'):
			self.pos += 1
			denominator = self.next("an integer denominator")
			if denominator.kind != "number" or not denominator.text.isdigit():
				raise self.error(f"expected an integer denominator, got {denominator.text!r}", denominator)
			if not token.text.isdigit():
				raise self.error("fractions must be written as INT/INT", token)
			if int(denominator.text) == 0:
				raise self.error("division by zero", denominator)
			value /= int(denominator.text)

		return value

	def signed_number(self) -> Fraction:
		sign = 1
		if self.at_op('+', '-'):
			sign = -1 if self.next("a sign").text == '-' else 1
		return sign * self.number()

	def comparison(self) -> str:
		token = self.next("a comparison")
		if token.kind != "op" or token.text not in _COMPARISONS:
			raise self.error(f"expected '>=', '<=' or '==', got {token.text!r}", token)
		return token.text

	def polynomial(self) -> Dict[MultiIndex, Fraction]:
		terms: Dict[MultiIndex, Fraction] = {}

		sign = 1
		if self.at_op('+', '-'):
			sign = -1 if self.next("a sign").text == '-' else 1
		self._term(sign, terms)

		while self.at_op('+', '-'):
			sign = -1 if self.next("a sign").text == '-' else 1
			self._term(sign, terms)

		return terms

	def _term(self, sign: int, terms: Dict[MultiIndex, Fraction]) -> None:
		coefficient = Fraction(sign)
		exponents = [0] * self.n

		token = self.peek()
		if token is not None and token.kind == "number":
			coefficient *= self.number()
			if self.at_op('*'):
				self.pos += 1
				self._factor(exponents)
		else:
			self._factor(exponents)

		while self.at_op('*'):
			self.pos += 1
			self._factor(exponents)

		alpha = MultiIndex(exponents)
		terms[alpha] = terms.get(alpha, Fraction(0)) + coefficient

	def _factor(self, exponents: List[int]) -> None:
		token = self.next("a variable")
		if token.kind != "ident":
			raise self.error(f"expected a variable, got {token.text!r}", token)
		if token.text not in self.variables:
			raise UnknownVariableError(f"unknown variable {token.text!r}", self.lineno, token.column)

		power = 1
		if self.at_op('^'):
			self.pos += 1
			exponent = self.next("an integer exponent")
			if exponent.kind != "number" or not exponent.text.isdigit():
				raise self.error(f"expected an integer exponent, got {exponent.text!r}", exponent)
			power = int(exponent.text)

		exponents[self.variables[token.text]] += power

	def starts_with_constant_comparison(self) -> bool:
		offset = 1 if self.at_op('+', '-') else 0
		token = self.peek(offset)
		if token is None or token.kind != "number":
			return False
		offset += 1
		if self.at_op('/', offset=offset):
			offset += 2
		return self.at_op(*_COMPARISONS, offset=offset)

	def constraint(self) -> RawConstraint:
		if self.starts_with_constant_comparison():
			left = self.signed_number()
			first = self.comparison()
			expression = self._to_polynomial(self.polynomial())

			if self.peek() is None:
				# c <= e, c >= e and c == e
				kind: Literal["ge", "le", "eq"] = {"<=": "ge", ">=": "le", "==": "eq"}[first]  # type: ignore[assignment]
				return self._one_sided(kind, expression, left)

			second_token = self.peek()
			second = self.comparison()
			right = self.signed_number()
			self.expect_end()

			if first == "==" or first != second:
				raise self.error("two-sided bounds must use matching '<=' or '>=' comparisons", second_token)

			lower, upper = (left, right) if first == "<=" else (right, left)
			if lower > upper:
				raise InconsistentBoundError(
						f"lower bound {float(lower)!r} exceeds upper bound {float(upper)!r}",
						self.lineno,
						self.tokens[0].column,
						)

			return RawConstraint("range", expression, float(lower), float(upper), self.lineno)

		expression = self._to_polynomial(self.polynomial())
		kind = {">=": "ge", "<=": "le", "==": "eq"}[self.comparison()]  # type: ignore[assignment]
		constant = self.signed_number()
		self.expect_end()
		return self._one_sided(kind, expression, constant)

	def _one_sided(self, kind: Literal["ge", "le", "eq"], expression: Polynomial, constant: Fraction) -> RawConstraint:
		if kind == "ge":
			return RawConstraint("ge", expression, lower=float(constant), line=self.lineno)
		elif kind == "le":
			return RawConstraint("le", expression, upper=float(constant), line=self.lineno)
		else:
			return RawConstraint("eq", expression, float(constant), float(constant), self.lineno)

	def _to_polynomial(self, terms: Dict[MultiIndex, Fraction]) -> Polynomial:
		return Polynomial(self.n, {alpha: float(coefficient) for alpha, coefficient in terms.items()})


def _header(parser: _LineParser, keyword: str) -> None:
	token = parser.keyword()
	if token.text != keyword:
		raise parser.error(f"expected {keyword!r}, got {token.text!r}", token)


def parse_problem(text: str) -> PopProblem:
	"""
	Parse the contents of a problem file.

	:param text:

	:raises ProblemSyntaxError: If the text does not follow the grammar.
	:raises UnknownVariableError: If a polynomial uses an undeclared variable.
	:raises DuplicateVariableError: If a variable is declared twice.
	:raises EmptyConstraintsError: If the ``subject_to`` block is empty.
	:raises InconsistentBoundError: If a two-sided bound has ``lo > hi``.
	"""

	lines = [
			_LineParser(line, lineno) for lineno, line in enumerate(text.splitlines(), start=1)
			]
	lines = [parser for parser in lines if not parser.empty]
	last_line = len(text.splitlines())

	def take(what: str) -> _LineParser:
		if not lines:
			raise ProblemSyntaxError(f"expected {what}, got end of file", last_line + 1, 1)
		return lines.pop(0)

	# name "..."
	parser = take("'name'")
	_header(parser, "name")
	token = parser.next("a quoted name")
	if token.kind != "string":
		raise parser.error(f"expected a quoted name, got {token.text!r}", token)
	name = token.text[1:-1]
	parser.expect_end()

	# vars x1 x2 ...
	parser = take("'vars'")
	_header(parser, "vars")
	variables: List[str] = []
	while parser.peek() is not None:
		token = parser.next("a variable name")
		if token.kind == "op" and token.text == ',':
			continue
		if token.kind != "ident":
			raise parser.error(f"expected a variable name, got {token.text!r}", token)
		if token.text in variables:
			raise DuplicateVariableError(f"variable {token.text!r} declared twice", parser.lineno, token.column)
		variables.append(token.text)
	if not variables:
		raise parser.error("expected at least one variable")

	# minimize <poly>
	parser = take("'minimize'")
	_header(parser, "minimize")
	parser.bind(variables)
	objective = parser._to_polynomial(parser.polynomial())
	parser.expect_end()

	parser = take("'subject_to'")
	_header(parser, "subject_to")
	parser.expect_end()
	subject_to_line = parser.lineno

	raw: List[RawConstraint] = []
	for parser in lines:
		parser.bind(variables)
		raw.append(parser.constraint())

	if not raw:
		raise EmptyConstraintsError("the subject_to block has no constraints", subject_to_line, 1)

	rows = canonical_rows(raw)

	return PopProblem(
			name=name,
			variables=tuple(variables),
			objective=objective,
			constraints=tuple(poly for poly, _ in rows),
			provenance=tuple(origin for _, origin in rows),
			)


def load_problem(filename: PathLike) -> PopProblem:
	"""
	Parse the problem file at ``filename``.

	``builtin:NAME`` loads one of the problems bundled with :mod:`popcert.problems`.
	"""

	if isinstance(filename, str) and filename.startswith("builtin:"):
		# this package
		from popcert.problems import load_builtin

		return load_builtin(filename[len("builtin:"):])

	return parse_problem(PathPlus(filename).read_text())


def canonical_rows(raw: Sequence[RawConstraint]) -> List[Tuple[Polynomial, ConstraintOrigin]]:
	"""
	Rewrite raw constraints as :math:`g(x) \\geq 0` polynomials, each paired with its origin.

	Equalities and two-sided bounds produce two adjacent rows, the ``lower`` half first.

	:raises InconsistentBoundError: If a two-sided bound has ``lo > hi``.
	"""

	rows: List[Tuple[Polynomial, ConstraintOrigin]] = []

	for index, constraint in enumerate(raw):
		e = constraint.expression
		one = Polynomial.constant(e.n, 1.0)

		if constraint.kind == "ge":
			assert constraint.lower is not None
			rows.append((
					linear_combine(1.0, e, -constraint.lower, one),
					ConstraintOrigin("inequality", "lower", index, constraint.line),
					))

		elif constraint.kind == "le":
			assert constraint.upper is not None
			rows.append((
					linear_combine(-1.0, e, constraint.upper, one),
					ConstraintOrigin("inequality", "upper", index, constraint.line),
					))

		else:
			assert constraint.lower is not None and constraint.upper is not None
			if constraint.lower > constraint.upper:
				raise InconsistentBoundError(
						f"lower bound {constraint.lower!r} exceeds upper bound {constraint.upper!r}",
						constraint.line,
						)

			kind: Literal["equality", "bound"] = "equality" if constraint.kind == "eq" else "bound"
			rows.append((
					linear_combine(1.0, e, -constraint.lower, one),
					ConstraintOrigin(kind, "lower", index, constraint.line),
					))
			rows.append((
					linear_combine(-1.0, e, constraint.upper, one),
					ConstraintOrigin(kind, "upper", index, constraint.line),
					))

	return rows


def canonicalize(raw: Sequence[RawConstraint]) -> List[Polynomial]:
	"""
	Rewrite raw constraints as :math:`g(x) \\geq 0` polynomials.

	* ``e >= c`` becomes ``e - c``
	* ``e <= c`` becomes ``c - e``
	* ``e == c`` becomes ``e - c`` and ``c - e``
	* ``lo <= e <= hi`` becomes ``e - lo`` and ``hi - e``

	:raises InconsistentBoundError: If a two-sided bound has ``lo > hi``.
	"""

	return [poly for poly, _ in canonical_rows(raw)]


def _parse_value(name: str, value: Any) -> float:
	if isinstance(value, bool):
		raise PointSpecError(f"value for {name!r} is not numeric: {value!r}")
	if isinstance(value, (int, float)):
		return float(value)
	if isinstance(value, str):
		try:
			return float(Fraction(value.strip()))
		except (ValueError, ZeroDivisionError):
			pass
	raise PointSpecError(f"value for {name!r} is not numeric: {value!r}")


def parse_point(text: str, problem: PopProblem) -> CandidatePoint:
	"""
	Parse a candidate point for ``problem``.

	:param text: Either comma-separated ``name=value`` pairs, such as ``x1=.950,x2=.413``,
		or a JSON object keyed by variable name.
	:param problem:

	:raises PointSpecError: If a variable is missing, unknown, assigned twice or given a non-numeric value.
	"""

	assignments: List[Tuple[str, Any]] = []

	if text.strip().startswith('{'):
		try:
			pairs = json.loads(text, object_pairs_hook=list)
		except ValueError as e:
			raise PointSpecError(f"invalid JSON point: {e}") from None
		if not isinstance(pairs, list):
			raise PointSpecError("a JSON point must be an object")
		assignments.extend(pairs)
	else:
		for item in text.split(','):
			if not item.strip():
				continue
			if '=' not in item:
				raise PointSpecError(f"expected name=value, got {item.strip()!r}")
			key, value = item.split('=', 1)
			assignments.append((key.strip(), value))

	values: Dict[str, float] = {}
	for key, value in assignments:
		if key not in problem.variables:
			raise PointSpecError(f"unknown variable {key!r}")
		if key in values:
			raise PointSpecError(f"variable {key!r} assigned more than once")
		values[key] = _parse_value(key, value)

	missing = [name for name in problem.variables if name not in values]
	if missing:
		raise PointSpecError(f"no value given for {', '.join(map(repr, missing))}")

	return CandidatePoint(tuple(values[name] for name in problem.variables))


def _format_residual(value: Optional[float]) -> str:
	return "n/a" if value is None else f"{value:.2e}"


def emit_report(report: CertificateReport, format: Literal["json", "text"] = "json") -> str:  # noqa: A002  # pylint: disable=redefined-builtin
	"""
	Serialize a certificate report.

	:param report:
	:param format: ``"json"`` for the machine-readable report, ``"text"`` for a table.
	"""

	if format == "json":
		return json.dumps(report.to_json_dict(), indent=2) + '\n'
	elif format != "text":
		raise ValueError(f"Unknown report format {format!r}")

	point = report.refined_point if report.refined_point is not None else report.candidate
	if report.variables and point:
		solution = DelimitedList(f"{name} = {value:g}" for name, value in zip(report.variables, point))
	else:
		solution = DelimitedList(f"{value:g}" for value in point)

	buf = StringList()
	buf.append(f"Problem:             {report.problem}")
	buf.append(f"Relaxation order:    {report.order}")
	buf.append(f"Matrix sizes:        n0 = {report.n0}, ni = [{DelimitedList(report.ni):, }]")
	buf.append(
			f"Multipliers:         {report.multipliers_total} total, "
			f"{report.multipliers_fixed_zero} fixed to zero, {report.multipliers_free} free"
			)
	buf.append(f"Objective value:     {report.objective_value:.6g}")
	buf.append(f"Feasibility margin:  {report.feasibility_margin:.3e}")
	buf.blankline()

	header = ("Solution", "Residual l1", "Residual l2", "Verdict")
	row = (
			f"{solution:, }",
			_format_residual(report.residual_l1),
			_format_residual(report.residual_l2),
			report.verdict,
			)
	widths = [max(len(a), len(b)) for a, b in zip(header, row)]
	buf.append(" | ".join(cell.ljust(width) for cell, width in zip(header, widths)).rstrip())
	buf.append("-+-".join('-' * width for width in widths))
	buf.append(" | ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
	buf.blankline()

	timings = DelimitedList(f"{key} {report.time_ms.get(key, 0.0):.1f} ms" for key in ("assemble", "solve_l1", "solve_l2"))
	buf.append(f"Timings:             {timings:, }")
	buf.append(f"Solver status:       l1 {report.status.get('l1') or 'n/a'}, l2 {report.status.get('l2') or 'n/a'}")
	buf.blankline(ensure_single=True)

	return str(buf)
