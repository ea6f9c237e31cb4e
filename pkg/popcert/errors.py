#!/usr/bin/env python
#
#  errors.py
"""
Exceptions raised by :mod:`popcert`.
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
from typing import Optional

__all__ = [
		"PopcertError",
		"ProblemSyntaxError",
		"UnknownVariableError",
		"DuplicateVariableError",
		"EmptyConstraintsError",
		"InconsistentBoundError",
		"PointSpecError",
		"InfeasibleCandidateError",
		"OrderTooSmallError",
		"NoFeasibleStartError",
		]


class PopcertError(Exception):
	"""
	Base class for errors raised by :mod:`popcert`.
	"""


class ProblemSyntaxError(PopcertError, ValueError):
	"""
	Raised when a problem file cannot be parsed.

	:param message: Description of the problem.
	:param line: The 1-based line number the error occurred on.
	:param column: The 1-based column number the error occurred at.
	"""

	def __init__(self, message: str, line: int = 0, column: int = 0):
		self.message = str(message)
		self.line = int(line)
		self.column = int(column)

		if self.line:
			super().__init__(f"line {self.line}, column {self.column}: {self.message}")
		else:
			super().__init__(self.message)


class UnknownVariableError(ProblemSyntaxError):
	"""
	Raised when a polynomial references a variable that was not declared.
	"""


class DuplicateVariableError(ProblemSyntaxError):
	"""
	Raised when the ``vars`` line declares the same variable twice.
	"""


class EmptyConstraintsError(ProblemSyntaxError):
	"""
	Raised when a problem has no constraints.
	"""


class InconsistentBoundError(ProblemSyntaxError):
	"""
	Raised when a two-sided bound has its lower limit above its upper limit.
	"""


class PointSpecError(PopcertError, ValueError):
	"""
	Raised when a candidate point specification is malformed.
	"""


class InfeasibleCandidateError(PopcertError):
	"""
	Raised when the candidate point violates a constraint beyond the feasibility tolerance.

	:param constraint_index: The 0-based index of the most violated canonical constraint,
		or :py:obj:`None` when the violation is in the moment matrix.
	:param value: The value of that constraint at the candidate point,
		or of the offending diagonal entry when ``entry`` is given.
	:param entry: The label of the negative diagonal entry of a moment or localizing matrix.
	"""

	def __init__(self, constraint_index: Optional[int], value: float, entry: Optional[str] = None):
		self.constraint_index = None if constraint_index is None else int(constraint_index)
		self.value = float(value)
		self.entry = entry

		if self.constraint_index is not None and entry is None:
			message = f"constraint {self.constraint_index + 1} evaluates to {self.value!r}"
		else:
			if self.constraint_index is None:
				matrix = "the moment matrix"
			else:
				matrix = f"the localizing matrix of constraint {self.constraint_index + 1}"
			label = "" if entry is None else f" {entry}"
			message = f"diagonal entry{label} of {matrix} is {self.value!r}"

		super().__init__(f"candidate is infeasible: {message}")


class OrderTooSmallError(PopcertError, ValueError):
	"""
	Raised when the requested relaxation order is below the minimum admissible order.

	:param order: The requested order.
	:param minimum: The minimum admissible order.
	"""

	def __init__(self, order: int, minimum: int):
		self.order = int(order)
		self.minimum = int(minimum)
		super().__init__(f"relaxation order {self.order} is below the minimum order {self.minimum}")


class NoFeasibleStartError(PopcertError):
	"""
	Raised when no multistart descent ends at a feasible point.
	"""
