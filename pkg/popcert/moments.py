#!/usr/bin/env python
#
#  moments.py
"""
Moment and localizing matrix structures, and the lift of a candidate point to its moment vector.
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
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

# 3rd party
import numpy
from typing_extensions import Literal, final

# this package
from popcert.errors import OrderTooSmallError
from popcert.multiindex import MonomialBasis, add, basis
from popcert.polynomial import Polynomial, half_degree

__all__ = [
		"LiftedPoint",
		"MatrixStructure",
		"lift_point",
		"moment_structure",
		"localizing_structure",
		"eval_structure",
		"minimum_order",
		"localizing_order",
		]

#: A term of a matrix entry, as ``(coefficient, position in the moment basis)``.
Term = Tuple[float, int]


@final
class LiftedPoint:
	"""
	The moment vector :math:`\\hat{y}_\\alpha = \\hat{x}^\\alpha` of a point, for :math:`|\\alpha| \\leq 2d`.

	:param order: The relaxation order :math:`d`.
	:param values: The moments, indexed by :func:`~popcert.multiindex.basis` ``(n, 2d)``.
	"""

	__slots__ = ("order", "moments", "values")

	def __init__(self, order: int, moments: MonomialBasis, values: numpy.ndarray):
		if len(values) != len(moments):
			raise ValueError(f"Expected {len(moments)} moments, got {len(values)}")

		self.order: int = order
		self.moments: MonomialBasis = moments
		self.values: numpy.ndarray = numpy.asarray(values, dtype=float)
		self.values.flags.writeable = False

	def __getitem__(self, alpha: Sequence[int]) -> float:
		return float(self.values[self.moments.position(alpha)])

	def __len__(self) -> int:
		return len(self.values)

	def __repr__(self) -> str:
		return f"LiftedPoint(order={self.order}, values={self.values.tolist()!r})"


def lift_point(x: Sequence[float], d: int) -> LiftedPoint:
	"""
	Lift ``x`` to its moment vector of order ``d``.

	Each moment is the product of an earlier moment and one coordinate of ``x``,
	which keeps :math:`\\hat{y}_{\\alpha+\\beta} = \\hat{y}_\\alpha \\hat{y}_\\beta` consistent.

	:param x: The candidate point.
	:param d: The relaxation order.
	"""

	point = [float(v) for v in x]
	moments = basis(len(point), 2 * d)
	values = numpy.empty(len(moments))

	for i, alpha in enumerate(moments):
		if i == 0:
			values[0] = 1.0
			continue

		k = next(idx for idx, exponent in enumerate(alpha) if exponent)
		lowered = list(alpha)
		lowered[k] -= 1
		values[i] = values[moments.position(lowered)] * point[k]

	return LiftedPoint(d, moments, values)


@final
class MatrixStructure:
	"""
	The symbolic structure of a moment or localizing matrix.

	Each entry is a tuple of ``(coefficient, moment position)`` pairs,
	meaning :math:`\\sum c \\, y_{\\text{position}}`.
	Only the upper triangle is stored; :meth:`entry` mirrors it.

	:param kind: ``"moment"`` or ``"localizing"``.
	:param rows: The row (and column) monomial basis.
	:param moments: The moment basis the positions refer to.
	:param entries: Mapping of ``(row, column)`` with ``row <= column`` to the entry's terms.
	:param constraint: For localizing matrices, the 0-based index of the constraint.
	"""

	__slots__ = ("kind", "rows", "moments", "constraint", "_entries")

	def __init__(
			self,
			kind: Literal["moment", "localizing"],
			rows: MonomialBasis,
			moments: MonomialBasis,
			entries: Dict[Tuple[int, int], Tuple[Term, ...]],
			constraint: Optional[int] = None,
			):
		self.kind: Literal["moment", "localizing"] = kind
		self.rows: MonomialBasis = rows
		self.moments: MonomialBasis = moments
		self.constraint: Optional[int] = constraint
		self._entries = entries

	@property
	def size(self) -> int:
		"""
		The number of rows (and columns) of the matrix.
		"""

		return len(self.rows)

	@property
	def order(self) -> int:
		"""
		The relaxation order :math:`d` of the moment basis.
		"""

		return self.moments.degree // 2

	def entry(self, row: int, column: int) -> Tuple[Term, ...]:
		"""
		Returns the terms of the entry at ``(row, column)``.
		"""

		if row > column:
			row, column = column, row
		return self._entries[(row, column)]

	def iter_upper(self) -> Iterator[Tuple[int, int, Tuple[Term, ...]]]:
		"""
		Iterate over ``(row, column, terms)`` for the upper triangle, row by row.
		"""

		for row in range(self.size):
			for column in range(row, self.size):
				yield row, column, self._entries[(row, column)]

	def pattern(self, position: int) -> numpy.ndarray:
		"""
		Returns the symmetric coefficient matrix of the moment at ``position``.

		The matrix is the sum over all moments of ``pattern(position) * y[position]``.
		"""

		matrix = numpy.zeros((self.size, self.size))
		for row, column, terms in self.iter_upper():
			for coefficient, idx in terms:
				if idx == position:
					matrix[row, column] = matrix[column, row] = coefficient

		return matrix

	def label(self) -> str:
		if self.kind == "moment":
			return "moment"
		return f"localizing {self.constraint}"

	def __repr__(self) -> str:
		return f"MatrixStructure({self.label()!r}, size={self.size}, order={self.order})"


def moment_structure(n: int, d: int) -> MatrixStructure:
	"""
	Returns the structure of the moment matrix :math:`M_d(y) = (y_{\\beta+\\gamma})`.

	:param n: The number of variables.
	:param d: The relaxation order.
	"""

	if d < 1:
		raise ValueError(f"The relaxation order must be at least 1, got {d}")

	rows = basis(n, d)
	moments = basis(n, 2 * d)

	entries: Dict[Tuple[int, int], Tuple[Term, ...]] = {}
	for r, beta in enumerate(rows):
		for c in range(r, len(rows)):
			entries[(r, c)] = ((1.0, moments.position(add(beta, rows[c]))), )

	return MatrixStructure("moment", rows, moments, entries)


def localizing_structure(g: Polynomial, d: int, constraint: Optional[int] = None) -> MatrixStructure:
	"""
	Returns the structure of the localizing matrix
	:math:`M_{d-k}(g y) = (\\sum_{\\gamma'} g_{\\gamma'} y_{\\beta+\\gamma+\\gamma'})`,
	where :math:`k` is the half-degree of ``g``.
	The zero polynomial gives a zero matrix with :math:`k = 0`.

	:param g: The constraint polynomial.
	:param d: The relaxation order.
	:param constraint: The 0-based index of the constraint, for labelling.

	:raises OrderTooSmallError: If ``d`` is below the half-degree of ``g``.
	"""

	k = localizing_order(g)
	if d < k:
		raise OrderTooSmallError(d, k)

	rows = basis(g.n, d - k)
	moments = basis(g.n, 2 * d)

	terms = sorted(g, key=lambda item: moments.position(item[0]))

	entries: Dict[Tuple[int, int], Tuple[Term, ...]] = {}
	for r, beta in enumerate(rows):
		for c in range(r, len(rows)):
			shift = add(beta, rows[c])
			entries[(r, c)] = tuple((coefficient, moments.position(add(shift, gamma))) for gamma, coefficient in terms)

	return MatrixStructure("localizing", rows, moments, entries, constraint)


def eval_structure(structure: MatrixStructure, lifted: LiftedPoint) -> numpy.ndarray:
	"""
	Evaluate a matrix structure at a moment vector.

	:param structure:
	:param lifted:

	:returns: A dense symmetric matrix.
	"""

	if lifted.order < structure.order:
		raise ValueError(
				f"The lifted point has order {lifted.order} "
				f"but the structure needs order {structure.order}"
				)

	# bases are nested, so positions in a smaller moment basis are valid in a larger one
	values = lifted.values
	matrix = numpy.empty((structure.size, structure.size))
	for row, column, terms in structure.iter_upper():
		total = 0.0
		for coefficient, idx in terms:
			total += coefficient * values[idx]
		matrix[row, column] = matrix[column, row] = total

	return matrix


def minimum_order(objective: Polynomial, constraints: Sequence[Polynomial]) -> int:
	"""
	Returns the minimum relaxation order :math:`d^{\\min}`.

	This is the largest half-degree of the objective and the constraints, and at least ``1``.
	Zero polynomials do not contribute.
	"""

	degrees: List[int] = [localizing_order(objective), 1]
	degrees.extend(localizing_order(g) for g in constraints)
	return max(degrees)


def localizing_order(p: Polynomial) -> int:
	"""
	Returns the half-degree of ``p``, or ``0`` for the zero polynomial.
	"""

	return 0 if p.is_zero() else half_degree(p)
