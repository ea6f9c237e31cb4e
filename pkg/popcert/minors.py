#!/usr/bin/env python
#
#  minors.py
"""
Principal minors, comatrices, and the gradients of minors with respect to the moments.
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
import itertools
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

# 3rd party
import numpy

# this package
from popcert.moments import MatrixStructure

__all__ = [
		"IndexSet",
		"MinorEvaluation",
		"enumerate_index_sets",
		"determinant",
		"principal_minor",
		"comatrix",
		"evaluate_minor",
		"gradient_coefficient",
		"minor_gradient",
		]


class IndexSet(Tuple[int, ...]):
	"""
	A nonempty, strictly increasing set of 0-based row indices of a symmetric matrix.

	:param members:
	"""

	__slots__ = ()

	def __new__(cls, members: Iterable[int]) -> "IndexSet":  # noqa: D102
		values = tuple(int(m) for m in members)

		if not values:
			raise ValueError("An index set must not be empty")
		if values[0] < 0:
			raise ValueError(f"Index set members must be non-negative, got {values!r}")
		for a, b in zip(values, values[1:]):
			if a >= b:
				raise ValueError(f"Index set members must be strictly increasing, got {values!r}")

		return super().__new__(cls, values)  # type: ignore[arg-type]

	@property
	def is_singleton(self) -> bool:
		return len(self) == 1

	def label(self) -> str:
		"""
		Returns the 1-based set notation, such as ``{1,2}``.
		"""

		return '{' + ','.join(str(m + 1) for m in self) + '}'

	def __repr__(self) -> str:
		return f"IndexSet({tuple(self)!r})"


class MinorEvaluation(NamedTuple):
	"""
	A principal minor of an evaluated matrix, together with the comatrix of its submatrix.
	"""

	index_set: IndexSet

	#: The determinant of the ``index_set`` submatrix.
	value: float

	#: The comatrix of the ``index_set`` submatrix.
	comatrix: numpy.ndarray


def enumerate_index_sets(size: int, max_order: Optional[int] = None) -> List[IndexSet]:
	"""
	Returns every index set of a ``size`` by ``size`` matrix with at most ``max_order`` members.

	Sets are ordered by cardinality, then lexicographically.

	:param size:
	:param max_order: Defaults to ``size``. Values above ``size`` are clamped.
	"""

	if size < 1:
		raise ValueError(f"Matrix size must be at least 1, got {size}")

	if max_order is None:
		max_order = size
	elif max_order < 1:
		raise ValueError(f"max_order must be at least 1, got {max_order}")

	sets: List[IndexSet] = []
	for k in range(1, min(max_order, size) + 1):
		sets.extend(IndexSet(members) for members in itertools.combinations(range(size), k))

	return sets


def determinant(matrix: numpy.ndarray) -> float:
	"""
	Returns the determinant of a square matrix.

	Matrices up to 3×3 use the closed-form expansion; larger matrices use an LU factorization
	with partial pivoting. The determinant of a 0×0 matrix is ``1``.
	"""

	a = numpy.asarray(matrix, dtype=float)
	if a.ndim != 2 or a.shape[0] != a.shape[1]:
		raise ValueError(f"Expected a square matrix, got shape {a.shape}")

	k = a.shape[0]
	if k == 0:
		return 1.0
	elif k == 1:
		return float(a[0, 0])
	elif k == 2:
		return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
	elif k == 3:
		return float(
				a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
				- a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
				+ a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
				)
	else:
		return float(numpy.linalg.det(a))


def principal_minor(matrix: numpy.ndarray, index_set: Sequence[int]) -> float:
	"""
	Returns the determinant of the ``index_set`` by ``index_set`` submatrix of ``matrix``.
	"""

	idx = list(index_set)
	return determinant(numpy.asarray(matrix)[numpy.ix_(idx, idx)])


def comatrix(matrix: numpy.ndarray) -> numpy.ndarray:
	"""
	Returns the comatrix (matrix of cofactors) of a square matrix.

	Entry ``(i, j)`` is :math:`(-1)^{i+j}` times the determinant of ``matrix`` with row ``i``
	and column ``j`` removed. The comatrix of a 1×1 matrix is ``[[1]]``.
	"""

	a = numpy.asarray(matrix, dtype=float)
	if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
		raise ValueError(f"Expected a nonempty square matrix, got shape {a.shape}")

	k = a.shape[0]
	if k == 1:
		return numpy.ones((1, 1))
	elif k == 2:
		return numpy.array([[a[1, 1], -a[1, 0]], [-a[0, 1], a[0, 0]]])

	result = numpy.empty((k, k))
	for i in range(k):
		without_row = numpy.delete(a, i, axis=0)
		for j in range(k):
			sign = -1.0 if (i + j) % 2 else 1.0
			result[i, j] = sign * determinant(numpy.delete(without_row, j, axis=1))

	return result


def evaluate_minor(matrix: numpy.ndarray, index_set: IndexSet) -> MinorEvaluation:
	"""
	Evaluate the principal minor of ``matrix`` for ``index_set``, and the comatrix of its submatrix.
	"""

	idx = list(index_set)
	if idx[-1] >= len(matrix):
		raise ValueError(f"Index set {index_set.label()} is out of range for a {len(matrix)}×{len(matrix)} matrix")

	sub = numpy.asarray(matrix, dtype=float)[numpy.ix_(idx, idx)]
	return MinorEvaluation(index_set, determinant(sub), comatrix(sub))


def minor_gradient(evaluation: MinorEvaluation, structure: MatrixStructure) -> Dict[int, float]:
	"""
	Returns the derivative of the minor with respect to every moment it depends on.

	The derivative with respect to :math:`y_\\alpha` is :math:`\\mathrm{trace}(\\mathrm{co}_I \\, S_{I,\\alpha})`,
	where :math:`S_{I,\\alpha}` is the restriction to the index set of the coefficient pattern of :math:`y_\\alpha`.

	:returns: A mapping of moment positions to derivatives. Positions that do not occur are zero.
	"""

	co = evaluation.comatrix
	members = evaluation.index_set
	gradient: Dict[int, float] = {}

	for a, row in enumerate(members):
		for b, column in enumerate(members):
			weight = co[b, a]
			if weight == 0.0:
				continue
			for coefficient, position in structure.entry(row, column):
				gradient[position] = gradient.get(position, 0.0) + coefficient * weight

	return gradient


def gradient_coefficient(evaluation: MinorEvaluation, structure: MatrixStructure, alpha: Sequence[int]) -> float:
	"""
	Returns :math:`\\mathrm{trace}(\\mathrm{co}_I \\, S_{I,\\alpha})` for a single moment :math:`\\alpha`.

	:param evaluation: The minor, evaluated from ``structure``.
	:param structure:
	:param alpha: The exponent vector of the moment.
	"""

	position = structure.moments.position(alpha)
	return minor_gradient(evaluation, structure).get(position, 0.0)
