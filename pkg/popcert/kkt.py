#!/usr/bin/env python
#
#  kkt.py
"""
Assembly of the linear feasibility system whose solvability certifies a candidate point.

The unknowns are the multipliers of the determinant constraints of the moment relaxation,
plus a free multiplier :math:`\\lambda` for :math:`y_0 = 1`. At the lift :math:`\\hat{y}` of the candidate,
stationarity of the Lagrangian is linear in the multipliers:

.. math::

	f_\\alpha = \\lambda [\\alpha = 0] + \\sum_I \\lambda_{0,I} \\, \\mathrm{trace}(\\mathrm{co}_I(M) B_{I,\\alpha})
		+ \\sum_{i,J} \\lambda_{i,J} \\, \\mathrm{trace}(\\mathrm{co}_J(M_i) C_{i,J,\\alpha})

for every :math:`|\\alpha| \\leq 2d`.
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
import csv
import io
import logging
from typing import TYPE_CHECKING, List, NamedTuple, Optional, Sequence, Tuple

# 3rd party
import numpy
from domdf_python_tools.paths import PathPlus
from domdf_python_tools.typing import PathLike
from domdf_python_tools.words import Plural
from typing_extensions import final

# this package
from popcert.errors import InfeasibleCandidateError, OrderTooSmallError
from popcert.minors import IndexSet, enumerate_index_sets, evaluate_minor, minor_gradient
from popcert.moments import (
		LiftedPoint,
		MatrixStructure,
		eval_structure,
		lift_point,
		localizing_structure,
		minimum_order,
		moment_structure
		)
from popcert.multiindex import MonomialBasis
from popcert.polynomial import coefficient_vector
from popcert.problem_io import PopProblem

if TYPE_CHECKING:
	# this package
	from popcert.certifier import CertifyConfig

__all__ = ["MultiplierId", "KktSystem", "active_multipliers", "assemble", "build_structures", "dump_csv"]

logger = logging.getLogger(__name__)

_multiplier = Plural("multiplier", "multipliers")


class MultiplierId(NamedTuple):
	"""
	Identifies the multiplier of one determinant constraint.
	"""

	#: ``0`` for the moment matrix, ``i`` for the localizing matrix of the ``i``-th constraint (1-based).
	matrix: int

	index_set: IndexSet

	def label(self) -> str:
		"""
		Returns a label such as ``lambda_0{1,2}``.
		"""

		return f"lambda_{self.matrix}{self.index_set.label()}"


@final
class KktSystem:
	"""
	The linear system :math:`A z \\approx b` in the multipliers :math:`z`.

	Column ``0`` of :attr:`matrix` belongs to the free multiplier :math:`\\lambda`;
	the remaining columns belong to :attr:`multipliers`, which must be non-negative.

	:param rows: The moment basis indexing the rows.
	:param multipliers: The retained non-negative multipliers, in column order.
	:param fixed_zero: Multipliers eliminated by complementarity.
	:param matrix:
	:param rhs: The objective coefficients, indexed by ``rows``.
	"""

	__slots__ = ("rows", "multipliers", "fixed_zero", "matrix", "rhs")

	def __init__(
			self,
			rows: MonomialBasis,
			multipliers: Sequence[MultiplierId],
			fixed_zero: Sequence[MultiplierId],
			matrix: numpy.ndarray,
			rhs: numpy.ndarray,
			):
		self.rows: MonomialBasis = rows
		self.multipliers: Tuple[MultiplierId, ...] = tuple(multipliers)
		self.fixed_zero: Tuple[MultiplierId, ...] = tuple(fixed_zero)
		self.matrix: numpy.ndarray = numpy.array(matrix, dtype=float)
		self.rhs: numpy.ndarray = numpy.array(rhs, dtype=float)

		if self.matrix.shape != (len(rows), len(self.multipliers) + 1):
			raise ValueError(
					f"Matrix has shape {self.matrix.shape}, "
					f"expected {(len(rows), len(self.multipliers) + 1)}"
					)
		if self.rhs.shape != (len(rows), ):
			raise ValueError(f"Right-hand side has shape {self.rhs.shape}, expected {(len(rows), )}")

		self.matrix.flags.writeable = False
		self.rhs.flags.writeable = False

	@property
	def shape(self) -> Tuple[int, int]:
		return self.matrix.shape  # type: ignore[return-value]

	@property
	def free_mask(self) -> numpy.ndarray:
		"""
		Boolean mask of the columns whose multiplier is sign-free. Only column ``0`` is.
		"""

		mask = numpy.zeros(self.matrix.shape[1], dtype=bool)
		mask[0] = True
		return mask

	def residual(self, z: Sequence[float]) -> numpy.ndarray:
		"""
		Returns the stationarity residual :math:`b - A z`.
		"""

		return self.rhs - self.matrix @ numpy.asarray(z, dtype=float)

	def column_labels(self) -> List[str]:
		return ["lambda", *(mid.label() for mid in self.multipliers)]

	def scale_rows(self) -> "KktSystem":
		"""
		Returns a copy with every row of :math:`[A \\mid b]` divided by its largest absolute entry in :math:`A`.

		Rows of :math:`A` that are entirely zero are left unscaled.
		"""

		norms = numpy.abs(self.matrix).max(axis=1)
		norms[norms == 0.0] = 1.0
		return KktSystem(
				self.rows,
				self.multipliers,
				self.fixed_zero,
				self.matrix / norms[:, None],
				self.rhs / norms,
				)

	def to_csv(self) -> str:
		"""
		Returns the system as CSV: a header of column labels followed by ``rhs``, then one line per row.
		"""

		buf = io.StringIO()
		writer = csv.writer(buf, lineterminator='\n')
		writer.writerow([*self.column_labels(), "rhs"])
		for row, b in zip(self.matrix, self.rhs):
			writer.writerow([*map(repr, row.tolist()), repr(float(b))])

		return buf.getvalue()

	def __repr__(self) -> str:
		return f"KktSystem(rows={self.shape[0]}, columns={self.shape[1]}, fixed_zero={len(self.fixed_zero)})"


def dump_csv(system: KktSystem, filename: PathLike) -> None:
	"""
	Write ``system`` to ``filename`` as CSV.
	"""

	PathPlus(filename).write_text(system.to_csv())


def build_structures(problem: PopProblem, d: int) -> List[MatrixStructure]:
	"""
	Returns the moment matrix structure followed by one localizing structure per constraint.
	"""

	structures = [moment_structure(problem.n, d)]
	structures.extend(localizing_structure(g, d, i) for i, g in enumerate(problem.constraints))
	return structures


def active_multipliers(
		structures: Sequence[MatrixStructure],
		lifted: LiftedPoint,
		tol_comp: float = 1e-9,
		tol_feas: float = 1e-6,
		max_minor_order: Optional[int] = None,
		) -> Tuple[List[MultiplierId], List[MultiplierId]]:
	"""
	Split the multipliers into those retained and those fixed to zero by complementarity.

	A singleton multiplier is fixed to zero when its diagonal entry exceeds
	``tol_comp * (1 + ‖M‖∞)``. Multipliers of larger index sets are always retained,
	since their minors vanish at a lifted point.

	:param structures: The moment structure, then the localizing structures.
	:param lifted: The lifted candidate.
	:param tol_comp:
	:param tol_feas:
	:param max_minor_order: Cap on the index set size.

	:returns: A ``(retained, fixed_zero)`` tuple, each in column order.

	:raises InfeasibleCandidateError: If a diagonal entry is below ``-tol_feas * (1 + ‖M‖∞)``.
	"""

	retained: List[MultiplierId] = []
	fixed_zero: List[MultiplierId] = []

	for matrix_id, structure in enumerate(structures):
		matrix = eval_structure(structure, lifted)
		scale = 1.0 + float(numpy.abs(matrix).sum(axis=1).max())

		for index_set in enumerate_index_sets(structure.size, max_minor_order):
			mid = MultiplierId(matrix_id, index_set)

			if index_set.is_singleton:
				diagonal = float(matrix[index_set[0], index_set[0]])
				if diagonal < -tol_feas * scale:
					raise InfeasibleCandidateError(structure.constraint, diagonal, index_set.label())
				if diagonal > tol_comp * scale:
					fixed_zero.append(mid)
					continue

			retained.append(mid)

	return retained, fixed_zero


def assemble(
		problem: PopProblem,
		x: Sequence[float],
		order: Optional[int] = None,
		config: Optional["CertifyConfig"] = None,
		) -> KktSystem:
	"""
	Assemble the stationarity system for the candidate ``x``.

	:param problem:
	:param x: The candidate point.
	:param order: The relaxation order. Defaults to ``config.order``, then to the minimum order.
	:param config: Tolerances and the minor order cap.

	:raises OrderTooSmallError: If ``order`` is below the minimum order.
	:raises InfeasibleCandidateError: If ``x`` violates a constraint beyond ``config.tol_feas``.
	"""

	if config is None:
		# this package
		from popcert.certifier import CertifyConfig

		config = CertifyConfig()

	if len(x) != problem.n:
		raise ValueError(f"Candidate has {len(x)} coordinates but the problem has {problem.n} variables")

	d_min = minimum_order(problem.objective, problem.constraints)
	d = order if order is not None else (config.order if config.order is not None else d_min)
	if d < d_min:
		raise OrderTooSmallError(d, d_min)

	lifted = lift_point(x, d)
	structures = build_structures(problem, d)
	logger.debug(
			"Relaxation order %d: %d rows, matrix sizes %s",
			d,
			len(lifted),
			[s.size for s in structures],
			)

	retained, fixed_zero = active_multipliers(
			structures,
			lifted,
			tol_comp=config.tol_comp,
			tol_feas=config.tol_feas,
			max_minor_order=config.max_minor_order,
			)

	matrices = [eval_structure(s, lifted) for s in structures]
	scales = [1.0 + float(numpy.abs(m).sum(axis=1).max()) for m in matrices]

	columns = numpy.zeros((len(lifted), len(retained) + 1))
	columns[0, 0] = 1.0

	for col, mid in enumerate(retained, start=1):
		structure = structures[mid.matrix]
		evaluation = evaluate_minor(matrices[mid.matrix], mid.index_set)

		if not mid.index_set.is_singleton:
			threshold = config.tol_comp * scales[mid.matrix]**len(mid.index_set)
			if abs(evaluation.value) > threshold:
				logger.warning(
						"Minor %s of %s is %r, above the complementarity threshold %r",
						mid.index_set.label(),
						structure.label(),
						evaluation.value,
						threshold,
						)

		for position, value in minor_gradient(evaluation, structure).items():
			columns[position, col] += value

	logger.debug(
			"Retained %d %s, fixed %d to zero",
			len(retained),
			_multiplier(len(retained)),
			len(fixed_zero),
			)

	return KktSystem(
			rows=lifted.moments,
			multipliers=retained,
			fixed_zero=fixed_zero,
			matrix=columns,
			rhs=coefficient_vector(problem.objective, 2 * d),
			)
