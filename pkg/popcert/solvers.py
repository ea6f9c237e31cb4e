#!/usr/bin/env python
#
#  solvers.py
"""
Feasibility solvers for :class:`~popcert.kkt.KktSystem`.

* :func:`solve_l1` minimizes the :math:`\\ell_1` norm of the residual with a dense two-phase simplex method.
* :func:`solve_l2` minimizes the :math:`\\ell_2` norm with a Lawson-Hanson active set method,
  keeping the free multiplier permanently in the passive set.

Neither raises on non-convergence; the outcome carries a status instead.
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
import logging
from typing import Callable, List, NamedTuple, Optional, Sequence

# 3rd party
import numpy
from typing_extensions import Literal

# this package
from popcert.kkt import KktSystem

__all__ = ["Status", "LpSolution", "SolveOutcome", "lp_core", "solve_l1", "solve_l2"]

logger = logging.getLogger(__name__)

Status = Literal["optimal", "iteration-limit", "infeasible", "unbounded", "numerical-failure"]

_PIVOT_TOL = 1e-9
_REFACTOR_EVERY = 50


class LpSolution(NamedTuple):
	"""
	The result of :func:`lp_core`.
	"""

	x: numpy.ndarray
	objective: float
	iterations: int
	status: Status


class SolveOutcome(NamedTuple):
	"""
	The result of :func:`solve_l1` or :func:`solve_l2`.
	"""

	#: The multipliers, in the column order of the system (free multiplier first).
	multipliers: numpy.ndarray

	#: The norm of :attr:`residual`.
	residual_norm: float

	#: Simplex pivots, or active set changes.
	iterations: int

	status: Status

	#: The residual :math:`b - A z`.
	residual: numpy.ndarray


def _pivot(tableau: numpy.ndarray, row: int, col: int) -> None:
	tableau[row] /= tableau[row, col]
	factors = tableau[:, col].copy()
	factors[row] = 0.0
	tableau -= numpy.outer(factors, tableau[row])


def _refactor(tableau: numpy.ndarray, basis: Sequence[int], A: numpy.ndarray, b: numpy.ndarray, c: numpy.ndarray) -> bool:
	"""
	Recompute ``tableau`` from the original data for the current ``basis``.

	Returns :py:obj:`False`, leaving ``tableau`` untouched, if the basis matrix is singular.
	"""

	try:
		solved = numpy.linalg.solve(A[:, list(basis)], numpy.column_stack([A, b]))
	except numpy.linalg.LinAlgError:
		return False

	if not numpy.all(numpy.isfinite(solved)):
		return False

	n = A.shape[1]
	c_basis = c[list(basis)]
	tableau[:-1, :n] = solved[:, :n]
	tableau[:-1, -1] = numpy.maximum(solved[:, -1], 0.0)
	tableau[-1, :n] = c - c_basis @ solved[:, :n]
	tableau[-1, -1] = -float(c_basis @ tableau[:-1, -1])
	return True


def _entering(costs: numpy.ndarray, tol: float, bland: bool) -> int:
	candidates = numpy.flatnonzero(costs < -tol)
	if not len(candidates):
		return -1
	if bland:
		return int(candidates[0])
	# argmin returns the first occurrence, so ties go to the smallest index
	return int(candidates[numpy.argmin(costs[candidates])])


def _leaving(tableau: numpy.ndarray, col: int, basis: Sequence[int]) -> int:
	column = tableau[:-1, col]
	rows = numpy.flatnonzero(column > _PIVOT_TOL * max(1.0, float(numpy.abs(column).max(initial=0.0))))
	if not len(rows):
		return -1

	ratios = tableau[rows, -1] / column[rows]
	best = ratios.min()
	ties = rows[ratios <= best]
	return int(min(ties, key=lambda r: basis[r]))


class _Simplex:
	"""
	Runs simplex iterations on a tableau whose last row holds the reduced costs,
	and whose last column holds the right-hand side.

	The tableau is rebuilt from the original data every :data:`_REFACTOR_EVERY` pivots,
	and before an optimal or unbounded verdict is accepted.
	"""

	def __init__(self, limit: int, tol: float, bland: bool = False):
		self.limit = limit
		self.tol = tol
		self.bland = bland
		self.iterations = 0

	def run(
			self,
			tableau: numpy.ndarray,
			basis: List[int],
			n_columns: int,
			refactor: Callable[[], bool],
			) -> Status:
		rows = tableau.shape[0] - 1
		degenerate = 0
		bland = self.bland
		fresh = False
		since_refactor = 0

		while True:
			if since_refactor >= _REFACTOR_EVERY or not numpy.all(numpy.isfinite(tableau)):
				if refactor():
					fresh = True
					since_refactor = 0
				elif not numpy.all(numpy.isfinite(tableau)):
					return "numerical-failure"

			col = _entering(tableau[-1, :n_columns], self.tol, bland)
			if col == -1:
				if not fresh and refactor():
					fresh = True
					continue
				return "optimal"

			row = _leaving(tableau, col, basis)
			if row == -1:
				if not fresh and refactor():
					fresh = True
					continue
				return "unbounded"

			if self.iterations >= self.limit:
				return "iteration-limit"

			if tableau[row, -1] <= self.tol:
				degenerate += 1
				if not bland and degenerate >= 2 * rows:
					logger.debug("Switching to Bland's rule after %d degenerate pivots", degenerate)
					bland = True
			else:
				degenerate = 0

			_pivot(tableau, row, col)
			basis[row] = col
			self.iterations += 1
			fresh = False
			since_refactor += 1


def lp_core(
		c: Sequence[float],
		A_eq: numpy.ndarray,
		b_eq: Sequence[float],
		free_mask: Optional[Sequence[bool]] = None,
		max_iterations: Optional[int] = None,
		tol: float = 1e-8,
		bland: bool = False,
		) -> LpSolution:
	"""
	Minimize :math:`c^T x` subject to :math:`A x = b`, with :math:`x \\geq 0` except where ``free_mask`` is set.

	Uses a dense two-phase tableau simplex method with Dantzig's rule,
	switching to Bland's rule after :math:`2m` consecutive degenerate pivots.
	Free variables are split into the difference of two non-negative variables,
	and every column is scaled to unit maximum norm before the first pivot.

	:param c: The cost vector.
	:param A_eq: The :math:`m \\times n` constraint matrix.
	:param b_eq: The right-hand side.
	:param free_mask: Marks sign-free variables.
	:param max_iterations: Pivot limit across both phases. Defaults to 50 times the number of variables.
	:param tol: Optimality tolerance on the reduced costs.
	:param bland: Use Bland's rule from the first pivot.
	"""

	A = numpy.array(A_eq, dtype=float, ndmin=2)
	b = numpy.array(b_eq, dtype=float)
	cost = numpy.array(c, dtype=float)
	m, n = A.shape

	if cost.shape != (n, ) or b.shape != (m, ):
		raise ValueError(f"Incompatible shapes: c {cost.shape}, A {A.shape}, b {b.shape}")

	free = numpy.zeros(n, dtype=bool) if free_mask is None else numpy.asarray(free_mask, dtype=bool)
	split = numpy.flatnonzero(free)

	A_std = numpy.hstack([A, -A[:, split]])
	c_std = numpy.concatenate([cost, -cost[split]])
	N = A_std.shape[1]

	column_scale = numpy.abs(A_std).max(axis=0, initial=0.0)
	column_scale[column_scale == 0.0] = 1.0
	A_std /= column_scale
	c_std /= column_scale

	if max_iterations is None:
		max_iterations = 50 * N

	signs = numpy.where(b < 0, -1.0, 1.0)
	A_std *= signs[:, None]
	b = b * signs

	# phase 1: minimize the sum of the artificial variables
	A_phase1 = numpy.hstack([A_std, numpy.eye(m)])
	c_phase1 = numpy.concatenate([numpy.zeros(N), numpy.ones(m)])

	tableau = numpy.zeros((m + 1, N + m + 1))
	tableau[:m, :N + m] = A_phase1
	tableau[:m, -1] = b
	tableau[-1, :N] = -A_std.sum(axis=0)
	tableau[-1, -1] = -b.sum()
	basis = list(range(N, N + m))

	simplex = _Simplex(max_iterations, tol, bland)
	status = simplex.run(tableau, basis, N + m, lambda: _refactor(tableau, basis, A_phase1, b, c_phase1))

	def _solution(status: Status) -> LpSolution:
		x_std = numpy.zeros(N)
		for row, var in enumerate(basis):
			if var < N:
				x_std[var] = tableau[row, -1]
		x_std /= column_scale
		x = x_std[:n].copy()
		x[split] -= x_std[n:]
		return LpSolution(x, float(cost @ x), simplex.iterations, status)

	if status != "optimal":
		logger.warning("Phase 1 of the simplex method stopped: %s", status)
		return _solution(status)

	if -tableau[-1, -1] > tol * (1.0 + numpy.abs(b).sum()):
		return _solution("infeasible")

	# drive artificial variables out of the basis, dropping redundant rows
	keep = []
	redundant = set()
	for row in range(m):
		if basis[row] >= N:
			entries = numpy.abs(tableau[row, :N])
			if entries.max(initial=0.0) <= _PIVOT_TOL:
				redundant.add(basis[row] - N)
				continue
			col = int(numpy.argmax(entries))
			_pivot(tableau, row, col)
			basis[row] = col
		keep.append(row)

	tableau = numpy.vstack([tableau[keep][:, list(range(N)) + [-1]], numpy.zeros((1, N + 1))])
	basis = [basis[row] for row in keep]
	original_rows = [row for row in range(m) if row not in redundant]
	A_phase2, b_phase2 = A_std[original_rows], b[original_rows]

	# phase 2
	tableau[-1, :N] = c_std
	for row, var in enumerate(basis):
		tableau[-1] -= c_std[var] * tableau[row]

	status = simplex.run(tableau, basis, N, lambda: _refactor(tableau, basis, A_phase2, b_phase2, c_std))
	if status != "optimal":
		logger.warning("Phase 2 of the simplex method stopped: %s", status)

	return _solution(status)


def _outcome(system: KktSystem, z: numpy.ndarray, norm: float, iterations: int, status: Status) -> SolveOutcome:
	z = z.copy()
	z[~system.free_mask] = numpy.maximum(z[~system.free_mask], 0.0)
	residual = system.residual(z)
	return SolveOutcome(z, float(numpy.linalg.norm(residual, norm)), iterations, status, residual)


def solve_l1(system: KktSystem, max_iterations: Optional[int] = None) -> SolveOutcome:
	"""
	Find multipliers minimizing :math:`\\lVert b - A z \\rVert_1` over :math:`z_{1:} \\geq 0`.

	The residual is split into :math:`s^+ - s^-` and :math:`\\sum (s^+ + s^-)` is minimized.

	:param system:
	:param max_iterations: Pivot limit. Defaults to 50 times the number of LP variables.
	"""

	G = system.matrix
	rows, columns = G.shape

	A = numpy.hstack([G, numpy.eye(rows), -numpy.eye(rows)])
	c = numpy.concatenate([numpy.zeros(columns), numpy.ones(2 * rows)])
	free = numpy.concatenate([system.free_mask, numpy.zeros(2 * rows, dtype=bool)])

	solution = lp_core(c, A, system.rhs, free, max_iterations)

	# the residual slacks make this LP feasible and bounded below by zero
	if solution.status in {"infeasible", "unbounded"}:
		logger.warning("l1 simplex reported %s; retrying with Bland's rule", solution.status)
		solution = lp_core(c, A, system.rhs, free, max_iterations, bland=True)
		if solution.status in {"infeasible", "unbounded"}:
			solution = solution._replace(status="numerical-failure")

	outcome = _outcome(system, solution.x[:columns], 1, solution.iterations, solution.status)

	logger.debug(
			"l1 solve: %s after %d pivots, residual %r",
			outcome.status,
			outcome.iterations,
			outcome.residual_norm,
			)
	return outcome


def solve_l2(system: KktSystem, max_iterations: Optional[int] = None, tol: float = 1e-8) -> SolveOutcome:
	"""
	Find multipliers minimizing :math:`\\lVert b - A z \\rVert_2` over :math:`z_{1:} \\geq 0`.

	:param system:
	:param max_iterations: Limit on active set changes. Defaults to 10 times the number of columns.
	:param tol: Relative tolerance on the dual variables.
	"""

	free_mask = system.free_mask
	order = numpy.concatenate([numpy.flatnonzero(~free_mask), numpy.flatnonzero(free_mask)])
	A = system.matrix[:, order]
	b = system.rhs
	n = A.shape[1]
	k = int((~free_mask).sum())

	if max_iterations is None:
		max_iterations = 10 * n

	tiny = numpy.finfo(float).eps
	kkt_tol = tol * max(1.0, float(numpy.abs(A).max(initial=0.0))) * max(1.0, float(numpy.abs(b).max(initial=0.0)))

	def least_squares(passive: numpy.ndarray) -> numpy.ndarray:
		solution = numpy.zeros(n)
		if passive.any():
			solution[passive], *_ = numpy.linalg.lstsq(A[:, passive], b, rcond=None)
		return solution

	# "passive" columns are free to move; the rest are held at zero
	passive = numpy.r_[numpy.zeros(k, dtype=bool), numpy.ones(n - k, dtype=bool)]
	x = least_squares(passive)
	resid = b - A @ x
	lsx = float(resid @ resid)
	w = A.T @ resid

	changes = 0
	status: Status = "optimal"

	while (~passive[:k]).any() and (w[:k][~passive[:k]] > kkt_tol).any():
		if changes >= max_iterations:
			status = "iteration-limit"
			break

		wact = w[:k].copy()
		wact[passive[:k]] = -numpy.inf
		passive[int(numpy.argmax(wact))] = True
		changes += 1

		candidate = least_squares(passive)

		while (candidate[:k][passive[:k]] <= 0.0).any():
			if changes >= max_iterations:
				status = "iteration-limit"
				break
			changes += 1

			update = passive[:k] & (candidate[:k] <= 0.0)
			update &= numpy.abs(x[:k] - candidate[:k]) > tiny * numpy.abs(x[:k])
			if update.any():
				idx = numpy.flatnonzero(update)
				step = float(numpy.min(x[idx] / (x[idx] - candidate[idx])))
				x = x + step * (candidate - x)
				passive[:k] &= x[:k] > kkt_tol
			else:
				passive[:k] &= candidate[:k] > 0.0

			x[:k][~passive[:k]] = 0.0
			candidate = least_squares(passive)

		if status != "optimal":
			break

		x = candidate
		resid = b - A @ x
		lsx_new = float(resid @ resid)
		if lsx_new > (1.0 - tol) * lsx:
			# no substantial progress
			lsx = lsx_new
			break

		lsx = lsx_new
		w = A.T @ resid

	if not numpy.all(numpy.isfinite(x)):
		status = "numerical-failure"
		x = numpy.zeros(n)

	if status != "optimal":
		logger.warning("l2 solve stopped: %s after %d active set changes", status, changes)

	z = numpy.empty(n)
	z[order] = x
	outcome = _outcome(system, z, 2, changes, status)

	logger.debug(
			"l2 solve: %s after %d active set changes, residual %r",
			outcome.status,
			outcome.iterations,
			outcome.residual_norm,
			)
	return outcome
