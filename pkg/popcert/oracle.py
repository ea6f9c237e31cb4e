#!/usr/bin/env python
#
#  oracle.py
"""
Brute-force references for checking the certifier on small problems.

None of these scale; they exist to cross-check the fast code paths.
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
import logging
import math
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

# 3rd party
import numpy
from scipy.optimize import minimize  # type: ignore[import-untyped]

# this package
from popcert.certifier import compile_polynomial, refine_candidate
from popcert.errors import NoFeasibleStartError
from popcert.polynomial import evaluate
from popcert.problem_io import PopProblem

__all__ = [
		"Basin",
		"MinimizeOutcome",
		"laplace_det",
		"fd_gradient",
		"lp_vertex_enumeration",
		"infer_box",
		"multistart_minimize",
		]

logger = logging.getLogger(__name__)

#: Basins closer than this are merged.
BASIN_RADIUS = 1e-3

#: Largest constraint violation accepted for a basin.
BASIN_FEASIBILITY = 1e-8

#: Factor applied to the penalty weight after each round.
PENALTY_GROWTH = 4.0

#: Upper limit on the penalty weight.
MAX_PENALTY = 1e12

#: Penalty solutions violating a constraint by more than this are not polished.
POLISH_VIOLATION = 1e-2


class Basin(NamedTuple):
	"""
	A local minimum found by :func:`multistart_minimize`.
	"""

	point: Tuple[float, ...]
	value: float


class MinimizeOutcome(NamedTuple):
	"""
	The result of :func:`multistart_minimize`.
	"""

	best_point: Tuple[float, ...]
	best_value: float

	#: Distinct local minima, sorted by value.
	basins: Tuple[Basin, ...]


def laplace_det(matrix: numpy.ndarray) -> float:
	"""
	Returns the determinant of ``matrix`` by cofactor expansion along the first row.

	:raises ValueError: If the matrix is larger than 8×8.
	"""

	a = numpy.asarray(matrix, dtype=float)
	if a.ndim != 2 or a.shape[0] != a.shape[1]:
		raise ValueError(f"Expected a square matrix, got shape {a.shape}")

	k = a.shape[0]
	if k > 8:
		raise ValueError(f"Cofactor expansion is limited to 8×8 matrices, got {k}×{k}")
	if k == 0:
		return 1.0
	if k == 1:
		return float(a[0, 0])

	total = 0.0
	rest = a[1:]
	for j in range(k):
		if a[0, j] == 0.0:
			continue
		sign = -1.0 if j % 2 else 1.0
		total += sign * a[0, j] * laplace_det(numpy.delete(rest, j, axis=1))

	return total


def fd_gradient(fn: Callable[[numpy.ndarray], float], x: Sequence[float], step: float = 1e-6) -> numpy.ndarray:
	"""
	Returns the central-difference gradient of ``fn`` at ``x``.

	Coordinate ``k`` is perturbed by ``step * (1 + |x[k]|)``.
	"""

	point = numpy.array(x, dtype=float)
	grad = numpy.empty_like(point)

	for k in range(len(point)):
		h = step * (1.0 + abs(point[k]))
		forward = point.copy()
		backward = point.copy()
		forward[k] += h
		backward[k] -= h
		grad[k] = (fn(forward) - fn(backward)) / (2.0 * h)

	return grad


def lp_vertex_enumeration(
		c: Sequence[float],
		A_eq: numpy.ndarray,
		b_eq: Sequence[float],
		) -> Optional[Tuple[float, numpy.ndarray]]:
	"""
	Minimize :math:`c^T x` subject to :math:`A x = b, x \\geq 0` by trying every basis.

	:param c:
	:param A_eq: A constraint matrix with full row rank and at most 6 rows.
	:param b_eq:

	:returns: The optimal ``(objective, x)``, or :py:obj:`None` if no basis is feasible.
	"""

	A = numpy.array(A_eq, dtype=float, ndmin=2)
	b = numpy.asarray(b_eq, dtype=float)
	cost = numpy.asarray(c, dtype=float)
	m, n = A.shape

	if m > 6:
		raise ValueError(f"Vertex enumeration is limited to 6 rows, got {m}")

	best: Optional[Tuple[float, numpy.ndarray]] = None
	for columns in itertools.combinations(range(n), m):
		B = A[:, columns]
		if abs(numpy.linalg.det(B)) < 1e-12:
			continue

		x_basic = numpy.linalg.solve(B, b)
		if numpy.any(x_basic < -1e-9):
			continue

		x = numpy.zeros(n)
		x[list(columns)] = numpy.maximum(x_basic, 0.0)
		value = float(cost @ x)
		if best is None or value < best[0] - 1e-12:
			best = (value, x)

	return best


def infer_box(problem: PopProblem, default: float = 10.0) -> List[Tuple[float, float]]:
	"""
	Returns a sampling box for ``problem``.

	Constraints of the form :math:`c - \\sum_k a_k x_k^2 \\geq 0` with :math:`a_k > 0`
	bound each :math:`|x_k|` by :math:`\\sqrt{c / a_k}`. Other variables get ``[-default, default]``.
	"""

	radius = [math.inf] * problem.n

	for g in problem.constraints:
		constant = g.coefficient([0] * problem.n)
		if constant <= 0:
			continue

		squares = {}
		for alpha, coefficient in g:
			if alpha.degree == 0:
				continue
			if alpha.degree == 2 and max(alpha) == 2 and coefficient < 0:
				squares[alpha.index(2)] = -coefficient
			else:
				break
		else:
			for k, a in squares.items():
				radius[k] = min(radius[k], math.sqrt(constant / a))

	return [(-r, r) if math.isfinite(r) else (-default, default) for r in radius]


def _penalty(problem: PopProblem) -> Callable[[numpy.ndarray, float], Tuple[float, numpy.ndarray]]:
	objective, objective_gradient = compile_polynomial(problem.objective)
	constraints = [compile_polynomial(g) for g in problem.constraints]

	def penalized(x: numpy.ndarray, rho: float) -> Tuple[float, numpy.ndarray]:
		value = objective(x)
		grad = objective_gradient(x)
		for function, jacobian in constraints:
			violation = min(0.0, function(x))
			if violation:
				value += rho * violation**2
				grad = grad + 2.0 * rho * violation * jacobian(x)
		return value, grad

	return penalized


def multistart_minimize(
		problem: PopProblem,
		starts: int = 100,
		seed: int = 42,
		box: Optional[Sequence[Tuple[float, float]]] = None,
		rounds: int = 20,
		) -> MinimizeOutcome:
	"""
	Search for local minima of ``problem`` from uniformly sampled starting points.

	Each start runs a quadratic penalty method over ``rounds`` rounds, with L-BFGS-B inner solves
	inside the box. The weight starts at the norm of the objective gradient and grows by
	:data:`PENALTY_GROWTH` each round, up to :data:`MAX_PENALTY`. Points still violating a constraint
	by more than :data:`POLISH_VIOLATION` are discarded; the rest are polished with
	:func:`~popcert.certifier.refine_candidate` and kept when feasible within :data:`BASIN_FEASIBILITY`.

	If none of the first ``starts`` samples yields a feasible point, sampling continues
	for up to ``100 * starts`` samples.

	:param problem:
	:param starts: The number of samples.
	:param seed: Seed for :func:`numpy.random.default_rng`.
	:param box: Sampling bounds per variable. Defaults to :func:`infer_box`.
	:param rounds: The number of penalty rounds.

	:raises NoFeasibleStartError: If no sample leads to a feasible point.
	"""

	if starts < 1:
		raise ValueError(f"starts must be at least 1, got {starts}")

	bounds = list(infer_box(problem) if box is None else box)
	if len(bounds) != problem.n:
		raise ValueError(f"Expected {problem.n} bounds, got {len(bounds)}")

	lower = numpy.array([lo for lo, _ in bounds], dtype=float)
	upper = numpy.array([hi for _, hi in bounds], dtype=float)

	rng = numpy.random.default_rng(seed)
	penalized = _penalty(problem)
	_, objective_gradient = compile_polynomial(problem.objective)
	basins: List[Basin] = []

	samples = 0
	while samples < starts or (not basins and samples < 100 * starts):
		samples += 1
		x = rng.uniform(lower, upper)

		# the first weight is on the scale of the objective gradient at the start
		rho = max(1.0, float(numpy.linalg.norm(objective_gradient(x))))
		for _ in range(rounds):
			result = minimize(
					penalized,
					x,
					args=(rho, ),
					jac=True,
					method="L-BFGS-B",
					bounds=bounds,
					options={"gtol": 1e-10, "ftol": 1e-10, "maxiter": 500},
					)
			x = numpy.asarray(result.x, dtype=float)
			rho = min(rho * PENALTY_GROWTH, MAX_PENALTY)

		if min(evaluate(g, x) for g in problem.constraints) < -POLISH_VIOLATION:
			continue

		point = refine_candidate(problem, x)
		if min(evaluate(g, point) for g in problem.constraints) < -BASIN_FEASIBILITY:
			continue

		value = evaluate(problem.objective, point)
		for idx, basin in enumerate(basins):
			if math.dist(basin.point, point) <= BASIN_RADIUS:
				if value < basin.value:
					basins[idx] = Basin(point, value)
				break
		else:
			basins.append(Basin(point, value))

	if not basins:
		raise NoFeasibleStartError(f"no feasible point found after {samples} starts")

	logger.debug("Found %d basins from %d starts", len(basins), samples)

	ordered = tuple(sorted(basins, key=lambda basin: (basin.value, basin.point)))
	return MinimizeOutcome(ordered[0].point, ordered[0].value, ordered)
