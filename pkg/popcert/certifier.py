#!/usr/bin/env python
#
#  certifier.py
"""
Certify that a candidate point is a global minimizer of a polynomial optimization problem.
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
import time
import warnings
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

# 3rd party
import numpy
from scipy.optimize import BFGS, minimize  # type: ignore[import-untyped]
from typing_extensions import Literal

# this package
from popcert import moments
from popcert.errors import InfeasibleCandidateError, OrderTooSmallError
from popcert.kkt import assemble
from popcert.multiindex import basis_size
from popcert.polynomial import Polynomial, coefficient_vector, derivative, evaluate
from popcert.problem_io import CandidatePoint, CertificateReport, PopProblem
from popcert.solvers import SolveOutcome, solve_l1, solve_l2

__all__ = [
		"CertifyConfig",
		"certify",
		"check_candidate_feasibility",
		"minimum_order",
		"refine_candidate",
		"compile_polynomial",
		]

logger = logging.getLogger(__name__)


class CertifyConfig(NamedTuple):
	"""
	Options for :func:`certify`.
	"""

	#: The relaxation order. Defaults to the minimum order of the problem.
	order: Optional[int] = None

	#: Which residual norms to minimize.
	norm: Literal["l1", "l2", "both"] = "both"

	#: Largest constraint violation accepted for the candidate.
	tol_feas: float = 1e-6

	#: Relative threshold above which a diagonal entry fixes its multiplier to zero.
	tol_comp: float = 1e-9

	#: Largest normalized residual :math:`\lVert r \rVert / (1 + \lVert f \rVert_2)` that certifies the candidate.
	tol_cert: float = 1e-4

	#: Cap on the size of the index sets of the determinant constraints.
	max_minor_order: Optional[int] = None

	#: Equilibrate the rows of the system before solving.
	scale_rows: bool = False

	#: Polish the candidate with SLSQP before certifying it.
	refine: bool = False

	def validate(self) -> "CertifyConfig":
		"""
		Check the options, returning the config unchanged.

		:raises ValueError: If a tolerance is not positive, the order is below ``1``,
			the minor order cap is below ``1`` or the norm is unknown.
		"""

		for name in ("tol_feas", "tol_comp", "tol_cert"):
			value = getattr(self, name)
			if not value > 0:
				raise ValueError(f"{name} must be positive, got {value!r}")

		if self.order is not None and self.order < 1:
			raise ValueError(f"order must be at least 1, got {self.order!r}")

		if self.max_minor_order is not None and self.max_minor_order < 1:
			raise ValueError(f"max_minor_order must be at least 1, got {self.max_minor_order!r}")

		if self.norm not in {"l1", "l2", "both"}:
			raise ValueError(f"Unknown norm {self.norm!r}")

		return self


def minimum_order(problem: PopProblem) -> int:
	"""
	Returns the minimum relaxation order :math:`d^{\\min}` of ``problem``.
	"""

	return moments.minimum_order(problem.objective, problem.constraints)


def compile_polynomial(p: Polynomial) -> Tuple[Callable[[Sequence[float]], float], Callable[[Sequence[float]], numpy.ndarray]]:
	"""
	Returns a ``(function, gradient)`` pair for ``p``, with the partial derivatives computed once.
	"""

	partials = [derivative(p, k) for k in range(p.n)]

	def function(x: Sequence[float]) -> float:
		return evaluate(p, x)

	def jacobian(x: Sequence[float]) -> numpy.ndarray:
		return numpy.array([evaluate(q, x) for q in partials])

	return function, jacobian


def check_candidate_feasibility(problem: PopProblem, x: Sequence[float], tol_feas: float = 1e-6) -> float:
	"""
	Returns the feasibility margin :math:`\\min_i g_i(x)` of ``x``.

	:raises InfeasibleCandidateError: If the margin is below ``-tol_feas``.
	"""

	if len(x) != problem.n:
		raise ValueError(f"Candidate has {len(x)} coordinates but the problem has {problem.n} variables")

	values = [evaluate(g, x) for g in problem.constraints]
	worst = int(numpy.argmin(values))
	margin = values[worst]

	if margin < -tol_feas:
		raise InfeasibleCandidateError(worst, margin)

	return margin


def _margin(problem: PopProblem, x: Sequence[float]) -> float:
	return min(evaluate(g, x) for g in problem.constraints)


def refine_candidate(problem: PopProblem, x: Sequence[float], max_iterations: int = 200) -> Tuple[float, ...]:
	"""
	Polish ``x`` with SLSQP on the original problem, falling back to ``trust-constr`` when SLSQP fails.

	The two halves of each equality constraint are merged back into one equality.
	If neither method keeps the point at least as feasible, ``x`` is returned unchanged.

	:param problem:
	:param x: The starting point.
	:param max_iterations: Iteration limit for each method.
	"""

	constraints: List[Dict[str, object]] = []
	for g, origin in zip(problem.constraints, problem.provenance):
		if origin.kind == "equality":
			if origin.side == "upper":
				continue
			kind = "eq"
		else:
			kind = "ineq"

		function, jacobian = compile_polynomial(g)
		constraints.append({"type": kind, "fun": function, "jac": jacobian})

	objective, gradient = compile_polynomial(problem.objective)
	start = numpy.asarray(x, dtype=float)
	floor = min(_margin(problem, start), 0.0) - 1e-9

	best = start
	polishers: List[Tuple[str, Dict[str, object]]] = [
			("SLSQP", {"ftol": 1e-12, "maxiter": max_iterations}),
			("trust-constr", {"gtol": 1e-10, "xtol": 1e-12, "maxiter": max_iterations}),
			]

	for method, options in polishers:
		with warnings.catch_warnings():
			# trust-constr warns when its quasi-Newton update stalls
			warnings.simplefilter("ignore", UserWarning)
			result = minimize(
					objective,
					start,
					jac=gradient,
					hess=BFGS() if method == "trust-constr" else None,
					method=method,
					constraints=constraints,
					options=options,
					)

		polished = numpy.asarray(result.x, dtype=float)
		if not numpy.all(numpy.isfinite(polished)):
			logger.warning("%s refinement failed: %s", method, result.message)
			continue

		margin = _margin(problem, polished)
		if margin < floor:
			logger.warning("%s refinement did not keep the candidate feasible: %s", method, result.message)
			continue

		if result.success:
			logger.debug("Refined candidate %s to %s with %s", start.tolist(), polished.tolist(), method)
			return tuple(polished.tolist())

		logger.debug("%s refinement stopped early: %s", method, result.message)
		if best is start or margin > _margin(problem, best):
			best = polished

	return tuple(best.tolist())


def _elapsed_ms(start: float) -> float:
	return round((time.perf_counter() - start) * 1000.0, 3)


def certify(
		problem: PopProblem,
		point: Union[CandidatePoint, Sequence[float]],
		config: CertifyConfig = CertifyConfig(),
		) -> CertificateReport:
	"""
	Decide whether ``point`` is certified as a global minimizer of ``problem``.

	The candidate is certified when the multipliers found make the normalized residual
	:math:`\\lVert r \\rVert / (1 + \\lVert f \\rVert_2)` at most ``config.tol_cert``.
	The :math:`\\ell_2` residual decides when it was computed, the :math:`\\ell_1` residual otherwise.
	A not-certified verdict only means that this relaxation order did not certify the point.

	:param problem:
	:param point:
	:param config:

	:raises InfeasibleCandidateError: If the candidate violates a constraint by more than ``config.tol_feas``.
	:raises OrderTooSmallError: If ``config.order`` is below the minimum order.
	"""

	config.validate()

	candidate = tuple(float(v) for v in (point.values if isinstance(point, CandidatePoint) else point))
	if len(candidate) != problem.n:
		raise ValueError(f"Candidate has {len(candidate)} coordinates but the problem has {problem.n} variables")

	d_min = minimum_order(problem)
	d = d_min if config.order is None else config.order
	if d < d_min:
		raise OrderTooSmallError(d, d_min)

	# refinement only polishes a candidate that is already feasible
	x = candidate
	margin = check_candidate_feasibility(problem, x, config.tol_feas)

	refined: Optional[Tuple[float, ...]] = None
	if config.refine:
		x = refined = refine_candidate(problem, candidate)
		margin = check_candidate_feasibility(problem, x, config.tol_feas)

	timings = {"assemble": 0.0, "solve_l1": 0.0, "solve_l2": 0.0}

	start = time.perf_counter()
	system = assemble(problem, x, d, config)
	if config.scale_rows:
		system = system.scale_rows()
	timings["assemble"] = _elapsed_ms(start)

	l1: Optional[SolveOutcome] = None
	l2: Optional[SolveOutcome] = None

	if config.norm in {"l1", "both"}:
		start = time.perf_counter()
		l1 = solve_l1(system)
		timings["solve_l1"] = _elapsed_ms(start)

	if config.norm in {"l2", "both"}:
		start = time.perf_counter()
		l2 = solve_l2(system)
		timings["solve_l2"] = _elapsed_ms(start)

	deciding = l2 if l2 is not None else l1
	assert deciding is not None

	normalizer = 1.0 + float(numpy.linalg.norm(coefficient_vector(problem.objective, 2 * d)))
	normalized = deciding.residual_norm / normalizer
	certified = deciding.status != "numerical-failure" and normalized <= config.tol_cert

	if deciding.status != "optimal":
		logger.warning("The deciding solver finished with status %r", deciding.status)

	logger.info(
			"%s: %s (normalized residual %.3e, tolerance %.1e)",
			problem.name,
			"certified" if certified else "not certified",
			normalized,
			config.tol_cert,
			)

	labels = system.column_labels()
	total = len(system.multipliers) + len(system.fixed_zero) + 1

	return CertificateReport(
			problem=problem.name,
			order=d,
			n0=basis_size(problem.n, d),
			ni=tuple(basis_size(problem.n, d - moments.localizing_order(g)) for g in problem.constraints),
			multipliers_total=total,
			multipliers_fixed_zero=len(system.fixed_zero),
			residual_l1=None if l1 is None else l1.residual_norm,
			residual_l2=None if l2 is None else l2.residual_norm,
			verdict="certified" if certified else "not-certified",
			objective_value=evaluate(problem.objective, x),
			feasibility_margin=margin,
			iterations_l1=None if l1 is None else l1.iterations,
			iterations_l2=None if l2 is None else l2.iterations,
			time_ms=timings,
			status={"l1": None if l1 is None else l1.status, "l2": None if l2 is None else l2.status},
			variables=problem.variables,
			candidate=candidate,
			refined_point=refined,
			multipliers=dict(zip(labels, deciding.multipliers.tolist())),
			)
