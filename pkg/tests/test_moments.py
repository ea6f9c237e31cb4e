# 3rd party
import numpy
import pytest
from coincidence.params import count

# this package
from popcert.errors import OrderTooSmallError
from popcert.multiindex import basis
from popcert.polynomial import Polynomial, evaluate
from popcert.moments import (
		LiftedPoint,
		eval_structure,
		lift_point,
		localizing_order,
		localizing_structure,
		minimum_order,
		moment_structure
		)

# 5 - x^2
disc = Polynomial(1, {(2, ): -1.0, (0, ): 5.0})


def _monomial_vector(x, d: int) -> numpy.ndarray:
	return numpy.array([numpy.prod([v**e for v, e in zip(x, alpha)]) for alpha in basis(len(x), d)])


def _random_polynomial(rng: numpy.random.Generator, n: int, max_degree: int) -> Polynomial:
	terms = {}
	for alpha in basis(n, max_degree):
		if rng.random() < 0.6:
			terms[alpha] = float(rng.normal())
	terms[tuple([max_degree] + [0] * (n - 1))] = 1.0
	return Polynomial(n, terms)


def test_lift_point():
	lifted = lift_point([2], 2)
	assert lifted.values.tolist() == [1.0, 2.0, 4.0, 8.0, 16.0]
	assert lifted.order == 2
	assert len(lifted) == 5
	assert lifted[(3, )] == 8.0

	with pytest.raises(ValueError, match="read-only"):
		lifted.values[0] = 2.0


def test_lift_point_bivariate():
	assert lift_point([1, 2], 1).values.tolist() == [1.0, 1.0, 2.0, 1.0, 2.0, 4.0]


@count(10)
def test_lift_point_random(count: int):
	rng = numpy.random.default_rng(count)
	n = int(rng.integers(1, 4))
	x = rng.uniform(-2, 2, n)

	assert lift_point(x, 2).values == pytest.approx(_monomial_vector(x, 4), rel=1e-13)


def test_lifted_point_length():
	with pytest.raises(ValueError, match="Expected 5 moments, got 3"):
		LiftedPoint(2, basis(1, 4), numpy.zeros(3))


def test_moment_structure_univariate():
	structure = moment_structure(1, 2)

	assert structure.size == 3
	assert structure.order == 2
	assert structure.label() == "moment"
	assert repr(structure) == "MatrixStructure('moment', size=3, order=2)"
	assert structure.entry(1, 2) == ((1.0, 3), )
	assert structure.entry(2, 1) == structure.entry(1, 2)

	assert eval_structure(structure, lift_point([2], 2)).tolist() == [
			[1.0, 2.0, 4.0],
			[2.0, 4.0, 8.0],
			[4.0, 8.0, 16.0],
			]


def test_localizing_structure_univariate():
	structure = localizing_structure(disc, 2, 0)

	assert structure.size == 2
	assert structure.label() == "localizing 0"
	assert structure.constraint == 0

	# 5*y0 - y2, 5*y1 - y3, 5*y2 - y4
	assert structure.entry(0, 0) == ((5.0, 0), (-1.0, 2))
	assert structure.entry(0, 1) == ((5.0, 1), (-1.0, 3))
	assert structure.entry(1, 1) == ((5.0, 2), (-1.0, 4))

	assert eval_structure(structure, lift_point([2], 2)).tolist() == [[1.0, 2.0], [2.0, 4.0]]
	assert eval_structure(structure, lift_point([-2], 2)).tolist() == [[1.0, -2.0], [-2.0, 4.0]]


def test_localizing_order_too_small():
	quartic = Polynomial(1, {(4, ): 1.0, (0, ): 1.0})

	with pytest.raises(OrderTooSmallError, match="relaxation order 1 is below the minimum order 2") as e:
		localizing_structure(quartic, 1)

	assert e.value.order == 1
	assert e.value.minimum == 2


def test_moment_structure_invalid():
	with pytest.raises(ValueError, match="at least 1, got 0"):
		moment_structure(2, 0)


def test_eval_structure_order():
	with pytest.raises(ValueError, match="The lifted point has order 1 but the structure needs order 2"):
		eval_structure(moment_structure(1, 2), lift_point([1.0], 1))


def test_eval_structure_higher_order_lift():
	# positions of the smaller basis are valid in the larger one
	assert eval_structure(moment_structure(2, 1), lift_point([1.5, -0.5], 3)) == pytest.approx(
			eval_structure(moment_structure(2, 1), lift_point([1.5, -0.5], 1)),
			)


@count(10)
def test_moment_matrix_rank_one(count: int):
	rng = numpy.random.default_rng(count)
	n = int(rng.integers(1, 4))
	x = rng.uniform(-1.5, 1.5, n)
	v = _monomial_vector(x, 2)

	matrix = eval_structure(moment_structure(n, 2), lift_point(x, 2))
	assert matrix == pytest.approx(numpy.outer(v, v), rel=1e-12, abs=1e-14)


@count(10)
def test_localizing_factorization(count: int):
	rng = numpy.random.default_rng(count)
	n = int(rng.integers(1, 4))
	g = _random_polynomial(rng, n, 2)
	x = rng.uniform(-1.5, 1.5, n)

	for d in (1, 2):
		v = _monomial_vector(x, d - 1)
		matrix = eval_structure(localizing_structure(g, d), lift_point(x, d))
		assert matrix == pytest.approx(evaluate(g, x) * numpy.outer(v, v), rel=1e-10, abs=1e-12)


@count(10)
def test_pattern_consistency(count: int):
	rng = numpy.random.default_rng(count)
	n = int(rng.integers(1, 3))
	g = _random_polynomial(rng, n, 2)

	moments = basis(n, 4)
	lifted = LiftedPoint(2, moments, rng.normal(size=len(moments)))

	for structure in (moment_structure(n, 2), localizing_structure(g, 2)):
		brute = sum(structure.pattern(p) * lifted.values[p] for p in range(len(moments)))
		assert eval_structure(structure, lifted) == pytest.approx(brute, rel=1e-12, abs=1e-12)
		assert (structure.pattern(0) == structure.pattern(0).T).all()


@pytest.mark.parametrize(
		"objective, constraints, expects",
		[
				(Polynomial(1, {(4, ): 0.25}), [disc], 2),
				(Polynomial(2, {(3, 0): 2.0, (0, 1): 1.0}), [Polynomial(2, {(2, 0): -1.0, (0, 0): 1.0})], 2),
				(Polynomial(3, {(1, 1, 0): 1.0}), [Polynomial(3, {(0, 0, 2): 1.0})], 1),
				(Polynomial(1, {(1, ): 1.0}), [Polynomial(1, {(1, ): 1.0})], 1),
				(Polynomial(1, {(1, ): 1.0}), [Polynomial(1, {(5, ): 1.0})], 3),
				],
		)
def test_minimum_order(objective, constraints, expects):
	assert minimum_order(objective, constraints) == expects


def test_localizing_order_zero_polynomial():
	assert localizing_order(Polynomial(1)) == 0
	assert localizing_order(Polynomial.constant(1, 2.0)) == 0
	assert localizing_order(disc) == 1

	structure = localizing_structure(Polynomial(1), 2)
	assert structure.size == 3
	assert eval_structure(structure, lift_point([1.5], 2)).tolist() == [[0.0] * 3] * 3


def test_minimum_order_zero_polynomial():
	assert minimum_order(Polynomial(1), [disc]) == 1
	assert minimum_order(disc, [Polynomial(1)]) == 1
	assert minimum_order(Polynomial(2), [Polynomial(2)]) == 1
