# 3rd party
import numpy
import pytest
from coincidence.params import count
from scipy.special import comb  # type: ignore[import-untyped]

# this package
from popcert.minors import (
		IndexSet,
		comatrix,
		determinant,
		enumerate_index_sets,
		evaluate_minor,
		gradient_coefficient,
		minor_gradient,
		principal_minor
		)
from popcert.moments import LiftedPoint, eval_structure, lift_point, localizing_structure, moment_structure
from popcert.multiindex import basis
from popcert.oracle import fd_gradient
from popcert.polynomial import Polynomial


def test_enumerate_index_sets():
	assert enumerate_index_sets(3) == [(0, ), (1, ), (2, ), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
	assert enumerate_index_sets(3, 1) == [(0, ), (1, ), (2, )]
	assert enumerate_index_sets(2, 5) == enumerate_index_sets(2)
	assert all(isinstance(s, IndexSet) for s in enumerate_index_sets(4))


@pytest.mark.parametrize("size", [1, 2, 3, 4, 6, 10])
@pytest.mark.parametrize("max_order", [None, 1, 2, 3])
def test_enumerate_index_sets_count(size: int, max_order):
	sets = enumerate_index_sets(size, max_order)
	cap = size if max_order is None else min(size, max_order)

	assert len(sets) == sum(comb(size, k, exact=True) for k in range(1, cap + 1))
	assert len(set(sets)) == len(sets)
	assert [len(s) for s in sets] == sorted(len(s) for s in sets)


@pytest.mark.parametrize(
		"size, max_order, message",
		[
				(0, None, "Matrix size must be at least 1, got 0"),
				(3, 0, "max_order must be at least 1, got 0"),
				],
		)
def test_enumerate_index_sets_invalid(size, max_order, message):
	with pytest.raises(ValueError, match=message):
		enumerate_index_sets(size, max_order)


def test_index_set():
	index_set = IndexSet([0, 2])
	assert index_set.label() == "{1,3}"
	assert not index_set.is_singleton
	assert IndexSet((4, )).is_singleton
	assert repr(index_set) == "IndexSet((0, 2))"

	with pytest.raises(ValueError, match="must not be empty"):
		IndexSet(())
	with pytest.raises(ValueError, match="strictly increasing"):
		IndexSet((1, 1))
	with pytest.raises(ValueError, match="strictly increasing"):
		IndexSet((2, 0))
	with pytest.raises(ValueError, match="non-negative"):
		IndexSet((-1, 0))


@count(6, 1)
def test_determinant(count: int):
	rng = numpy.random.default_rng(count)
	matrix = rng.normal(size=(count, count))
	assert determinant(matrix) == pytest.approx(numpy.linalg.det(matrix), rel=1e-10, abs=1e-12)


def test_determinant_small():
	assert determinant(numpy.zeros((0, 0))) == 1.0
	assert determinant([[3.0]]) == 3.0
	assert determinant([[1, 2], [3, 4]]) == -2.0
	assert determinant([[2, 0, 0], [0, 3, 0], [0, 0, 4]]) == 24.0

	with pytest.raises(ValueError, match=r"Expected a square matrix, got shape \(2, 3\)"):
		determinant(numpy.zeros((2, 3)))


def test_principal_minor():
	matrix = numpy.array([[1.0, 2.0, 4.0], [2.0, 5.0, 8.0], [4.0, 8.0, 17.0]])
	assert principal_minor(matrix, (0, 1)) == 1.0
	assert principal_minor(matrix, (0, 2)) == 1.0
	assert principal_minor(matrix, (1, )) == 5.0


def test_comatrix_small():
	assert comatrix([[7.0]]).tolist() == [[1.0]]
	assert comatrix([[1.0, 2.0], [3.0, 4.0]]).tolist() == [[4.0, -3.0], [-2.0, 1.0]]

	with pytest.raises(ValueError, match="nonempty square matrix"):
		comatrix(numpy.zeros((0, 0)))


@count(6, 1)
def test_adjugate_identity(count: int):
	rng = numpy.random.default_rng(count)
	matrix = rng.normal(size=(count, count))

	adjugate = comatrix(matrix).T
	assert adjugate @ matrix == pytest.approx(determinant(matrix) * numpy.eye(count), abs=1e-10)


def test_comatrix_rank_one():
	# every 2x2 minor of a rank one matrix vanishes
	v = numpy.array([1.0, -2.0, 4.0])
	assert comatrix(numpy.outer(v, v)).tolist() == [[0.0] * 3] * 3


@count(200)
def test_comatrix_is_determinant_gradient(count: int):
	rng = numpy.random.default_rng(count)
	size = int(rng.integers(2, 6))
	matrix = rng.uniform(-1, 1, (size, size))

	def det(entries: numpy.ndarray) -> float:
		return determinant(entries.reshape(size, size))

	# the determinant is affine in each entry
	numeric = fd_gradient(det, matrix.ravel()).reshape(size, size)
	assert comatrix(matrix) == pytest.approx(numeric, rel=1e-6, abs=1e-6)


@count(20)
def test_lifted_minors_vanish(count: int):
	rng = numpy.random.default_rng(count)
	n = int(rng.integers(1, 4))
	d = int(rng.integers(1, 3))
	matrix = eval_structure(moment_structure(n, d), lift_point(rng.uniform(-1.5, 1.5, n), d))
	scale = 1.0 + numpy.abs(matrix).sum(axis=1).max()

	for index_set in enumerate_index_sets(len(matrix)):
		if not index_set.is_singleton:
			assert abs(principal_minor(matrix, index_set)) <= 1e-10 * scale**len(index_set)


def test_evaluate_minor():
	matrix = eval_structure(moment_structure(1, 2), lift_point([2], 2))
	evaluation = evaluate_minor(matrix, IndexSet((0, 1)))

	assert evaluation.index_set == (0, 1)
	assert evaluation.value == 0.0
	assert evaluation.comatrix.tolist() == [[4.0, -2.0], [-2.0, 1.0]]

	with pytest.raises(ValueError, match=r"Index set \{1,4\} is out of range for a 3×3 matrix"):
		evaluate_minor(matrix, IndexSet((0, 3)))


@pytest.mark.parametrize(
		"index_set, alpha, expects",
		[
				((0, 1), (0, ), 4.0),
				((0, 1), (1, ), -4.0),
				((0, 1), (2, ), 1.0),
				((0, 1), (3, ), 0.0),
				((0, 2), (2, ), -8.0),
				((1, 2), (3, ), -16.0),
				((1, 2), (4, ), 4.0),
				((0, 1, 2), (2, ), 0.0),
				],
		)
def test_gradient_coefficient(index_set, alpha, expects):
	structure = moment_structure(1, 2)
	evaluation = evaluate_minor(eval_structure(structure, lift_point([2], 2)), IndexSet(index_set))
	assert gradient_coefficient(evaluation, structure, alpha) == expects


def test_localizing_gradient():
	disc = Polynomial(1, {(2, ): -1.0, (0, ): 5.0})
	structure = localizing_structure(disc, 2, 0)
	evaluation = evaluate_minor(eval_structure(structure, lift_point([2], 2)), IndexSet((0, 1)))

	gradient = minor_gradient(evaluation, structure)
	assert [gradient.get(p, 0.0) for p in range(5)] == [20.0, -20.0, 1.0, 4.0, -1.0]


def _check_gradient(structure, lifted: LiftedPoint, index_set: IndexSet) -> None:

	def minor(y: numpy.ndarray) -> float:
		point = LiftedPoint(lifted.order, lifted.moments, y)
		return principal_minor(eval_structure(structure, point), index_set)

	evaluation = evaluate_minor(eval_structure(structure, lifted), index_set)
	analytic = numpy.zeros(len(lifted))
	for position, value in minor_gradient(evaluation, structure).items():
		analytic[position] = value

	numeric = fd_gradient(minor, lifted.values)
	assert analytic == pytest.approx(numeric, rel=1e-5, abs=1e-5)


@count(8)
def test_moment_minor_gradient(count: int):
	rng = numpy.random.default_rng(count)
	n = int(rng.integers(1, 3))
	moments = basis(n, 4)
	lifted = LiftedPoint(2, moments, rng.uniform(-1, 1, len(moments)))
	structure = moment_structure(n, 2)

	for index_set in enumerate_index_sets(structure.size, 3):
		_check_gradient(structure, lifted, index_set)


@count(8)
def test_localizing_minor_gradient(count: int):
	rng = numpy.random.default_rng(count)
	moments = basis(2, 4)
	lifted = LiftedPoint(2, moments, rng.uniform(-1, 1, len(moments)))
	g = Polynomial(2, {alpha: float(rng.normal()) for alpha in basis(2, 2)})
	structure = localizing_structure(g, 2)

	for index_set in enumerate_index_sets(structure.size):
		_check_gradient(structure, lifted, index_set)
