# 3rd party
import pytest

# this package
from popcert.certifier import (
		CertifyConfig,
		certify,
		check_candidate_feasibility,
		compile_polynomial,
		minimum_order,
		refine_candidate
		)
from popcert.errors import InfeasibleCandidateError, OrderTooSmallError
from popcert.polynomial import Polynomial, linear_combine
from popcert.problem_io import CandidatePoint
from popcert.problems import load_builtin

univariate = load_builtin("univariate")
bivariate = load_builtin("bivariate")


def test_certify_univariate_global():
	report = certify(univariate, CandidatePoint((2.0, )))

	assert report.certified
	assert report.verdict == "certified"
	assert report.problem == "univariate"
	assert report.order == 2
	assert report.n0 == 3
	assert report.ni == (2, )
	assert report.multipliers_total == 11
	assert report.multipliers_fixed_zero == 5
	assert report.multipliers_free == 6
	assert report.objective_value == 1.0
	assert report.feasibility_margin == 1.0
	assert report.residual_l1 == pytest.approx(0.0, abs=1e-9)
	assert report.residual_l2 == pytest.approx(0.0, abs=1e-9)
	assert report.status == {"l1": "optimal", "l2": "optimal"}
	assert report.candidate == (2.0, )
	assert report.refined_point is None
	assert list(report.multipliers) == [
			"lambda",
			"lambda_0{1,2}",
			"lambda_0{1,3}",
			"lambda_0{2,3}",
			"lambda_0{1,2,3}",
			"lambda_1{1,2}",
			]
	assert set(report.time_ms) == {"assemble", "solve_l1", "solve_l2"}


def test_certify_univariate_local():
	report = certify(univariate, [-2.0])

	assert not report.certified
	assert report.objective_value == 5.0
	assert report.residual_l1 is not None and report.residual_l2 is not None
	assert 1.5 - 1e-9 <= report.residual_l1 <= 1.546875 + 1e-9
	assert report.residual_l2 >= 1.5 - 1e-9


@pytest.mark.parametrize("x", [2.0, -2.0])
def test_certify_l1_only(x: float):
	report = certify(univariate, [x], CertifyConfig(norm="l1"))

	assert report.residual_l2 is None
	assert report.iterations_l2 is None
	assert report.status["l2"] is None
	assert report.certified is (x == 2.0)


@pytest.mark.parametrize("x", [2.0, -2.0])
def test_certify_l2_only(x: float):
	report = certify(univariate, [x], CertifyConfig(norm="l2"))

	assert report.residual_l1 is None
	assert report.certified is (x == 2.0)


@pytest.mark.parametrize(
		"config",
		[
				pytest.param(CertifyConfig(max_minor_order=2), id="capped"),
				pytest.param(CertifyConfig(scale_rows=True), id="scaled"),
				pytest.param(CertifyConfig(order=3), id="order_3"),
				],
		)
def test_certify_options(config: CertifyConfig):
	assert certify(univariate, [2.0], config).certified
	assert not certify(univariate, [-2.0], config).certified


def test_certify_shift_invariant():
	one = Polynomial.constant(1, 1.0)
	shifted = univariate._replace(objective=linear_combine(1.0, univariate.objective, 100.0, one))

	for x in (2.0, -2.0):
		original = certify(univariate, [x])
		moved = certify(shifted, [x])

		assert moved.verdict == original.verdict
		assert moved.residual_l2 == pytest.approx(original.residual_l2, abs=1e-9)
		assert moved.objective_value == pytest.approx(original.objective_value + 100.0)


def test_certify_bivariate_local():
	report = certify(bivariate, [-0.036, 0.254])

	assert not report.certified
	assert report.order == 2
	assert report.n0 == 6
	assert report.ni == (3, )
	assert report.multipliers_total == 71
	assert report.objective_value == pytest.approx(-0.00107, abs=1e-5)


def test_certify_bivariate_global():
	report = certify(bivariate, [-0.992, 0.125], CertifyConfig(refine=True))

	assert report.certified
	assert report.refined_point is not None
	assert report.refined_point == pytest.approx((-0.992, 0.125), abs=5e-3)
	assert report.objective_value == pytest.approx(-0.9837, abs=1e-3)


def test_certify_bivariate_global_needs_refine():
	# the rounded point is feasible but not stationary
	report = certify(bivariate, [-0.992, 0.125])

	assert not report.certified
	assert report.refined_point is None
	assert report.feasibility_margin > 0


def test_certify_bivariate_ordering():
	config = CertifyConfig(refine=True)
	global_report = certify(bivariate, [-0.992, 0.125], config)
	local_report = certify(bivariate, [-0.036, 0.254], config)

	assert global_report.residual_l2 is not None and local_report.residual_l2 is not None
	assert global_report.residual_l2 * 100 < local_report.residual_l2


def test_certify_trivariate_ordering():
	wb2 = load_builtin("wb2")
	config = CertifyConfig(order=2, refine=True, tol_feas=2e-3, max_minor_order=2)

	global_report = certify(wb2, [0.952, 0.570, -0.882], config)
	local_report = certify(wb2, [0.950, 0.413, -0.884], config)

	assert global_report.n0 == 10
	assert global_report.ni == (4, ) * 12
	assert global_report.objective_value == pytest.approx(877.78, abs=0.5)
	assert local_report.objective_value == pytest.approx(905.73, abs=0.5)

	assert global_report.residual_l2 is not None and local_report.residual_l2 is not None
	assert global_report.residual_l2 < local_report.residual_l2


def test_certify_infeasible():
	with pytest.raises(InfeasibleCandidateError) as e:
		certify(univariate, [3.0])

	assert e.value.constraint_index == 0
	assert e.value.value == -4.0


def test_certify_infeasible_not_refined():
	# refinement would pull the point back to the boundary
	with pytest.raises(InfeasibleCandidateError, match="constraint 1 evaluates to -4.0") as e:
		certify(univariate, [3.0], CertifyConfig(refine=True))

	assert e.value.constraint_index == 0
	assert e.value.value == -4.0


def test_certify_order_too_small():
	with pytest.raises(OrderTooSmallError):
		certify(univariate, [2.0], CertifyConfig(order=1))


def test_certify_wrong_length():
	with pytest.raises(ValueError, match="Candidate has 2 coordinates but the problem has 1 variables"):
		certify(univariate, [2.0, 0.0])


@pytest.mark.parametrize(
		"config, message",
		[
				(CertifyConfig(tol_cert=0.0), "tol_cert must be positive, got 0.0"),
				(CertifyConfig(tol_feas=-1.0), "tol_feas must be positive, got -1.0"),
				(CertifyConfig(tol_comp=0.0), "tol_comp must be positive, got 0.0"),
				(CertifyConfig(order=0), "order must be at least 1, got 0"),
				(CertifyConfig(max_minor_order=0), "max_minor_order must be at least 1, got 0"),
				(CertifyConfig(norm="l3"), "Unknown norm 'l3'"),  # type: ignore[arg-type]
				],
		)
def test_config_validate(config: CertifyConfig, message: str):
	with pytest.raises(ValueError, match=message):
		config.validate()

	with pytest.raises(ValueError, match=message):
		certify(univariate, [2.0], config)


def test_config_defaults():
	config = CertifyConfig()
	assert config.validate() is config
	assert config.norm == "both"
	assert config.tol_feas == 1e-6
	assert config.tol_comp == 1e-9
	assert config.tol_cert == 1e-4
	assert not config.refine


@pytest.mark.parametrize("name, expects", [("univariate", 2), ("bivariate", 2), ("wb2", 1)])
def test_minimum_order(name: str, expects: int):
	assert minimum_order(load_builtin(name)) == expects


def test_check_candidate_feasibility():
	assert check_candidate_feasibility(univariate, [2.0]) == 1.0
	assert check_candidate_feasibility(univariate, [5**0.5], 1e-6) == pytest.approx(0.0, abs=1e-12)
	assert check_candidate_feasibility(bivariate, [0.0, 0.0]) == 1.0

	with pytest.raises(InfeasibleCandidateError, match="constraint 1 evaluates to"):
		check_candidate_feasibility(bivariate, [1.0, 0.1])


def test_compile_polynomial():
	function, jacobian = compile_polynomial(bivariate.objective)
	assert function([0.0, 0.0]) == 0.0625
	assert jacobian([1.0, 2.0]).tolist() == [8.5, 3.75]


def test_refine_candidate():
	assert refine_candidate(univariate, [1.99]) == pytest.approx((2.0, ), abs=1e-5)
	assert refine_candidate(univariate, [-1.99]) == pytest.approx((-2.0, ), abs=1e-5)

	refined = refine_candidate(bivariate, [-0.992, 0.125])
	assert refined[0]**2 + refined[1]**2 == pytest.approx(1.0, abs=1e-8)


def test_refine_candidate_equalities():
	wb2 = load_builtin("wb2")
	refined = refine_candidate(wb2, [0.952, 0.570, -0.882])

	# both halves of each power balance equation hold
	assert check_candidate_feasibility(wb2, refined, 1e-8) >= -1e-8
