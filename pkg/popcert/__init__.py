#!/usr/bin/env python
#
#  __init__.py
"""
Certify global optimality of candidate points of polynomial optimization problems.

A candidate is lifted to the moment vector of a Lasserre relaxation. The determinant
constraints of the relaxation then make the KKT conditions at that lift a linear system
in the multipliers, and a near-zero residual certifies the candidate.

.. code-block:: python

	>>> from popcert import certify, load_builtin
	>>> certify(load_builtin("univariate"), [2.0]).verdict
	'certified'
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

# this package
from popcert.certifier import CertifyConfig, certify, minimum_order
from popcert.errors import InfeasibleCandidateError, OrderTooSmallError, PopcertError, ProblemSyntaxError
from popcert.problem_io import CandidatePoint, CertificateReport, PopProblem, emit_report, load_problem, parse_point, parse_problem
from popcert.problems import load_builtin

__author__: str = "The popcert developers"
__copyright__: str = "2024 The popcert developers"
__license__: str = "MIT License"
__version__: str = "0.1.0"

__all__ = [
		"CandidatePoint",
		"CertificateReport",
		"CertifyConfig",
		"InfeasibleCandidateError",
		"OrderTooSmallError",
		"PopProblem",
		"PopcertError",
		"ProblemSyntaxError",
		"certify",
		"emit_report",
		"load_builtin",
		"load_problem",
		"minimum_order",
		"parse_point",
		"parse_problem",
		]
