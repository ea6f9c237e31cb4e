#!/usr/bin/env python
#
#  polynomial.py
"""
Sparse multivariate polynomials with real coefficients.
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
import math
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

# 3rd party
import numpy

# this package
from popcert.multiindex import MultiIndex, basis, monomial_text

__all__ = [
		"Polynomial",
		"evaluate",
		"degree",
		"half_degree",
		"linear_combine",
		"derivative",
		"gradient",
		"coefficient_vector",
		"from_terms",
		]


class Polynomial:
	"""
	A sparse polynomial in ``n`` variables, stored as a map from exponent vectors to nonzero coefficients.

	Zero coefficients are dropped on construction, so two polynomials are equal
	exactly when their term maps are equal.

	:param n: The number of variables.
	:param terms: Mapping of exponent vectors to coefficients.
	"""

	__slots__ = ("n", "_terms")

	def __init__(self, n: int, terms: Mapping[Sequence[int], float] = MappingProxyType({})):
		if n < 1:
			raise ValueError(f"The number of variables must be at least 1, got {n}")

		self.n: int = int(n)

		cleaned: Dict[MultiIndex, float] = {}
		for alpha, coefficient in terms.items():
			alpha = MultiIndex(alpha)
			if len(alpha) != self.n:
				raise ValueError(f"Exponent vector {tuple(alpha)!r} does not have {self.n} entries")

			value = float(coefficient)
			if not math.isfinite(value):
				raise ValueError(f"Coefficient of {tuple(alpha)!r} is not finite: {value!r}")
			if value != 0.0:
				cleaned[alpha] = value

		self._terms: Mapping[MultiIndex, float] = MappingProxyType(cleaned)

	@classmethod
	def constant(cls, n: int, value: float) -> "Polynomial":
		"""
		Returns the constant polynomial ``value`` in ``n`` variables.
		"""

		return cls(n, {MultiIndex.zero(n): value})

	@property
	def terms(self) -> Mapping[MultiIndex, float]:
		"""
		A read-only view of the nonzero terms.
		"""

		return self._terms

	def coefficient(self, alpha: Sequence[int]) -> float:
		"""
		Returns the coefficient of :math:`x^\\alpha`, which is ``0.0`` for absent terms.
		"""

		return self._terms.get(tuple(alpha), 0.0)  # type: ignore[call-overload]

	def is_zero(self) -> bool:
		return not self._terms

	def sorted_terms(self) -> Iterator[Tuple[MultiIndex, float]]:
		"""
		Iterate over ``(alpha, coefficient)`` pairs, highest degree first.

		Within a degree the terms follow the reverse of the monomial basis order.
		"""

		yield from sorted(self._terms.items(), key=lambda item: (item[0].degree, item[0]), reverse=True)

	def to_text(self, variables: Sequence[str]) -> str:
		"""
		Returns the polynomial written in the problem file grammar.

		Coefficients are written with :func:`repr`, so parsing the result reproduces the same terms.

		:param variables: The variable names, one per variable.
		"""

		if len(variables) != self.n:
			raise ValueError(f"Expected {self.n} variable names, got {len(variables)}")

		if self.is_zero():
			return '0'

		pieces = []
		for alpha, coefficient in self.sorted_terms():
			sign = '-' if coefficient < 0 else '+'
			magnitude = abs(coefficient)
			monomial = monomial_text(alpha, variables)

			if monomial == '1':
				body = repr(magnitude)
			elif magnitude == 1.0:
				body = monomial
			else:
				body = f"{magnitude!r}*{monomial}"

			if pieces:
				pieces.append(f"{sign} {body}")
			elif sign == '-':
				pieces.append(f"-{body}")
			else:
				pieces.append(body)

		return ' '.join(pieces)

	def __eq__(self, other: object) -> bool:
		if isinstance(other, Polynomial):
			return self.n == other.n and dict(self._terms) == dict(other._terms)
		return NotImplemented

	def __hash__(self) -> int:
		return hash((self.n, frozenset(self._terms.items())))

	def __repr__(self) -> str:
		return f"{type(self).__name__}({self.n}, {dict(self.sorted_terms())!r})"

	def __iter__(self) -> Iterator[Tuple[MultiIndex, float]]:
		yield from self._terms.items()


def evaluate(p: Polynomial, x: Sequence[float]) -> float:
	"""
	Evaluate ``p`` at the point ``x``.

	:param p:
	:param x: The point, one coordinate per variable.
	"""

	if len(x) != p.n:
		raise ValueError(f"Point has {len(x)} coordinates but the polynomial has {p.n} variables")

	point = [float(v) for v in x]
	total = 0.0
	for alpha, coefficient in p:
		term = coefficient
		for value, exponent in zip(point, alpha):
			if exponent:
				term *= value**exponent
		total += term

	return total


def degree(p: Polynomial) -> int:
	"""
	Returns the total degree of ``p``.

	:raises ValueError: If ``p`` is the zero polynomial, which has no degree.
	"""

	if p.is_zero():
		raise ValueError("The zero polynomial has no degree")

	return max(alpha.degree for alpha in p.terms)


def half_degree(p: Polynomial) -> int:
	"""
	Returns :math:`\\lceil \\deg(p) / 2 \\rceil`.

	:raises ValueError: If ``p`` is the zero polynomial.
	"""

	return (degree(p) + 1) // 2


def linear_combine(a: float, p: Polynomial, b: float, q: Polynomial) -> Polynomial:
	"""
	Returns :math:`a p + b q`.

	:raises ValueError: If ``p`` and ``q`` have a different number of variables.
	"""

	if p.n != q.n:
		raise ValueError(f"Cannot combine polynomials in {p.n} and {q.n} variables")

	terms: Dict[MultiIndex, float] = {}
	for alpha, coefficient in p:
		terms[alpha] = a * coefficient
	for alpha, coefficient in q:
		terms[alpha] = terms.get(alpha, 0.0) + b * coefficient

	return Polynomial(p.n, terms)


def derivative(p: Polynomial, k: int) -> Polynomial:
	"""
	Returns the partial derivative of ``p`` with respect to the ``k``-th variable (0-based).
	"""

	if not 0 <= k < p.n:
		raise IndexError(f"Variable index {k} out of range for {p.n} variables")

	terms: Dict[MultiIndex, float] = {}
	for alpha, coefficient in p:
		if alpha[k]:
			lowered = list(alpha)
			lowered[k] -= 1
			terms[MultiIndex(lowered)] = coefficient * alpha[k]

	return Polynomial(p.n, terms)


def gradient(p: Polynomial, x: Sequence[float]) -> numpy.ndarray:
	"""
	Returns the gradient of ``p`` at ``x`` as a 1-D array.
	"""

	return numpy.array([evaluate(derivative(p, k), x) for k in range(p.n)], dtype=float)


def coefficient_vector(p: Polynomial, d: int) -> numpy.ndarray:
	"""
	Returns the coefficients of ``p`` indexed by :func:`~popcert.multiindex.basis` ``(p.n, d)``.

	:raises ValueError: If ``p`` has a term of degree above ``d``.
	"""

	monomials = basis(p.n, d)
	vector = numpy.zeros(len(monomials))
	for alpha, coefficient in p:
		vector[monomials.position(alpha)] = coefficient

	return vector


def from_terms(n: int, terms: Iterable[Tuple[Sequence[int], float]]) -> Polynomial:
	"""
	Build a polynomial from ``(alpha, coefficient)`` pairs, summing repeated exponent vectors.
	"""

	collected: Dict[MultiIndex, float] = {}
	for alpha, coefficient in terms:
		key = MultiIndex(alpha)
		collected[key] = collected.get(key, 0.0) + float(coefficient)

	return Polynomial(n, collected)
