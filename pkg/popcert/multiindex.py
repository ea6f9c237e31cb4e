#!/usr/bin/env python
#
#  multiindex.py
"""
Exponent vectors and graded-lexicographic monomial bases.
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
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple, Union, overload

# 3rd party
from scipy.special import comb  # type: ignore[import-untyped]
from typing_extensions import final

__all__ = ["MultiIndex", "MonomialBasis", "add", "sub_checked", "basis", "basis_size", "monomial_text"]


class MultiIndex(Tuple[int, ...]):
	"""
	An exponent vector :math:`\\alpha \\in \\mathbb{N}^n`.

	Compares and hashes like the equivalent :class:`tuple`, so plain tuples may be used to look up entries.

	:param exponents: The non-negative exponents, one per variable.
	"""

	__slots__ = ()

	def __new__(cls, exponents: Iterable[int]) -> "MultiIndex":  # noqa: D102
		values = tuple(int(e) for e in exponents)

		for e in values:
			if e < 0:
				raise ValueError(f"Exponents must be non-negative, got {values!r}")

		return super().__new__(cls, values)  # type: ignore[arg-type]

	@property
	def degree(self) -> int:
		"""
		The total degree :math:`|\\alpha|`.
		"""

		return sum(self)

	@property
	def n(self) -> int:
		"""
		The number of variables.
		"""

		return len(self)

	@classmethod
	def zero(cls, n: int) -> "MultiIndex":
		"""
		Returns the zero exponent vector in ``n`` variables.
		"""

		return cls((0, ) * n)

	@classmethod
	def unit(cls, n: int, k: int) -> "MultiIndex":
		"""
		Returns the exponent vector of the ``k``-th variable (0-based).
		"""

		if not 0 <= k < n:
			raise IndexError(f"Variable index {k} out of range for {n} variables")

		return cls(int(i == k) for i in range(n))

	def __repr__(self) -> str:
		return f"MultiIndex({tuple(self)!r})"

	def __add__(self, other: object) -> "MultiIndex":  # type: ignore[override]
		if isinstance(other, tuple):
			return add(self, other)
		return NotImplemented


def add(alpha: Sequence[int], beta: Sequence[int]) -> MultiIndex:
	"""
	Returns the componentwise sum of two exponent vectors.
	"""

	if len(alpha) != len(beta):
		raise ValueError(f"Exponent vectors have different lengths ({len(alpha)} and {len(beta)})")

	return MultiIndex(a + b for a, b in zip(alpha, beta))


def sub_checked(alpha: Sequence[int], beta: Sequence[int]) -> Optional[MultiIndex]:
	"""
	Returns ``alpha - beta``, or :py:obj:`None` if any component would be negative.
	"""

	if len(alpha) != len(beta):
		raise ValueError(f"Exponent vectors have different lengths ({len(alpha)} and {len(beta)})")

	diff = tuple(a - b for a, b in zip(alpha, beta))
	if any(d < 0 for d in diff):
		return None

	return MultiIndex(diff)


def basis_size(n: int, d: int) -> int:
	"""
	Returns the number of monomials of degree at most ``d`` in ``n`` variables, :math:`\\binom{n+d}{n}`.
	"""

	return int(comb(n + d, n, exact=True))


@final
class MonomialBasis(Sequence[MultiIndex]):
	"""
	The monomials of degree at most ``degree`` in ``n`` variables, in graded-lexicographic order.

	Monomials are sorted by total degree, and within a degree by descending exponent tuple,
	so the zero vector comes first and :math:`x_1` outranks :math:`x_2`.

	Use :func:`~.basis` rather than instantiating this class directly.

	:param n:
	:param degree:
	"""

	__slots__ = ("n", "degree", "_entries", "_positions")

	def __init__(self, n: int, degree: int):
		if n < 1:
			raise ValueError(f"The number of variables must be at least 1, got {n}")
		if degree < 0:
			raise ValueError(f"The degree must be non-negative, got {degree}")

		self.n: int = n
		self.degree: int = degree

		entries = []
		for k in range(degree + 1):
			same_degree = set()
			for combination in itertools.combinations_with_replacement(range(n), k):
				exponents = [0] * n
				for var in combination:
					exponents[var] += 1
				same_degree.add(MultiIndex(exponents))
			entries.extend(sorted(same_degree, reverse=True))

		self._entries: Tuple[MultiIndex, ...] = tuple(entries)
		self._positions: Dict[Tuple[int, ...], int] = {alpha: i for i, alpha in enumerate(self._entries)}

	def __len__(self) -> int:
		return len(self._entries)

	@overload
	def __getitem__(self, index: int) -> MultiIndex: ...

	@overload
	def __getitem__(self, index: slice) -> Tuple[MultiIndex, ...]: ...

	def __getitem__(self, index: Union[int, slice]) -> Union[MultiIndex, Tuple[MultiIndex, ...]]:
		return self._entries[index]

	def __iter__(self) -> Iterator[MultiIndex]:
		yield from self._entries

	def __contains__(self, alpha: object) -> bool:
		return alpha in self._positions

	def __repr__(self) -> str:
		return f"{type(self).__name__}(n={self.n}, degree={self.degree})"

	def position(self, alpha: Sequence[int]) -> int:
		"""
		Returns the 0-based position of ``alpha`` in the basis.

		:raises ValueError: If ``alpha`` is not in the basis.
		"""

		try:
			return self._positions[tuple(alpha)]
		except KeyError:
			raise ValueError(f"{tuple(alpha)!r} is not in the degree {self.degree} basis") from None


@lru_cache(maxsize=None)
def basis(n: int, d: int) -> MonomialBasis:
	"""
	Returns the graded-lexicographic monomial basis of degree at most ``d`` in ``n`` variables.

	The result is cached.

	.. code-block:: python

		>>> list(basis(2, 1))
		[MultiIndex((0, 0)), MultiIndex((1, 0)), MultiIndex((0, 1))]
	"""

	return MonomialBasis(n, d)


def monomial_text(alpha: Sequence[int], variables: Sequence[str]) -> str:
	"""
	Returns the textual form of a monomial, such as ``x1*x2^2``, or ``1`` for the constant monomial.

	:param alpha: The exponent vector.
	:param variables: The variable names, one per exponent.
	"""

	factors = []
	for name, exponent in zip(variables, alpha):
		if exponent == 1:
			factors.append(name)
		elif exponent > 1:
			factors.append(f"{name}^{exponent}")

	return '*'.join(factors) or '1'
