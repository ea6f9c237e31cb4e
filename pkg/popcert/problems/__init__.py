#!/usr/bin/env python
#
#  __init__.py
"""
Example problems bundled with :mod:`popcert`.

* ``univariate``: a quartic on an interval.
* ``bivariate``: a cubic on the unit disc.
* ``wb2``: a two-bus optimal power flow problem with distinct local and global solutions.
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
from importlib.resources import files
from typing import List

# 3rd party
from domdf_python_tools.words import word_join

# this package
from popcert.problem_io import PopProblem, parse_problem

__all__ = ["builtin_names", "load_builtin"]


def builtin_names() -> List[str]:
	"""
	Returns the names of the bundled problems, sorted alphabetically.
	"""

	return sorted(
			resource.name[:-len(".pop")] for resource in files(__name__).iterdir() if resource.name.endswith(".pop")
			)


def load_builtin(name: str) -> PopProblem:
	"""
	Parse the bundled problem called ``name``.

	:raises FileNotFoundError: If there is no such problem.
	"""

	names = builtin_names()
	if name not in names:
		raise FileNotFoundError(f"No bundled problem {name!r}. Choose from {word_join(names, use_repr=True)}.")

	return parse_problem(files(__name__).joinpath(f"{name}.pop").read_text(encoding="UTF-8"))
