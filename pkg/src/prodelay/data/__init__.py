"""Packaged read-only fixtures.

* ``example1_problem.json`` - the nonlinear demonstration problem
  y' = 1 - 2 y(t/2)**2, y(0) = 0 (exact solution sin t).
* ``adm_vim_ham_series.json`` - the 9-term reference series shared by four
  published iterative methods for that problem, transcribed as printed.
* ``oham_4term_series.json`` - the published 4-term optimal-homotopy
  polynomial for the same problem, decimal coefficients as printed.
"""

from __future__ import annotations

import json
from importlib import resources

from ..series import PowerSeries


def _load(name: str) -> dict:
    return json.loads(resources.files(__package__).joinpath(name).read_text())


def example1_problem() -> dict:
    """The demonstration problem document (parse with sam.problem_from_json)."""
    return _load("example1_problem.json")


def adm_vim_ham_series() -> PowerSeries:
    """The transcribed 9-term comparison series (exact rational coefficients)."""
    return PowerSeries.from_json(_load("adm_vim_ham_series.json"))


def oham_4term_series() -> PowerSeries:
    """The transcribed 4-term comparison polynomial (float coefficients)."""
    return PowerSeries.from_json(_load("oham_4term_series.json"))
