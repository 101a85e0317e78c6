from __future__ import annotations

from fractions import Fraction

import pytest

from prodelay.series import PowerSeries


def sparse_series(entries: dict[int, object], trunc: int | None = None,
                  alpha=1) -> PowerSeries:
    """Build a series from {order: coefficient}, zero elsewhere."""
    top = max(entries) if entries else 0
    if trunc is None:
        trunc = top
    coeffs = [Fraction(0)] * (trunc + 1)
    for order, value in entries.items():
        coeffs[order] = value
    return PowerSeries(alpha, tuple(coeffs))


@pytest.fixture
def run_cli(capsys):
    """Invoke the CLI main() in-process; returns (exit_code, stdout, stderr)."""
    from prodelay.cli import main

    def _run(*argv: str):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run
