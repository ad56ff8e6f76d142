"""Tolerance configuration.

One frozen record carries every threshold the package uses, so callers can
tighten or relax the whole stack in one place.  The environment variable
MARKOVSCOPE_TOL, when set, overrides the base check tolerance for newly
constructed defaults (the CLI picks it up automatically).
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # base tolerance for hermiticity / trace-preservation / positivity checks,
    # applied relative to the sup norm of the matrix under test
    check: float = 1e-9
    # eigenvalue clustering threshold, relative to ||T||
    cluster: float = 1e-8
    # projector idempotency / pairing consistency
    projector: float = 1e-8
    # exp(log T) reconstruction bound, relative
    reconstruction: float = 1e-7
    # "Markovian" decision margin, scaled by (1 + ||A0||)
    markov: float = 1e-7
    # imaginary residue allowed on the Lorentz spectrum of T g T' g
    lorentz_imag: float = 1e-7
    # condition-number limit on the eigenvector matrix before a spectrum is
    # declared defective
    condition_limit: float = 1e8

    def scaled(self, norm: float) -> float:
        """Base check tolerance scaled to a matrix of the given sup norm."""
        return self.check * max(1.0, norm)


def default_tolerances() -> Tolerances:
    """Fresh default record, honoring MARKOVSCOPE_TOL if set."""
    tols = Tolerances()
    env = os.environ.get("MARKOVSCOPE_TOL")
    if env is not None:
        try:
            tols = replace(tols, check=float(env))
        except ValueError:
            raise ValueError(
                f"MARKOVSCOPE_TOL must be a float, got {env!r}") from None
    return tols
