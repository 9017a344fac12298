"""Integration problems: distribution tables, f(x) = C*x, and state encoding.

The grid is x_j = j / 2^n for j = 0 .. 2^n - 1, so f(x) stays within [0, 1]
whenever C * (2^n - 1) / 2^n <= 1. The amplitude of interest is
a = sum_j p(x_j) * C * x_j, the probability of finding the ancilla in |1>.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDistribution,
    EncodingInfeasible,
    InfeasibleRescaling,
    InvalidWidth,
)
from .simulator import Statevector, draw_binomial

KINDS = ("gaussian", "cauchy", "lognormal")

_FEAS_TOL = 1e-12

# parameters used for all headline experiments
PAPER_PARAMS = {
    "gaussian": dict(mu=0.5, sigma=0.1),
    "cauchy": dict(mu=0.5, sigma=0.1),
    "lognormal": dict(mu=1.5, sigma=0.2, c0=0.0, c1=10.0),
}


@dataclass(frozen=True)
class ProblemSpec:
    """One integration problem: distribution kind, qubit count, f-scale C."""

    kind: str
    n: int
    mu: float = 0.5
    sigma: float = 0.1
    c0: float = 0.0
    c1: float = 10.0
    C: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DegenerateDistribution(f"unknown distribution kind {self.kind!r}")
        if self.n < 1:
            raise InvalidWidth(f"need at least one data qubit, got n={self.n}")
        if self.sigma <= 0:
            raise DegenerateDistribution(f"sigma must be > 0, got {self.sigma}")
        if self.C < 0:
            raise EncodingInfeasible(f"C must be >= 0, got {self.C}")
        if self.C * self.max_x > 1.0 + _FEAS_TOL:
            raise EncodingInfeasible(
                f"C={self.C} puts f(x) above 1 at the top grid point"
            )
        if self.kind == "lognormal":
            # argument of the log must be positive on the strictly positive grid
            smallest_positive = self.c0 + self.c1 / (1 << self.n)
            if self.c1 > 0 and smallest_positive <= 0:
                raise DegenerateDistribution(
                    "c0 + c1*x must be positive for grid points x > 0"
                )

    @property
    def grid(self) -> np.ndarray:
        size = 1 << self.n
        return np.arange(size) / size

    @property
    def max_x(self) -> float:
        size = 1 << self.n
        return (size - 1) / size

    def f_values(self) -> np.ndarray:
        return self.C * self.grid


def tabulate(spec: ProblemSpec) -> np.ndarray:
    """Normalized probability table p(x_j) over the 2^n grid points."""
    x = spec.grid
    if spec.kind == "gaussian":
        raw = np.exp(-((x - spec.mu) ** 2) / (2.0 * spec.sigma**2))
    elif spec.kind == "cauchy":
        raw = spec.sigma / ((x - spec.mu) ** 2 + spec.sigma**2)
    else:
        arg = spec.c0 + spec.c1 * x
        raw = np.zeros_like(x)
        pos = arg > 0
        # the x=0 point with c0=0 gets zero weight; the density vanishes there
        raw[pos] = (
            np.exp(-((np.log(arg[pos]) - spec.mu) ** 2) / (2.0 * spec.sigma**2))
            / arg[pos]
        )
    total = raw.sum()
    if not np.isfinite(total) or total <= 0:
        raise DegenerateDistribution(
            f"unnormalized table sums to {total} for {spec.kind}"
        )
    return raw / total


def exact_amplitude(spec: ProblemSpec) -> float:
    """a = E_p[f] = sum_j p(x_j) * C * x_j, by direct summation."""
    return float(np.dot(tabulate(spec), spec.f_values()))


def exact_theta(spec: ProblemSpec) -> float:
    return float(np.arcsin(np.sqrt(exact_amplitude(spec))))


def prepare_chi0(spec: ProblemSpec) -> Statevector:
    """Encode sqrt(p*(1-f)) on the ancilla-0 branch and sqrt(p*f) on ancilla-1."""
    p = tabulate(spec)
    f = spec.f_values()
    if np.any(f < -_FEAS_TOL) or np.any(f > 1.0 + _FEAS_TOL):
        raise EncodingInfeasible("f(x) leaves [0, 1] on the grid")
    f = np.clip(f, 0.0, 1.0)
    size = 1 << spec.n
    amps = np.zeros(2 * size, dtype=np.complex128)
    amps[:size] = np.sqrt(p * (1.0 - f))
    amps[size:] = np.sqrt(p * f)
    return Statevector(spec.n + 1, amps)


def rescale(spec: ProblemSpec, r: float) -> ProblemSpec:
    """Replace C by r*C; the amplitude scales by exactly r."""
    if r <= 0:
        raise InfeasibleRescaling(f"rescaling factor must be > 0, got {r}")
    if r * spec.C * spec.max_x > 1.0 + _FEAS_TOL:
        raise InfeasibleRescaling(
            f"r={r} pushes f(x) above 1 at the top grid point (C={spec.C})"
        )
    return dataclasses.replace(spec, C=r * spec.C)


def loose_estimate(spec: ProblemSpec, shots: int, rng, ledger=None) -> float:
    """Cheap Monte Carlo pre-estimate of the amplitude from `shots` samples."""
    if shots <= 0:
        raise ValueError(f"shots must be > 0, got {shots}")
    a = exact_amplitude(spec)
    count = draw_binomial(a, shots, rng)
    if ledger is not None:
        ledger.charge_loose(shots)
    return count / shots
