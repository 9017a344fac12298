"""Grover operator built from exact rank-1 reflections.

Q = -R_chi * R_good with R_v = I - 2|v><v|. Both reflections are dense rank-1
updates (two inner products plus an axpy per application of Q); circuit depth
is accounted separately by the query ledger, at two units of the preparation
operator per application of Q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EncodingInfeasible, WidthMismatch
from .problem import ProblemSpec, exact_amplitude, prepare_chi0, tabulate
from .simulator import Statevector


@dataclass(frozen=True)
class GroverOracle:
    """|chi_0>, the good-state axis |psi_good>|1>, and the exact angle theta."""

    chi0: Statevector
    good_axis: Statevector
    theta: float

    @property
    def width(self) -> int:
        return self.chi0.width


def build_oracle(spec: ProblemSpec) -> GroverOracle:
    a = exact_amplitude(spec)
    if a <= 0.0:
        raise EncodingInfeasible("amplitude is zero; good state undefined")
    chi0 = prepare_chi0(spec)
    p = tabulate(spec)
    f = spec.f_values()
    size = 1 << spec.n
    good = np.zeros(2 * size, dtype=np.complex128)
    good[size:] = np.sqrt(p * f / a)
    return GroverOracle(
        chi0=chi0,
        good_axis=Statevector(spec.n + 1, good),
        theta=float(np.arcsin(min(1.0, np.sqrt(a)))),
    )


def reflect_inplace(amps: np.ndarray, axis: np.ndarray):
    amps -= (2.0 * np.vdot(axis, amps)) * axis


def grover_inplace(amps: np.ndarray, chi0: np.ndarray, good: np.ndarray, power: int):
    for _ in range(power):
        reflect_inplace(amps, good)
        reflect_inplace(amps, chi0)
        np.negative(amps, out=amps)


def reflect(state: Statevector, axis: Statevector) -> Statevector:
    """state - 2 <axis|state> axis (axis must be unit norm)."""
    if state.width != axis.width:
        raise WidthMismatch(f"widths {state.width} and {axis.width} differ")
    out = state.amplitudes.copy()
    reflect_inplace(out, axis.amplitudes)
    return Statevector(state.width, out)


def apply_grover(oracle: GroverOracle, state: Statevector, power: int = 1) -> Statevector:
    """Apply Q^power with Q = -R_chi R_good."""
    if state.width != oracle.width:
        raise WidthMismatch(f"widths {state.width} and {oracle.width} differ")
    if power < 0:
        raise ValueError(f"power must be >= 0, got {power}")
    out = state.amplitudes.copy()
    grover_inplace(out, oracle.chi0.amplitudes, oracle.good_axis.amplitudes, power)
    return Statevector(state.width, out)


def closed_form_good_probability(theta: float, power: int) -> float:
    """sin^2((2m+1) theta): exact ancilla-1 probability of Q^m |chi_0>."""
    return float(np.sin((2 * power + 1) * theta) ** 2)


def infidelity(oracle: GroverOracle, approx: Statevector, power: int) -> float:
    """1 - Re<chi_m|approx> against the exactly amplified state chi_m = Q^m chi_0."""
    if approx.width != oracle.width:
        raise WidthMismatch(f"widths {approx.width} and {oracle.width} differ")
    chi_m = apply_grover(oracle, oracle.chi0, power)
    return float(1.0 - np.real(np.vdot(chi_m.amplitudes, approx.amplitudes)))
