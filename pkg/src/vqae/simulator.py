"""Dense statevector simulator for small qubit counts.

Conventions: basis-index bit ``i`` corresponds to qubit ``i`` (qubit 0 is the
least significant bit) and the ancilla is the highest qubit index, so the
ancilla-1 probability is the weight of the upper half of the amplitude array.
All gates used in this package are real-valued, so amplitudes stay real up to
rounding noise; storage is complex double precision throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidIndex, InvalidProbability, SameQubit, WidthMismatch

NORM_TOL = 1e-10


@dataclass
class Statevector:
    """2^width complex amplitudes with unit norm."""

    width: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.width < 1:
            raise InvalidIndex(f"width must be >= 1, got {self.width}")
        if self.amplitudes.shape != (1 << self.width,):
            raise WidthMismatch(
                f"expected {1 << self.width} amplitudes, got {self.amplitudes.shape}"
            )

    @property
    def dim(self) -> int:
        return 1 << self.width

    def norm_squared(self) -> float:
        a = self.amplitudes
        return float(np.sum(a.real * a.real + a.imag * a.imag))

    def copy(self) -> "Statevector":
        return Statevector(self.width, self.amplitudes.copy())


def seeded_rng(seed: int, *stream: int) -> np.random.Generator:
    """Child RNG for (seed, repetition, purpose, ...) sub-stream keys."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(stream)))


def basis_state(width: int, idx: int) -> Statevector:
    if width < 1:
        raise InvalidIndex(f"width must be >= 1, got {width}")
    if not 0 <= idx < (1 << width):
        raise InvalidIndex(f"basis index {idx} out of range for width {width}")
    amps = np.zeros(1 << width, dtype=np.complex128)
    amps[idx] = 1.0
    return Statevector(width, amps)


def _check_qubit(width: int, qubit: int):
    if not 0 <= qubit < width:
        raise InvalidIndex(f"qubit {qubit} out of range for width {width}")


def ry_inplace(amps: np.ndarray, qubit: int, angle: float):
    """Apply [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]] on one qubit."""
    c = np.cos(angle / 2.0)
    s = np.sin(angle / 2.0)
    v = amps.reshape(-1, 2, 1 << qubit)
    lo = v[:, 0].copy()
    hi = v[:, 1]
    v[:, 0] = c * lo - s * hi
    v[:, 1] = s * lo + c * hi


def cnot_inplace(amps: np.ndarray, width: int, control: int, target: int):
    v = amps.reshape((2,) * width)
    # axis k of the reshaped view is qubit width-1-k
    ax_c = width - 1 - control
    ax_t = width - 1 - target
    sel = [slice(None)] * width
    sel[ax_c] = 1
    sub = v[tuple(sel)]
    if ax_t > ax_c:
        ax_t -= 1
    i0 = [slice(None)] * (width - 1)
    i0[ax_t] = 0
    i1 = list(i0)
    i1[ax_t] = 1
    tmp = sub[tuple(i0)].copy()
    sub[tuple(i0)] = sub[tuple(i1)]
    sub[tuple(i1)] = tmp


def apply_ry(state: Statevector, qubit: int, angle: float) -> Statevector:
    _check_qubit(state.width, qubit)
    out = state.amplitudes.copy()
    ry_inplace(out, qubit, angle)
    return Statevector(state.width, out)


def apply_cnot(state: Statevector, control: int, target: int) -> Statevector:
    _check_qubit(state.width, control)
    _check_qubit(state.width, target)
    if control == target:
        raise SameQubit(f"control and target both {control}")
    out = state.amplitudes.copy()
    cnot_inplace(out, state.width, control, target)
    return Statevector(state.width, out)


def inner_product(s1: Statevector, s2: Statevector) -> complex:
    if s1.width != s2.width:
        raise WidthMismatch(f"widths {s1.width} and {s2.width} differ")
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


def ancilla_one_probability(state: Statevector) -> float:
    """Total weight of basis states whose top (ancilla) qubit is 1."""
    if state.width < 2:
        raise WidthMismatch("need at least one data qubit plus the ancilla")
    half = state.dim // 2
    a = state.amplitudes[half:]
    return float(np.sum(a.real * a.real + a.imag * a.imag))


def draw_binomial(p: float, trials: int, rng: np.random.Generator) -> int:
    """Binomial(trials, p) count; deterministic for a fixed generator state."""
    if trials < 0:
        raise InvalidProbability(f"trials must be >= 0, got {trials}")
    if not -1e-12 <= p <= 1.0 + 1e-12:
        raise InvalidProbability(f"probability {p} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    return int(rng.binomial(trials, p))
