"""Parameterized circuit families: the layered ansatz and the minimal ansatz.

Both use only Ry rotations and CNOTs, so every produced state is real-valued.
The layered family (zero-state init) has d * (2w + ceil(w/2)) parameters; at
width 6 that is 15 rotations and 10 CNOTs per layer. The minimal family
(prepared-state init) has 6 rotations and 4 CNOTs regardless of width and
compiles to the identity at zero parameters, because its CNOT pairs cancel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidWidth, ParameterCountMismatch, WidthMismatch
from .simulator import Statevector, cnot_inplace, ry_inplace

RY = 0
CNOT = 1

INIT_ZERO = "zero"
INIT_CHI0 = "chi0"


@dataclass(frozen=True)
class GateSlot:
    kind: int           # RY or CNOT
    q0: int             # rotated qubit / control
    q1: int = -1        # CNOT target
    param: int = -1     # parameter slot for RY


@dataclass(frozen=True)
class AnsatzSpec:
    width: int
    gates: tuple[GateSlot, ...]
    n_params: int
    init: str  # INIT_ZERO or INIT_CHI0


def _cnot_brick(width: int) -> list[tuple[int, int]]:
    bonds = [(q, q + 1) for q in range(0, width - 1, 2)]
    bonds += [(q, q + 1) for q in range(1, width - 1, 2)]
    return bonds


def build_layered(width: int, depth: int) -> AnsatzSpec:
    """Layered hardware-efficient ansatz, |0...0> init."""
    if width < 2:
        raise InvalidWidth(f"layered ansatz needs width >= 2, got {width}")
    if depth < 1:
        raise InvalidWidth(f"depth must be >= 1, got {depth}")
    gates: list[GateSlot] = []
    p = 0
    brick = _cnot_brick(width)
    for _ in range(depth):
        for q in range(width):
            gates.append(GateSlot(RY, q, param=p))
            p += 1
        for c, t in brick:
            gates.append(GateSlot(CNOT, c, t))
        for q in range(width):
            gates.append(GateSlot(RY, q, param=p))
            p += 1
        for c, t in brick:
            gates.append(GateSlot(CNOT, c, t))
        for q in range((width + 1) // 2):
            gates.append(GateSlot(RY, q, param=p))
            p += 1
    return AnsatzSpec(width, tuple(gates), p, INIT_ZERO)


def build_minimal(width: int) -> AnsatzSpec:
    """Six-rotation, four-CNOT correction circuit on the ancilla and its two
    neighbouring data qubits; identity at zero parameters."""
    if width < 3:
        raise InvalidWidth(f"minimal ansatz needs width >= 3, got {width}")
    anc = width - 1
    b = width - 2
    c = width - 3
    gates = (
        GateSlot(RY, b, param=0),
        GateSlot(RY, anc, param=1),
        GateSlot(CNOT, b, anc),
        GateSlot(RY, anc, param=2),
        GateSlot(CNOT, b, anc),
        GateSlot(CNOT, c, b),
        GateSlot(RY, b, param=3),
        GateSlot(CNOT, c, b),
        GateSlot(RY, anc, param=4),
        GateSlot(RY, b, param=5),
    )
    return AnsatzSpec(width, gates, 6, INIT_CHI0)


def evaluate_inplace(spec: AnsatzSpec, params: np.ndarray, amps: np.ndarray):
    for gate in spec.gates:
        if gate.kind == RY:
            ry_inplace(amps, gate.q0, params[gate.param])
        else:
            cnot_inplace(amps, spec.width, gate.q0, gate.q1)


def evaluate(spec: AnsatzSpec, params, init: Statevector) -> Statevector:
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (spec.n_params,):
        raise ParameterCountMismatch(
            f"expected {spec.n_params} parameters, got {params.shape}"
        )
    if init.width != spec.width:
        raise WidthMismatch(f"init width {init.width} != ansatz width {spec.width}")
    out = init.amplitudes.copy()
    evaluate_inplace(spec, params, out)
    return Statevector(spec.width, out)


def random_init(spec: AnsatzSpec, rng: np.random.Generator) -> np.ndarray:
    """Uniform angles in [0, 2*pi), one per parameter slot."""
    return rng.uniform(0.0, 2.0 * np.pi, spec.n_params)
