"""Variational approximation engine.

Maximizes F(lambda) = Re<phi_var(lambda)|Q^k|phi_i> with Adam, using the
two-point shift gradient f_j(l + pi/4) - f_j(l - pi/4). All parameters of a
sweep are evaluated at the same base vector and updated simultaneously.

The coordinate-wise objective is an overlap that is *linear* in each rotation
gate, so it is a sinusoid in lambda_j/2: shifting by +-pi/4 gives
f_j(l +- pi/4) = cos(pi/8) F +- sin(pi/8) g_j, where g_j only needs one extra
inner product once the partial circuit states are cached. The sweep kernel
below exploits this: one forward and one backward pass over the gate list per
sweep instead of 2 n_p full circuit evaluations. In sampled mode each of the
two shifted values is still drawn from its own binomial, exactly as if the
circuits had been run one by one.

Note the shift rule is used verbatim (no normalization constant): for this
overlap objective the difference equals 4 sin(pi/8) times the true
derivative, and Adam absorbs the constant factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numba import njit

from .ansatz import INIT_CHI0, RY, AnsatzSpec, evaluate
from .errors import IndexOutOfRange, InvalidTrials, WidthMismatch
from .grover import GroverOracle, apply_grover
from .simulator import Statevector, basis_state

SHIFT = np.pi / 4.0
# exact-gradient conversion: f_j(l+pi/4) - f_j(l-pi/4) = 4 sin(pi/8) f_j'(l)
SHIFT_TO_DERIVATIVE = 4.0 * np.sin(np.pi / 8.0)


@dataclass
class OptimizerConfig:
    """Adam settings plus the sampling budget of one variational update."""

    learning_rate: float = 1e-3
    sweeps: int = 100       # n_s
    trials: int = 100       # n_f Bernoulli trials per objective value; 0 = exact
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError(f"learning rate must be > 0, got {self.learning_rate}")
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if self.trials < 0:
            raise InvalidTrials(f"trials must be >= 0, got {self.trials}")


@dataclass
class AdamState:
    """First/second moment accumulators, one slot per parameter."""

    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, n_params: int) -> "AdamState":
        return cls(np.zeros(n_params), np.zeros(n_params))

    def ascent_step(self, params, grad, config: OptimizerConfig):
        self.t += 1
        self.m = config.beta1 * self.m + (1.0 - config.beta1) * grad
        self.v = config.beta2 * self.v + (1.0 - config.beta2) * grad * grad
        m_hat = self.m / (1.0 - config.beta1**self.t)
        v_hat = self.v / (1.0 - config.beta2**self.t)
        return params + config.learning_rate * m_hat / (np.sqrt(v_hat) + config.eps)


def initial_state(ansatz: AnsatzSpec, oracle: GroverOracle) -> Statevector:
    if ansatz.init == INIT_CHI0:
        return oracle.chi0
    return basis_state(ansatz.width, 0)


def objective(ansatz, params, oracle, phi_i: Statevector, k: int) -> float:
    """F(lambda) = Re<phi_var(lambda)|Q^k|phi_i>, exact."""
    if phi_i.width != oracle.width or ansatz.width != oracle.width:
        raise WidthMismatch("ansatz, oracle, and input state widths must agree")
    target = apply_grover(oracle, phi_i, k)
    var = evaluate(ansatz, params, initial_state(ansatz, oracle))
    return float(np.real(np.vdot(var.amplitudes, target.amplitudes)))


def sampled_objective(value: float, trials: int, rng) -> float:
    """Hadamard-test emulation: Binomial(trials, (1+F)/2) mapped back to [-1, 1]."""
    if trials < 1:
        raise InvalidTrials(f"trials must be >= 1, got {trials}")
    p = min(max((1.0 + value) / 2.0, 0.0), 1.0)
    return 2.0 * rng.binomial(trials, p) / trials - 1.0


def parameter_shift(
    ansatz, params, j: int, oracle, phi_i: Statevector, k: int, trials: int = 0, rng=None
) -> float:
    """f_j(lambda_j + pi/4) - f_j(lambda_j - pi/4); two objective evaluations."""
    params = np.asarray(params, dtype=np.float64)
    if not 0 <= j < ansatz.n_params:
        raise IndexOutOfRange(f"parameter index {j} out of range")
    values = []
    for sign in (1.0, -1.0):
        shifted = params.copy()
        shifted[j] += sign * SHIFT
        f = objective(ansatz, shifted, oracle, phi_i, k)
        if trials > 0:
            f = sampled_objective(f, trials, rng)
        values.append(f)
    return values[0] - values[1]


# ---------------------------------------------------------------------------
# numba sweep kernel (real amplitudes; every gate in this package is real)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _ry_real(x, qubit, c, s):
    stride = 1 << qubit
    for base in range(0, x.size, 2 * stride):
        for i in range(base, base + stride):
            a0 = x[i]
            a1 = x[i + stride]
            x[i] = c * a0 - s * a1
            x[i + stride] = s * a0 + c * a1


@njit(cache=True)
def _cnot_real(x, control, target):
    cm = 1 << control
    tm = 1 << target
    for i in range(x.size):
        if (i & cm) != 0 and (i & tm) == 0:
            j = i | tm
            tmp = x[i]
            x[i] = x[j]
            x[j] = tmp


@njit(cache=True)
def _sweep_values(kinds, q0, q1, pidx, params, init, target, fwd, bwd, g1):
    """One forward/backward pass; returns the exact objective F and fills
    g1[j] = Re<J_q fwd_g, bwd_g> for the rotation carrying parameter j."""
    n_gates = kinds.size
    dim = init.size
    fwd[0] = init
    for g in range(n_gates):
        fwd[g + 1] = fwd[g]
        if kinds[g] == 0:
            lam = params[pidx[g]]
            _ry_real(fwd[g + 1], q0[g], np.cos(lam / 2.0), np.sin(lam / 2.0))
        else:
            _cnot_real(fwd[g + 1], q0[g], q1[g])
    bwd[n_gates] = target
    for g in range(n_gates, 0, -1):
        bwd[g - 1] = bwd[g]
        if kinds[g - 1] == 0:
            lam = params[pidx[g - 1]]
            _ry_real(bwd[g - 1], q0[g - 1], np.cos(lam / 2.0), -np.sin(lam / 2.0))
        else:
            _cnot_real(bwd[g - 1], q0[g - 1], q1[g - 1])
    value = 0.0
    for i in range(dim):
        value += fwd[n_gates][i] * target[i]
    g1[:] = 0.0
    for g in range(n_gates):
        if kinds[g] == 0:
            stride = 1 << q0[g]
            acc = 0.0
            for base in range(0, dim, 2 * stride):
                for i in range(base, base + stride):
                    acc += (
                        fwd[g + 1][i] * bwd[g + 1][i + stride]
                        - fwd[g + 1][i + stride] * bwd[g + 1][i]
                    )
            g1[pidx[g]] = acc
    return value


@lru_cache(maxsize=32)
def _gate_arrays(ansatz: AnsatzSpec):
    kinds = np.array([g.kind for g in ansatz.gates], dtype=np.int64)
    q0 = np.array([g.q0 for g in ansatz.gates], dtype=np.int64)
    q1 = np.array([g.q1 for g in ansatz.gates], dtype=np.int64)
    pidx = np.array([g.param for g in ansatz.gates], dtype=np.int64)
    return kinds, q0, q1, pidx


def optimize(
    ansatz: AnsatzSpec,
    params0,
    oracle: GroverOracle,
    phi_i: Statevector,
    k: int,
    config: OptimizerConfig,
    rng,
    ledger=None,
):
    """Run config.sweeps simultaneous-update Adam ascent steps.

    Returns (best_params, best_exact_objective): the parameter vector with the
    highest exact objective seen across all sweeps, never blindly the last
    iterate. Only gradient circuits are charged to the ledger, at
    2 * trials * n_params circuits of depth 2k+2 per sweep.
    """
    target = apply_grover(oracle, phi_i, k)
    init = initial_state(ansatz, oracle)
    init_r = np.ascontiguousarray(init.amplitudes.real)
    target_r = np.ascontiguousarray(target.amplitudes.real)
    kinds, q0, q1, pidx = _gate_arrays(ansatz)

    n_gates = len(ansatz.gates)
    dim = init_r.size
    fwd = np.empty((n_gates + 1, dim))
    bwd = np.empty((n_gates + 1, dim))
    g1 = np.empty(ansatz.n_params)

    params = np.array(params0, dtype=np.float64)
    if params.shape != (ansatz.n_params,):
        raise IndexOutOfRange(
            f"expected {ansatz.n_params} starting parameters, got {params.shape}"
        )
    adam = AdamState.zeros(ansatz.n_params)
    cos8 = np.cos(np.pi / 8.0)
    sin8 = np.sin(np.pi / 8.0)

    best_params = params.copy()
    best_value = -np.inf
    for _ in range(config.sweeps):
        value = _sweep_values(
            kinds, q0, q1, pidx, params, init_r, target_r, fwd, bwd, g1
        )
        if value > best_value:
            best_value = value
            best_params = params.copy()
        if config.trials > 0:
            f_plus = np.clip(cos8 * value + sin8 * g1, -1.0, 1.0)
            f_minus = np.clip(cos8 * value - sin8 * g1, -1.0, 1.0)
            s_plus = rng.binomial(config.trials, (1.0 + f_plus) / 2.0)
            s_minus = rng.binomial(config.trials, (1.0 + f_minus) / 2.0)
            grad = 2.0 * (s_plus - s_minus) / config.trials
        else:
            grad = 2.0 * sin8 * g1
        params = adam.ascent_step(params, grad, config)

    final = _sweep_values(kinds, q0, q1, pidx, params, init_r, target_r, fwd, bwd, g1)
    if final > best_value:
        best_value = final
        best_params = params.copy()

    if ledger is not None and config.trials > 0:
        circuits = 2 * config.trials * config.sweeps * ansatz.n_params
        ledger.charge_variational(circuits * (2 * k + 2))
    return best_params, float(best_value)
