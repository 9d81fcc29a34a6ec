"""State-error event trigger and zero-order-hold bookkeeping.

A learning event fires when the squared hold error ||x(held) - x(k)||^2
exceeds

    lambda_min(Q) * beta
    --------------------------------------------- * ||x(k)||^2
    2 * lambda_max(R) * ||w_a||^2 * lipschitz^2

where w_a is the action net's output-weight matrix (Frobenius norm,
recomputed every step) and `lipschitz` bounds how fast the action net's
hidden layer can move with the state.  beta = 0 collapses the threshold to
zero, recovering time-driven learning: any state motion fires an event.

Between events the last control is held constant (zero-order hold).  The
boundary case (squared error exactly equal to the threshold) does not fire.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation


def estimate_lipschitz(action_w_in: np.ndarray) -> float:
    """Lipschitz constant of the action hidden layer: half its spectral norm.

    The hidden activation has maximum slope 1/2, so x -> phi(w_in @ x) moves
    at most (1/2)*sigma_max(w_in) per unit of state motion.  Returns 0 for a
    zero matrix; callers needing a positive constant must floor the result.
    """
    action_w_in = np.asarray(action_w_in, dtype=float)
    return 0.5 * float(np.linalg.norm(action_w_in, 2))


def _check_spd(mat: np.ndarray, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ContractViolation(f"{name} must be a square matrix")
    if not np.allclose(mat, mat.T):
        raise ContractViolation(f"{name} must be symmetric")
    if float(np.linalg.eigvalsh(mat)[0]) <= 0.0:
        raise ContractViolation(f"{name} must be positive definite")
    return mat


@dataclass
class TriggerConfig:
    """Trigger parameters; cost-matrix eigen-extremes are computed once here.

    omega_floor guards the degenerate all-zero-action-weights case: with
    ||w_a|| = 0 the threshold would be infinite and no event could ever
    fire, so the squared norm is floored at omega_floor before use.  Set
    omega_floor = 0 to get the bare mathematical behaviour (infinite
    threshold at zero weights).
    """

    beta: float
    Q: np.ndarray
    R: np.ndarray
    lipschitz: float
    omega_floor: float = 1e-8
    lam_min_q: float = field(init=False)
    lam_max_r: float = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise ContractViolation(f"beta must lie in [0, 1); got {self.beta}")
        if self.lipschitz <= 0.0:
            raise ContractViolation("lipschitz constant must be positive")
        if self.omega_floor < 0.0:
            raise ContractViolation("omega_floor must be non-negative")
        self.Q = _check_spd(self.Q, "Q")
        self.R = _check_spd(self.R, "R")
        self.lam_min_q = float(np.linalg.eigvalsh(self.Q)[0])
        self.lam_max_r = float(np.linalg.eigvalsh(self.R)[-1])

    @classmethod
    def for_action_net(
        cls,
        beta: float,
        Q: np.ndarray,
        R: np.ndarray,
        action_w_in: np.ndarray,
        lipschitz: float | None = None,
        omega_floor: float = 1e-8,
        lipschitz_floor: float = 1e-6,
    ) -> "TriggerConfig":
        """Build a config, estimating the Lipschitz constant when not given."""
        if lipschitz is None:
            lipschitz = max(estimate_lipschitz(action_w_in), lipschitz_floor)
        return cls(beta=beta, Q=Q, R=R, lipschitz=lipschitz, omega_floor=omega_floor)


@dataclass
class TriggerState:
    """Zero-order-hold record: the state and control frozen at the last event."""

    held_x: np.ndarray
    held_u: np.ndarray
    last_event_step: int = 0
    event_count: int = 0

    def fire(self, k: int, x: np.ndarray, u_new: np.ndarray) -> "TriggerState":
        """Reset the hold at event step k; the hold error becomes zero."""
        self.held_x = np.array(x, dtype=float)
        self.held_u = np.array(u_new, dtype=float)
        self.last_event_step = k
        self.event_count += 1
        return self


def threshold(cfg: TriggerConfig, x: np.ndarray, omega_a_norm_sq: float) -> float:
    """Right-hand side of the event criterion at state x.

    Monotone increasing in beta and in ||x||^2.  beta = 0 gives identically
    zero; zero action-weight norm (with omega_floor = 0) gives +inf.
    """
    if cfg.beta == 0.0:
        return 0.0
    x = np.asarray(x, dtype=float)
    w_sq = max(float(omega_a_norm_sq), cfg.omega_floor)
    if w_sq == 0.0:
        return float("inf")
    num = cfg.lam_min_q * cfg.beta * float(x @ x)
    return num / (2.0 * cfg.lam_max_r * w_sq * cfg.lipschitz**2)


def check_event(
    cfg: TriggerConfig,
    st: TriggerState,
    x: np.ndarray,
    omega_a_norm_sq: float,
) -> bool:
    """True iff the squared hold error strictly exceeds the threshold."""
    x = np.asarray(x, dtype=float)
    e = st.held_x - x
    return float(e @ e) > threshold(cfg, x, omega_a_norm_sq)
