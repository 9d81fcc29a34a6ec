"""Discrete-time plant abstraction, the benchmark plant, reward and noise.

Plants are pure step functions x(k+1) = f(x(k), u(k)); all randomness lives
in an explicitly seeded NoiseProcess whose draws are added to the
post-dynamics state (actuator-channel disturbance by default).  The stage
reward is the quadratic form x.T Q x + u.T R u evaluated with the *held*
control, so ZOH steps are charged for the control actually applied.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ContractViolation


class Plant(ABC):
    """Discrete-time dynamics interface.

    Subclasses implement `dynamics`; `step` adds an optional additive
    disturbance to the post-dynamics state.  Plants declaring equilibrium
    compliance must satisfy f(0, 0) = 0.
    """

    state_dim: int
    control_dim: int

    @abstractmethod
    def dynamics(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        ...

    def step(
        self,
        x: np.ndarray,
        u: np.ndarray,
        disturbance: Optional[np.ndarray] = None,
    ) -> np.ndarray:
        x_next = self.dynamics(x, u)
        if disturbance is not None:
            x_next = x_next + disturbance
        return x_next


def step_benchmark(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Benchmark second-order linear map with a single actuator channel.

    x1+ = 0.9996*x1 + 0.0099*x2
    x2+ = -0.0887*x1 + 0.99*x2 + 0.1*u

    Open loop the state matrix has spectral radius just below 1, so the
    uncontrolled system decays slowly; the origin is the unique equilibrium.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape != (2,):
        raise ContractViolation(f"state must have shape (2,); got {x.shape}")
    if u.shape != (1,):
        raise ContractViolation(f"control must have shape (1,); got {u.shape}")
    if not (np.isfinite(x).all() and np.isfinite(u).all()):
        raise ContractViolation("non-finite plant input")
    return np.array(
        [
            0.9996 * x[0] + 0.0099 * x[1],
            -0.0887 * x[0] + 0.99 * x[1] + 0.1 * u[0],
        ]
    )


class BenchmarkPlant(Plant):
    """The fixed-coefficient benchmark plant (two states, one control)."""

    state_dim = 2
    control_dim = 1

    def dynamics(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        return step_benchmark(x, u)


@dataclass
class RewardSpec:
    """Quadratic stage cost r(x, u) = x.T Q x + u.T R u with Q, R > 0."""

    Q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        for name in ("Q", "R"):
            mat = np.asarray(getattr(self, name), dtype=float)
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise ContractViolation(f"{name} must be square")
            if not np.allclose(mat, mat.T):
                raise ContractViolation(f"{name} must be symmetric")
            if float(np.linalg.eigvalsh(mat)[0]) <= 0.0:
                raise ContractViolation(f"{name} must be positive definite")
            setattr(self, name, mat)

    def reward(self, x: np.ndarray, u_held: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        u_held = np.asarray(u_held, dtype=float)
        if x.shape != (self.Q.shape[0],) or u_held.shape != (self.R.shape[0],):
            raise ContractViolation("reward input dims do not match Q/R")
        return float(x @ self.Q @ x + u_held @ self.R @ u_held)


@dataclass
class NoiseProcess:
    """Seeded Gaussian disturbance active on a half-open step window.

    Inside [window_start, window_stop) each call to `sample` consumes exactly
    one standard-normal draw (even when std is 0, keeping the stream aligned)
    and returns gain * (mean + std * draw).  Outside the window no draw is
    consumed and the zero vector is returned.  Calls must be made once per
    step in increasing k for the stream to be reproducible.
    """

    mean: float
    std: float
    window: tuple[int, int]
    gain: np.ndarray
    seed: object = None
    _rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.gain = np.asarray(self.gain, dtype=float)
        if self.gain.ndim != 1:
            raise ContractViolation("gain must be a vector")
        if self.window[1] < self.window[0]:
            raise ContractViolation("noise window must have stop >= start")
        self._rng = np.random.default_rng(self.seed)

    def active(self, k: int) -> bool:
        return self.window[0] <= k < self.window[1]

    def sample(self, k: int) -> np.ndarray:
        if not self.active(k):
            return np.zeros_like(self.gain)
        draw = self._rng.standard_normal()
        return self.gain * (self.mean + self.std * draw)
