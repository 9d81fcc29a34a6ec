"""Two-layer neural approximators with fixed random input weights.

The critic and action networks share one structure: a hidden layer of
bipolar-sigmoid units fed through a fixed random input-weight matrix, and a
trainable linear output layer.  Only the output weights change during
learning; the input weights are drawn once at construction and kept constant.

The hidden activation is phi(s) = (1 - exp(-s)) / (1 + exp(-s)), which is
identically tanh(s/2).  Its derivative is (1 - phi^2)/2, the factor that
appears in the analytic input-gradient of the critic used by the action
update.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolation


def bipolar_sigmoid(s: np.ndarray) -> np.ndarray:
    """Elementwise (1 - e^-s)/(1 + e^-s), computed stably as tanh(s/2)."""
    return np.tanh(0.5 * np.asarray(s, dtype=float))


class TwoLayerNet:
    """Fixed-input-weight, trainable-output-weight approximator.

    w_in  : (hidden_dim, input_dim) input-to-hidden weights, frozen.
    w_out : (hidden_dim, output_dim) hidden-to-output weights, trainable.

    The output layer is linear and there are no bias terms, so the net maps
    z -> w_out.T @ phi(w_in @ z).
    """

    def __init__(self, w_in: np.ndarray, w_out: np.ndarray):
        w_in = np.array(w_in, dtype=float)
        w_out = np.array(w_out, dtype=float)
        if w_in.ndim != 2 or w_out.ndim != 2:
            raise ContractViolation("w_in and w_out must be 2-d matrices")
        if w_in.shape[0] != w_out.shape[0]:
            raise ContractViolation(
                f"hidden dims disagree: w_in has {w_in.shape[0]} rows, "
                f"w_out has {w_out.shape[0]}"
            )
        self._w_in = w_in
        self._w_in.flags.writeable = False  # frozen after construction
        self.w_out = w_out

    @classmethod
    def initialize(
        cls,
        input_dim: int,
        hidden_dim: int,
        output_dim: int,
        rng: np.random.Generator,
        weight_range: float = 0.4,
    ) -> "TwoLayerNet":
        """Draw both weight matrices uniformly from [-weight_range, weight_range].

        Draw order is fixed (input weights first) so a seeded generator
        reproduces the same net.
        """
        w_in = rng.uniform(-weight_range, weight_range, size=(hidden_dim, input_dim))
        w_out = rng.uniform(-weight_range, weight_range, size=(hidden_dim, output_dim))
        return cls(w_in, w_out)

    @property
    def w_in(self) -> np.ndarray:
        return self._w_in

    @property
    def input_dim(self) -> int:
        return self._w_in.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self._w_in.shape[0]

    @property
    def output_dim(self) -> int:
        return self.w_out.shape[1]

    def hidden(self, z: np.ndarray) -> np.ndarray:
        """Hidden activation vector phi(w_in @ z); every component in (-1, 1)."""
        z = np.asarray(z, dtype=float)
        if z.shape != (self.input_dim,):
            raise ContractViolation(
                f"input shape {z.shape} does not match input_dim {self.input_dim}"
            )
        return bipolar_sigmoid(self._w_in @ z)

    def forward(self, z: np.ndarray) -> np.ndarray:
        """Network output w_out.T @ hidden(z), shape (output_dim,)."""
        return self.w_out.T @ self.hidden(z)

    def apply_delta(self, delta: np.ndarray) -> float:
        """Add delta to the output weights; return ||delta||^2 (Frobenius).

        The returned squared norm feeds the accumulated weight-drift metric.
        Input weights are never touched.
        """
        delta = np.asarray(delta, dtype=float)
        if delta.shape != self.w_out.shape:
            raise ContractViolation(
                f"delta shape {delta.shape} does not match w_out {self.w_out.shape}"
            )
        self.w_out += delta
        return float(np.sum(delta * delta))

    def copy(self) -> "TwoLayerNet":
        return TwoLayerNet(self._w_in.copy(), self.w_out.copy())


def critic_input_grad_factor(
    critic: TwoLayerNet, phi: np.ndarray, state_dim: int, control_dim: int
) -> np.ndarray:
    """Analytic factor C with C[l, i] = (1 - phi[l]^2)/2 * w_in[l, state_dim + i].

    `phi` must be the critic hidden vector already computed at the current
    (state, control) input.  Column i picks out the input-weight column for
    control component i; w_out.T @ C is then the gradient of the critic
    output with respect to the control.
    """
    if state_dim + control_dim != critic.input_dim:
        raise ContractViolation(
            f"state_dim + control_dim = {state_dim + control_dim} "
            f"!= critic input_dim {critic.input_dim}"
        )
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (critic.hidden_dim,):
        raise ContractViolation(
            f"phi shape {phi.shape} does not match hidden_dim {critic.hidden_dim}"
        )
    slope = 0.5 * (1.0 - phi * phi)
    return slope[:, None] * critic.w_in[:, state_dim:]
