"""Online actor-critic learner with event-gated gradient updates.

One agent owns a critic net (input: state and applied control, output: the
cost-to-go estimate) and an action net (input: state, output: control).  Both
update by a single gradient step per learning event:

  critic:  w_c <- w_c - l_c * phi_c(k) * [w_c.T phi_c(k) + r(k-1) - V(k-1)].T
  action:  w_a <- w_a - l_a * phi_a(k) * [w_c.T C(k)] * [w_c.T phi_c(k)].T

The bracket in the critic rule is the temporal-difference error: the current
value estimate minus the one-step target formed from the previous step's
stored value and reward.  The action rule descends (1/2) V^2 through the
critic's analytic input gradient, steering the control toward lower
predicted cost.

Both rules require the learning rate to stay below 1/||phi||^2 at every
executed update.  In strict mode a violation raises; in permissive mode the
rate is clamped to the bound for that update and a warning is logged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .approximator import TwoLayerNet, critic_input_grad_factor
from .errors import ContractViolation, LearningRateError, NotInitializedError

log = logging.getLogger(__name__)


@dataclass
class AgentStepReport:
    """Telemetry for one closed-loop step of the agent."""

    u: np.ndarray
    v_hat: float
    td_error: Optional[float]  # None on the first-ever step (no memory yet)
    updated: bool
    critic_delta_sq: float
    action_delta_sq: float
    phi_c: np.ndarray  # critic hidden vector at (x, u), for diagnostics


class DhdpAgent:
    """Direct heuristic dynamic programming learner.

    Keeps one step of memory (previous critic features, value estimate and
    reward) so the temporal-difference error can be formed without a plant
    model.  Memory is refreshed on every step, event or not; weights change
    only on update steps.
    """

    def __init__(
        self,
        critic: TwoLayerNet,
        action: TwoLayerNet,
        critic_lr: float,
        action_lr: float,
        strict_guard: bool = True,
        critic_cycles: int = 1,
        action_cycles: int = 1,
        action_uses_updated_critic: bool = True,
    ):
        if critic.output_dim != 1:
            raise ContractViolation("critic must have a scalar output")
        if critic.input_dim != action.input_dim + action.output_dim:
            raise ContractViolation(
                "critic input_dim must equal state_dim + control_dim "
                f"({critic.input_dim} != {action.input_dim} + {action.output_dim})"
            )
        if critic_lr <= 0 or action_lr <= 0:
            raise ContractViolation("learning rates must be positive")
        if critic_cycles < 1 or action_cycles < 1:
            raise ContractViolation("update cycle counts must be >= 1")
        self.critic = critic
        self.action = action
        self.critic_lr = float(critic_lr)
        self.action_lr = float(action_lr)
        self.strict_guard = strict_guard
        self.critic_cycles = critic_cycles
        self.action_cycles = action_cycles
        self.action_uses_updated_critic = action_uses_updated_critic
        self.prev_phi_c: Optional[np.ndarray] = None
        self.prev_v: Optional[float] = None
        self.prev_r: Optional[float] = None

    @property
    def state_dim(self) -> int:
        return self.action.input_dim

    @property
    def control_dim(self) -> int:
        return self.action.output_dim

    @property
    def has_memory(self) -> bool:
        return self.prev_v is not None

    def act(self, x: np.ndarray) -> np.ndarray:
        """Control from current action weights; does not mutate the agent."""
        return self.action.forward(x)

    def value(self, x: np.ndarray, u: np.ndarray) -> float:
        """Cost-to-go estimate at (x, u) under current critic weights."""
        return float(self.critic.forward(np.concatenate([x, u]))[0])

    def td_error(self, v_now: float) -> float:
        """Temporal-difference error: v_now - (prev value - prev reward)."""
        if not self.has_memory:
            raise NotInitializedError("no previous step stored; cannot form TD error")
        return v_now - (self.prev_v - self.prev_r)

    def _effective_rate(self, lr: float, phi_norm_sq: float, which: str) -> float:
        """Enforce lr < 1/||phi||^2; raise (strict) or clamp with a warning."""
        if phi_norm_sq > 0 and lr >= 1.0 / phi_norm_sq:
            if self.strict_guard:
                raise LearningRateError(
                    f"{which} rate {lr} >= 1/||phi||^2 = {1.0 / phi_norm_sq:.6g}"
                )
            clamped = 1.0 / phi_norm_sq
            log.warning(
                "%s learning rate %g violates guard 1/||phi||^2 = %g; clamping",
                which,
                lr,
                clamped,
            )
            return clamped
        return lr

    def update_critic(self, phi_c_now: np.ndarray, r_prev: float) -> np.ndarray:
        """One critic gradient step; returns the applied weight delta.

        The target term is the stored scalar value from the previous step
        (old weights on old features), never a re-evaluation with current
        weights.
        """
        if not self.has_memory:
            raise NotInitializedError("critic update needs the previous step's value")
        phi_c_now = np.asarray(phi_c_now, dtype=float)
        norm_sq = float(phi_c_now @ phi_c_now)
        lr = self._effective_rate(self.critic_lr, norm_sq, "critic")
        bracket = float(self.critic.w_out[:, 0] @ phi_c_now) + r_prev - self.prev_v
        delta = -lr * bracket * phi_c_now[:, None]
        self.critic.apply_delta(delta)
        return delta

    def update_action(
        self, phi_a_now: np.ndarray, phi_c_now: np.ndarray, c_now: np.ndarray
    ) -> np.ndarray:
        """One action gradient step; returns the applied weight delta.

        `c_now` must be the critic input-gradient factor evaluated at the
        same (x, u) as `phi_c_now`.  The step equals -l_a times the gradient
        of (1/2) V^2 with respect to the action output weights, chaining
        through the control only (critic weights held fixed).
        """
        phi_a_now = np.asarray(phi_a_now, dtype=float)
        phi_c_now = np.asarray(phi_c_now, dtype=float)
        norm_sq = float(phi_a_now @ phi_a_now)
        lr = self._effective_rate(self.action_lr, norm_sq, "action")
        wc = self.critic.w_out[:, 0]
        grad_u = wc @ c_now  # (control_dim,) gradient of V w.r.t. control
        v_hat = float(wc @ phi_c_now)
        delta = -lr * v_hat * np.outer(phi_a_now, grad_u)
        if delta.shape != self.action.w_out.shape:
            raise ContractViolation(
                f"action delta shape {delta.shape} != w_out {self.action.w_out.shape}"
            )
        self.action.apply_delta(delta)
        return delta

    def step(
        self,
        x: np.ndarray,
        u_applied: np.ndarray,
        r_now: float,
        do_update: bool,
    ) -> AgentStepReport:
        """Process one closed-loop step.

        Evaluates the critic at (x, u_applied), forms the TD error against
        the stored memory, and, when `do_update` is set and memory exists,
        performs the critic update followed by the action update.  Memory is
        always refreshed afterwards: the stored value uses the critic
        weights as they stand at the end of the step.
        """
        x = np.asarray(x, dtype=float)
        u_applied = np.asarray(u_applied, dtype=float)
        z = np.concatenate([x, u_applied])
        phi_c = self.critic.hidden(z)
        v_hat = float(self.critic.w_out[:, 0] @ phi_c)
        td = self.td_error(v_hat) if self.has_memory else None

        critic_delta_sq = 0.0
        action_delta_sq = 0.0
        updated = False
        if do_update and self.has_memory:
            net_dc = np.zeros_like(self.critic.w_out)
            for _ in range(self.critic_cycles):
                net_dc += self.update_critic(phi_c, self.prev_r)
            critic_delta_sq = float(np.sum(net_dc * net_dc))

            if not self.action_uses_updated_critic:
                # replay the update with the pre-update critic snapshot
                wc_for_action = self.critic.w_out[:, 0] - net_dc[:, 0]
            else:
                wc_for_action = None
            phi_a = self.action.hidden(x)
            c_now = critic_input_grad_factor(
                self.critic, phi_c, self.state_dim, self.control_dim
            )
            net_da = np.zeros_like(self.action.w_out)
            if wc_for_action is None:
                for _ in range(self.action_cycles):
                    net_da += self.update_action(phi_a, phi_c, c_now)
            else:
                norm_sq = float(phi_a @ phi_a)
                lr = self._effective_rate(self.action_lr, norm_sq, "action")
                grad_u = wc_for_action @ c_now
                v_pre = float(wc_for_action @ phi_c)
                for _ in range(self.action_cycles):
                    d = -lr * v_pre * np.outer(phi_a, grad_u)
                    self.action.apply_delta(d)
                    net_da += d
            action_delta_sq = float(np.sum(net_da * net_da))
            updated = True

        # memory refresh happens every step; the stored value reflects any
        # update performed above
        v_mem = float(self.critic.w_out[:, 0] @ phi_c) if updated else v_hat
        self.prev_phi_c = phi_c
        self.prev_v = v_mem
        self.prev_r = float(r_now)

        return AgentStepReport(
            u=u_applied,
            v_hat=v_hat,
            td_error=td,
            updated=updated,
            critic_delta_sq=critic_delta_sq,
            action_delta_sq=action_delta_sq,
            phi_c=phi_c,
        )
