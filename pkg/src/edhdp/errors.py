"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An argument breaks an operation's contract (shape, range, finiteness)."""


class NotInitializedError(RuntimeError):
    """Raised when an operation needs one-step memory that does not exist yet."""


class LearningRateError(RuntimeError):
    """Raised in strict mode when a learning rate violates the stability guard."""


class DivergenceError(RuntimeError):
    """Raised when a simulated trajectory leaves the divergence guard ball."""

    def __init__(self, step: int, norm: float):
        self.step = step
        self.norm = norm
        super().__init__(f"state diverged at step {step} (norm {norm:.3e})")


class ConfigError(ValueError):
    """Raised for invalid experiment configuration; message names the bad field."""
