"""First-order optimizers over named parameter dictionaries"""

from dataclasses import dataclass, field

import numpy as np

from rimc_calibration.config import ADAM_BETAS, ADAM_EPS, OPTIMIZERS
from rimc_calibration.exceptions import ParameterError
from rimc_calibration.linalg import Tensor


@dataclass
class Sgd:
    """SGD with optional heavy-ball momentum"""

    lr: float
    momentum: float = 0.0
    velocity: dict[str, Tensor] = field(default_factory=dict)

    def step(self, params: dict[str, Tensor], grads: dict[str, Tensor]) -> None:
        """Update ``params`` in place"""
        for name, grad in grads.items():
            if self.momentum:
                v = self.velocity.get(name)
                v = grad.copy() if v is None else self.momentum * v + grad
                self.velocity[name] = v
                grad = v
            params[name] -= self.lr * grad


@dataclass
class Adam:
    """Adam with bias correction"""

    lr: float
    beta1: float = ADAM_BETAS[0]
    beta2: float = ADAM_BETAS[1]
    eps: float = ADAM_EPS
    t: int = 0
    first: dict[str, Tensor] = field(default_factory=dict)
    second: dict[str, Tensor] = field(default_factory=dict)

    def step(self, params: dict[str, Tensor], grads: dict[str, Tensor]) -> None:
        """Update ``params`` in place"""
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for name, grad in grads.items():
            m = self.first.get(name, np.zeros_like(grad))
            v = self.second.get(name, np.zeros_like(grad))
            m = self.beta1 * m + (1.0 - self.beta1) * grad
            v = self.beta2 * v + (1.0 - self.beta2) * grad * grad
            self.first[name], self.second[name] = m, v
            params[name] -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


Optimizer = Sgd | Adam


def make_optimizer(
    name: str, lr: float, momentum: float = 0.0, betas: tuple[float, float] = ADAM_BETAS, eps: float = ADAM_EPS
) -> Optimizer:
    """Build an optimizer by name

    Raises:
        ParameterError: If the name is unknown or lr <= 0
    """
    if lr <= 0:
        raise ParameterError(f"make_optimizer: lr must be > 0, got {lr}")
    if name == "sgd":
        return Sgd(lr=lr, momentum=momentum)
    if name == "adam":
        return Adam(lr=lr, beta1=betas[0], beta2=betas[1], eps=eps)
    raise ParameterError(f"make_optimizer: unknown optimizer '{name}', expected {OPTIMIZERS}")
