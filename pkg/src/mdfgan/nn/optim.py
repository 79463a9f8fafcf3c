"""Adam optimizer with bias correction."""

from __future__ import annotations

import numpy as np


class NonFiniteGradientError(RuntimeError):
    """Raised when a gradient block contains NaN or infinity."""


class AdamState:
    """First/second moment accumulators and step counter for one parameter list."""

    def __init__(
        self,
        params: list[np.ndarray],
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ) -> None:
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps

    @classmethod
    def for_network(cls, net, **kwargs) -> "AdamState":
        return cls(net.parameters(), **kwargs)


def adam_step(
    params: list[np.ndarray],
    grads: list[np.ndarray],
    state: AdamState,
    lr: float,
    names: list[str] | None = None,
) -> list[np.ndarray]:
    """Update ``params`` in place with one bias-corrected Adam step.

    theta <- theta - lr * m_hat / (sqrt(v_hat) + eps). A zero learning rate
    still advances the moment accumulators and the step counter.
    """
    if lr < 0:
        raise ValueError(f"learning rate must be non-negative, got {lr}")
    if not (len(params) == len(grads) == len(state.m)):
        raise ValueError("params, grads and optimizer state differ in block count")
    state.t += 1
    bc1 = 1.0 - state.beta1**state.t
    bc2 = 1.0 - state.beta2**state.t
    for i, (p, g) in enumerate(zip(params, grads)):
        g = np.asarray(g, dtype=float)
        if p.shape != g.shape:
            label = names[i] if names else f"block {i}"
            raise ValueError(f"gradient shape {g.shape} != parameter shape {p.shape} for {label}")
        if not np.isfinite(g).all():
            label = names[i] if names else f"block {i}"
            raise NonFiniteGradientError(f"non-finite gradient in {label}")
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g
        m_hat = state.m[i] / bc1
        v_hat = state.v[i] / bc2
        p -= lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return params
