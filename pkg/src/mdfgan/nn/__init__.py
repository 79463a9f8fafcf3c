"""Minimal dense-network engine: activations, backprop, and Adam."""

from .activations import (
    DFT,
    IDENTITY,
    INVERSE_MULTIQUADRATIC,
    KINDS,
    RICKER,
    SIGMOID,
    Activation,
    apply,
    backward,
    leaky_relu,
    parse_activation,
)
from .network import DenseNetwork, FrozenNetworkError, Gradients, Tape
from .optim import AdamState, NonFiniteGradientError, adam_step

__all__ = [
    "Activation",
    "AdamState",
    "DenseNetwork",
    "DFT",
    "FrozenNetworkError",
    "Gradients",
    "IDENTITY",
    "INVERSE_MULTIQUADRATIC",
    "KINDS",
    "NonFiniteGradientError",
    "RICKER",
    "SIGMOID",
    "Tape",
    "adam_step",
    "apply",
    "backward",
    "leaky_relu",
    "parse_activation",
]
