"""Dense feed-forward networks with explicit forward tapes and reverse-mode gradients."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import activations
from .activations import IDENTITY, Activation
from .optim import AdamState, adam_step

NETWORK_FORMAT_VERSION = 1


class FrozenNetworkError(RuntimeError):
    """Raised when a parameter update targets a frozen network."""


@dataclass
class Tape:
    """Per-layer record of one forward pass, sufficient for exact backprop."""

    inputs: np.ndarray
    pre: list[np.ndarray]
    post: list[np.ndarray]
    net: "DenseNetwork"
    version: int
    single: bool


@dataclass
class Gradients:
    """Parameter gradients of a DenseNetwork, shaped like its weights and biases."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def to_list(self) -> list[np.ndarray]:
        out: list[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def add(self, other: "Gradients") -> "Gradients":
        return Gradients(
            [a + b for a, b in zip(self.weights, other.weights)],
            [a + b for a, b in zip(self.biases, other.biases)],
        )


class DenseNetwork:
    """A fully connected network: per-layer weights, biases, and activations.

    ``layer_sizes`` lists the input width first and the output width last.
    ``hidden_activations`` has one entry per hidden layer; the output layer
    uses ``output_activation`` (identity for regression heads, sigmoid for
    a probability head). Weights start uniform in +/- sqrt(6/(fan_in+fan_out)),
    biases at zero, drawn from the given seed.
    """

    def __init__(
        self,
        layer_sizes: list[int],
        hidden_activations: list[Activation],
        output_activation: Activation = IDENTITY,
        *,
        seed: int | np.random.Generator = 0,
    ) -> None:
        if len(layer_sizes) < 2:
            raise ValueError("need at least an input and an output width")
        if any(int(s) != s or s < 1 for s in layer_sizes):
            raise ValueError(f"layer sizes must be positive integers, got {layer_sizes}")
        n_hidden = len(layer_sizes) - 2
        if len(hidden_activations) != n_hidden:
            raise ValueError(
                f"{n_hidden} hidden layers need {n_hidden} activations, got {len(hidden_activations)}"
            )
        self.layer_sizes = [int(s) for s in layer_sizes]
        self.hidden_activations = list(hidden_activations)
        self.output_activation = output_activation
        self.frozen = False
        self._version = 0

        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for fan_in, fan_out in zip(self.layer_sizes[:-1], self.layer_sizes[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            self.weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
            self.biases.append(np.zeros(fan_out))

    # -- structure ----------------------------------------------------------

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    @property
    def input_width(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_width(self) -> int:
        return self.layer_sizes[-1]

    def activation_for_layer(self, layer: int) -> Activation:
        if layer == self.n_layers - 1:
            return self.output_activation
        return self.hidden_activations[layer]

    def parameters(self) -> list[np.ndarray]:
        """Flat parameter list, weights and biases interleaved per layer."""
        out: list[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def parameter_names(self) -> list[str]:
        out: list[str] = []
        for layer in range(self.n_layers):
            out.extend((f"layer{layer}.weight", f"layer{layer}.bias"))
        return out

    # -- evaluation ---------------------------------------------------------

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, Tape]:
        """Evaluate the network on a vector or a batch of row vectors."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        a = np.atleast_2d(x)
        if a.ndim != 2 or a.shape[1] != self.input_width:
            raise ValueError(f"expected input width {self.input_width}, got shape {x.shape}")
        pre: list[np.ndarray] = []
        post: list[np.ndarray] = []
        for layer in range(self.n_layers):
            z = a @ self.weights[layer].T + self.biases[layer]
            a = activations.apply(self.activation_for_layer(layer), z)
            pre.append(z)
            post.append(a)
        out = post[-1][0] if single else post[-1]
        return out, Tape(np.atleast_2d(x), pre, post, self, self._version, single)

    def gradient(self, tape: Tape, upstream: np.ndarray) -> tuple[Gradients, np.ndarray]:
        """Backpropagate ``upstream`` (= dLoss/dOutput) through a recorded forward pass.

        Returns the parameter gradients and the gradient with respect to the
        network input, both summed over the batch rows of the tape.
        """
        if tape.net is not self or tape.version != self._version:
            raise ValueError("stale tape: parameters changed since this forward pass")
        g = np.asarray(upstream, dtype=float)
        if tape.single and g.ndim == 1:
            g = g[None, :]
        if g.shape != tape.post[-1].shape:
            raise ValueError(
                f"upstream shape {np.shape(upstream)} does not match output shape {tape.post[-1].shape}"
            )
        d_weights: list[np.ndarray | None] = [None] * self.n_layers
        d_biases: list[np.ndarray | None] = [None] * self.n_layers
        for layer in reversed(range(self.n_layers)):
            act = self.activation_for_layer(layer)
            gz = activations.backward(act, tape.pre[layer], tape.post[layer], g)
            below = tape.post[layer - 1] if layer > 0 else tape.inputs
            d_weights[layer] = gz.T @ below
            d_biases[layer] = gz.sum(axis=0)
            g = gz @ self.weights[layer]
        input_grad = g[0] if tape.single else g
        return Gradients(d_weights, d_biases), input_grad

    # -- mutation -----------------------------------------------------------

    def freeze(self) -> None:
        self.frozen = True

    def apply_adam(self, grads: Gradients, state: AdamState, lr: float) -> None:
        """Take one Adam step on this network's parameters."""
        if self.frozen:
            raise FrozenNetworkError("network is frozen; parameter updates are forbidden")
        adam_step(self.parameters(), grads.to_list(), state, lr, names=self.parameter_names())
        self._version += 1

    def checksum(self) -> str:
        """SHA-256 over the raw parameter bytes; stable iff parameters are."""
        h = hashlib.sha256()
        for p in self.parameters():
            h.update(np.ascontiguousarray(p).tobytes())
        return h.hexdigest()

    def copy(self) -> "DenseNetwork":
        dup = DenseNetwork.__new__(DenseNetwork)
        dup.layer_sizes = list(self.layer_sizes)
        dup.hidden_activations = list(self.hidden_activations)
        dup.output_activation = self.output_activation
        dup.frozen = self.frozen
        dup._version = 0
        dup.weights = [w.copy() for w in self.weights]
        dup.biases = [b.copy() for b in self.biases]
        return dup

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format_version": NETWORK_FORMAT_VERSION,
            "layer_sizes": self.layer_sizes,
            "hidden_activations": [a.to_dict() for a in self.hidden_activations],
            "output_activation": self.output_activation.to_dict(),
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
            "frozen": self.frozen,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DenseNetwork":
        version = doc.get("format_version")
        if version != NETWORK_FORMAT_VERSION:
            raise ValueError(f"unsupported network format version {version!r}")
        net = cls(
            doc["layer_sizes"],
            [Activation.from_dict(a) for a in doc["hidden_activations"]],
            Activation.from_dict(doc["output_activation"]),
        )
        net.weights = [np.asarray(w, dtype=float) for w in doc["weights"]]
        net.biases = [np.asarray(b, dtype=float) for b in doc["biases"]]
        for layer, (w, b) in enumerate(zip(net.weights, net.biases)):
            expect = (net.layer_sizes[layer + 1], net.layer_sizes[layer])
            if w.shape != expect or b.shape != (expect[0],):
                raise ValueError(f"layer {layer} arrays do not match layer_sizes")
        net.frozen = bool(doc.get("frozen", False))
        return net
