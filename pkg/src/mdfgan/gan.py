"""Two-block generator/discriminator model for multi-fidelity data fusion.

The generator is a pair of dense networks: a low-fidelity block that maps an
input x to a feature vector q (trained on the abundant low-fidelity samples,
then frozen), and a high-fidelity block that maps the concatenation (x, q) to
the high-fidelity response estimate. The discriminator scores a response
vector as real-high-fidelity (toward 1) or generated (toward 0).

Adversarial training interleaves three losses per iteration on the current
mini-batch, in five stages:

    1. supervised step on the high-fidelity block (squared error, rate lr_sup)
    2. discriminative step (rate lr_disc)
    3. supervised step
    4. generative step (rate lr_gen)
    5. supervised step

In the default ``coupled`` mode stages 2 and 4 each update both the
high-fidelity block and the discriminator; in ``standard-gan`` mode the
discriminative loss updates only the discriminator and the generative loss
only the high-fidelity block. Disabling ``supervised_trick`` skips stages
1, 3 and 5, leaving a purely adversarial trainer.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import NORMALIZER_KINDS, MultiFidelityDataset, Normalizer
from .nn import (
    IDENTITY,
    SIGMOID,
    AdamState,
    DenseNetwork,
    FrozenNetworkError,
    NonFiniteGradientError,
    parse_activation,
)

MODE_COUPLED = "coupled"
MODE_STANDARD_GAN = "standard-gan"
MODES = (MODE_COUPLED, MODE_STANDARD_GAN)

HF_BATCH_CAP = 32  # high-fidelity mini-batch rule: min(32, n_hf)

CHECKPOINT_FORMAT_VERSION = 1

# distinct deterministic seed streams derived from the config seed
_SEED_LF_NET, _SEED_HF_NET, _SEED_DISC_NET = 0, 1, 2
_SEED_LF_SHUFFLE, _SEED_HF_SHUFFLE = 3, 4


class TrainingDivergedError(RuntimeError):
    """Raised when a training loss or gradient stops being finite."""


@dataclass
class TrainingConfig:
    """Learning rates, schedule lengths, architecture and mode flags."""

    lr_lf: float = 0.03      # low-fidelity block pretraining
    lr_disc: float = 0.002   # discriminative-loss updates
    lr_gen: float = 0.001    # generative-loss updates
    lr_sup: float = 0.05     # supervised-loss updates
    epochs_lf: int = 4000
    epochs_hf: int = 350
    lf_batch_cap: int = 32
    hidden_sizes: tuple[int, ...] = (32, 32)
    hidden_activations: tuple[str, ...] = ("sigmoid",)
    leaky_alpha: float = 0.01
    normalizer: str = "none"
    mode: str = MODE_COUPLED
    supervised_trick: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        self.hidden_sizes = tuple(int(s) for s in self.hidden_sizes)
        self.hidden_activations = tuple(self.hidden_activations)
        for name in ("lr_lf", "lr_disc", "lr_gen", "lr_sup"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.epochs_lf < 0 or self.epochs_hf < 0:
            raise ValueError("epoch counts must be non-negative")
        if self.lf_batch_cap < 1:
            raise ValueError("lf_batch_cap must be at least 1")
        if not self.hidden_sizes or any(s < 1 for s in self.hidden_sizes):
            raise ValueError("hidden_sizes must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.normalizer not in NORMALIZER_KINDS:
            raise ValueError(f"normalizer must be one of {NORMALIZER_KINDS}")
        n_acts = len(self.hidden_activations)
        if n_acts not in (1, len(self.hidden_sizes)):
            raise ValueError(
                f"{len(self.hidden_sizes)} hidden layers take 1 or "
                f"{len(self.hidden_sizes)} activations, got {n_acts}"
            )
        if self.lr_disc <= self.lr_gen:
            warnings.warn(
                "lr_disc <= lr_gen: the discriminative rate is usually the larger one",
                stacklevel=2,
            )

    def resolved_activations(self) -> list:
        names = self.hidden_activations
        if len(names) == 1:
            names = names * len(self.hidden_sizes)
        return [parse_activation(name, self.leaky_alpha) for name in names]

    def to_dict(self) -> dict:
        return {
            "lr_lf": self.lr_lf,
            "lr_disc": self.lr_disc,
            "lr_gen": self.lr_gen,
            "lr_sup": self.lr_sup,
            "epochs_lf": self.epochs_lf,
            "epochs_hf": self.epochs_hf,
            "lf_batch_cap": self.lf_batch_cap,
            "hidden_sizes": list(self.hidden_sizes),
            "hidden_activations": list(self.hidden_activations),
            "leaky_alpha": self.leaky_alpha,
            "normalizer": self.normalizer,
            "mode": self.mode,
            "supervised_trick": self.supervised_trick,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TrainingConfig":
        doc = dict(doc)
        doc["hidden_sizes"] = tuple(doc.get("hidden_sizes", (32, 32)))
        doc["hidden_activations"] = tuple(doc.get("hidden_activations", ("sigmoid",)))
        return cls(**doc)


@dataclass(frozen=True)
class TraceRow:
    """Loss values observed during one adversarial iteration."""

    iteration: int
    supervised: float
    generative: float
    discriminative: float


class GanMdfModel:
    """The fused surrogate: low-fidelity block, high-fidelity block, discriminator."""

    def __init__(
        self,
        lf_block: DenseNetwork,
        hf_block: DenseNetwork,
        discriminator: DenseNetwork,
        input_norm: Normalizer | None = None,
        lf_output_norm: Normalizer | None = None,
        hf_output_norm: Normalizer | None = None,
    ) -> None:
        d1, d2 = lf_block.input_width, lf_block.output_width
        if hf_block.input_width != d1 + d2:
            raise ValueError(
                f"high-fidelity block input width must be {d1 + d2}, got {hf_block.input_width}"
            )
        if hf_block.output_width != d2:
            raise ValueError("high- and low-fidelity block output widths differ")
        if discriminator.input_width != d2 or discriminator.output_width != 1:
            raise ValueError(f"discriminator must map {d2} -> 1")
        self.lf_block = lf_block
        self.hf_block = hf_block
        self.discriminator = discriminator
        self.input_norm = input_norm or Normalizer.identity()
        self.lf_output_norm = lf_output_norm or Normalizer.identity()
        self.hf_output_norm = hf_output_norm or Normalizer.identity()

    @classmethod
    def build(cls, d1: int, d2: int, config: TrainingConfig) -> "GanMdfModel":
        hidden = list(config.hidden_sizes)
        acts = config.resolved_activations()

        def rng(tag: int) -> np.random.Generator:
            return np.random.default_rng(np.random.SeedSequence([config.seed, tag]))

        lf = DenseNetwork([d1, *hidden, d2], acts, IDENTITY, seed=rng(_SEED_LF_NET))
        hf = DenseNetwork([d1 + d2, *hidden, d2], acts, IDENTITY, seed=rng(_SEED_HF_NET))
        disc = DenseNetwork([d2, *hidden, 1], acts, SIGMOID, seed=rng(_SEED_DISC_NET))
        return cls(lf, hf, disc)

    @property
    def d1(self) -> int:
        return self.lf_block.input_width

    @property
    def d2(self) -> int:
        return self.lf_block.output_width

    def fit_normalizers(self, dataset: MultiFidelityDataset, kind: str) -> None:
        """Fit input scaling on the low-fidelity inputs (the better-covering
        set) and output scaling per fidelity on the matching responses."""
        self.input_norm = Normalizer.fit(kind, dataset.lf_x)
        self.lf_output_norm = Normalizer.fit(kind, dataset.lf_y)
        self.hf_output_norm = Normalizer.fit(kind, dataset.hf_y)

    def generator_forward(self, x: np.ndarray) -> np.ndarray:
        """Compose the two generator blocks: x -> q -> response estimate.

        The high-fidelity block sees the input stacked before the feature
        vector: (x_1..x_d1, q_1..q_d2). Works on a vector or batch rows.
        """
        x = np.asarray(x, dtype=float)
        q, _ = self.lf_block.forward(x)
        stacked = np.concatenate([x, q], axis=-1)
        out, _ = self.hf_block.forward(stacked)
        return out

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        """Normalized-space generator evaluation wrapped in the fitted
        input transform and inverse output transform."""
        inputs = np.asarray(inputs, dtype=float)
        single = inputs.ndim == 1
        batch = np.atleast_2d(inputs)
        if batch.shape[1] != self.d1:
            raise ValueError(f"expected inputs of width {self.d1}, got shape {inputs.shape}")
        z = self.input_norm.transform(batch)
        raw = self.generator_forward(z)
        out = self.hf_output_norm.inverse_transform(raw)
        return out[0] if single else out

    def lf_checksum(self) -> str:
        return self.lf_block.checksum()

    def to_dict(self) -> dict:
        return {
            "lf_block": self.lf_block.to_dict(),
            "hf_block": self.hf_block.to_dict(),
            "discriminator": self.discriminator.to_dict(),
            "normalizers": {
                "inputs": self.input_norm.to_dict(),
                "lf_outputs": self.lf_output_norm.to_dict(),
                "hf_outputs": self.hf_output_norm.to_dict(),
            },
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GanMdfModel":
        norms = doc["normalizers"]
        return cls(
            DenseNetwork.from_dict(doc["lf_block"]),
            DenseNetwork.from_dict(doc["hf_block"]),
            DenseNetwork.from_dict(doc["discriminator"]),
            Normalizer.from_dict(norms["inputs"]),
            Normalizer.from_dict(norms["lf_outputs"]),
            Normalizer.from_dict(norms["hf_outputs"]),
        )


# -- losses ------------------------------------------------------------------


def supervised_loss(model: GanMdfModel, x: np.ndarray, y: np.ndarray) -> float:
    """Mean over the batch of the squared Euclidean error of the generator."""
    x, y = np.atleast_2d(np.asarray(x, float)), np.atleast_2d(np.asarray(y, float))
    if x.shape[0] == 0:
        raise ValueError("empty batch")
    resid = model.generator_forward(x) - y
    return float((resid**2).sum(axis=1).mean())


def generative_loss(model: GanMdfModel, x: np.ndarray) -> float:
    """Mean over the batch of (1 - D[G[x]])."""
    x = np.atleast_2d(np.asarray(x, float))
    if x.shape[0] == 0:
        raise ValueError("empty batch")
    scores, _ = model.discriminator.forward(model.generator_forward(x))
    return float((1.0 - scores).mean())


def discriminative_loss(model: GanMdfModel, x: np.ndarray, y: np.ndarray) -> float:
    """Mean of (1 - D[real response]) plus mean of D[generated response]."""
    x, y = np.atleast_2d(np.asarray(x, float)), np.atleast_2d(np.asarray(y, float))
    if x.shape[0] == 0:
        raise ValueError("empty batch")
    real, _ = model.discriminator.forward(y)
    fake, _ = model.discriminator.forward(model.generator_forward(x))
    return float((1.0 - real).mean() + fake.mean())


# -- training ----------------------------------------------------------------


def _batch_indices(n: int, cap: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Mini-batch index sets for one epoch. A batch covering the whole set
    keeps the natural order; otherwise rows are shuffled per epoch."""
    size = min(cap, n)
    if size >= n:
        return [np.arange(n)]
    perm = rng.permutation(n)
    return [perm[i : i + size] for i in range(0, n, size)]


def fit_regression(
    net: DenseNetwork,
    x: np.ndarray,
    y: np.ndarray,
    lr: float,
    epochs: int,
    batch_cap: int,
    rng: np.random.Generator,
    label: str = "regression",
) -> list[float]:
    """Adam on the mean squared-norm residual; returns per-epoch losses."""
    state = AdamState.for_network(net)
    trace: list[float] = []
    n = x.shape[0]
    for epoch in range(epochs):
        epoch_losses = []
        for idx in _batch_indices(n, batch_cap, rng):
            pred, tape = net.forward(x[idx])
            resid = pred - y[idx]
            loss = float((resid**2).sum(axis=1).mean())
            if not np.isfinite(loss):
                raise TrainingDivergedError(f"{label} loss became non-finite at epoch {epoch}")
            grads, _ = net.gradient(tape, 2.0 * resid / idx.size)
            try:
                net.apply_adam(grads, state, lr)
            except NonFiniteGradientError as exc:
                raise TrainingDivergedError(f"{label} diverged at epoch {epoch}: {exc}") from exc
            epoch_losses.append(loss)
        trace.append(float(np.mean(epoch_losses)))
    return trace


def pretrain_lf(model: GanMdfModel, lf_x: np.ndarray, lf_y: np.ndarray, config: TrainingConfig) -> list[float]:
    """Fit the low-fidelity block on normalized low-fidelity samples, then
    freeze it for the rest of training. Returns per-epoch losses."""
    lf_x = np.atleast_2d(np.asarray(lf_x, float))
    lf_y = np.atleast_2d(np.asarray(lf_y, float))
    if lf_x.shape[0] == 0:
        raise ValueError("empty low-fidelity sample set")
    if lf_x.shape[1] != model.d1 or lf_y.shape[1] != model.d2:
        raise ValueError("low-fidelity sample shapes do not match the model")
    if model.lf_block.frozen:
        raise FrozenNetworkError("low-fidelity block is already frozen")
    x = model.input_norm.transform(lf_x)
    y = model.lf_output_norm.transform(lf_y)
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, _SEED_LF_SHUFFLE]))
    trace = fit_regression(
        model.lf_block, x, y, config.lr_lf, config.epochs_lf, config.lf_batch_cap, rng,
        label="low-fidelity pretraining",
    )
    model.lf_block.freeze()
    return trace


def train_adversarial(
    model: GanMdfModel, hf_x: np.ndarray, hf_y: np.ndarray, config: TrainingConfig
) -> list[TraceRow]:
    """Run the interleaved adversarial schedule over the high-fidelity samples.

    One epoch is one pass over the high-fidelity set in mini-batches of
    min(32, n_hf); each mini-batch is one adversarial iteration running the
    five update stages described in the module docstring. Returns the
    per-iteration loss trace.
    """
    hf_x = np.atleast_2d(np.asarray(hf_x, float))
    hf_y = np.atleast_2d(np.asarray(hf_y, float))
    n = hf_x.shape[0]
    if n < 2:
        raise ValueError("adversarial training needs at least two high-fidelity samples")
    if hf_x.shape[1] != model.d1 or hf_y.shape[1] != model.d2:
        raise ValueError("high-fidelity sample shapes do not match the model")
    if not model.lf_block.frozen:
        raise FrozenNetworkError("low-fidelity block must be pretrained and frozen first")

    lf_sum_before = model.lf_checksum()
    x = model.input_norm.transform(hf_x)
    y = model.hf_output_norm.transform(hf_y)
    # the low-fidelity block is frozen, so its features are constant all run
    q, _ = model.lf_block.forward(x)
    gen_inputs = np.concatenate([x, q], axis=1)

    hf_net, disc = model.hf_block, model.discriminator
    st_hf_sup = AdamState.for_network(hf_net)
    st_hf_disc = AdamState.for_network(hf_net)
    st_hf_gen = AdamState.for_network(hf_net)
    st_disc_disc = AdamState.for_network(disc)
    st_disc_gen = AdamState.for_network(disc)
    coupled = config.mode == MODE_COUPLED
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, _SEED_HF_SHUFFLE]))

    def check(loss: float, name: str, iteration: int) -> float:
        if not np.isfinite(loss):
            raise TrainingDivergedError(
                f"{name} loss became non-finite at iteration {iteration}"
            )
        return loss

    def guard(stage: str, iteration: int, net: DenseNetwork, grads, state, lr: float) -> None:
        try:
            net.apply_adam(grads, state, lr)
        except NonFiniteGradientError as exc:
            raise TrainingDivergedError(
                f"non-finite gradient in {stage} update at iteration {iteration}"
            ) from exc

    trace: list[TraceRow] = []
    iteration = 0
    for _epoch in range(config.epochs_hf):
        for idx in _batch_indices(n, HF_BATCH_CAP, rng):
            iteration += 1
            gen_in, y_b = gen_inputs[idx], y[idx]
            b = idx.size

            def supervised_step(update: bool) -> float:
                pred, tape = hf_net.forward(gen_in)
                resid = pred - y_b
                loss = check(float((resid**2).sum(axis=1).mean()), "supervised", iteration)
                if update:
                    grads, _ = hf_net.gradient(tape, 2.0 * resid / b)
                    guard("supervised", iteration, hf_net, grads, st_hf_sup, config.lr_sup)
                return loss

            # stage 1: supervised refinement (measured even when disabled)
            loss_sup = supervised_step(update=config.supervised_trick)

            # stage 2: discriminative loss; both gradients are taken at the
            # current parameters, then applied together
            real, tape_real = disc.forward(y_b)
            fake_pred, tape_hf = hf_net.forward(gen_in)
            fake, tape_fake = disc.forward(fake_pred)
            loss_disc = check(
                float((1.0 - real).mean() + fake.mean()), "discriminative", iteration
            )
            g_real, _ = disc.gradient(tape_real, np.full_like(real, -1.0 / b))
            g_fake, into_fake = disc.gradient(tape_fake, np.full_like(fake, 1.0 / b))
            g_disc = g_real.add(g_fake)
            if coupled:
                g_hf, _ = hf_net.gradient(tape_hf, into_fake)
                guard("discriminative", iteration, hf_net, g_hf, st_hf_disc, config.lr_disc)
            guard("discriminative", iteration, disc, g_disc, st_disc_disc, config.lr_disc)

            # stage 3: supervised refinement
            if config.supervised_trick:
                supervised_step(update=True)

            # stage 4: generative loss
            fake_pred, tape_hf = hf_net.forward(gen_in)
            fake, tape_fake = disc.forward(fake_pred)
            loss_gen = check(float((1.0 - fake).mean()), "generative", iteration)
            g_disc, into_fake = disc.gradient(tape_fake, np.full_like(fake, -1.0 / b))
            g_hf, _ = hf_net.gradient(tape_hf, into_fake)
            guard("generative", iteration, hf_net, g_hf, st_hf_gen, config.lr_gen)
            if coupled:
                guard("generative", iteration, disc, g_disc, st_disc_gen, config.lr_gen)

            # stage 5: supervised refinement
            if config.supervised_trick:
                supervised_step(update=True)

            trace.append(TraceRow(iteration, loss_sup, loss_gen, loss_disc))

    if model.lf_checksum() != lf_sum_before:
        raise FrozenNetworkError("frozen low-fidelity block changed during adversarial training")
    return trace


def train(dataset: MultiFidelityDataset, config: TrainingConfig) -> tuple[GanMdfModel, list[TraceRow]]:
    """Full pipeline: build, fit normalizers, pretrain, adversarial phase."""
    model = GanMdfModel.build(dataset.d1, dataset.d2, config)
    model.fit_normalizers(dataset, config.normalizer)
    pretrain_lf(model, dataset.lf_x, dataset.lf_y, config)
    trace = train_adversarial(model, dataset.hf_x, dataset.hf_y, config)
    return model, trace


# -- persistence ---------------------------------------------------------------


def save_checkpoint(model: GanMdfModel, config: TrainingConfig, path) -> Path:
    path = Path(path)
    doc = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "seed": config.seed,
        "config": config.to_dict(),
        "model": model.to_dict(),
    }
    path.write_text(json.dumps(doc) + "\n", encoding="utf-8")
    return path


def load_checkpoint(path) -> tuple[GanMdfModel, TrainingConfig]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    version = doc.get("format_version")
    if version != CHECKPOINT_FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint format version {version!r}")
    return GanMdfModel.from_dict(doc["model"]), TrainingConfig.from_dict(doc["config"])


def write_loss_trace(trace: list[TraceRow], path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "loss_supervised", "loss_generative", "loss_discriminative"])
        for row in trace:
            writer.writerow([row.iteration, repr(row.supervised), repr(row.generative), repr(row.discriminative)])
    return path
