"""Named trainable parameters, the Adam update, and He initialization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import MissingGradient, ShapeMismatch
from ..seeding import SplitMix64


@dataclass
class AdamConfig:
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("beta1 and beta2 must lie in [0, 1)")


@dataclass
class ParamEntry:
    value: np.ndarray
    grad: np.ndarray | None = None
    adam_m: np.ndarray = field(init=False)
    adam_v: np.ndarray = field(init=False)

    def __post_init__(self):
        self.adam_m = np.zeros_like(self.value)
        self.adam_v = np.zeros_like(self.value)


class ParamSet:
    """Ordered mapping of named parameters with optimizer state."""

    def __init__(self):
        self._entries: dict[str, ParamEntry] = {}
        self.step_count = 0

    def add(self, name: str, value: np.ndarray) -> None:
        if name in self._entries:
            raise ValueError(f"duplicate parameter {name!r}")
        self._entries[name] = ParamEntry(np.asarray(value))

    def __getitem__(self, name: str) -> ParamEntry:
        return self._entries[name]

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def names(self) -> list[str]:
        return list(self._entries)

    def items(self):
        return self._entries.items()

    def value(self, name: str) -> np.ndarray:
        return self._entries[name].value

    def set_grad(self, name: str, grad: np.ndarray) -> None:
        entry = self._entries[name]
        if grad.shape != entry.value.shape:
            raise ShapeMismatch(
                f"gradient shape {grad.shape} != parameter shape {entry.value.shape} for {name!r}"
            )
        entry.grad = grad.astype(entry.value.dtype, copy=False)

    def clear_grads(self) -> None:
        for entry in self._entries.values():
            entry.grad = None


def adam_step(params: ParamSet, cfg: AdamConfig) -> None:
    """One Adam update over every entry; gradients must be populated."""
    missing = [name for name, e in params.items() if e.grad is None]
    if missing:
        raise MissingGradient(f"no gradient for parameters: {', '.join(missing)}")
    params.step_count += 1
    t = params.step_count
    b1, b2 = cfg.beta1, cfg.beta2
    bias1 = 1.0 - b1**t
    bias2 = 1.0 - b2**t
    for _name, e in params.items():
        g = e.grad
        e.adam_m *= b1
        e.adam_m += (1 - b1) * g
        e.adam_v *= b2
        e.adam_v += (1 - b2) * np.square(g)
        denom = np.sqrt(e.adam_v / bias2)
        denom += cfg.epsilon
        e.value -= cfg.learning_rate * (e.adam_m / bias1) / denom


def he_init(shape: tuple[int, ...], seed: int, dtype=np.float32) -> np.ndarray:
    """Seeded Gaussian weights with std sqrt(2 / fan_in).

    fan_in is the product of every dimension but the last (input patch
    size for convolution kernels, input width for dense weights).
    """
    if len(shape) < 2:
        raise ValueError("he_init needs at least a 2-d shape")
    fan_in = int(np.prod(shape[:-1]))
    std = float(np.sqrt(2.0 / fan_in))
    rng = SplitMix64(seed)
    values = rng.normal_array(int(np.prod(shape)), std=std)
    return values.reshape(shape).astype(dtype)
