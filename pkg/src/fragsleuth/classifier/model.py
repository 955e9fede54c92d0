"""The fragment classifier network.

Feature extraction is three conv-conv-pool stages (3x3 kernels, widths
32/32, 64/64, 128/128 with 2x2 pooling after each pair), taking the
64x64x1 input down to 8x8x128.  The flattened 8192 features pass
through two 2048-unit ReLU layers into a K-way softmax.  Weights are
He-initialized from per-parameter streams derived from the run seed,
so a seed fixes the initial network bit for bit.
"""

from __future__ import annotations

import numpy as np

from ..errors import ClassTableMismatch, ShapeMismatch
from ..seeding import derive_seed
from ..nn.layers import (
    conv2d_backward,
    conv2d_forward,
    dense_backward,
    dense_forward,
    maxpool2_backward,
    maxpool2_forward,
    relu_backward,
    relu_forward,
    softmax_xent,
)
from ..nn.optim import ParamSet, he_init

_CONV_WIDTHS = (32, 32, 64, 64, 128, 128)
_DENSE_UNITS = (2048, 2048)
_FLAT = 8 * 8 * 128

ARCHITECTURE = "in64x64x1:c32,c32,p2,c64,c64,p2,c128,c128,p2,fc2048,fc2048,softmax"


class FragmentClassifier:
    """Forward/backward network over encoded fragment images."""

    def __init__(self, class_names: list[str], params: ParamSet, dtype=np.float32):
        if len(class_names) < 1:
            raise ValueError("need at least one class")
        self.class_names = list(class_names)
        self.params = params
        self.dtype = dtype

    @property
    def k(self) -> int:
        return len(self.class_names)

    @classmethod
    def param_shapes(cls, k: int) -> dict[str, tuple[int, ...]]:
        shapes: dict[str, tuple[int, ...]] = {}
        c_in = 1
        for i, width in enumerate(_CONV_WIDTHS, 1):
            shapes[f"conv{i}_kernels"] = (3, 3, c_in, width)
            shapes[f"conv{i}_bias"] = (width,)
            c_in = width
        d_in = _FLAT
        for i, units in enumerate(_DENSE_UNITS, 1):
            shapes[f"dense{i}_weights"] = (d_in, units)
            shapes[f"dense{i}_bias"] = (units,)
            d_in = units
        shapes["output_weights"] = (d_in, k)
        shapes["output_bias"] = (k,)
        return shapes

    @classmethod
    def build(cls, class_names: list[str], seed: str, dtype=np.float32) -> "FragmentClassifier":
        params = ParamSet()
        for name, shape in cls.param_shapes(len(class_names)).items():
            if name.endswith("_bias"):
                params.add(name, np.zeros(shape, dtype))
            else:
                params.add(name, he_init(shape, derive_seed(seed, "init", name), dtype))
        return cls(class_names, params, dtype)

    def _prepare(self, images: np.ndarray) -> np.ndarray:
        x = np.asarray(images, dtype=self.dtype)
        if x.ndim == 2:
            x = x[None, :, :, None]
        elif x.ndim == 3:
            x = x[:, :, :, None]
        if x.ndim != 4 or x.shape[1:] != (64, 64, 1):
            raise ShapeMismatch(f"expected (N,64,64,1) images, got {x.shape}")
        return x

    def forward(self, images: np.ndarray, with_cache: bool = False):
        """Logits for a batch; optionally the cache for backward()."""
        x = self._prepare(images)
        p = self.params
        caches = []
        h = x
        layer = 1
        for stage in range(3):
            for _ in range(2):
                h, c = conv2d_forward(
                    h, p.value(f"conv{layer}_kernels"), p.value(f"conv{layer}_bias"),
                    slot=f"conv{layer}" if with_cache else None,
                )
                caches.append(("conv", layer, c))
                h, gate = relu_forward(h)
                caches.append(("relu", None, gate))
                layer += 1
            h, c = maxpool2_forward(h)
            caches.append(("pool", None, c))
        shape_before_flatten = h.shape
        h = h.reshape(h.shape[0], -1)
        for i in (1, 2):
            h, c = dense_forward(h, p.value(f"dense{i}_weights"), p.value(f"dense{i}_bias"))
            caches.append(("dense", f"dense{i}", c))
            h, gate = relu_forward(h)
            caches.append(("relu", None, gate))
        logits, c = dense_forward(h, p.value("output_weights"), p.value("output_bias"))
        caches.append(("dense", "output", c))
        if with_cache:
            return logits, (caches, shape_before_flatten)
        return logits

    def backward(self, cache, grad_logits: np.ndarray) -> None:
        """Populate parameter gradients from the logits gradient."""
        caches, shape_before_flatten = cache
        p = self.params
        g = grad_logits.astype(self.dtype, copy=False)
        for kind, name, c in reversed(caches):
            if kind == "dense":
                g, gw, gb = dense_backward(g, c)
                p.set_grad(f"{name}_weights", gw)
                p.set_grad(f"{name}_bias", gb)
                if name == "dense1":
                    g = g.reshape(shape_before_flatten)
            elif kind == "relu":
                g = relu_backward(g, c)
            elif kind == "pool":
                g = maxpool2_backward(g, c)
            else:
                g, gk, gb = conv2d_backward(g, c)
                p.set_grad(f"conv{name}_kernels", gk)
                p.set_grad(f"conv{name}_bias", gb)

    def loss_and_grads(self, images: np.ndarray, labels: np.ndarray):
        """One supervised step's loss, probabilities, and populated grads."""
        logits, cache = self.forward(images, with_cache=True)
        loss, probs, grad_logits = softmax_xent(logits, np.asarray(labels))
        self.backward(cache, grad_logits)
        return loss, probs

    def predict_proba(self, images: np.ndarray, batch_size: int = 256) -> np.ndarray:
        """Class probabilities, batched to bound memory; rows sum to 1."""
        x = self._prepare(images)
        out = np.empty((x.shape[0], self.k), dtype=np.float64)
        for start in range(0, x.shape[0], batch_size):
            logits = self.forward(x[start : start + batch_size]).astype(np.float64)
            shifted = logits - logits.max(axis=1, keepdims=True)
            exp = np.exp(shifted)
            out[start : start + logits.shape[0]] = exp / exp.sum(axis=1, keepdims=True)
        return out

    def predict(self, images: np.ndarray):
        """(probabilities, argmax labels, confidences) for a batch."""
        probs = self.predict_proba(images)
        idx = probs.argmax(axis=1)
        labels = [self.class_names[i] for i in idx]
        confidence = probs[np.arange(len(idx)), idx]
        return probs, labels, confidence

    def require_classes(self, labels: list[str]) -> None:
        unknown = sorted(set(labels) - set(self.class_names))
        if unknown:
            raise ClassTableMismatch(
                f"labels {unknown} absent from model classes {self.class_names}"
            )
