"""Dense numeric layers with exact analytic gradients.

Four layer kinds cover the classifier: 3x3 same-padded convolution,
2x2 max pooling, fully connected affine, and ReLU, plus the fused
softmax + sparse cross-entropy head.  Everything runs on plain numpy
arrays in NHWC layout; convolutions lower to a single im2col matmul so
the heavy lifting stays in BLAS.  float32 is the training dtype,
float64 is used by the gradient-check tests.

Convention notes the gradient checks depend on: ReLU's derivative at
exactly 0 is 0, and pooling ties resolve to the first cell in row-major
window order.
"""

from __future__ import annotations

import numpy as np

from ..errors import LabelOutOfRange, OddSpatialDim, ShapeMismatch


def _check(cond: bool, msg: str):
    if not cond:
        raise ShapeMismatch(msg)


# Reusable scratch arrays for the convolution hot path.  The big im2col
# and padded-gradient buffers (hundreds of MB per step at batch 64) are
# expensive to fault in fresh every call; training reuses them via an
# explicit per-layer slot name.  Calls without a slot allocate normally.
_SCRATCH: dict = {}


def _scratch(slot, kind: str, shape: tuple[int, ...], dtype) -> np.ndarray:
    if slot is None:
        return np.empty(shape, dtype)
    key = (slot, kind)
    buf = _SCRATCH.get(key)
    if buf is None or buf.shape != shape or buf.dtype != dtype:
        buf = np.empty(shape, dtype)
        _SCRATCH[key] = buf
    return buf


def conv2d_forward(x: np.ndarray, kernels: np.ndarray, bias: np.ndarray, slot: str | None = None):
    """3x3 convolution, stride 1, zero 'same' padding.

    x (N,H,W,C), kernels (3,3,C,F), bias (F,) -> output (N,H,W,F) and a
    cache consumed by the backward pass.  ``slot`` names a scratch-buffer
    set to reuse across steps; each layer must use a distinct slot.
    """
    _check(x.ndim == 4, f"conv input must be 4-d, got {x.shape}")
    _check(kernels.ndim == 4 and kernels.shape[:2] == (3, 3), f"kernels must be (3,3,C,F), got {kernels.shape}")
    _check(kernels.shape[2] == x.shape[3], f"channel mismatch: input {x.shape} kernels {kernels.shape}")
    _check(bias.shape == (kernels.shape[3],), f"bias must be (F,), got {bias.shape}")
    n, h, w, c = x.shape
    f = kernels.shape[3]
    xp = _scratch(slot, "xp", (n, h + 2, w + 2, c), x.dtype)
    xp[:] = 0
    xp[:, 1 : h + 1, 1 : w + 1, :] = x
    cols = _scratch(slot, "cols", (n * h * w, 9 * c), x.dtype)
    for dy in range(3):
        for dx in range(3):
            k = dy * 3 + dx
            cols[:, k * c : (k + 1) * c] = xp[:, dy : dy + h, dx : dx + w, :].reshape(-1, c)
    out = np.empty((n * h * w, f), x.dtype)
    np.matmul(cols, kernels.reshape(9 * c, f), out=out)
    out += bias
    cache = (cols, x.shape, kernels, slot)
    return out.reshape(n, h, w, f), cache


def conv2d_backward(grad_out: np.ndarray, cache):
    """Gradients w.r.t. input, kernels, and bias.

    The weight gradient reuses the cached im2col matrix; the input
    gradient accumulates nine shifted products directly into a padded
    buffer, which avoids materializing a second im2col-sized array.
    """
    cols, x_shape, kernels, slot = cache
    n, h, w, c = x_shape
    f = kernels.shape[3]
    _check(grad_out.shape == (n, h, w, f), f"upstream grad shape {grad_out.shape} != {(n, h, w, f)}")
    g2 = grad_out.reshape(-1, f)
    grad_kernels = (cols.T @ g2).reshape(3, 3, c, f)
    grad_bias = g2.sum(axis=0)
    gxp = _scratch(slot, "gxp", (n, h + 2, w + 2, c), grad_out.dtype)
    gxp[:] = 0
    dpart = _scratch(slot, "dpart", (n * h * w, c), grad_out.dtype)
    for dy in range(3):
        for dx in range(3):
            np.matmul(g2, kernels[dy, dx].T, out=dpart)
            gxp[:, dy : dy + h, dx : dx + w, :] += dpart.reshape(n, h, w, c)
    grad_x = gxp[:, 1 : h + 1, 1 : w + 1, :].copy()
    return grad_x, grad_kernels, grad_bias


def maxpool2_forward(x: np.ndarray):
    """2x2 max pooling, stride 2; returns pooled output and argmax cache."""
    _check(x.ndim == 4, f"pool input must be 4-d, got {x.shape}")
    n, h, w, c = x.shape
    if h % 2 or w % 2:
        raise OddSpatialDim(f"pooling needs even spatial dims, got {h}x{w}")
    windows = (
        x.reshape(n, h // 2, 2, w // 2, 2, c)
        .transpose(0, 1, 3, 5, 2, 4)
        .reshape(n, h // 2, w // 2, c, 4)
    )
    argmax = windows.argmax(axis=-1)  # first index wins ties (row-major scan)
    out = np.take_along_axis(windows, argmax[..., None], axis=-1)[..., 0]
    return out, (argmax, x.shape)


def maxpool2_backward(grad_out: np.ndarray, cache):
    """Routes each upstream value to its window's argmax cell."""
    argmax, x_shape = cache
    n, h, w, c = x_shape
    _check(grad_out.shape == (n, h // 2, w // 2, c), f"upstream grad shape {grad_out.shape} unexpected")
    g = np.zeros((n, h // 2, w // 2, c, 4), dtype=grad_out.dtype)
    np.put_along_axis(g, argmax[..., None], grad_out[..., None], axis=-1)
    return (
        g.reshape(n, h // 2, w // 2, c, 2, 2)
        .transpose(0, 1, 4, 2, 5, 3)
        .reshape(n, h, w, c)
    )


def dense_forward(x: np.ndarray, weights: np.ndarray, bias: np.ndarray):
    _check(x.ndim == 2, f"dense input must be 2-d, got {x.shape}")
    _check(weights.ndim == 2 and x.shape[1] == weights.shape[0], f"dense shapes {x.shape} x {weights.shape}")
    _check(bias.shape == (weights.shape[1],), f"bias must be (U,), got {bias.shape}")
    return x @ weights + bias, (x, weights)


def dense_backward(grad_out: np.ndarray, cache):
    x, weights = cache
    _check(grad_out.shape == (x.shape[0], weights.shape[1]), f"upstream grad shape {grad_out.shape} unexpected")
    return grad_out @ weights.T, x.T @ grad_out, grad_out.sum(axis=0)


def relu_forward(x: np.ndarray):
    return np.maximum(x, 0), x > 0


def relu_backward(grad_out: np.ndarray, gate: np.ndarray):
    return grad_out * gate


def softmax_xent(logits: np.ndarray, labels: np.ndarray):
    """Mean sparse cross-entropy with fused softmax gradient.

    Returns (loss, probs, grad_logits); probabilities come from
    max-shifted exponentials, grad is (probs - onehot) / N.
    """
    _check(logits.ndim == 2, f"logits must be 2-d, got {logits.shape}")
    n, k = logits.shape
    labels = np.asarray(labels)
    _check(labels.shape == (n,), f"labels must be ({n},), got {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise LabelOutOfRange(f"labels must lie in [0, {k})")
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=1, keepdims=True)
    picked = probs[np.arange(n), labels]
    loss = float(-np.log(np.maximum(picked, np.finfo(probs.dtype).tiny)).mean())
    grad = probs.copy()
    grad[np.arange(n), labels] -= 1
    grad /= n
    return loss, probs, grad
