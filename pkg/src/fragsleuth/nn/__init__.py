from .layers import (
    conv2d_forward,
    conv2d_backward,
    maxpool2_forward,
    maxpool2_backward,
    dense_forward,
    dense_backward,
    relu_forward,
    relu_backward,
    softmax_xent,
)
from .optim import AdamConfig, ParamSet, adam_step, he_init

__all__ = [
    "conv2d_forward",
    "conv2d_backward",
    "maxpool2_forward",
    "maxpool2_backward",
    "dense_forward",
    "dense_backward",
    "relu_forward",
    "relu_backward",
    "softmax_xent",
    "AdamConfig",
    "ParamSet",
    "adam_step",
    "he_init",
]
