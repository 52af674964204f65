"""Dense linear algebra helpers shared by every module"""

from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray

from rimc_calibration.exceptions import ParameterError, ShapeError
from rimc_calibration.linalg.rng import RngStream

Tensor: TypeAlias = NDArray[np.float64]


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product with shape checking

    Args:
        a (Tensor): m×n matrix
        b (Tensor): n×p matrix

    Returns:
        Tensor: m×p product

    Raises:
        ShapeError: If the operands are not 2-D or inner dimensions differ
    """
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError(f"matmul expects 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul inner dimensions differ: {a.shape} x {b.shape}")
    return a @ b


def column_l2_norms(a: Tensor) -> Tensor:
    """Per-column Euclidean norms as a 1×n row

    Raises:
        ShapeError: If ``a`` is not a non-empty matrix
    """
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"column_l2_norms expects a non-empty matrix, got {a.shape}")
    return np.sqrt(np.sum(a * a, axis=0, keepdims=True))


def gaussian(rng: RngStream, mu: float, sigma: float, shape) -> Tensor:
    """I.i.d. normal draws N(mu, sigma²)

    Raises:
        ParameterError: If sigma is negative
    """
    if sigma < 0:
        raise ParameterError(f"gaussian: sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return np.full(shape, float(mu), dtype=np.float64)
    return rng.generator.normal(mu, sigma, size=shape)


def conv_output_size(size: int, kernel: int, stride: int, pad: int) -> int:
    """Standard convolution output length along one axis"""
    return (size + 2 * pad - kernel) // stride + 1


def im2col(x: Tensor, kh: int, kw: int, stride: int = 1, pad: int = 0) -> Tensor:
    """Unroll image patches into rows

    Rows are ordered (batch, out_row, out_col); columns channel-major, then kernel
    row, then kernel column.

    Args:
        x (Tensor): batch×C×H×W input
        kh (int): kernel height
        kw (int): kernel width
        stride (int): stride along both axes
        pad (int): zero padding along both axes

    Returns:
        Tensor: (batch·H'·W') × (C·kh·kw) matrix

    Raises:
        ShapeError: If the input is not 4-D or the kernel does not fit
    """
    if x.ndim != 4:
        raise ShapeError(f"im2col expects a 4-D batch, got {x.shape}")
    if stride < 1 or pad < 0:
        raise ShapeError(f"im2col: invalid stride {stride} / pad {pad}")
    n, c, h, w = x.shape
    if kh > h + 2 * pad or kw > w + 2 * pad:
        raise ShapeError(
            f"im2col: kernel {kh}x{kw} larger than padded input {h + 2 * pad}x{w + 2 * pad}"
        )
    out_h = conv_output_size(h, kh, stride, pad)
    out_w = conv_output_size(w, kw, stride, pad)

    img = np.pad(x, [(0, 0), (0, 0), (pad, pad), (pad, pad)], "constant")
    col = np.zeros((n, c, kh, kw, out_h, out_w), dtype=np.float64)
    for y in range(kh):
        y_max = y + stride * out_h
        for xx in range(kw):
            x_max = xx + stride * out_w
            col[:, :, y, xx, :, :] = img[:, :, y:y_max:stride, xx:x_max:stride]

    # (n, c, kh, kw, oh, ow) -> (n, oh, ow, c, kh, kw)
    return np.ascontiguousarray(
        col.transpose(0, 4, 5, 1, 2, 3).reshape(n * out_h * out_w, -1)
    )


def col2im(
    cols: Tensor, input_shape: tuple[int, ...], kh: int, kw: int, stride: int = 1, pad: int = 0
) -> Tensor:
    """Adjoint of ``im2col``: scatter-add patch rows back into an image batch"""
    n, c, h, w = input_shape
    out_h = conv_output_size(h, kh, stride, pad)
    out_w = conv_output_size(w, kw, stride, pad)

    col = cols.reshape(n, out_h, out_w, c, kh, kw).transpose(0, 3, 4, 5, 1, 2)
    img = np.zeros((n, c, h + 2 * pad + stride - 1, w + 2 * pad + stride - 1))
    for y in range(kh):
        y_max = y + stride * out_h
        for xx in range(kw):
            x_max = xx + stride * out_w
            img[:, :, y:y_max:stride, xx:x_max:stride] += col[:, :, y, xx, :, :]
    return img[:, :, pad : pad + h, pad : pad + w]


def rows_to_image(rows: Tensor, n: int, out_h: int, out_w: int) -> Tensor:
    """Reshape (n·H'·W')×C conv output rows into an n×C×H'×W' batch"""
    channels = rows.shape[1]
    return np.ascontiguousarray(
        rows.reshape(n, out_h, out_w, channels).transpose(0, 3, 1, 2)
    )


def image_to_rows(img: Tensor) -> Tensor:
    """Inverse of ``rows_to_image``"""
    n, c, h, w = img.shape
    return np.ascontiguousarray(img.transpose(0, 2, 3, 1).reshape(n * h * w, c))
