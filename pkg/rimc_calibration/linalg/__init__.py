"""Linear algebra and random sources"""

from rimc_calibration.linalg.core import (
    Tensor,
    col2im,
    column_l2_norms,
    conv_output_size,
    gaussian,
    im2col,
    image_to_rows,
    matmul,
    rows_to_image,
)
from rimc_calibration.linalg.rng import RngStream, as_stream

__all__ = [
    "RngStream",
    "Tensor",
    "as_stream",
    "col2im",
    "column_l2_norms",
    "conv_output_size",
    "gaussian",
    "im2col",
    "image_to_rows",
    "matmul",
    "rows_to_image",
]
