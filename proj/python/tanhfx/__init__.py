"""Fixed-point tanh approximation kernels.

Five methods are available: ``pwl``, ``taylor``, ``catmull-rom``, ``velocity`` and ``lambert``.
Build a ``KernelSpec``, then wrap it in a ``Kernel`` to evaluate, sweep or export tables.
"""

from ._core import (
    CalibrationError,
    Kernel,
    KernelSpec,
    QFormat,
    calibrate,
    cost,
    dequantize,
    domain_bound,
    lambert_value,
    quantize,
    reciprocal_nr,
    sweep_parameter,
    table1,
    tanh_ref,
    velocity_factor,
)

__all__ = [
    "CalibrationError",
    "Kernel",
    "KernelSpec",
    "QFormat",
    "calibrate",
    "cost",
    "dequantize",
    "domain_bound",
    "lambert_value",
    "quantize",
    "reciprocal_nr",
    "sweep_parameter",
    "table1",
    "tanh_ref",
    "velocity_factor",
]
