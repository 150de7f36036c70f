"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``GENUSRNA_PURE_PYTHON`` is set to ``1``, the pure-Python
module is used. Call sites go through this module's attributes
(``kernels.tour_order(...)``) so that :func:`use_backend` takes effect
everywhere, which the benchmarks rely on.
"""
import os

from . import _kernels_py

try:
    from . import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

_NAMES = ("plane_tree_partner", "tour_order", "cycle_ids", "cycle_min_mask", "tree_word",
          "glue_partner_path", "tree_glue")

BACKEND = None


def available_backends():
    return ["compiled", "python"] if _kernels_c is not None else ["python"]


def use_backend(name):
    """Switch every kernel to ``"compiled"`` or ``"python"``."""
    global BACKEND
    if name == "compiled":
        if _kernels_c is None:
            raise RuntimeError("compiled kernels are not built")
        module = _kernels_c
    elif name == "python":
        module = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    for attr in _NAMES:
        globals()[attr] = getattr(module, attr)
    BACKEND = name


if _kernels_c is not None and os.environ.get("GENUSRNA_PURE_PYTHON") != "1":
    use_backend("compiled")
else:
    use_backend("python")
