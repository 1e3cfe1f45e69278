"""Kernel backend selection.

The compiled extension (colmedian._core) is preferred; the numpy fallback
(colmedian._pykernels) is used when the extension is missing or when
COLMEDIAN_PURE_PYTHON=1 is set.  Both expose the same two functions:

  evaluate_partition(dcf, dff, cell_start, cell_clients, cell_cost,
                     a_idx, b_idx, eps, ell, d_guess)
      -> (feasible, closed_indices | None, true_cost)

  exhaustive_best(dcf, m, ell) -> (closed_indices, cost)

dcf/dff must be C-contiguous float64, index arrays int64 and sorted
ascending; callers guarantee b_idx is non-empty and len(a_idx) >= ell >= 0.
"""

import os

from . import _pykernels

if os.environ.get("COLMEDIAN_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

evaluate_partition = _impl.evaluate_partition
exhaustive_best = _impl.exhaustive_best
