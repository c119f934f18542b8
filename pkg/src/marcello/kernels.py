"""Select the compiled kernels when available, else the pure-Python ones.

Set ``MARCELLO_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("MARCELLO_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import canonical_labeling, enumerate_outcomes
else:
    try:
        from ._ckernels import canonical_labeling, enumerate_outcomes

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._pykernels import canonical_labeling, enumerate_outcomes

__all__ = ["BACKEND", "canonical_labeling", "enumerate_outcomes"]
