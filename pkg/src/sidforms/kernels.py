"""Backend selection for the counting inner loops.

Prefers the compiled extension; falls back to the pure-Python
implementations.  Set SIDFORMS_PURE=1 in the environment to force the
fallback (used by the benchmark for comparison).
"""

import os

if os.environ.get("SIDFORMS_PURE") == "1":
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as _impl

        BACKEND = "python"

count_members = _impl.count_members
count_members_subset = _impl.count_members_subset
pattern_histogram = _impl.pattern_histogram
weighted_product_sum = _impl.weighted_product_sum
count_bruteforce = _impl.count_bruteforce
