"""Pick the compiled kernels when available, else the numpy fallback."""
import os

if os.environ.get("LATTICEPRIME_PURE", "") not in ("", "0"):
    from . import _pykernels as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        from . import _pykernels as kernels

BACKEND = kernels.BACKEND
sieve_segment = kernels.sieve_segment
shift_match = kernels.shift_match
pair_labels = kernels.pair_labels

__all__ = ["BACKEND", "kernels", "sieve_segment", "shift_match", "pair_labels"]
