"""Kernel backend selection.

Hot numeric kernels are JIT-compiled with numba by default. Setting the
environment variable ``TITLESIM_BACKEND=numpy`` forces the pure-NumPy
(interpreted) fallback; ``TITLESIM_BACKEND=numba`` makes a missing numba
install a hard error instead of a silent fallback. Both paths run the same
source, so results are bit-identical across backends.
"""

import os

BACKEND_ENV_VAR = "TITLESIM_BACKEND"
_VALID = ("auto", "numba", "numpy")


def _resolve() -> str:
    choice = os.environ.get(BACKEND_ENV_VAR, "auto").strip().lower() or "auto"
    if choice not in _VALID:
        raise ValueError(
            f"{BACKEND_ENV_VAR} must be one of {'/'.join(_VALID)}, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


BACKEND = _resolve()
USING_NUMBA = BACKEND == "numba"


def jit_kernel(func):
    """Compile a hot kernel with numba, or leave it interpreted on the numpy backend."""
    if USING_NUMBA:
        from numba import njit

        return njit(cache=True)(func)
    return func
