"""Backend selection for the finite-lattice kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module is.  Set ``LATPROOF_KERNELS=python`` to force the fallback (used by the
benchmark and by the tests that compare both backends).
"""

import os

from . import _pykernels as python_backend

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and os.environ.get("LATPROOF_KERNELS", "") != "python":
    _active = compiled_backend
else:
    _active = python_backend

BACKEND = _active.BACKEND
tables_from_leq = _active.tables_from_leq
modular_failure = _active.modular_failure
distributive_failure = _active.distributive_failure
uvp_failure = _active.uvp_failure
sublattice_closed = _active.sublattice_closed
lemma_failures = _active.lemma_failures


def available_backends():
    out = {"python": python_backend}
    if compiled_backend is not None:
        out["cython"] = compiled_backend
    return out
