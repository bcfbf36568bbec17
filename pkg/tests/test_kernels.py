import numpy as np
import pytest

from latproof import kernels
from latproof.enumerate import enumerate_lattices
from latproof.lattice import m3, n5

BACKENDS = kernels.available_backends()
LATTICES = [L for n in range(1, 7) for L in enumerate_lattices(n)] + [m3(), n5()]


def test_python_backend_always_there():
    assert "python" in BACKENDS
    assert kernels.BACKEND in {b.BACKEND for b in BACKENDS.values()}


@pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")
@pytest.mark.parametrize("L", LATTICES, ids=lambda L: f"n{L.n}")
def test_backends_agree(L):
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    leq = np.ascontiguousarray(L.leq)
    a, b = py.tables_from_leq(leq), cy.tables_from_leq(leq)
    assert (np.asarray(a[0]) == np.asarray(b[0])).all() and (np.asarray(a[1]) == np.asarray(b[1])).all()
    assert a[2] == b[2]
    M, J = L.meet, L.join
    assert py.modular_failure(leq, M, J) == cy.modular_failure(leq, M, J)
    assert py.distributive_failure(M, J) == cy.distributive_failure(M, J)
    assert py.uvp_failure(M, J) == cy.uvp_failure(M, J)
    assert tuple(py.lemma_failures(leq, M, J)) == tuple(cy.lemma_failures(leq, M, J))
    for idx in ([0], [0, L.n - 1], list(range(L.n)), list(range(1, L.n))):
        assert py.sublattice_closed(M, J, idx) == cy.sublattice_closed(M, J, idx)


def test_non_lattice_flag():
    leq = np.array([[1, 1, 1], [0, 1, 0], [0, 0, 1]], dtype=np.uint8)
    for backend in BACKENDS.values():
        assert backend.tables_from_leq(leq)[2] != 0


def test_forced_python_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, LATPROOF_KERNELS="python")
    code = "from latproof import kernels; from latproof.lattice import n5, is_modular; " \
           "print(kernels.BACKEND, is_modular(n5()))"
    r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert r.stdout.split() == ["python", "False"]
