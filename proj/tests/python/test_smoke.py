import math

import numpy as np
import pytest

import qwalk

PI = math.pi


def test_version():
    assert qwalk.__version__


def test_floquet_unitary_at_gamma_zero():
    p = qwalk.WalkParams(0.2 * PI, -0.15 * PI, 0.0, 12, qwalk.Boundary.fbc)
    u = qwalk.build_floquet(p)
    assert np.allclose(u @ u.conj().T, np.eye(24), atol=1e-12)


def test_invariants_reference_point():
    p = qwalk.WalkParams(0.2 * PI, -0.15 * PI, 0.0, 60, qwalk.Boundary.pbc)
    inv = qwalk.invariants(p, qwalk.Contour.bloch, 512)
    assert (inv.nu0, inv.nupi) == (1.0, -1.0)


def test_edge_mode_fidelity():
    p = qwalk.WalkParams(0.2 * PI, -0.15 * PI, 0.0, 60, qwalk.Boundary.fbc)
    s = qwalk.spectrum_fbc(p)
    rep = qwalk.verify_against_numeric(p, qwalk.AlphaSector.zero, 1, s)
    assert rep.fidelity > 1 - 1e-6
    assert rep.eigen_residual < 1e-7


def test_invalid_parameters_raise_value_error():
    with pytest.raises(ValueError):
        qwalk.WalkParams(0.2 * PI, 0.1 * PI, 0.0, 7, qwalk.Boundary.fbc).validate()


def test_transfer_boundaries_match_closed_form():
    roots = qwalk.transfer_boundaries(0.2, 0.2 * PI, qwalk.AlphaSector.zero)
    expected = np.array([-0.9138, -0.7095, -0.2905, -0.0862]) * PI
    assert np.allclose(sorted(roots), expected, atol=1e-4 * PI)
