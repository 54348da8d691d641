import numpy as np
import pytest

from timps.errors import InvalidInput
from timps.families import (
    CLI_NAMES,
    FamilySpec,
    aklt_tensor,
    cluster_tensor,
    get_tensor,
    ghz_tensor,
    vb_tensor,
    w_tensor,
)
from timps.linalg import HADAMARD_UNNORM
from timps.mps import build_state, fiducial_state
from timps.slocc import chi


def test_w_fiducial_expression():
    f = fiducial_state(w_tensor()).amplitudes
    expect = np.zeros(8, complex)
    expect[0b100] = expect[0b010] = expect[0b001] = 1.0
    assert np.allclose(f, expect)


def test_ghz_fiducial_expression():
    f = fiducial_state(ghz_tensor()).amplitudes
    expect = np.zeros(8, complex)
    expect[0] = expect[7] = 1.0
    assert np.allclose(f, expect)


def test_cluster_is_hadamard_deformed_ghz():
    assert np.allclose(
        cluster_tensor().entries, ghz_tensor(HADAMARD_UNNORM).entries
    )
    assert chi(HADAMARD_UNNORM).value == pytest.approx(-1)


def test_vb_fiducial_expression():
    f = fiducial_state(vb_tensor()).amplitudes.reshape(4, 2, 2)
    for i in range(2):
        for j in range(2):
            expect = np.zeros((4, 2, 2))
            expect[2 * i + j, i, j] = 1.0
            assert np.allclose(f[2 * i + j], expect[2 * i + j])


def test_ghz_identity_chain_is_ghz_state():
    for n in (4, 6):
        psi = build_state(get_tensor(FamilySpec("GHZ_b", np.eye(2))), n)
        expect = np.zeros(2**n, complex)
        expect[0] = expect[-1] = 1.0
        assert np.allclose(psi.amplitudes, expect)


def test_deformation_acts_on_left_bond(rng):
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    t = ghz_tensor(b)
    base = ghz_tensor()
    for j in range(2):
        assert np.allclose(t.matrices()[j], b @ base.matrices()[j])


def test_spec_validation():
    with pytest.raises(InvalidInput):
        FamilySpec("GHZ_b")  # missing parameter
    with pytest.raises(InvalidInput):
        FamilySpec("GHZ_b", np.array([[1, 1], [1, 1]]))  # singular
    with pytest.raises(InvalidInput):
        FamilySpec("AKLT", np.eye(2))  # unexpected parameter
    with pytest.raises(InvalidInput):
        FamilySpec("nope")


def test_cli_names_cover_catalog():
    assert set(CLI_NAMES.values()) == {
        "W", "GHZ", "Cluster", "AKLT", "VB", "GHZ_b", "W_b", "AKLT_g",
    }
    spec = FamilySpec.from_cli("ghz-b", [[2, 1], [1, 1]])
    assert spec.name == "GHZ_b"
    assert get_tensor(spec).d == 2


def test_aklt_deformation():
    g = np.diag([1.0, 2.0])
    t = aklt_tensor(g)
    base = aklt_tensor()
    for j in range(3):
        assert np.allclose(t.matrices()[j], g @ base.matrices()[j])
