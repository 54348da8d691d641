import numpy as np
import pytest

from timps.cycles import CycleCertificate, dedupe_operators
from timps.errors import InvalidInput, NotNormal, TheoremsInapplicable
from timps.families import aklt_tensor, cluster_tensor, ghz_tensor, vb_tensor, w_tensor
from timps.linalg import SIGMA1, SIGMA3, diag_p, kron, prop_check
from timps.mps import apply_local, build_state, states_equal
from timps.symmetries import (
    aklt_s_of_x,
    aklt_symmetries,
    aklt_triple,
    aklt_type_symmetries,
    cluster_stabilizer,
    ghz_branch_solutions,
    ghz_symmetry_certificates,
    identity_certificate,
    injective_symmetry,
    injective_symmetry_chain,
    lift_symmetry_to_cycle,
    stabilizer_site_ops,
    verify_symmetry,
    w_stabilizer_triple,
    w_symmetries,
)

from conftest import rand_complex, rand_regular


class TestInjective:
    def test_trivial(self):
        op = injective_symmetry(vb_tensor(), np.eye(2), np.eye(2))
        assert np.allclose(op.g, np.eye(4))

    def test_vb_closed_form(self, rng):
        x, y = rand_regular(rng), rand_regular(rng)
        op = injective_symmetry(vb_tensor(), x, y)
        assert np.allclose(op.g, kron(np.linalg.inv(x.T), np.linalg.inv(y)))

    def test_chain_is_symmetry(self, rng):
        xs = [rand_regular(rng) for _ in range(5)]
        cert = injective_symmetry_chain(vb_tensor(), xs)
        assert verify_symmetry(cert, vb_tensor(), 5, 1e-9)


class TestAkltSx:
    def test_identity(self):
        assert np.allclose(aklt_s_of_x(np.eye(2)), np.eye(3))

    def test_z_rotation_is_diagonal(self):
        theta = 0.73
        x = np.diag([np.exp(1j * theta / 2), np.exp(-1j * theta / 2)])
        s = aklt_s_of_x(x)
        assert np.allclose(s, np.diag([np.exp(-1j * theta), 1.0, np.exp(1j * theta)]))

    def test_projective_property(self, rng):
        # s_x = s_y exactly when x and y are proportional
        for _ in range(30):
            x = rand_regular(rng)
            y = rand_regular(rng)
            same = bool(prop_check(x.ravel(), y.ravel(), 1e-9))
            s_equal = bool(
                prop_check(aklt_s_of_x(x).ravel(), aklt_s_of_x(y).ravel(), 1e-8)
            )
            assert s_equal == same
            assert prop_check(
                aklt_s_of_x(1.7j * x).ravel(), aklt_s_of_x(x).ravel(), 1e-9
            )

    def test_uniform_family_is_symmetry(self, rng):
        trip = aklt_triple(rand_regular(rng))
        cert = CycleCertificate((trip,) * 5, (1.0,) * 5)
        assert verify_symmetry(cert, aklt_tensor(), 5, 1e-9)


class TestGhzBranches:
    def test_generic_unique_nontrivial(self, rng):
        for n in (5, 6):
            b = rand_regular(rng)
            certs = ghz_symmetry_certificates(b, n)
            assert len(certs) == 2
            nontrivial = [c for c in certs if not c.is_trivial]
            assert len(nontrivial) == 1
            expect = SIGMA1 @ diag_p(b[1, 1] / b[0, 0])
            for g in nontrivial[0].site_ops()[1:]:
                assert prop_check(g.ravel(), expect.ravel(), 1e-9)
            assert verify_symmetry(nontrivial[0], ghz_tensor(b), n, 1e-9)

    def test_cluster_deformation_has_four_junction_branches(self):
        b = np.array([[1, 1], [1, -1]], complex)
        ops = ghz_branch_solutions(b)
        reps, _ = dedupe_operators(ops)
        assert len(reps) == 8

    def test_singular_diagonal_gives_trivial_only(self):
        certs = ghz_symmetry_certificates(np.array([[1, 1], [1, 0]], complex), 7)
        assert len(certs) == 1 and certs[0].is_trivial

    def test_not_normal_rejected(self):
        with pytest.raises(NotNormal):
            ghz_branch_solutions(np.eye(2))

    def test_short_chain_rejected(self, rng):
        with pytest.raises(TheoremsInapplicable):
            ghz_symmetry_certificates(rand_regular(rng), 4)


class TestClusterStabilizer:
    def test_count_and_strictness(self):
        certs = cluster_stabilizer(5)
        assert len(certs) == 32
        labels = {c.label for c in certs}
        assert labels == {"K:" + format(bits, "05b") for bits in range(32)}
        psi = build_state(cluster_tensor(), 5)
        for cert in certs:
            out = apply_local(cert.site_ops(), psi)
            assert states_equal(out, psi, "strict", 1e-9)

    def test_zero_exponents_is_identity(self):
        ops = stabilizer_site_ops([0] * 6)
        assert all(np.allclose(op, np.eye(2)) for op in ops)

    def test_single_generator(self):
        exp = [0, 0, 1, 0, 0, 0]
        ops = stabilizer_site_ops(exp)
        psi = build_state(cluster_tensor(), 6)
        assert states_equal(apply_local(ops, psi), psi, "strict", 1e-9)
        assert np.allclose(ops[2], SIGMA1)
        assert np.allclose(ops[1], SIGMA3) and np.allclose(ops[3], SIGMA3)

    def test_requires_five_sites(self):
        with pytest.raises(TheoremsInapplicable):
            cluster_stabilizer(4)


class TestWSymmetries:
    def test_odd_trivial_only(self):
        sol = w_symmetries(np.eye(2), 5)
        assert not sol.has_nontrivial
        assert len(sol.certificates) == 1 and sol.certificates[0].is_trivial

    def test_even_family_verified(self, rng):
        b = rand_regular(rng)
        sol = w_symmetries(b, 6)
        assert len(sol.families) == 1
        cert = sol.families[0].instantiate(2.0)
        assert verify_symmetry(cert, w_tensor(b), 6, 1e-9)
        assert not cert.is_trivial

    def test_x_one_is_identity(self):
        sol = w_symmetries(np.eye(2), 6)
        cert = sol.families[0].instantiate(1.0)
        assert cert.is_trivial

    def test_odd_negative_control(self):
        # the even-chain generator pattern is not a symmetry on odd chains
        tensor = w_tensor()
        h1 = w_stabilizer_triple(np.eye(2), 2.0)
        h2 = w_stabilizer_triple(np.eye(2), 0.5)
        site = [h1.g, h2.g, h1.g, h2.g, h1.g]
        psi = build_state(tensor, 5)
        assert not states_equal(apply_local(site, psi), psi, "strict", 1e-3)

    def test_degenerate_deformation_rejected(self):
        with pytest.raises(NotNormal):
            w_symmetries(np.array([[0, 1], [1, 1]], complex), 6)


class TestAkltType:
    def test_identity_deformation_full_family(self, rng):
        sol = aklt_type_symmetries(np.eye(2), 5)
        assert len(sol.families) == 1
        assert len(sol.families[0].basis) == 4
        cert = sol.families[0].instantiate(rand_regular(rng))
        assert verify_symmetry(cert, aklt_tensor(), 5, 1e-9)

    def test_sixth_root_deformation(self):
        g = np.diag([1.0, np.exp(1j * np.pi / 3)])
        sol = aklt_type_symmetries(g, 7)
        assert len(sol.families) == 1
        basis = sol.families[0].basis
        assert len(basis) == 2
        for m in basis:
            assert abs(m[0, 1]) < 1e-9 and abs(m[1, 0]) < 1e-9
        cert = sol.families[0].instantiate(np.diag([1.0, 3.0 - 1.0j]))
        assert verify_symmetry(cert, aklt_tensor(g), 7, 1e-9)

    def test_trivial_instantiation(self):
        g = np.diag([1.0, np.exp(1j * np.pi / 3)])
        sol = aklt_type_symmetries(g, 6)
        cert = sol.families[0].instantiate(np.eye(2))
        assert cert.is_trivial

    def test_aklt_alias(self, rng):
        sol = aklt_symmetries(6)
        cert = sol.families[0].instantiate(rand_regular(rng))
        assert verify_symmetry(cert, aklt_tensor(), 6, 1e-9)


class TestVerifyAndLift:
    def test_identity_passes(self):
        cert = identity_certificate(ghz_tensor([[2, 1], [1, 1]]), 5)
        assert verify_symmetry(cert, ghz_tensor([[2, 1], [1, 1]]), 5)

    def test_cluster_generator_certificate(self):
        certs = cluster_stabilizer(6)
        k2 = [c for c in certs if c.label == "K:010000"]
        assert len(k2) == 1
        assert verify_symmetry(k2[0], cluster_tensor(), 6, 1e-9)

    def test_corrupted_certificate_fails(self):
        certs = cluster_stabilizer(5)
        cert = [c for c in certs if not c.is_trivial][0]
        site = cert.site_ops()
        site[2] = -site[2]
        psi = build_state(cluster_tensor(), 5)
        res = states_equal(apply_local(site, psi), psi, "strict", 1e-9)
        assert not res and res.residual > 0.1

    def test_lift_roundtrip(self, rng):
        b = rand_regular(rng)
        certs = ghz_symmetry_certificates(b, 5)
        nontrivial = [c for c in certs if not c.is_trivial][0]
        lifted = lift_symmetry_to_cycle(nontrivial.site_ops(), ghz_tensor(b))
        assert verify_symmetry(lifted, ghz_tensor(b), 5, 1e-8)

    def test_lift_rejects_non_symmetry(self, rng):
        with pytest.raises(InvalidInput):
            lift_symmetry_to_cycle([rand_complex(rng, (2, 2))] * 5, ghz_tensor(rand_regular(rng)))


class TestWDeformationCases:
    def test_diagonal_deformation_even_family(self):
        b = np.diag([1.3, -0.8]).astype(complex)
        sol = w_symmetries(b, 6)
        cert = sol.families[0].instantiate(1.5 - 0.2j)
        assert verify_symmetry(cert, w_tensor(b), 6, 1e-9)

    def test_single_offdiagonal_zero_even_family(self):
        b = np.array([[1.0, 0.0], [0.7, 1.2]], complex)
        sol = w_symmetries(b, 6)
        cert = sol.families[0].instantiate(0.4 + 0.9j)
        assert verify_symmetry(cert, w_tensor(b), 6, 1e-9)

    def test_antidiagonal_deformation_rejected(self):
        with pytest.raises(NotNormal):
            w_symmetries(np.array([[0, 1], [1, 0]], complex), 6)


def test_every_solver_certificate_verifies_for_all_lengths(rng):
    # family-permitting sweep over N = 5..8 at tolerance 1e-9
    b = rand_regular(rng)
    cluster_b = np.array([[1, 1], [1, -1]], complex)
    for n in (5, 6, 7, 8):
        for cert in ghz_symmetry_certificates(b, n):
            assert verify_symmetry(cert, ghz_tensor(b), n, 1e-9)
        for cert in ghz_symmetry_certificates(cluster_b, n)[: 2**n]:
            assert verify_symmetry(cert, ghz_tensor(cluster_b), n, 1e-9)
        sol = w_symmetries(np.eye(2), n)
        for cert in sol.certificates:
            assert verify_symmetry(cert, w_tensor(), n, 1e-9)
        if n % 2 == 0:
            cert = sol.families[0].instantiate(1.7 - 0.4j)
            assert verify_symmetry(cert, w_tensor(), n, 1e-9)
        asol = aklt_symmetries(n)
        cert = asol.families[0].instantiate(rand_regular(rng))
        assert verify_symmetry(cert, aklt_tensor(), n, 1e-9)
    g = np.diag([1.0, np.exp(1j * np.pi / 3)])
    for n in (5, 6):
        tsol = aklt_type_symmetries(g, n)
        for fam in tsol.families:
            pick = fam.basis[0] + (fam.basis[1] if len(fam.basis) > 1 else 0)
            from timps.linalg import is_regular

            if is_regular(pick, 1e-6):
                cert = fam.instantiate(pick)
                assert verify_symmetry(cert, aklt_tensor(g), n, 1e-9)
