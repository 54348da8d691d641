import numpy as np
import pytest

from timps.cycles import enumerate_cycles
from timps.errors import Indeterminate, NotNormal, ReducibleTensor, TheoremsInapplicable, Unsupported
from timps.families import cluster_tensor, ghz_tensor, w_tensor
from timps.linalg import HADAMARD_UNNORM, SIGMA1, diag_p
from timps.mps import DenseState, Rank3Tensor, apply_local
from timps.slocc import (
    ExtendedComplex,
    chi,
    classify,
    classify_ghz_deformation,
    equivalence_witness,
    pencil_deformation,
    slocc_equivalent,
    three_tangle,
)
from timps.symmetries import ghz_branch_solutions
from timps.verify import verify_claim

from conftest import rand_complex, rand_regular, rand_unitary


def ghz_state(n=3):
    amp = np.zeros(2**n, complex)
    amp[0] = amp[-1] = 1.0
    return DenseState((2,) * n, amp)


def w_state():
    amp = np.zeros(8, complex)
    amp[0b001] = amp[0b010] = amp[0b100] = 1.0
    return DenseState((2, 2, 2), amp)


class TestChi:
    def test_cluster_value(self):
        assert chi(HADAMARD_UNNORM).value == pytest.approx(-1)

    def test_diagonal_zero(self):
        assert chi([[1, 1], [1, 0]]).value == pytest.approx(0)

    def test_identity_is_infinite(self):
        assert chi(np.eye(2)).infinite

    def test_rank_one_indeterminate(self):
        with pytest.raises(Indeterminate):
            chi([[1, 1e-14], [1e-14, 1e-28]])

    def test_chordal_reciprocal_symmetry(self):
        near_zero = ExtendedComplex.of(1e-12)
        assert near_zero.reciprocal().isclose(ExtendedComplex.infinity())
        assert ExtendedComplex.of(2.0).reciprocal().value == pytest.approx(0.5)


class TestThreeTangle:
    def test_ghz_is_one(self):
        assert three_tangle(ghz_state()) == pytest.approx(1.0, abs=1e-10)

    def test_w_vanishes(self):
        assert abs(three_tangle(w_state())) <= 1e-12

    def test_product_state(self):
        amp = np.zeros(8, complex)
        amp[0] = 1.0
        assert three_tangle(DenseState((2, 2, 2), amp)) == pytest.approx(0.0, abs=1e-12)

    def test_local_unitary_invariance(self, rng):
        psi = ghz_state()
        for _ in range(10):
            ops = [rand_unitary(rng) for _ in range(3)]
            assert three_tangle(apply_local(ops, psi)) == pytest.approx(
                three_tangle(psi), abs=1e-10
            )

    def test_vanishes_on_product_cuts(self, rng):
        a = rand_complex(rng, 2)
        bc = rand_complex(rng, 4)
        amp = np.einsum("i,j->ij", a, bc).ravel()
        assert three_tangle(DenseState((2, 2, 2), amp)) <= 1e-10


class TestClassify:
    def test_cluster(self):
        cls = classify(cluster_tensor())
        assert cls.kind == "ClusterSet"
        assert cls.injectivity_length == 2
        assert cls.symmetry_order == "2^N"

    def test_symmetryless(self):
        cls = classify(ghz_tensor([[1, 1], [1, 0]]))
        assert cls.kind == "SymmetrylessSet"
        assert cls.injectivity_length == 3

    def test_w(self):
        cls = classify(w_tensor())
        assert cls.kind == "WClass" and cls.injectivity_length == 2

    def test_ghz_identity(self):
        cls = classify(ghz_tensor())
        assert cls.kind == "GhzN_NonNormal" and cls.injectivity_length is None

    def test_generic_deformation(self, rng):
        b = rand_regular(rng)
        cls = classify(ghz_tensor(b))
        assert cls.kind == "GhzGeneric"
        assert cls.chi.isclose(chi(b))

    def test_recovers_chi_after_gauge_and_mixing(self, rng):
        b = rand_regular(rng)
        g = rand_regular(rng)
        x = rand_regular(rng)
        mats = ghz_tensor(b).matrices()
        mixed = [
            sum(g[j, m] * (x @ mats[m] @ np.linalg.inv(x)) for m in range(2))
            for j in range(2)
        ]
        cls = classify(Rank3Tensor.from_matrices(mixed))
        assert cls.kind == "GhzGeneric"
        assert cls.chi.isclose(chi(b), 1e-6)

    def test_reducible_rejected(self, rng):
        ent = np.zeros((2, 2, 2), complex)
        ent[0] = rand_complex(rng, (2, 2))  # physical leg has rank one
        with pytest.raises(ReducibleTensor):
            classify(Rank3Tensor(ent))

    def test_unsupported_dims(self, rng):
        with pytest.raises(Unsupported):
            classify(Rank3Tensor(rand_complex(rng, (3, 2, 2))))

    def test_pencil_residual_is_small(self, rng):
        b = rand_regular(rng)
        bmat, _, residual = pencil_deformation(ghz_tensor(b))
        assert residual <= 1e-9
        assert chi(bmat).isclose(chi(b), 1e-8)


class TestEquivalence:
    def test_reciprocal_needs_even(self):
        a = classify_ghz_deformation([[2, 1], [1, 1]])   # chi = 2
        b = classify_ghz_deformation([[1, 2], [1, 1]])   # chi = 1/2
        assert slocc_equivalent(a, b, 6)
        assert not slocc_equivalent(a, b, 7)

    def test_cluster_always(self, rng):
        b = rand_regular(rng)
        b[1, 1] = -b[0, 1] * b[1, 0] / b[0, 0]
        a = classify_ghz_deformation(HADAMARD_UNNORM)
        c = classify_ghz_deformation(b)
        for n in (5, 6, 7, 8):
            assert slocc_equivalent(a, c, n)

    def test_distinct_generic_never(self):
        a = classify_ghz_deformation([[2, 1], [1, 1]])
        c = classify_ghz_deformation([[3, 1], [1, 1]])
        for n in (5, 6, 7, 8):
            assert not slocc_equivalent(a, c, n)

    def test_applicability_bound(self):
        a = classify_ghz_deformation([[2, 1], [1, 1]])
        with pytest.raises(TheoremsInapplicable):
            slocc_equivalent(a, a, 4)


class TestWitness:
    def test_identity_pair(self):
        b = np.array([[2, 1], [1, 1]], complex)
        cert = equivalence_witness(b, b, 5)
        report = verify_claim(cert, ghz_tensor(b), [5], ghz_tensor(b))
        assert report.all_passed

    def test_reciprocal_two_cycle(self):
        b = np.array([[2, 1], [1, 1]], complex)
        c = np.array([[1, 2], [1, 1]], complex)
        cert = equivalence_witness(b, c, 6)
        assert cert.label == "alternating"
        report = verify_claim(cert, ghz_tensor(b), [6], ghz_tensor(c))
        assert report.all_passed and report.worst_residual <= 1e-8
        assert equivalence_witness(b, c, 7) is None

    def test_unrelated_pair(self):
        assert equivalence_witness([[2, 1], [1, 1]], [[3, 1], [1, 1]], 6) is None

    def test_cluster_and_symmetryless_one_cycles(self, rng):
        b = rand_regular(rng)
        b[1, 1] = -b[0, 1] * b[1, 0] / b[0, 0]
        cert = equivalence_witness(HADAMARD_UNNORM, b, 5)
        assert cert.label == "global"
        assert verify_claim(cert, ghz_tensor(HADAMARD_UNNORM), [5], ghz_tensor(b)).all_passed
        s1 = np.array([[1, 1], [1, 0]], complex)
        s2 = np.array([[0, 1], [1, 1]], complex)  # zero on the other diagonal slot
        cert = equivalence_witness(s1, s2, 7)
        assert verify_claim(cert, ghz_tensor(s1), [7], ghz_tensor(s2)).all_passed

    def test_non_normal_rejected(self):
        with pytest.raises(NotNormal):
            equivalence_witness(np.eye(2), [[2, 1], [1, 1]], 5)


class TestConsistency:
    def test_symmetry_count_matches_class(self, rng):
        # the classifier's symmetry order and the cycle count must agree
        for _ in range(50):
            b = rand_regular(rng)
            cls = classify_ghz_deformation(b)
            assert cls.kind == "GhzGeneric" and cls.symmetry_order == "2"
            for n in (5, 6):
                assert len(enumerate_cycles(ghz_branch_solutions(b), n)) == 2
        cluster_counts = [len(enumerate_cycles(ghz_branch_solutions(HADAMARD_UNNORM), n)) for n in (5, 6)]
        assert cluster_counts == [32, 64]
        syml = np.array([[1, 1], [1, 0]], complex)
        assert len(enumerate_cycles(ghz_branch_solutions(syml), 7)) == 1

    def test_chi_gauge_invariance(self, rng):
        # chi is unchanged when b is dressed through any stabilizer element
        for _ in range(100):
            b = rand_regular(rng)
            k = rng.integers(0, 2)
            v, w = rand_complex(rng, 2)
            y = diag_p(w) @ np.linalg.matrix_power(SIGMA1, k)
            x = np.linalg.matrix_power(SIGMA1, k) @ diag_p(v)
            assert chi(y @ b @ x).isclose(chi(b), 1e-9)

    def test_random_deformations_are_generic(self, rng):
        # sampling evidence for the dominance of the generic set
        b = rand_complex(rng, (10_000, 2, 2))
        num = b[:, 0, 0] * b[:, 1, 1]
        den = b[:, 0, 1] * b[:, 1, 0]
        values = num / den
        assert np.all(np.abs(values + 1.0) > 1e-9)
        assert np.all(np.abs(values) > 1e-9)


def test_non_normal_ghz_class_equivalence():
    # every multipartite-entangled non-normal deformation shares one class
    a = classify_ghz_deformation(np.eye(2))
    b = classify_ghz_deformation(np.diag([2.0, 0.5]))
    assert a.kind == b.kind == "GhzN_NonNormal"
    assert slocc_equivalent(a, b, 6)
    c = classify_ghz_deformation([[2, 1], [1, 1]])
    assert not slocc_equivalent(a, c, 6)


def test_pencil_rejects_w_class():
    from timps.errors import InvalidInput
    from timps.families import w_tensor

    with pytest.raises(InvalidInput):
        pencil_deformation(w_tensor())
