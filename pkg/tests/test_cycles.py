import numpy as np
import pytest

from timps.cycles import (
    CycleCertificate,
    TripleOperator,
    bc_concatenable,
    concatenable,
    dedupe_operators,
    enumerate_cycles,
    self_loops,
    two_cycle_targets,
)
from timps.errors import InvalidInput
from timps.families import vb_tensor
from timps.linalg import prop_check
from timps.slocc import chi
from timps.symmetries import aklt_triple, ghz_branch_solutions, injective_symmetry

from conftest import rand_complex, rand_regular


def rand_triple(rng, label=""):
    return TripleOperator(
        rand_complex(rng, (2, 2)), rand_regular(rng), rand_regular(rng), label
    )


class TestTripleOperator:
    def test_rejects_singular_bond_action(self, rng):
        with pytest.raises(InvalidInput):
            TripleOperator(np.eye(2), np.array([[1, 1], [1, 1]]), np.eye(2))

    def test_gauge_dedupe(self, rng):
        op = rand_triple(rng)
        lam, mu = 0.3 - 1.1j, 2.4 + 0.2j
        other = TripleOperator(op.g / (lam * mu), lam * op.x, mu * op.y)
        reps, assign = dedupe_operators([op, other])
        assert len(reps) == 1 and assign == [0, 0]

    def test_distinct_survive_dedupe(self, rng):
        reps, _ = dedupe_operators([rand_triple(rng), rand_triple(rng)])
        assert len(reps) == 2


class TestConcatenable:
    def test_self_loop_seed(self, rng):
        x = rand_regular(rng)
        op = TripleOperator(np.eye(2), x, np.linalg.inv(x))
        assert concatenable(op, op)

    def test_aklt_elements_self_only(self, rng):
        h1 = aklt_triple(rand_regular(rng))
        h2 = aklt_triple(rand_regular(rng))
        assert concatenable(h1, h1)
        assert concatenable(h2, h2)
        assert not concatenable(h1, h2)
        assert not concatenable(h2, h1)

    def test_injective_chaining(self, rng):
        vb = vb_tensor()
        x, y, z = (rand_regular(rng) for _ in range(3))
        h1 = injective_symmetry(vb, x, y)
        h2 = injective_symmetry(vb, np.linalg.inv(y), z)
        assert concatenable(h1, h2)


class TestBcConcatenable:
    def test_reduces_to_plain_with_identities(self, rng):
        eye = np.eye(2)
        agree = 0
        for _ in range(1000):
            h1, h2 = rand_triple(rng), rand_triple(rng)
            a = concatenable(h1, h2)
            b = bc_concatenable(h1, h2, eye, eye)
            assert bool(a) == bool(b)
            if a:
                assert a.scalar == pytest.approx(b.scalar)
            agree += 1
        assert agree == 1000

    def test_identity_pair_needs_proportional_targets(self, rng):
        h = TripleOperator(np.eye(2), np.eye(2), np.eye(2))
        b = rand_regular(rng)
        assert bc_concatenable(h, h, b, 3.7 * b)
        c = rand_regular(rng)
        expected = bool(prop_check(b.ravel(), c.ravel(), 1e-10))
        assert bool(bc_concatenable(h, h, b, c)) == expected

    def test_rejects_singular(self, rng):
        h = rand_triple(rng)
        with pytest.raises(InvalidInput):
            bc_concatenable(h, h, np.array([[1, 1], [1, 1]]), np.eye(2))


class TestEnumerate:
    def test_single_self_loop(self, rng):
        x = rand_regular(rng)
        op = TripleOperator(np.eye(2), x, np.linalg.inv(x))
        for n in (1, 2, 5, 8):
            certs = enumerate_cycles([op], n)
            assert len(certs) == 1 and certs[0].n == n

    def test_pure_two_cycle_parity(self, rng):
        x = rand_regular(rng)
        y = rand_regular(rng)
        # a -> b via y_a x_b = 1, b -> a via y_b x_a = 1; no self loops
        op_a = TripleOperator(rand_complex(rng, (2, 2)), x, y)
        op_b = TripleOperator(rand_complex(rng, (2, 2)), np.linalg.inv(y), np.linalg.inv(x))
        assert concatenable(op_a, op_b) and concatenable(op_b, op_a)
        assert not concatenable(op_a, op_a) and not concatenable(op_b, op_b)
        for n in (2, 4, 6):
            assert len(enumerate_cycles([op_a, op_b], n)) == 2  # two rotations
        for n in (1, 3, 5, 7):
            assert enumerate_cycles([op_a, op_b], n) == []

    def test_cluster_branch_set_counts(self):
        ops = ghz_branch_solutions(np.array([[1, 1], [1, -1]], complex))
        assert len(enumerate_cycles(ops, 5)) == 32

    def test_rotations_are_cycles(self, rng):
        ops = ghz_branch_solutions(np.array([[1, 1], [1, -1]], complex))
        certs = enumerate_cycles(ops, 5)
        keys = {tuple(op.canonical().g.ravel().round(8).tolist()[0] for op in c.ops) for c in certs}
        for cert in certs[:8]:
            rotated = cert.ops[1:] + cert.ops[:1]
            key = tuple(op.canonical().g.ravel().round(8).tolist()[0] for op in rotated)
            assert key in keys

    def test_sign_doubled_input_collapses(self, rng):
        b = rand_regular(rng)
        ops = ghz_branch_solutions(b)
        reps, _ = dedupe_operators(ops)
        assert len(reps) < len(ops)  # the two square-root branches merge
        assert len(enumerate_cycles(ops, 5)) == len(enumerate_cycles(reps, 5))

    def test_self_loop_listing(self, rng):
        b = rand_regular(rng)
        loops = self_loops(ghz_branch_solutions(b))
        assert len(loops) == 2  # identity and the single nontrivial global element


class TestTwoCycleTargets:
    def test_equal_inputs_rejected(self, rng):
        h = rand_triple(rng)
        with pytest.raises(InvalidInput):
            two_cycle_targets(h, h)
        lam, mu = 1.7, -0.4 + 0.1j
        gauged = TripleOperator(h.g / (lam * mu), lam * h.x, mu * h.y)
        with pytest.raises(InvalidInput):
            two_cycle_targets(h, gauged)

    def test_ghz_pair_reciprocal_cross_ratios(self, rng):
        b = rand_regular(rng)
        reps, _ = dedupe_operators(ghz_branch_solutions(b))
        identity_like = [o for o in reps if abs(o.g[0, 1]) < 1e-9][0]
        flipped = [o for o in reps if abs(o.g[0, 0]) < 1e-9][0]
        found = two_cycle_targets(identity_like, flipped)
        assert found
        for cmat, bmat, _ in found:
            assert chi(cmat).value * chi(bmat).value == pytest.approx(1.0, abs=1e-8)

    def test_degenerate_unit_matrix(self, rng):
        eye = np.eye(2)
        h_a = TripleOperator(np.diag([1.0, 2.0]), eye, eye)
        h_b = TripleOperator(np.diag([2.0, 1.0]), eye, eye)
        found = two_cycle_targets(h_a, h_b)
        assert found and all(abs(lam - 1) < 1e-9 for _, _, lam in found)
        # in the degenerate case every regular c works, with b = y_a c x_b
        c = rand_regular(rng)
        b = h_a.y @ c @ h_b.x
        assert bc_concatenable(h_a, h_b, c, b) and bc_concatenable(h_b, h_a, c, b)


class TestCertificate:
    def test_site_ops_fold_scalars(self, rng):
        x = rand_regular(rng)
        op = TripleOperator(np.eye(2), x, 2.0 * np.linalg.inv(x))
        res = concatenable(op, op)
        cert = CycleCertificate((op,) * 3, (res.scalar,) * 3)
        site = cert.site_ops()
        assert np.allclose(site[0], (res.scalar**3) * np.eye(2))
        assert np.allclose(site[1], np.eye(2))

    def test_trivial_flag(self):
        eye = np.eye(2)
        op = TripleOperator(eye, eye, eye)
        assert CycleCertificate((op,) * 4, (1.0,) * 4).is_trivial


class TestEnumeratorsAgreeOnRings:
    def test_random_ring_digraphs(self, rng):
        # a ring of operators h_i = (g_i, x_i, x_{i+1}^{-1}) plus the identity:
        # both enumerators must see exactly the same closed walks
        from timps.verify import cycle_walks_as_indices, exhaustive_small_cycles

        for ring in (2, 3, 4):
            xs = [rand_regular(rng) for _ in range(ring)]
            ops = [
                TripleOperator(
                    rand_complex(rng, (2, 2)), xs[i], np.linalg.inv(xs[(i + 1) % ring])
                )
                for i in range(ring)
            ]
            eye = np.eye(2)
            ops.append(TripleOperator(eye, eye, eye))
            for n in (4, 5, 6):
                walks = set(exhaustive_small_cycles(ops, n))
                certs = enumerate_cycles(ops, n)
                assert cycle_walks_as_indices(certs, ops) == walks
                expected_ring_walks = ring if n % ring == 0 else 0
                assert len(certs) == 1 + expected_ring_walks  # identity + ring rotations
