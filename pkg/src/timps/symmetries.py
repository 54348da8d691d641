"""Closed-form product-symmetry solvers for the catalogued families.

Each solver returns operators that fix the family's fiducial state exactly,
so the cycle machinery can assemble strict N-site symmetries from them.  A
generic lift (`lift_symmetry_to_cycle`) recovers the bond operators behind
any claimed symmetry of a normal chain and doubles as an independent check
that the claim is realisable at the tensor level.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cycles import CycleCertificate, TripleOperator, enumerate_cycles
from .errors import InvalidInput, NotNormal, TheoremsInapplicable
from .families import aklt_tensor, ghz_tensor, w_tensor
from .linalg import (
    DEFAULT_TOL,
    SIGMA1,
    SIGMA3,
    PropResult,
    as_matrix,
    cluster_values,
    diag_p,
    is_regular,
    kernel,
    prop_check,
    solve_diag_dressing,
)
from .mps import (
    Rank3Tensor,
    amap,
    amap_left_inverse,
    apply_local,
    build_state,
    injectivity_length,
    states_equal,
)

_POW = np.linalg.matrix_power


def identity_certificate(tensor: Rank3Tensor, N: int) -> CycleCertificate:
    """The trivial symmetry: identity on every site."""
    op = TripleOperator(
        np.eye(tensor.d, dtype=complex),
        np.eye(tensor.D, dtype=complex),
        np.eye(tensor.D, dtype=complex),
        label="1",
    )
    return CycleCertificate((op,) * N, (1.0,) * N, label="trivial")


# ---------------------------------------------------------------------------
# injective tensors


def injective_symmetry(tensor: Rank3Tensor, x, y, tol: float = DEFAULT_TOL) -> TripleOperator:
    """Stabilizer element (s_{x,y}, x, y) of an injective fiducial state.

    s_{x,y} undoes the bond action through the tensor map:
    s = Amap (x^T (x) y)^{-1} Amap_left_inverse.
    """
    x = as_matrix(x)
    y = as_matrix(y)
    if not (is_regular(x) and is_regular(y)):
        raise InvalidInput("x and y must be regular")
    a = amap(tensor)
    ainv = amap_left_inverse(tensor, tol)
    s = a @ np.kron(np.linalg.inv(x.T), np.linalg.inv(y)) @ ainv
    op = TripleOperator(s, x, y, label="inj")
    return op.normalized_to(tensor, tensor)


def injective_symmetry_chain(tensor: Rank3Tensor, xs, tol: float = DEFAULT_TOL) -> CycleCertificate:
    """Site-dependent symmetry chain from bond matrices x_1 ... x_N.

    Site k carries s_{x_{k-1}^{-1}, x_k} (index 0 wraps to N), so consecutive
    junction products are exactly the identity.
    """
    xs = [as_matrix(x) for x in xs]
    n = len(xs)
    ops = []
    for k in range(n):
        prev = xs[k - 1]
        ops.append(injective_symmetry(tensor, np.linalg.inv(prev), xs[k], tol))
    return CycleCertificate(tuple(ops), (1.0,) * n, label="inj-chain")


# ---------------------------------------------------------------------------
# AKLT family


def aklt_s_of_x(x, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Physical 3x3 action s_x compensating the bond conjugation by x.

    Defined by expanding x A[i] x^{-1} in the (traceless) basis
    {A[0], A[1], A[2]}: the expansion coefficients are exactly s_x, and
    (s_x, x^{-1}, x) fixes the AKLT fiducial state.
    """
    x = as_matrix(x)
    if not is_regular(x, tol):
        raise InvalidInput("x must be regular")
    mats = aklt_tensor().matrices()
    basis = np.stack([m.ravel() for m in mats])  # 3 x 4
    xi = np.linalg.inv(x)
    rows = []
    for m in mats:
        target = (x @ m @ xi).ravel()
        coef, res, *_ = np.linalg.lstsq(basis.T, target, rcond=None)
        rows.append(coef)
    s = np.array(rows)
    if np.linalg.norm(basis.T @ s.T - np.stack([(x @ m @ xi).ravel() for m in mats]).T) > 1e-8 * max(
        np.linalg.norm(s), 1.0
    ):
        raise InvalidInput("conjugated matrices left the traceless span")
    return s


def aklt_triple(x, tol: float = DEFAULT_TOL) -> TripleOperator:
    """Stabilizer element (s_x, x^{-1}, x) of the AKLT fiducial state."""
    x = as_matrix(x)
    op = TripleOperator(aklt_s_of_x(x, tol), np.linalg.inv(x), x, label="aklt")
    return op.normalized_to(aklt_tensor(), aklt_tensor())


def aklt_type_symmetries(g, N: int, tol: float = DEFAULT_TOL) -> "SymmetrySolution":
    """Symmetries of the bond-deformed AKLT chain (deformation g) on N sites.

    The chain closes iff x is an eigenvector of x -> g^{-N} x g^N (any
    eigenvalue: bond matrices are only defined projectively).  One parameter
    family per eigenvalue branch that contains regular matrices; the sites
    carry s_x, s_{g^{-1} x g}, ...
    """
    g = as_matrix(g)
    if not is_regular(g, tol):
        raise InvalidInput("g must be regular")
    tensor = aklt_tensor(g)
    _require_applicable(tensor, N, tol)
    gi = np.linalg.inv(g)
    k = np.kron(_POW(gi, N), _POW(g, N).T)
    vals = np.linalg.eigvals(k)
    mus = cluster_values(vals, 1e-10)
    if len(mus) > 1:
        gaps = [abs(a - b) for i, a in enumerate(mus) for b in mus[i + 1:]]
        if min(gaps) < 1e-8:
            warnings.warn(
                "closure eigenvalues nearly degenerate; branch split may be unstable",
                stacklevel=2,
            )
    families = []
    for mu in mus:
        basis = kernel(k - mu * np.eye(4), 1e-10)
        mats = [v.reshape(2, 2) for v in basis]
        if not _has_regular_member(mats):
            continue
        families.append(
            ParametrizedFamily(
                description=f"x in the eigenspace of x -> g^-N x g^N at {mu:.6g}",
                parameter="x (regular 2x2 in the branch eigenspace)",
                basis=tuple(m.copy() for m in mats),
                instantiate=_make_aklt_type_instantiator(g, N, mu, mats, tol),
            )
        )
    certs = [identity_certificate(tensor, N)]
    return SymmetrySolution(
        family=f"aklt-type(g), N={N}", n=N, certificates=certs, families=tuple(families)
    )


def _make_aklt_type_instantiator(g, N, mu, basis_mats, tol):
    g = as_matrix(g)
    gi = np.linalg.inv(g)
    tensor = aklt_tensor(g)
    kmat = np.kron(_POW(gi, N), _POW(g, N).T)

    def instantiate(x) -> CycleCertificate:
        x = as_matrix(x)
        if not is_regular(x, tol):
            raise InvalidInput("branch instantiation needs a regular x")
        if np.linalg.norm(kmat @ x.ravel() - mu * x.ravel()) > 1e-8 * np.linalg.norm(x):
            raise InvalidInput("x is not in this closure eigenspace")
        ops = []
        xk = x
        for _ in range(N):
            op = TripleOperator(aklt_s_of_x(xk, tol), g @ np.linalg.inv(xk) @ gi, xk)
            ops.append(op.normalized_to(tensor, tensor))
            xk = gi @ xk @ g
        scalars = _junction_scalars(ops)
        return CycleCertificate(tuple(ops), scalars, label=f"aklt-type mu={mu:.4g}")

    return instantiate


def aklt_symmetries(N: int, tol: float = DEFAULT_TOL) -> "SymmetrySolution":
    """Symmetries of the undeformed AKLT chain: the uniform family s_x^(x)N."""
    sol = aklt_type_symmetries(np.eye(2, dtype=complex), N, tol)
    return SymmetrySolution(
        family=f"aklt, N={N}", n=N, certificates=sol.certificates, families=sol.families
    )


# ---------------------------------------------------------------------------
# GHZ family


def ghz_branch_solutions(b, tol: float = DEFAULT_TOL) -> list[TripleOperator]:
    """Finite set of GHZ_b stabilizer elements that participate in cycles.

    The stabilizer of the deformed GHZ fiducial state is the two-parameter
    family (flag k, bond dressings v, w).  A junction between flags (k, l)
    requires P_w (s1^k b s1^l) P_v = r b, which the diagonal-dressing solver
    decides; elements are assembled from the in-dressings and out-dressings
    each flag admits.  Both square roots of each nontrivial dressing are
    emitted (they are gauge-equivalent; enumeration merges them).
    """
    b = as_matrix(b)
    if b.shape != (2, 2) or not is_regular(b, tol):
        raise InvalidInput("b must be a regular 2x2 matrix")
    tensor = ghz_tensor(b)
    report = injectivity_length(tensor, tol=tol)
    if not report.normal:
        raise NotNormal("the deformed GHZ chain is not normal for this b")
    junctions = {}
    for k in (0, 1):
        for l in (0, 1):
            sol = solve_diag_dressing(_POW(SIGMA1, k) @ b @ _POW(SIGMA1, l), b, tol)
            if sol is not None:
                junctions[(k, l)] = sol  # (w, v, r)
    binv = np.linalg.inv(b)
    out = []
    for flag in (0, 1):
        ins = _unique_values([junctions[(k2, flag)][1] for k2 in (0, 1) if (k2, flag) in junctions])
        outs = _unique_values([junctions[(flag, l2)][0] for l2 in (0, 1) if (flag, l2) in junctions])
        for v in ins:
            for w in outs:
                for sign, tag in ((1.0, "+"), (-1.0, "-")):
                    if flag == 0 and sign < 0:
                        continue  # sign pairs of the trivial flag add nothing
                    # the physical part is sign-independent: (-v)(-w) = v w
                    op = TripleOperator(
                        _POW(SIGMA1, flag) @ diag_p(1.0 / (v * w)),
                        b @ _POW(SIGMA1, flag) @ diag_p(sign * v) @ binv,
                        diag_p(sign * w) @ _POW(SIGMA1, flag),
                        label=f"ghz k={flag} {tag}",
                    )
                    out.append(op.normalized_to(tensor, tensor))
    return out


def ghz_symmetry_certificates(b, N: int, tol: float = DEFAULT_TOL) -> list[CycleCertificate]:
    """All N-site symmetries of the deformed GHZ chain, as verified cycles."""
    b = as_matrix(b)
    tensor = ghz_tensor(b)
    _require_applicable(tensor, N, tol)
    ops = ghz_branch_solutions(b, tol)
    return enumerate_cycles(ops, N, tol=max(tol, 1e-9))


# ---------------------------------------------------------------------------
# cluster chain


def stabilizer_site_ops(exponents) -> list[np.ndarray]:
    """Site operators of the stabilizer product K_1^{i_1} ... K_N^{i_N}.

    K_i acts as sigma1 on site i and sigma3 on its two neighbours (cyclic),
    so site k collects sigma3^{i_{k-1}} sigma1^{i_k} sigma3^{i_{k+1}}.
    """
    bits = [int(x) for x in exponents]
    n = len(bits)
    return [
        _POW(SIGMA3, bits[(k - 1) % n]) @ _POW(SIGMA1, bits[k]) @ _POW(SIGMA3, bits[(k + 1) % n])
        for k in range(n)
    ]


def cluster_stabilizer(N: int, tol: float = DEFAULT_TOL) -> list[CycleCertificate]:
    """The 2^N symmetries of the periodic cluster chain, as cycles.

    Certificates are produced by the cycle engine from the branch solutions
    and then labeled with the stabilizer exponent string they realise; a
    failure to match would mean the two constructions disagree.
    """
    if N < 5:
        raise TheoremsInapplicable("cluster-chain symmetries need N >= 5")
    certs = enumerate_cycles(ghz_branch_solutions(_cluster_b(), tol), N, tol=max(tol, 1e-9))
    by_key = {}
    for bits in range(1 << N):
        exp = [(bits >> k) & 1 for k in range(N)]
        key = _site_ops_key(stabilizer_site_ops(exp))
        by_key[key] = "".join(map(str, exp))
    labeled = []
    for cert in certs:
        key = _site_ops_key(cert.site_ops())
        if key not in by_key:
            raise InvalidInput("enumerated cluster symmetry is not a stabilizer product")
        labeled.append(
            CycleCertificate(cert.ops, cert.scalars, label=f"K:{by_key[key]}")
        )
    if len(labeled) != 1 << N:
        raise InvalidInput(f"expected {1 << N} cluster symmetries, found {len(labeled)}")
    return labeled


def _cluster_b() -> np.ndarray:
    return as_matrix([[1, 1], [1, -1]])


# ---------------------------------------------------------------------------
# W family


def w_symmetries(b, N: int, tol: float = DEFAULT_TOL) -> "SymmetrySolution":
    """Symmetries of the deformed W chain on N sites.

    Odd chains have only the trivial symmetry.  Even chains carry a
    one-parameter family built from alternating upper-triangular site
    operators z(x), z(1/x), where z(x) = (1/x) [[x, -(x - 1/x) beta], [0, 1/x]]
    and beta = (b_01 + b_10) / b_00.
    """
    b = as_matrix(b)
    if b.shape != (2, 2) or not is_regular(b, tol):
        raise InvalidInput("b must be a regular 2x2 matrix")
    tensor = w_tensor(b)
    _require_applicable(tensor, N, tol)
    certs = [identity_certificate(tensor, N)]
    if N % 2 == 1:
        return SymmetrySolution(
            family=f"w(b), N={N} (odd: trivial only)", n=N, certificates=certs, families=()
        )
    fam = ParametrizedFamily(
        description="alternating pair z(x), z(1/x) repeated N/2 times",
        parameter="x (nonzero complex; x = 1 gives the identity)",
        basis=(),
        instantiate=_make_w_instantiator(b, N, tol),
    )
    return SymmetrySolution(
        family=f"w(b), N={N} (even: one-parameter family)",
        n=N,
        certificates=certs,
        families=(fam,),
    )


def w_stabilizer_triple(b, x, tol: float = DEFAULT_TOL) -> TripleOperator:
    """Deformed-W stabilizer element whose junction partner sits at 1/x.

    The bond dressings are pinned by the junction conditions:
    y = (x - 1/x) b_01 / b_00 (upper entry of the left-bond action) and
    z = (x - 1/x) b_10 / b_00 (lower entry of the right-bond action).
    """
    b = as_matrix(b)
    x = complex(x)
    if x == 0:
        raise InvalidInput("x must be nonzero")
    if abs(b[0, 0]) < tol * np.linalg.norm(b):
        raise NotNormal("the deformed W chain is not normal when b_00 vanishes")
    y = (x - 1 / x) * b[0, 1] / b[0, 0]
    z = (x - 1 / x) * b[1, 0] / b[0, 0]
    g = (1 / x) * np.array([[x, -y - z], [0, 1 / x]], dtype=complex)
    xmat = b @ np.array([[x, y], [0, 1 / x]], dtype=complex) @ np.linalg.inv(b)
    ymat = np.array([[x, 0], [z, 1 / x]], dtype=complex)
    op = TripleOperator(g, xmat, ymat, label=f"w x={x:.4g}")
    return op.normalized_to(w_tensor(b), w_tensor(b))


def _make_w_instantiator(b, N, tol):
    def instantiate(x) -> CycleCertificate:
        h1 = w_stabilizer_triple(b, x, tol)
        h2 = w_stabilizer_triple(b, 1 / complex(x), tol)
        ops = (h1, h2) * (N // 2)
        scalars = _junction_scalars(list(ops))
        return CycleCertificate(ops, scalars, label=f"w x={complex(x):.4g}")

    return instantiate


# ---------------------------------------------------------------------------
# generic machinery


@dataclass(frozen=True)
class ParametrizedFamily:
    """A continuous family of symmetries: constraint text plus an instantiator."""

    description: str
    parameter: str
    basis: tuple[np.ndarray, ...]
    instantiate: Callable[..., CycleCertificate] = field(repr=False)


@dataclass(frozen=True)
class SymmetrySolution:
    """Solver output: explicit certificates and/or parametrized families."""

    family: str
    n: int
    certificates: list[CycleCertificate]
    families: tuple[ParametrizedFamily, ...] = ()

    @property
    def has_nontrivial(self) -> bool:
        return len(self.families) > 0 or any(not c.is_trivial for c in self.certificates)


def verify_symmetry(
    cert: CycleCertificate, tensor: Rank3Tensor, N: int, tol: float = 1e-9
) -> PropResult:
    """Strictly compare the certificate's action on the chain with the chain."""
    if cert.n != N:
        raise InvalidInput(f"certificate length {cert.n} does not match N={N}")
    psi = build_state(tensor, N)
    out = apply_local(cert.site_ops(), psi)
    return states_equal(out, psi, mode="strict", tol=tol)


def lift_symmetry_to_cycle(
    site_ops, tensor: Rank3Tensor, tol: float = 1e-9
) -> CycleCertificate:
    """Recover the bond matrices behind a product symmetry of a normal chain.

    Solves the linear system C_k[i] x_{k+1} = x_k A[i] (C_k[i] the physically
    transformed matrices) for x_1 ... x_N; the solution space is
    one-dimensional exactly when the product operator is a symmetry of the
    chain realised at the tensor level.
    """
    site_ops = [as_matrix(s) for s in site_ops]
    n = len(site_ops)
    d, D = tensor.d, tensor.D
    if any(s.shape != (d, d) for s in site_ops):
        raise InvalidInput("site operators must be square and match the tensor")
    rows = []
    eye = np.eye(D, dtype=complex)
    for k in range(n):
        c = np.einsum("ij,jab->iab", site_ops[k], tensor.entries)
        for i in range(d):
            block = np.zeros((D * D, n * D * D), dtype=complex)
            block[:, ((k + 1) % n) * D * D : ((k + 1) % n) * D * D + D * D] += np.kron(
                c[i], eye
            )
            block[:, k * D * D : (k + 1) * D * D] -= np.kron(eye, tensor.entries[i].T)
            rows.append(block)
    big = np.concatenate(rows, axis=0)
    null = kernel(big, tol)
    if len(null) == 0:
        raise InvalidInput("the product operator is not a symmetry of the chain")
    if len(null) > 1:
        warnings.warn("gauge solution space is degenerate; taking one representative", stacklevel=2)
    xs = [null[0][k * D * D : (k + 1) * D * D].reshape(D, D) for k in range(n)]
    if any(not is_regular(x, 1e-8) for x in xs):
        raise InvalidInput("recovered gauge matrices are singular")
    ops = []
    for k in range(n):
        op = TripleOperator(site_ops[k], np.linalg.inv(xs[k]), xs[(k + 1) % n])
        ops.append(op.normalized_to(tensor, tensor, max(tol, 1e-8)))
    return CycleCertificate(tuple(ops), _junction_scalars(ops), label="lifted")


# ---------------------------------------------------------------------------
# helpers


def _require_applicable(tensor: Rank3Tensor, N: int, tol: float) -> int:
    report = injectivity_length(tensor, tol=tol)
    if not report.normal:
        raise NotNormal("chain is not normal; the cycle correspondence does not apply")
    L = report.injectivity_length
    if N < 2 * L + 1:
        raise TheoremsInapplicable(
            f"need N >= {2 * L + 1} sites (injectivity length {L}), got {N}"
        )
    return L


def _junction_scalars(ops) -> tuple[complex, ...]:
    scalars = []
    n = len(ops)
    for k in range(n):
        res = prop_check(
            (ops[k].y @ ops[(k + 1) % n].x).ravel(),
            np.eye(ops[k].D, dtype=complex).ravel(),
            1e-8,
        )
        if not res:
            raise InvalidInput(f"operators {k} and {(k + 1) % n} do not concatenate")
        scalars.append(res.scalar)
    return tuple(scalars)


def _site_ops_key(site_ops, digits: int = 8) -> tuple:
    """Key identifying a product operator: normalized sites plus global scale."""
    norm_sites = []
    scale = complex(1.0)
    for m in site_ops:
        m = np.asarray(m, dtype=complex)
        flat = m.ravel()
        lead = flat[int(np.argmax(np.abs(flat) > 1e-12 * max(np.abs(flat).max(), 1e-300)))]
        scale *= lead
        norm_sites.append(tuple(np.round(flat / lead, digits).tolist()))
    return (complex(np.round(scale, digits)), tuple(norm_sites))


def _unique_values(vals, tol: float = 1e-9) -> list[complex]:
    out: list[complex] = []
    for v in vals:
        if not any(abs(v - u) <= tol * max(1.0, abs(u)) for u in out):
            out.append(complex(v))
    return sorted(out, key=lambda z: (round(z.real, 12), round(z.imag, 12)))


def _has_regular_member(mats, tries: int = 8) -> bool:
    if not mats:
        return False
    rng = np.random.default_rng(0)
    for _ in range(tries):
        coef = rng.normal(size=len(mats)) + 1j * rng.normal(size=len(mats))
        m = sum(c * mat for c, mat in zip(coef, mats))
        if is_regular(m, 1e-8):
            return True
    return False
