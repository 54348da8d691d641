"""Feasibility decisions and explicit operator construction for chain
transformations between the catalogued families.

Every feasible plan carries a cycle certificate whose per-site operators,
applied to the dense source chain, reproduce the target chain (up to the
recorded scalar); site operators never increase the physical dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cycles import CycleCertificate, TripleOperator
from .errors import InvalidInput, NotInjective, NotNormal, TheoremsInapplicable, Unsupported
from .families import FamilySpec, aklt_tensor, get_tensor, w_tensor
from .linalg import (
    DEFAULT_TOL,
    HADAMARD_UNNORM,
    SIGMA1,
    SIGMA3,
    as_matrix,
    diag_p,
    is_regular,
    prop_check,
    solve_diag_dressing,
)
from .mps import Rank3Tensor, amap, amap_left_inverse, injectivity_length, is_injective
from .slocc import ghz_transform_cycle
from .symmetries import aklt_s_of_x, injective_symmetry

_POW = np.linalg.matrix_power


@dataclass(frozen=True)
class TransformPlan:
    """Decision record for 'source chain -> target chain on N sites'."""

    source: FamilySpec
    target: FamilySpec
    n: int
    feasible: bool
    certificate: CycleCertificate | None = None
    reason: str = ""
    alternates: tuple[CycleCertificate, ...] = field(default=())

    def __post_init__(self):
        if self.feasible and self.certificate is None:
            raise InvalidInput("feasible plans must carry a certificate")
        for cert in (self.certificate, *self.alternates):
            if cert is None:
                continue
            for op in cert.ops:
                if op.g.shape[0] > op.g.shape[1]:
                    raise InvalidInput("site operators must not increase the physical dimension")


def injective_to_any(
    source: Rank3Tensor,
    target: Rank3Tensor,
    N: int,
    dressing_xs=None,
    tol: float = DEFAULT_TOL,
) -> CycleCertificate:
    """Global transformation out of an injective chain.

    The single site operator composes the target tensor map with the left
    inverse of the source map; with ``dressing_xs`` (a list of N regular bond
    matrices) a site-dependent variant is built by chaining the injective
    stabilizer family through the same operator.
    """
    if not is_injective(source, tol):
        raise NotInjective("source tensor map has no left inverse")
    if source.D != target.D:
        raise InvalidInput("source and target must share the bond dimension")
    if N < 3:
        raise TheoremsInapplicable("need at least 3 sites")
    g0 = amap(target) @ amap_left_inverse(source, tol)
    eye = np.eye(source.D, dtype=complex)
    if dressing_xs is None:
        op = TripleOperator(g0, eye, eye, label="map-through").normalized_to(source, target)
        return CycleCertificate((op,) * N, (1.0,) * N, label="global")
    xs = [as_matrix(x) for x in dressing_xs]
    if len(xs) != N:
        raise InvalidInput(f"need {N} dressing matrices, got {len(xs)}")
    ops = []
    for k in range(N):
        s = injective_symmetry(source, np.linalg.inv(xs[k - 1]), xs[k], tol)
        op = TripleOperator(g0 @ s.g, s.x, s.y, label=f"map-through site {k}")
        ops.append(op.normalized_to(source, target))
    return CycleCertificate(tuple(ops), (1.0,) * N, label="global dressed")


# ---------------------------------------------------------------------------
# AKLT -> cluster


def _aklt_ghz_connector_pair(alpha: complex, beta: complex):
    """The two one-sided families connecting the AKLT fiducial state to the
    unnormalized GHZ state: a row-echelon branch h1(alpha, beta) (admissible
    for alpha != -beta^2/2) and the fixed branch h2."""
    alpha, beta = complex(alpha), complex(beta)
    if abs(2 * alpha + beta * beta) < 1e-12:
        raise InvalidInput("inadmissible parameters: alpha = -beta^2/2")
    s = np.sqrt(2 * alpha + beta * beta)
    a = np.array([[1, beta - s], [1, beta + s]], dtype=complex)
    bmat = np.array(
        [
            [-1 / (2 * np.sqrt(2) * (2 * alpha + beta**2)), (-beta - s) / (4 * (2 * alpha + beta**2))],
            [1, (beta - s) / np.sqrt(2)],
        ],
        dtype=complex,
    )
    cmat = np.array(
        [
            [(-beta - s) / np.sqrt(2), 1],
            [(beta - s) / (4 * (2 * alpha + beta**2)), -1 / (2 * np.sqrt(2) * (2 * alpha + beta**2))],
        ],
        dtype=complex,
    )
    m1 = np.array([[1, 0, alpha], [0, 1, beta]], dtype=complex)
    m2 = np.array([[1, 0, 0], [0, 0, 1]], dtype=complex)
    h1 = (a @ m1, bmat, cmat)  # literal operator factors (g, x-slot, y-slot)
    h2 = (m2 / np.sqrt(2), SIGMA1, SIGMA3)
    return h1, h2


def aklt_to_cluster(N: int, tol: float = DEFAULT_TOL) -> TransformPlan:
    """Transformation of the AKLT chain into the periodic cluster chain.

    The connector set splits into two one-sided families that only
    concatenate with each other, so closed chains exist exactly on even N.
    The emitted certificate alternates a dressed row-echelon connector
    (parameters fixed to alpha=1, beta=0) with the dressed fixed connector;
    the reversed alternation is attached as an alternate.
    """
    src = FamilySpec("AKLT")
    tgt = FamilySpec("Cluster")
    if N < 5:
        raise TheoremsInapplicable("the cycle correspondence needs N >= 5")
    if N % 2 == 1:
        return TransformPlan(
            src, tgt, N, False, reason="connector set admits only 2-cycles; N must be even"
        )
    (g1, x1, w1), (g2, x2, w2) = _aklt_ghz_connector_pair(1.0, 0.0)
    # dress with the GHZ stabilizer and the cluster deformation, then solve the
    # two junction constraints for the diagonal dressings (flags fixed to 0).
    sol_a = solve_diag_dressing(HADAMARD_UNNORM, np.linalg.inv(w1.T) @ SIGMA1, tol)
    sol_b = solve_diag_dressing(HADAMARD_UNNORM, SIGMA3 @ np.linalg.inv(x1), tol)
    if sol_a is None or sol_b is None:
        raise InvalidInput("junction dressing unsolvable; connector matrices corrupted")
    wa, pa, _ = sol_a  # y-dressing of the echelon branch, x-dressing of the fixed branch
    qb, vb, _ = sol_b  # y-dressing of the fixed branch, x-dressing of the echelon branch
    aklt = aklt_tensor()
    cluster = get_tensor(tgt)
    ha = TripleOperator(
        diag_p(1.0 / (vb * wa)) @ g1,
        HADAMARD_UNNORM @ diag_p(vb) @ x1,
        (diag_p(wa) @ w1).T,
        label="echelon connector",
    ).normalized_to(aklt, cluster)
    hb = TripleOperator(
        diag_p(1.0 / (pa * qb)) @ g2,
        HADAMARD_UNNORM @ diag_p(pa) @ x2,
        (diag_p(qb) @ w2).T,
        label="fixed connector",
    ).normalized_to(aklt, cluster)
    r_ab = prop_check((ha.y @ hb.x).ravel(), np.eye(2, dtype=complex).ravel(), 1e-9)
    r_ba = prop_check((hb.y @ ha.x).ravel(), np.eye(2, dtype=complex).ravel(), 1e-9)
    if not (r_ab and r_ba):
        raise InvalidInput("dressed connectors do not concatenate")
    cert = CycleCertificate((ha, hb) * (N // 2), (r_ab.scalar, r_ba.scalar) * (N // 2))
    alt = CycleCertificate((hb, ha) * (N // 2), (r_ba.scalar, r_ab.scalar) * (N // 2))
    return TransformPlan(src, tgt, N, True, cert, alternates=(alt,))


def aklt_to_aklt_type(g, N: int, tol: float = DEFAULT_TOL) -> TransformPlan:
    """Transformation of the AKLT chain into its bond deformation by g.

    Feasible exactly when g^N is proportional to the identity; the chain of
    bond matrices x_{k+1} = x_k g then closes and the sites carry the
    compensating physical actions s_{x_k}.
    """
    g = as_matrix(g)
    if not is_regular(g, tol):
        raise InvalidInput("g must be regular")
    src = FamilySpec("AKLT")
    tgt = FamilySpec("AKLT_g", g)
    if N < 5:
        raise TheoremsInapplicable("the cycle correspondence needs N >= 5")
    closure = prop_check(_POW(g, N).ravel(), np.eye(2, dtype=complex).ravel(), 1e-9)
    if not closure:
        return TransformPlan(src, tgt, N, False, reason="g^N is not proportional to the identity")
    aklt = aklt_tensor()
    target = aklt_tensor(g)
    gi = np.linalg.inv(g)
    ops = []
    scalars = []
    xk = np.eye(2, dtype=complex)
    for k in range(N):
        op = TripleOperator(aklt_s_of_x(xk, tol), g @ np.linalg.inv(xk), xk, label=f"site {k}")
        ops.append(op.normalized_to(aklt, target))
        xk = xk @ g
    for k in range(N):
        res = prop_check((ops[k].y @ ops[(k + 1) % N].x).ravel(), np.eye(2).ravel(), 1e-9)
        if not res:
            raise InvalidInput("deformation chain junction failed")
        scalars.append(res.scalar)
    cert = CycleCertificate(tuple(ops), tuple(scalars), label="deformation chain")
    return TransformPlan(src, tgt, N, True, cert)


def w_to_w(b, c, N: int, tol: float = DEFAULT_TOL) -> TransformPlan:
    """Global transformation between two normal W-generated chains.

    Solving the single-element closure condition fixes the stabilizer
    parameters in closed form: x^4 = det(c)/det(b) * (b_00/c_00)^2, then the
    triangular entries follow.  Exists for every normal pair, so all normal
    W-generated chains sit in one class.
    """
    b = as_matrix(b)
    c = as_matrix(c)
    src = FamilySpec("W_b", b)
    tgt = FamilySpec("W_b", c)
    for name, mat in (("source", b), ("target", c)):
        if not injectivity_length(w_tensor(mat), tol=tol).normal:
            raise NotNormal(f"{name} deformation gives a degenerate W chain")
    if N < 5:
        raise TheoremsInapplicable("the cycle correspondence needs N >= 5")
    x = ((np.linalg.det(c) / np.linalg.det(b)) * (b[0, 0] / c[0, 0]) ** 2) ** 0.25
    lam = c[0, 0] * x * x / b[0, 0]
    y = (lam * b[0, 1] - c[0, 1]) / (x * c[0, 0])
    z = x * (b[1, 0] - c[1, 0] / lam) / b[0, 0]
    gph = (1 / x) * np.array([[x, -y - z], [0, 1 / x]], dtype=complex)
    xmat = c @ np.array([[x, y], [0, 1 / x]], dtype=complex) @ np.linalg.inv(b)
    ymat = np.array([[x, 0], [z, 1 / x]], dtype=complex)
    op = TripleOperator(gph, xmat, ymat, label="w global").normalized_to(w_tensor(b), w_tensor(c))
    res = prop_check((op.y @ op.x).ravel(), np.eye(2, dtype=complex).ravel(), 1e-9)
    if not res:
        raise InvalidInput("W closure condition failed; deformations degenerate?")
    cert = CycleCertificate((op,) * N, (res.scalar,) * N, label="global")
    return TransformPlan(src, tgt, N, True, cert)


# ---------------------------------------------------------------------------
# dispatch


def _ghz_like_param(spec: FamilySpec) -> np.ndarray | None:
    if spec.name == "GHZ_b":
        return spec.param
    if spec.name == "GHZ":
        return np.eye(2, dtype=complex)
    if spec.name == "Cluster":
        return HADAMARD_UNNORM
    return None


def decide_transform(source: FamilySpec, target: FamilySpec, N: int, tol: float = DEFAULT_TOL) -> TransformPlan:
    """Feasibility decision with an explicit certificate for the catalogued pairs."""
    src_t = get_tensor(source)
    tgt_t = get_tensor(target)
    if tgt_t.d > src_t.d:
        return TransformPlan(
            source, target, N, False,
            reason=f"physical dimension cannot be increased ({src_t.d} -> {tgt_t.d})",
        )
    if is_injective(src_t, tol):
        dressing = None
        cert = injective_to_any(src_t, tgt_t, N, dressing, tol)
        return TransformPlan(source, target, N, True, cert)
    gb = _ghz_like_param(source)
    gc = _ghz_like_param(target)
    if gb is not None and gc is not None:
        for name, mat in (("source", gb), ("target", gc)):
            if not injectivity_length(get_tensor(FamilySpec("GHZ_b", mat)), tol=tol).normal:
                raise NotNormal(f"{name} chain is not normal; cycle theorems do not apply")
        cert = ghz_transform_cycle(gb, gc, N, tol)
        if cert is None:
            return TransformPlan(
                source, target, N, False,
                reason="cross ratios are neither equal nor reciprocal-on-even-N",
            )
        return TransformPlan(source, target, N, True, cert)
    wb = source.param if source.name == "W_b" else (np.eye(2, dtype=complex) if source.name == "W" else None)
    wc = target.param if target.name == "W_b" else (np.eye(2, dtype=complex) if target.name == "W" else None)
    if wb is not None and wc is not None:
        return w_to_w(wb, wc, N, tol)
    if (wb is None) != (wc is None) and src_t.d == 2 and tgt_t.d == 2:
        return TransformPlan(
            source, target, N, False,
            reason="fiducial states lie in different three-party classes",
        )
    if source.name == "AKLT":
        if target.name == "Cluster":
            return aklt_to_cluster(N, tol)
        if target.name == "AKLT_g":
            return aklt_to_aklt_type(target.param, N, tol)
        if target.name == "AKLT":
            return aklt_to_aklt_type(np.eye(2, dtype=complex), N, tol)
    raise Unsupported(f"no catalogued construction for {source.name} -> {target.name}")
