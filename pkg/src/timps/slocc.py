"""SLOCC invariants and the complete classification for d = D = 2 chains.

The classifying data for a GHZ-generated chain is the cross ratio
chi(b) = b_00 b_11 / (b_01 b_10) of the bond deformation, read off from the
defining tensor through a rank-one pencil decomposition of its fiducial
state.  Chains from W-class fiducial states form a single class whenever
they are normal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cycles import CycleCertificate, TripleOperator
from .errors import (
    Indeterminate,
    InvalidInput,
    NotNormal,
    ReducibleTensor,
    TheoremsInapplicable,
    Unsupported,
)
from .families import ghz_tensor
from .linalg import DEFAULT_TOL, SIGMA1, SIGMA2, as_matrix, diag_p, is_regular, kron, solve_diag_dressing
from .linalg import rank
from .mps import DenseState, Rank3Tensor, injectivity_length

_POW = np.linalg.matrix_power

CHI_MATCH_TOL = 1e-8  # chordal-metric tolerance for comparing cross ratios


@dataclass(frozen=True)
class ExtendedComplex:
    """A complex number or the point at infinity on the Riemann sphere."""

    value: complex | None

    @property
    def infinite(self) -> bool:
        return self.value is None

    @staticmethod
    def of(z: complex) -> "ExtendedComplex":
        return ExtendedComplex(complex(z))

    @staticmethod
    def infinity() -> "ExtendedComplex":
        return ExtendedComplex(None)

    def reciprocal(self) -> "ExtendedComplex":
        if self.infinite:
            return ExtendedComplex(0.0)
        if self.value == 0:
            return ExtendedComplex(None)
        return ExtendedComplex(1.0 / self.value)

    def chordal_distance(self, other: "ExtendedComplex") -> float:
        """Chordal metric on the sphere; treats 0 and infinity symmetrically."""
        if self.infinite and other.infinite:
            return 0.0
        if self.infinite or other.infinite:
            z = other.value if self.infinite else self.value
            return 2.0 / np.sqrt(1.0 + abs(z) ** 2)
        z, w = self.value, other.value
        return 2.0 * abs(z - w) / np.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))

    def isclose(self, other: "ExtendedComplex", tol: float = CHI_MATCH_TOL) -> bool:
        return bool(self.chordal_distance(other) <= tol)

    def __str__(self) -> str:
        return "inf" if self.infinite else f"{self.value:g}"


def chi(b, tol: float = DEFAULT_TOL) -> ExtendedComplex:
    """Cross ratio b_00 b_11 / (b_01 b_10), with infinity for vanishing
    off-diagonal products.  Raises when numerator and denominator both
    vanish (b close to rank one)."""
    b = as_matrix(b)
    if b.shape != (2, 2):
        raise InvalidInput("chi is defined for 2x2 matrices")
    scale = np.linalg.norm(b) ** 2
    num = b[0, 0] * b[1, 1]
    den = b[0, 1] * b[1, 0]
    if abs(den) <= tol * scale:
        if abs(num) <= tol * scale:
            raise Indeterminate("chi is 0/0: b is numerically rank deficient")
        return ExtendedComplex.infinity()
    return ExtendedComplex.of(num / den)


def three_tangle(state: DenseState) -> float:
    """Residual three-party entanglement of a three-qubit state.

    Computed as 4 |det B| with B_ij the sigma2 (x) sigma2 bilinear form of the
    two amplitude matrices; normalised so the unnormalized GHZ state scores 1
    and every W-class or product state scores 0.
    """
    if state.local_dims != (2, 2, 2):
        raise InvalidInput("three_tangle needs a three-qubit state")
    amp = state.amplitudes
    n = np.linalg.norm(amp)
    if n == 0:
        return 0.0
    phi = (amp / n).reshape(2, 4)
    bil = phi @ kron(SIGMA2, SIGMA2) @ phi.T
    return float(4.0 * abs(np.linalg.det(bil)))


KIND_GHZ_GENERIC = "GhzGeneric"
KIND_CLUSTER = "ClusterSet"
KIND_SYMMETRYLESS = "SymmetrylessSet"
KIND_GHZ_N = "GhzN_NonNormal"
KIND_W = "WClass"
KIND_PRODUCT = "Product"
KIND_ZERO = "Zero"


@dataclass(frozen=True)
class SloccClass:
    """Classification verdict for a d = D = 2 chain family."""

    kind: str
    chi: ExtendedComplex | None = None
    injectivity_length: int | None = None
    symmetry_order: str = ""
    detail: str = ""

    def minimal_sites(self) -> int:
        if self.injectivity_length is not None:
            return 2 * self.injectivity_length + 1
        return 3


def pencil_deformation(tensor: Rank3Tensor, tol: float = 1e-9):
    """Rank-one pencil decomposition of a GHZ-class d = D = 2 tensor.

    Writes the fiducial state as g (x) x (x) y^T acting on |000> + |111> and
    returns (b, g, residual) with b = y x, the deformation whose cross ratio
    labels the chain's class.  Requires two distinct rank-one members in the
    pencil spanned by the two tensor matrices (nonzero three-tangle).
    """
    if tensor.d != 2 or tensor.D != 2:
        raise Unsupported("pencil extraction implemented for d = D = 2")
    p0, p1 = tensor.matrices()
    q0 = np.linalg.det(p0)
    q2 = np.linalg.det(p1)
    q1 = p0[0, 0] * p1[1, 1] + p1[0, 0] * p0[1, 1] - p0[0, 1] * p1[1, 0] - p1[0, 1] * p0[1, 0]
    scale = max(np.linalg.norm(p0), np.linalg.norm(p1)) ** 2
    disc = q1 * q1 - 4 * q0 * q2
    if abs(disc) <= 1e-12 * scale**2:
        raise InvalidInput("pencil discriminant vanishes: fiducial state is not GHZ-class")
    if abs(q0) > 1e-12 * scale:
        ts = np.roots([q0, q1, q2])
        pairs = [(t, 1.0) for t in ts]
    else:
        pairs = [(1.0, 0.0), (-q2 / q1, 1.0)]
    us, rs = [], []
    for mu, nu in pairs:
        r1 = mu * p0 + nu * p1
        uu, ss, vh = np.linalg.svd(r1)
        us.append(uu[:, 0] * ss[0])
        rs.append(vh[0])
    x = np.stack(us, axis=1)  # columns u_m
    y = np.stack(rs, axis=0)  # rows r_m
    b = y @ x
    rank1 = [np.outer(us[m], rs[m]) for m in range(2)]
    coeffs, res, *_ = np.linalg.lstsq(
        np.stack([r.ravel() for r in rank1], axis=1), np.stack([p0.ravel(), p1.ravel()], axis=1), rcond=None
    )
    g = coeffs.T
    recon = np.stack([sum(g[j, m] * rank1[m] for m in range(2)) for j in range(2)])
    residual = float(np.linalg.norm(recon - tensor.entries) / np.linalg.norm(tensor.entries))
    if residual > max(tol, 1e-8):
        raise InvalidInput(f"pencil reconstruction failed (residual {residual:.2e})")
    return b, g, residual


def classify(tensor: Rank3Tensor, tol: float = DEFAULT_TOL) -> SloccClass:
    """Classification of the chain family generated by a d = D = 2 tensor."""
    if tensor.d != 2 or tensor.D != 2:
        raise Unsupported("classification implemented for d = D = 2")
    amp = tensor.entries.ravel()
    if np.linalg.norm(amp) == 0:
        return SloccClass(KIND_ZERO, symmetry_order="n.a.", detail="zero tensor")
    view = tensor.entries
    for axis, name in ((0, "physical"), (1, "left bond"), (2, "right bond")):
        mat = np.moveaxis(view, axis, 0).reshape(view.shape[axis], -1)
        if rank(mat, 1e-9) < view.shape[axis]:
            raise ReducibleTensor(f"{name} leg has deficient rank; reduce dimensions first")
    tau = three_tangle(DenseState((2, 2, 2), amp))
    report = injectivity_length(tensor, tol=tol)
    if tau > 1e-10:
        b, _, _ = pencil_deformation(tensor)
        verdict = classify_ghz_deformation(b)
    else:
        if report.normal:
            verdict = SloccClass(
                KIND_W,
                injectivity_length=report.injectivity_length,
                symmetry_order="1 (odd N) / continuum (even N)",
                detail="normal W-class chain",
            )
        else:
            verdict = SloccClass(
                KIND_PRODUCT, symmetry_order="n.a.", detail="W-class fiducial, degenerate chain"
            )
    if verdict.injectivity_length != report.injectivity_length:
        raise Unsupported(
            f"classification inconsistent: pattern predicts L={verdict.injectivity_length}, "
            f"span search finds L={report.injectivity_length}"
        )
    return verdict


def classify_ghz_deformation(b, tol: float = DEFAULT_TOL) -> SloccClass:
    """Classification of the GHZ-generated chain with deformation b."""
    b = as_matrix(b)
    if not is_regular(b, tol):
        raise InvalidInput("b must be regular")
    scale = np.abs(b).max()
    zero = np.abs(b) <= 1e-8 * scale
    off_zero = zero[0, 1] or zero[1, 0]
    diag_zero = zero[0, 0] or zero[1, 1]
    if off_zero:
        return SloccClass(
            KIND_GHZ_N,
            chi=ExtendedComplex.infinity(),
            symmetry_order="continuum",
            detail="not normal; shares the class of the N-party GHZ state",
        )
    if diag_zero and zero[0, 0] and zero[1, 1]:
        return SloccClass(
            KIND_GHZ_N,
            chi=ExtendedComplex.of(0.0),
            symmetry_order="continuum",
            detail="antidiagonal deformation; not normal (state vanishes for odd N)",
        )
    value = chi(b)
    if diag_zero:
        return SloccClass(
            KIND_SYMMETRYLESS,
            chi=value,
            injectivity_length=3,
            symmetry_order="1",
            detail="single diagonal zero",
        )
    if value.isclose(ExtendedComplex.of(-1.0)):
        return SloccClass(
            KIND_CLUSTER, chi=value, injectivity_length=2, symmetry_order="2^N"
        )
    return SloccClass(KIND_GHZ_GENERIC, chi=value, injectivity_length=2, symmetry_order="2")


def slocc_equivalent(a: SloccClass, b: SloccClass, N: int) -> bool:
    """Are chains of the two classes interconvertible on N sites?"""
    n_min = max(a.minimal_sites(), b.minimal_sites())
    if N < n_min:
        raise TheoremsInapplicable(f"equivalence on {N} sites undecided; need N >= {n_min}")
    if a.kind != b.kind:
        return False
    if a.kind == KIND_GHZ_GENERIC:
        if a.chi.isclose(b.chi):
            return True
        return N % 2 == 0 and a.chi.isclose(b.chi.reciprocal())
    return True


def ghz_transform_cycle(
    b, c, N: int, tol: float = DEFAULT_TOL
) -> CycleCertificate | None:
    """Explicit operator cycle carrying the b-deformed GHZ chain into the
    c-deformed one, or None when the chains are inequivalent at this N.

    A single dressed stabilizer element (a 1-cycle) exists iff the cross
    ratios agree; reciprocal cross ratios are connected by an alternating
    2-cycle, hence only on even chains.
    """
    b = as_matrix(b)
    c = as_matrix(c)
    src = ghz_tensor(b)
    tgt = ghz_tensor(c)
    reports = [injectivity_length(t, tol=tol) for t in (src, tgt)]
    if not all(r.normal for r in reports):
        raise NotNormal("transform cycles need normal chains on both sides")
    n_min = max(2 * r.injectivity_length + 1 for r in reports)
    if N < n_min:
        raise TheoremsInapplicable(f"need N >= {n_min}")
    binv = np.linalg.inv(b)
    # 1-cycle: P_w (s1^k c s1^k) P_v = r b for k in {0, 1}
    for k in (0, 1):
        sol = solve_diag_dressing(_POW(SIGMA1, k) @ c @ _POW(SIGMA1, k), b, tol)
        if sol is None:
            continue
        w, v, r = sol
        op = TripleOperator(
            _POW(SIGMA1, k) @ diag_p(1.0 / (v * w)),
            c @ _POW(SIGMA1, k) @ diag_p(v) @ binv,
            diag_p(w) @ _POW(SIGMA1, k),
            label=f"ghz 1-cycle k={k}",
        ).normalized_to(src, tgt)
        return CycleCertificate((op,) * N, (complex(r),) * N, label="global")
    # 2-cycle: junctions (0, 1) and (1, 0)
    if N % 2 == 1:
        return None
    sol01 = solve_diag_dressing(c @ SIGMA1, b, tol)
    sol10 = solve_diag_dressing(SIGMA1 @ c, b, tol)
    if sol01 is None or sol10 is None:
        return None
    w1, v2, r1 = sol01
    w2, v1, r2 = sol10
    h1 = TripleOperator(
        diag_p(1.0 / (v1 * w1)), c @ diag_p(v1) @ binv, diag_p(w1), label="ghz 2-cycle k=0"
    ).normalized_to(src, tgt)
    h2 = TripleOperator(
        SIGMA1 @ diag_p(1.0 / (v2 * w2)),
        c @ SIGMA1 @ diag_p(v2) @ binv,
        diag_p(w2) @ SIGMA1,
        label="ghz 2-cycle k=1",
    ).normalized_to(src, tgt)
    return CycleCertificate(
        (h1, h2) * (N // 2), (complex(r1), complex(r2)) * (N // 2), label="alternating"
    )


def equivalence_witness(b, c, N: int, tol: float = DEFAULT_TOL) -> CycleCertificate | None:
    """Operator list mapping the b-deformed GHZ chain to the c-deformed one.

    Returns None when the classes differ (consistent with
    ``slocc_equivalent``); raises for chains the cycle theorems do not cover.
    """
    cls_b = classify_ghz_deformation(b, tol)
    cls_c = classify_ghz_deformation(c, tol)
    if cls_b.kind == KIND_GHZ_N or cls_c.kind == KIND_GHZ_N:
        raise NotNormal("witness construction needs normal chains")
    if not slocc_equivalent(cls_b, cls_c, N):
        return None
    cert = ghz_transform_cycle(b, c, N, tol)
    if cert is None:
        raise InvalidInput("classes match but no cycle was found; tolerance too tight?")
    return cert
