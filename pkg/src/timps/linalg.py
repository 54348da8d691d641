"""Small dense complex linear algebra kernel.

Everything in this package lives on matrices of dimension at most a few
hundred, so plain numpy (SVD for ranks, `eig` for spectra) is used
throughout.  All operations are pure and treat their inputs as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

DEFAULT_TOL = 1e-10

ID2 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD_UNNORM = np.array([[1, 1], [1, -1]], dtype=complex)  # sum_ij (-1)^{ij} |i><j|


def as_matrix(entries) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting non-finite entries."""
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2:
        raise InvalidInput(f"expected a matrix, got array of rank {m.ndim}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput("matrix has non-finite entries")
    return m


def diag_p(z: complex) -> np.ndarray:
    """diag(z, 1/z) for z != 0."""
    z = complex(z)
    if z == 0:
        raise InvalidInput("diag(z, 1/z) needs z != 0")
    return np.array([[z, 0], [0, 1 / z]], dtype=complex)


def is_regular(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True when the smallest singular value is above tol times the largest."""
    s = np.linalg.svd(as_matrix(m), compute_uv=False)
    return bool(s[0] > 0 and s[-1] > tol * s[0])


def rank(m, tol: float = DEFAULT_TOL) -> int:
    """Numerical rank: number of singular values above tol * s_max.

    The zero matrix has rank 0 by convention.
    """
    if tol <= 0:
        raise InvalidInput("tol must be positive")
    m = as_matrix(m)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def kron(a, b) -> np.ndarray:
    """Kronecker product, entry ((i,k),(j,l)) = A_ij B_kl."""
    return np.kron(as_matrix(a), as_matrix(b))


def eigenpairs(m, tol: float = DEFAULT_TOL) -> list[tuple[complex, np.ndarray]]:
    """All eigenpairs of a small square matrix, with unit eigenvectors.

    Pairs are sorted by eigenvalue (real part, then imaginary part) so the
    output order is deterministic.  Each pair satisfies ||Mv - λv|| <= tol
    up to the conditioning of the problem; a residual check guards against
    silent `eig` failures.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise InvalidInput("eigenpairs needs a square matrix")
    vals, vecs = np.linalg.eig(m)
    order = np.lexsort((vals.imag, vals.real))
    out = []
    scale = max(np.linalg.norm(m), 1.0)
    for i in order:
        v = vecs[:, i]
        v = v / np.linalg.norm(v)
        if np.linalg.norm(m @ v - vals[i] * v) > max(tol, 1e3 * np.finfo(float).eps) * scale * 10:
            raise InvalidInput("eigensolver residual too large")
        out.append((complex(vals[i]), v))
    return out


@dataclass(frozen=True)
class PropResult:
    """Outcome of a proportionality test u ~ scalar * v."""

    proportional: bool
    scalar: complex = 0.0
    residual: float = 0.0

    def __bool__(self) -> bool:
        return self.proportional


def prop_check(u, v, tol: float = DEFAULT_TOL) -> PropResult:
    """Is u proportional to v?  Returns the best-fit scalar <v,u>/<v,v>.

    Matrices are compared entrywise (vectorised).  Two zero vectors count
    as proportional with scalar 1; a zero v against nonzero u does not.
    """
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    if u.shape != v.shape:
        raise InvalidInput("prop_check needs equal lengths")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nv == 0.0:
        if nu == 0.0:
            return PropResult(True, 1.0, 0.0)
        return PropResult(False, 0.0, 1.0)
    s = np.vdot(v, u) / np.vdot(v, v)
    res = np.linalg.norm(u - s * v) / max(nu, nv)
    return PropResult(bool(res <= tol), complex(s), float(res))


def kernel(m, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the (numerical) null space, as vectors."""
    m = np.asarray(m, dtype=complex)
    _, s, vh = np.linalg.svd(m)
    if s.size == 0:
        return [row.astype(complex) for row in np.eye(m.shape[1])]
    cutoff = tol * max(s[0], 1.0)
    null_dim = int(np.sum(s <= cutoff)) + (m.shape[1] - s.size)
    return [vh[-(i + 1)].conj() for i in range(null_dim)]


def cluster_values(vals, tol: float = DEFAULT_TOL) -> list[complex]:
    """Representative values of a list of near-duplicate complex numbers."""
    out: list[complex] = []
    for v in sorted(vals, key=lambda z: (z.real, z.imag)):
        if not any(abs(v - u) <= max(tol, tol * abs(u)) for u in out):
            out.append(complex(v))
    return out


def solve_diag_dressing(m, s, tol: float = DEFAULT_TOL):
    """Solve P_w M P_v = r S for diagonal dressings P_z = diag(z, 1/z).

    M and S are 2x2 with matching zero patterns and at least one row pair
    and one column pair of common nonzero entries.  Returns (w, v, r) with
    principal square roots, or None when no solution exists (pattern
    mismatch or cross-ratio mismatch; the final residual check covers the
    latter).
    """
    m = as_matrix(m)
    s = as_matrix(s)
    if m.shape != (2, 2) or s.shape != (2, 2):
        raise InvalidInput("solve_diag_dressing works on 2x2 matrices")
    nm = max(np.linalg.norm(m), np.finfo(float).tiny)
    ns = max(np.linalg.norm(s), np.finfo(float).tiny)
    nzm = np.abs(m) > tol * nm
    nzs = np.abs(s) > tol * ns
    if not np.array_equal(nzm, nzs):
        return None
    rho = np.where(nzm, s / np.where(nzm, m, 1.0), 0.0)
    v2 = w2 = None
    for i in range(2):
        if nzm[i, 0] and nzm[i, 1]:
            v2 = rho[i, 0] / rho[i, 1]
    for j in range(2):
        if nzm[0, j] and nzm[1, j]:
            w2 = rho[0, j] / rho[1, j]
    if v2 is None or w2 is None:
        return None
    w, v = np.sqrt(w2), np.sqrt(v2)
    i0, j0 = map(int, np.argwhere(nzm)[0])
    r = (w ** (1 - 2 * i0)) * (v ** (1 - 2 * j0)) * m[i0, j0] / s[i0, j0]
    if np.linalg.norm(diag_p(w) @ m @ diag_p(v) - r * s) > max(tol, 1e-12) * 1e2 * ns:
        return None
    return complex(w), complex(v), complex(r)
