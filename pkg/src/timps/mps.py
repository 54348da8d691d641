"""Rank-3 tensors, fiducial states, dense MPS construction, normality analysis.

Conventions used everywhere:

* a tensor is a complex array ``A[j, a, b]`` with physical index ``j``
  (dimension d) and bond indices ``a, b`` (dimension D);
* the chain state on N sites has amplitudes ``Tr(A[j1] ... A[jN])`` with the
  first site index most significant in the flattened amplitude vector;
* states are kept unnormalized, so symmetry claims can be checked as strict
  equalities and transformations up to an explicit scalar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, NotInjective, ResourceLimit
from .linalg import DEFAULT_TOL, PropResult, as_matrix, prop_check, rank

# Hard cap on dense amplitude vectors; all supported analyses fit well below.
AMPLITUDE_CAP = 1 << 20


def blocking_bound(D: int) -> int:
    """Site count after which a normal tensor must have become injective:
    2 D^2 (6 + log2 D), which is 56 for D = 2."""
    return int(np.ceil(2 * D * D * (6 + np.log2(D))))


@dataclass(frozen=True)
class Rank3Tensor:
    """Defining tensor of a translationally invariant MPS."""

    entries: np.ndarray  # shape (d, D, D)

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.ndim != 3 or a.shape[1] != a.shape[2]:
            raise InvalidInput(f"tensor must have shape (d, D, D), got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInput("tensor has non-finite entries")
        if not np.any(a):
            raise InvalidInput("tensor must not be identically zero")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def D(self) -> int:
        return self.entries.shape[1]

    def matrix(self, j: int) -> np.ndarray:
        return self.entries[j]

    def matrices(self) -> list[np.ndarray]:
        return [self.entries[j] for j in range(self.d)]

    @staticmethod
    def from_matrices(mats) -> "Rank3Tensor":
        return Rank3Tensor(np.stack([as_matrix(m) for m in mats]))

    def gauged(self, x: np.ndarray) -> "Rank3Tensor":
        """Gauge transform A[j] -> x^-1 A[j] x (leaves the chain state fixed)."""
        x = as_matrix(x)
        xi = np.linalg.inv(x)
        return Rank3Tensor(np.einsum("ab,jbc,cd->jad", xi, self.entries, x))


@dataclass(frozen=True)
class DenseState:
    """Dense amplitude vector over sites with the stated local dimensions."""

    local_dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.local_dims)
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        if int(np.prod(dims)) != amp.size:
            raise InvalidInput("amplitude length does not match local dimensions")
        amp.setflags(write=False)
        object.__setattr__(self, "local_dims", dims)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def n(self) -> int:
        return len(self.local_dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor_view(self) -> np.ndarray:
        return self.amplitudes.reshape(self.local_dims)


@dataclass(frozen=True)
class NormalityReport:
    """Result of the span search for an injectivity length."""

    injectivity_length: int | None
    searched_up_to: int
    span_dims: tuple[int, ...] = field(default=())

    @property
    def normal(self) -> bool:
        return self.injectivity_length is not None

    @property
    def normal_for_sites(self) -> int | None:
        if self.injectivity_length is None:
            return None
        return 2 * self.injectivity_length + 1


def build_state(tensors, N: int, cap: int = AMPLITUDE_CAP) -> DenseState:
    """Dense chain state with amplitudes Tr(A_1[j1] ... A_N[jN]).

    ``tensors`` is either a single tensor (reused on every site) or a list of
    N tensors with equal bond dimension for a non-uniform chain.
    """
    if isinstance(tensors, Rank3Tensor):
        tensors = [tensors]
    tensors = list(tensors)
    if len(tensors) == 1:
        tensors = tensors * N
    if len(tensors) != N:
        raise InvalidInput(f"need 1 or {N} tensors, got {len(tensors)}")
    D = tensors[0].D
    if any(t.D != D for t in tensors):
        raise InvalidInput("all bond dimensions must agree")
    total = 1
    for t in tensors:
        total *= t.d
    if total > cap:
        raise ResourceLimit(f"state would need {total} amplitudes (cap {cap})")
    acc = tensors[0].entries
    for t in tensors[1:]:
        acc = np.einsum("sab,jbc->sjac", acc, t.entries).reshape(-1, D, D)
    amps = np.einsum("saa->s", acc)
    return DenseState(tuple(t.d for t in tensors), amps)


def fiducial_state(tensor: Rank3Tensor) -> DenseState:
    """Three-party state (d, D, D) whose amplitudes are the tensor entries."""
    return DenseState((tensor.d, tensor.D, tensor.D), tensor.entries.ravel())


def fiducial_from_pair_construction(tensor: Rank3Tensor) -> DenseState:
    """Fiducial state built by acting with the tensor map on two maximally
    entangled bond pairs; independent cross-check for ``fiducial_state``."""
    D = tensor.D
    phi = np.eye(D, dtype=complex).ravel()  # sum_a |aa>, grouped as (D, D)
    pair = np.einsum("i,j->ij", phi, phi).reshape(D, D, D, D)
    # apply the map on the two middle legs, then order slots as (j, a, b)
    out = np.einsum("jkl,aklb->jab", amap(tensor).reshape(tensor.d, D, D), pair)
    return DenseState((tensor.d, D, D), out.ravel())


def amap(tensor: Rank3Tensor) -> np.ndarray:
    """The d x D^2 matrix with row j = vec(A[j])."""
    return tensor.entries.reshape(tensor.d, tensor.D * tensor.D).copy()


def amap_left_inverse(tensor: Rank3Tensor, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose left inverse of the tensor map; exists iff injective."""
    a = amap(tensor)
    if rank(a, tol) < tensor.D * tensor.D:
        raise NotInjective(
            f"tensor map has column rank < {tensor.D ** 2}; no left inverse"
        )
    return np.linalg.pinv(a)


def is_injective(tensor: Rank3Tensor, tol: float = DEFAULT_TOL) -> bool:
    return rank(amap(tensor), tol) == tensor.D * tensor.D


def injectivity_length(
    tensor: Rank3Tensor, L_max: int | None = None, tol: float = DEFAULT_TOL
) -> NormalityReport:
    """Smallest L such that length-L matrix products span all of C^{DxD}.

    The span is grown incrementally: an orthonormal basis of the length-L
    product span is multiplied by each A[j] to produce length L+1.  Once the
    span saturates at dimension D^2 it must stay saturated; this is asserted
    as an internal consistency check.
    """
    D = tensor.D
    if L_max is None:
        L_max = blocking_bound(D)
    if L_max < 1:
        raise InvalidInput("L_max must be at least 1")
    full = D * D
    basis = _orthonormal_rows(amap(tensor), tol)
    dims = [basis.shape[0]]
    found = 1 if basis.shape[0] == full else None
    L = 1
    while L < L_max and found is None:
        prod = np.einsum("sab,jbc->sjac", basis.reshape(-1, D, D), tensor.entries)
        basis = _orthonormal_rows(prod.reshape(-1, full), tol)
        L += 1
        dims.append(basis.shape[0])
        if basis.shape[0] == full:
            found = L
    if found is not None and found < L_max:
        # saturation must persist one step further
        prod = np.einsum("sab,jbc->sjac", basis.reshape(-1, D, D), tensor.entries)
        nxt = _orthonormal_rows(prod.reshape(-1, full), tol).shape[0]
        if nxt != full:
            raise InvalidInput("span saturation did not persist; tensor is degenerate")
    return NormalityReport(found, L_max, tuple(dims))


def _orthonormal_rows(m: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (as rows) of the row space of m."""
    if not np.any(m):
        return np.zeros((0, m.shape[1]), dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=False)
    keep = s > tol * s[0]
    return vh[keep]


def apply_local(ops, state: DenseState) -> DenseState:
    """Apply a product operator, one matrix per site; sites may change dimension."""
    ops = [as_matrix(op) for op in ops]
    if len(ops) != state.n:
        raise InvalidInput(f"need {state.n} operators, got {len(ops)}")
    for k, op in enumerate(ops):
        if op.shape[1] != state.local_dims[k]:
            raise InvalidInput(
                f"operator {k} has {op.shape[1]} columns, site dimension is "
                f"{state.local_dims[k]}"
            )
    t = state.tensor_view()
    for k, op in enumerate(ops):
        t = np.moveaxis(np.tensordot(op, t, axes=([1], [k])), 0, k)
    return DenseState(tuple(op.shape[0] for op in ops), t.ravel())


def states_equal(
    psi: DenseState,
    phi: DenseState,
    mode: str = "strict",
    tol: float = 1e-9,
) -> PropResult:
    """Compare two states strictly or up to a scalar.

    Strict mode reports scalar 1 and the relative deviation ||psi - phi|| /
    ||phi||; up_to_scalar mode delegates to the proportionality test.
    """
    if psi.local_dims != phi.local_dims:
        raise InvalidInput("states live on different site dimensions")
    if mode == "strict":
        nphi = phi.norm()
        if nphi == 0.0:
            ok = psi.norm() == 0.0
            return PropResult(ok, 1.0, 0.0 if ok else 1.0)
        res = float(np.linalg.norm(psi.amplitudes - phi.amplitudes) / nphi)
        return PropResult(res <= tol, 1.0, res)
    if mode == "up_to_scalar":
        return prop_check(psi.amplitudes, phi.amplitudes, tol)
    raise InvalidInput(f"unknown comparison mode {mode!r}")
