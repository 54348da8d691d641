"""Triple operators, concatenation predicates, and cycle enumeration.

A triple operator h = g (x) x (x) y^T acts on a three-party fiducial state:
``g`` on the physical leg, ``x`` on the left bond, ``y^T`` on the right
bond.  Two triples can be chained when ``y_1 x_2`` is proportional to the
identity; a closed chain of length N (a walk returning to its start in the
concatenation digraph) is exactly the data of an N-site product operator
acting on the chain state.

Triples are only defined up to the scalar gauge
``(g, x, y) ~ (g/(l*m), l*x, m*y)``; a canonical form (unit-determinant x,
unit-norm y with positive-real leading entry) is used to deduplicate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidInput
from .linalg import (
    DEFAULT_TOL,
    PropResult,
    as_matrix,
    cluster_values,
    is_regular,
    kernel,
    kron,
    prop_check,
)
from .mps import Rank3Tensor


@dataclass(frozen=True)
class TripleOperator:
    """Operator g (x) x (x) y^T on a fiducial state; x and y must be regular."""

    g: np.ndarray
    x: np.ndarray
    y: np.ndarray
    label: str = ""

    def __post_init__(self):
        g = as_matrix(self.g)
        x = as_matrix(self.x)
        y = as_matrix(self.y)
        for name, m in (("x", x), ("y", y)):
            if m.shape[0] != m.shape[1]:
                raise InvalidInput(f"{name} must be square")
            if not is_regular(m):
                raise InvalidInput(f"{name} must be regular")
        if x.shape != y.shape:
            raise InvalidInput("x and y must act on the same bond dimension")
        for m in (g, x, y):
            m.setflags(write=False)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def D(self) -> int:
        return self.x.shape[0]

    def apply_to_tensor(self, tensor: Rank3Tensor) -> Rank3Tensor:
        """Tensor of the transformed fiducial state: B[i] = sum_j g_ij x A[j] y."""
        if self.g.shape[1] != tensor.d or self.D != tensor.D:
            raise InvalidInput("operator does not match tensor dimensions")
        return Rank3Tensor(
            np.einsum("ij,ab,jbc,cd->iad", self.g, self.x, tensor.entries, self.y)
        )

    def maps_fiducial(
        self, source: Rank3Tensor, target: Rank3Tensor, tol: float = 1e-9
    ) -> PropResult:
        """Check h|source> ~ |target> and report the scalar."""
        out = self.apply_to_tensor(source).entries
        return prop_check(out.ravel(), target.entries.ravel(), tol)

    def normalized_to(
        self, source: Rank3Tensor, target: Rank3Tensor, tol: float = 1e-9
    ) -> "TripleOperator":
        """Rescale g so that h|source> = |target> exactly (raises otherwise)."""
        res = self.maps_fiducial(source, target, tol)
        if not res:
            raise InvalidInput(
                f"operator {self.label or '<unnamed>'} does not map the declared "
                f"source to the target (residual {res.residual:.2e})"
            )
        return replace(self, g=self.g / res.scalar)

    def canonical(self) -> "TripleOperator":
        """Canonical representative of the scalar-gauge class."""
        lam = 1.0 / np.sqrt(np.linalg.det(self.x))
        lead = _leading_entry(lam * self.x)
        if lead.real < -1e-14 or (abs(lead.real) <= 1e-14 and lead.imag < 0):
            lam = -lam
        yl = _leading_entry(self.y)
        mu = (np.conj(yl) / abs(yl)) / np.linalg.norm(self.y)
        return TripleOperator(self.g / (lam * mu), lam * self.x, mu * self.y, self.label)


def _leading_entry(m: np.ndarray) -> complex:
    flat = m.ravel()
    idx = int(np.argmax(np.abs(flat) > 1e-12 * max(np.abs(flat).max(), 1e-300)))
    return complex(flat[idx])


def dedupe_operators(
    ops, tol: float = 1e-9
) -> tuple[list[TripleOperator], list[int]]:
    """Canonicalize and merge gauge-equivalent triples.

    Returns the distinct canonical representatives and, for each input, the
    index of its representative.
    """
    reps: list[TripleOperator] = []
    assignment: list[int] = []
    for op in ops:
        c = op.canonical()
        hit = None
        for i, r in enumerate(reps):
            if (
                c.g.shape == r.g.shape
                and np.allclose(c.g, r.g, atol=tol, rtol=tol)
                and np.allclose(c.x, r.x, atol=tol, rtol=tol)
                and np.allclose(c.y, r.y, atol=tol, rtol=tol)
            ):
                hit = i
                break
        if hit is None:
            reps.append(c)
            assignment.append(len(reps) - 1)
        else:
            assignment.append(hit)
    return reps, assignment


def concatenable(h1: TripleOperator, h2: TripleOperator, tol: float = DEFAULT_TOL) -> PropResult:
    """h1 -> h2 iff y_1 x_2 is proportional to the identity."""
    if h1.D != h2.D:
        raise InvalidInput("operators act on different bond dimensions")
    return prop_check((h1.y @ h2.x).ravel(), np.eye(h1.D, dtype=complex).ravel(), tol)


def bc_concatenable(
    h1: TripleOperator, h2: TripleOperator, b, c, tol: float = DEFAULT_TOL
) -> PropResult:
    """h1 -> h2 carrying b into c: y_1 b x_2 proportional to c."""
    b = as_matrix(b)
    c = as_matrix(c)
    if not (is_regular(b) and is_regular(c)):
        raise InvalidInput("b and c must be regular")
    return prop_check((h1.y @ b @ h2.x).ravel(), c.ravel(), tol)


@dataclass(frozen=True)
class CycleCertificate:
    """A closed operator chain witnessing an N-site symmetry or transformation.

    ``scalars[k]`` is the junction scalar: ``y_k x_{k+1} = r_k 1`` for plain
    cycles, ``y_k b x_{k+1} = r_k c`` for (b -> c)-cycles; indices are cyclic.
    When every operator maps the source fiducial state to the target exactly,
    ``site_ops`` (junction scalars folded into the first site) applied to the
    N-site source state reproduces the target state exactly.
    """

    ops: tuple[TripleOperator, ...]
    scalars: tuple[complex, ...]
    label: str = ""
    junction: tuple[np.ndarray, np.ndarray] | None = None  # (b, c) for bc-cycles

    def __post_init__(self):
        if len(self.ops) != len(self.scalars):
            raise InvalidInput("one junction scalar per operator is required")
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "scalars", tuple(complex(s) for s in self.scalars))

    @property
    def n(self) -> int:
        return len(self.ops)

    @property
    def is_trivial(self) -> bool:
        """True when every site operator is proportional to the identity."""
        for op in self.ops:
            if op.g.shape[0] != op.g.shape[1]:
                return False
            if not prop_check(op.g.ravel(), np.eye(op.g.shape[0]).ravel(), 1e-9):
                return False
        return True

    def site_ops(self) -> list[np.ndarray]:
        """Per-site operators with the junction scalars folded into site 1."""
        correction = np.prod(self.scalars)
        out = [op.g.copy() for op in self.ops]
        out[0] = correction * out[0]
        return out

    def site_operator_key(self, digits: int = 8) -> tuple:
        """Hashable key identifying the full product operator (exact scalars)."""
        site = self.site_ops()
        full = site[0]
        for m in site[1:]:
            full = kron(full, m)
        return tuple(np.round(full.ravel(), digits).tolist())


def _edge_data(ops, mode, b, c, tol):
    n = len(ops)
    adj = [[] for _ in range(n)]
    scal = {}
    for i, j in itertools.product(range(n), repeat=2):
        if mode == "plain":
            res = concatenable(ops[i], ops[j], tol)
        else:
            res = bc_concatenable(ops[i], ops[j], b, c, tol)
        if res:
            adj[i].append(j)
            scal[(i, j)] = res.scalar
    return adj, scal


def enumerate_cycles(
    ops,
    N: int,
    mode: str = "plain",
    b=None,
    c=None,
    tol: float = DEFAULT_TOL,
    dedup: bool = True,
    max_cycles: int | None = 200_000,
) -> list[CycleCertificate]:
    """All length-N closed walks in the concatenation digraph of ``ops``.

    Gauge-equivalent input operators are merged first (otherwise each cycle
    would be counted once per sign/scale choice).  Every walk, including
    rotations of the same cyclic sequence, is returned: walks starting at
    different sites act differently on the chain.
    """
    if mode not in ("plain", "bc"):
        raise InvalidInput(f"unknown cycle mode {mode!r}")
    if mode == "bc" and (b is None or c is None):
        raise InvalidInput("bc mode needs both b and c")
    if N < 1:
        raise InvalidInput("N must be positive")
    ops = list(ops)
    if dedup:
        ops, _ = dedupe_operators(ops)
    if not ops:
        return []
    adj, scal = _edge_data(ops, mode, b, c, tol)
    jn = None if mode == "plain" else (as_matrix(b), as_matrix(c))
    out: list[CycleCertificate] = []
    for start in range(len(ops)):
        stack = [(start, (start,))]
        while stack:
            node, path = stack.pop()
            if len(path) == N:
                if start in adj[node]:
                    walk = path + (start,)
                    scalars = tuple(scal[(walk[k], walk[k + 1])] for k in range(N))
                    out.append(
                        CycleCertificate(
                            tuple(ops[i] for i in path), scalars, junction=jn
                        )
                    )
                    if max_cycles is not None and len(out) > max_cycles:
                        raise InvalidInput(f"more than {max_cycles} cycles; aborting")
                continue
            for nxt in adj[node]:
                stack.append((nxt, path + (nxt,)))
    return out


def self_loops(
    ops, mode: str = "plain", b=None, c=None, tol: float = DEFAULT_TOL
) -> list[TripleOperator]:
    """Operators forming 1-cycles (used for the 'nontrivial relation' test)."""
    ops, _ = dedupe_operators(list(ops))
    adj, _ = _edge_data(ops, mode, b, c, tol)
    return [ops[i] for i in range(len(ops)) if i in adj[i]]


def two_cycle_targets(
    h_a: TripleOperator, h_b: TripleOperator, tol: float = DEFAULT_TOL
) -> list[tuple[np.ndarray, np.ndarray, complex]]:
    """Deformation pairs (c, b) that h_a, h_b connect through a 2-cycle.

    Solves the eigenvalue problem M vec(c) = lambda vec(c) with
    M = y_a^{-1} y_b (x) (x_a x_b^{-1})^T.  For each eigenvector c the partner
    is b = y_a c x_b; the pair then satisfies ``y_a c x_b ~ b`` and
    ``y_b c x_a ~ b`` (checked), i.e. the two operators form a (c -> b)-2-cycle.
    """
    if h_a.D != 2 or h_b.D != 2:
        raise InvalidInput("the 2-cycle eigenvalue method is implemented for D = 2")
    reps, _ = dedupe_operators([h_a, h_b])
    if len(reps) == 1:
        raise InvalidInput("h_a and h_b must differ (up to scalar gauge)")
    m = kron(np.linalg.inv(h_a.y) @ h_b.y, (h_a.x @ np.linalg.inv(h_b.x)).T)
    out = []
    rng = np.random.default_rng(0)
    for lam in cluster_values(np.linalg.eigvals(m), max(tol, 1e-9)):
        basis = kernel(m - lam * np.eye(4), max(tol, 1e-9))
        candidates = list(basis)
        if len(basis) > 1:
            # degenerate eigenspace: add regular combinations as usable reps
            for _ in range(4):
                coef = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
                candidates.append(sum(c * v for c, v in zip(coef, basis)))
        for vec in candidates:
            cmat = vec.reshape(2, 2)
            if not is_regular(cmat, 1e-8):
                continue
            bmat = h_a.y @ cmat @ h_b.x
            ok_ab = bc_concatenable(h_a, h_b, cmat, bmat, max(tol, 1e-8))
            ok_ba = bc_concatenable(h_b, h_a, cmat, bmat, max(tol, 1e-8))
            if ok_ab and ok_ba:
                out.append((cmat, bmat, complex(lam)))
    return out
