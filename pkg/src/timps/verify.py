"""Brute-force dense verification backing every symbolic claim.

The oracle knows nothing about the solvers: it builds the full amplitude
vector of the chain, applies the per-site operators, and compares states.
A second, deliberately independent cycle enumerator cross-checks the
concatenation digraph walks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cycles import CycleCertificate, bc_concatenable, concatenable, dedupe_operators
from .errors import InvalidInput
from .mps import Rank3Tensor, apply_local, build_state, states_equal


@dataclass(frozen=True)
class VerificationReport:
    """Aggregate outcome of a batch of dense checks."""

    checked: int
    passed: int
    worst_residual: float
    failures: tuple[tuple[str, float], ...] = ()

    @property
    def all_passed(self) -> bool:
        return self.checked == self.passed

    def merged(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(
            self.checked + other.checked,
            self.passed + other.passed,
            max(self.worst_residual, other.worst_residual),
            self.failures + other.failures,
        )


def verify_claim(
    certificates,
    source: Rank3Tensor,
    n_values,
    target: Rank3Tensor | None = None,
    tol: float = 1e-9,
    mode: str | None = None,
) -> VerificationReport:
    """Apply each certificate's site operators on the dense chain and compare.

    Symmetry claims (no target) are compared strictly; transformation claims
    are compared up to a scalar; ``mode`` overrides that default.
    Certificates whose length does not match an ``n`` are reported as
    failures for that ``n``.
    """
    if isinstance(certificates, CycleCertificate):
        certificates = [certificates]
    n_values = [int(n) for n in (n_values if np.iterable(n_values) else [n_values])]
    checked = passed = 0
    worst = 0.0
    failures = []
    mode = mode or ("strict" if target is None else "up_to_scalar")
    for n in n_values:
        psi = build_state(source, n)
        ref = psi if target is None else build_state(target, n)
        for idx, cert in enumerate(certificates):
            case = f"n={n} cert={idx}:{cert.label or '?'}"
            checked += 1
            if cert.n != n:
                failures.append((case + " (length mismatch)", 1.0))
                continue
            out = apply_local(cert.site_ops(), psi)
            res = states_equal(out, ref, mode=mode, tol=tol)
            worst = max(worst, res.residual)
            if res:
                passed += 1
            else:
                failures.append((case, res.residual))
    return VerificationReport(checked, passed, worst, tuple(failures))


def exhaustive_small_cycles(
    ops,
    N: int,
    mode: str = "plain",
    b=None,
    c=None,
    tol: float = 1e-9,
) -> list[tuple[int, ...]]:
    """Independent re-enumeration of all length-N closed walks.

    Recursive descent over explicit edge lists (no shared code with the main
    enumerator); returns index tuples into the deduplicated operator list so
    result sets can be compared structurally.
    """
    if N > 8:
        raise InvalidInput("the exhaustive cross-checker is limited to N <= 8")
    ops, _ = dedupe_operators(list(ops))
    if len(ops) > 16:
        raise InvalidInput("the exhaustive cross-checker is limited to 16 operators")
    edges = set()
    for i, hi in enumerate(ops):
        for j, hj in enumerate(ops):
            res = concatenable(hi, hj, tol) if mode == "plain" else bc_concatenable(hi, hj, b, c, tol)
            if res:
                edges.add((i, j))
    found: list[tuple[int, ...]] = []

    def descend(prefix: tuple[int, ...]):
        if len(prefix) == N:
            if (prefix[-1], prefix[0]) in edges:
                found.append(prefix)
            return
        for nxt in range(len(ops)):
            if (prefix[-1], nxt) in edges:
                descend(prefix + (nxt,))

    for start in range(len(ops)):
        descend((start,))
    return found


def cycle_walks_as_indices(certs, reference_ops) -> set[tuple[int, ...]]:
    """Map certificates back to index walks over a deduplicated operator list."""
    reps, _ = dedupe_operators(list(reference_ops))
    out = set()
    for cert in certs:
        walk = []
        for op in cert.ops:
            c = op.canonical()
            hit = None
            for i, r in enumerate(reps):
                if (
                    c.g.shape == r.g.shape
                    and np.allclose(c.g, r.g, atol=1e-8)
                    and np.allclose(c.x, r.x, atol=1e-8)
                    and np.allclose(c.y, r.y, atol=1e-8)
                ):
                    hit = i
                    break
            if hit is None:
                raise InvalidInput("certificate operator not in the reference set")
            walk.append(hit)
        out.add(tuple(walk))
    return out
