"""JSON codecs for tensors, states, operators, certificates, and plans.

Complex scalars travel as [re, im] pairs; matrices as row-major nested lists
of pairs.  Tensor files carry {"d", "D", "entries"} with entries[j][a][b];
state files carry {"n", "local_dims", "amplitudes"} with the first site
index most significant.
"""

from __future__ import annotations

import numpy as np

from .cycles import CycleCertificate, TripleOperator
from .errors import InvalidInput
from .families import FamilySpec
from .mps import DenseState, Rank3Tensor


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise InvalidInput(f"cannot parse complex value from {obj!r}")


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[complex_to_json(v) for v in row] for row in m]


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, (list, tuple)) or not obj:
        raise InvalidInput("matrix JSON must be a non-empty nested list")
    rows = [[complex_from_json(v) for v in row] for row in obj]
    if len({len(r) for r in rows}) != 1:
        raise InvalidInput("matrix rows have unequal lengths")
    return np.array(rows, dtype=complex)


def tensor_to_json(t: Rank3Tensor) -> dict:
    return {
        "d": t.d,
        "D": t.D,
        "entries": [matrix_to_json(t.entries[j]) for j in range(t.d)],
    }


def tensor_from_json(obj) -> Rank3Tensor:
    try:
        d, D = int(obj["d"]), int(obj["D"])
        mats = [matrix_from_json(m) for m in obj["entries"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad tensor JSON: {exc}") from exc
    if len(mats) != d or any(m.shape != (D, D) for m in mats):
        raise InvalidInput("tensor JSON dimensions are inconsistent")
    return Rank3Tensor.from_matrices(mats)


def state_to_json(s: DenseState) -> dict:
    return {
        "n": s.n,
        "local_dims": list(s.local_dims),
        "amplitudes": [complex_to_json(a) for a in s.amplitudes],
    }


def state_from_json(obj) -> DenseState:
    try:
        dims = tuple(int(x) for x in obj["local_dims"])
        amps = [complex_from_json(a) for a in obj["amplitudes"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad state JSON: {exc}") from exc
    return DenseState(dims, np.array(amps, dtype=complex))


def triple_to_json(op: TripleOperator) -> dict:
    return {
        "g": matrix_to_json(op.g),
        "x": matrix_to_json(op.x),
        "y": matrix_to_json(op.y),
        "label": op.label,
    }


def triple_from_json(obj) -> TripleOperator:
    try:
        return TripleOperator(
            matrix_from_json(obj["g"]),
            matrix_from_json(obj["x"]),
            matrix_from_json(obj["y"]),
            str(obj.get("label", "")),
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad operator JSON: {exc}") from exc


def certificate_to_json(cert: CycleCertificate) -> dict:
    return {
        "n": cert.n,
        "label": cert.label,
        "ops": [triple_to_json(op) for op in cert.ops],
        "scalars": [complex_to_json(s) for s in cert.scalars],
        "site_ops": [matrix_to_json(m) for m in cert.site_ops()],
    }


def certificate_from_json(obj) -> CycleCertificate:
    try:
        ops = tuple(triple_from_json(o) for o in obj["ops"])
        scalars = tuple(complex_from_json(s) for s in obj["scalars"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad certificate JSON: {exc}") from exc
    return CycleCertificate(ops, scalars, label=str(obj.get("label", "")))


def family_ref_to_json(spec: FamilySpec) -> dict:
    out = {"family": spec.name}
    if spec.param is not None:
        out["param"] = matrix_to_json(spec.param)
    return out


def source_from_json(obj) -> tuple[Rank3Tensor, FamilySpec | None]:
    """Resolve a {'family', 'param'} or {'tensor'} reference to a tensor."""
    from .families import get_tensor

    if not isinstance(obj, dict):
        raise InvalidInput("source reference must be an object")
    if "tensor" in obj:
        return tensor_from_json(obj["tensor"]), None
    if "family" in obj:
        param = matrix_from_json(obj["param"]) if obj.get("param") is not None else None
        spec = FamilySpec.from_cli(str(obj["family"]), param)
        return get_tensor(spec), spec
    raise InvalidInput("source reference needs 'family' or 'tensor'")


def plan_to_json(kind: str, source: dict, target: dict | None, certificates, extra=None) -> dict:
    out = {
        "claim": kind,
        "source": source,
        "certificates": [certificate_to_json(c) for c in certificates],
    }
    if target is not None:
        out["target"] = target
    if extra:
        out.update(extra)
    return out
