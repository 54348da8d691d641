"""Catalogue of named fiducial tensors and their one-matrix deformations.

The bond-dimension-2 families are all of the form X_b: the base three-party
state X with a regular matrix b inserted on the left bond leg, i.e. matrices
``b A_X[j]``.  Supported names (CLI spelling in parentheses):

* W (``w``), GHZ (``ghz``), Cluster (``cluster``), AKLT (``aklt``),
  VB (``vb``): fixed states;
* GHZ_b (``ghz-b``), W_b (``w-b``): need a regular 2x2 parameter b;
* AKLT_g (``aklt-g``): AKLT deformed on the bond by a regular g.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .linalg import HADAMARD_UNNORM, as_matrix, is_regular
from .mps import Rank3Tensor

_FIXED = ("W", "GHZ", "Cluster", "AKLT", "VB")
_PARAMETRIC = ("GHZ_b", "W_b", "AKLT_g")

CLI_NAMES = {
    "w": "W",
    "ghz": "GHZ",
    "cluster": "Cluster",
    "aklt": "AKLT",
    "vb": "VB",
    "ghz-b": "GHZ_b",
    "w-b": "W_b",
    "aklt-g": "AKLT_g",
}


@dataclass(frozen=True)
class FamilySpec:
    """A catalogue entry: family name plus the deformation matrix if any."""

    name: str
    param: np.ndarray | None = None

    def __post_init__(self):
        if self.name not in _FIXED + _PARAMETRIC:
            raise InvalidInput(f"unknown family {self.name!r}")
        if self.name in _PARAMETRIC:
            if self.param is None:
                raise InvalidInput(f"family {self.name} needs a 2x2 parameter matrix")
            p = as_matrix(self.param)
            if p.shape != (2, 2):
                raise InvalidInput("family parameter must be 2x2")
            if not is_regular(p):
                raise InvalidInput("family parameter must be regular")
            p.setflags(write=False)
            object.__setattr__(self, "param", p)
        elif self.param is not None:
            raise InvalidInput(f"family {self.name} takes no parameter")

    @staticmethod
    def from_cli(name: str, param=None) -> "FamilySpec":
        canonical = CLI_NAMES.get(name.lower(), name)
        p = None if param is None else as_matrix(param)
        return FamilySpec(canonical, p)


def ghz_tensor(b=None) -> Rank3Tensor:
    """GHZ-generated tensor: A[0] = b|0><0|, A[1] = b|1><1|."""
    b = np.eye(2, dtype=complex) if b is None else as_matrix(b)
    return Rank3Tensor.from_matrices(
        [b @ np.diag([1, 0]).astype(complex), b @ np.diag([0, 1]).astype(complex)]
    )


def w_tensor(b=None) -> Rank3Tensor:
    """W-generated tensor: A[0] = b(|0><1| + |1><0|), A[1] = b|0><0|."""
    b = np.eye(2, dtype=complex) if b is None else as_matrix(b)
    sw = np.array([[0, 1], [1, 0]], dtype=complex)
    e00 = np.diag([1, 0]).astype(complex)
    return Rank3Tensor.from_matrices([b @ sw, b @ e00])


def cluster_tensor() -> Rank3Tensor:
    """Periodic cluster chain = GHZ family at b = sum_ij (-1)^{ij} |i><j|."""
    return ghz_tensor(HADAMARD_UNNORM)


def aklt_tensor(g=None) -> Rank3Tensor:
    """AKLT tensor (spin-1 chain ground state), optionally bond-deformed by g.

    Matrices: A[0] = sqrt(2)|1><0|, A[1] = diag(-1, 1), A[2] = -sqrt(2)|0><1|.
    """
    r2 = np.sqrt(2.0)
    mats = [
        r2 * np.array([[0, 0], [1, 0]], dtype=complex),
        np.array([[-1, 0], [0, 1]], dtype=complex),
        -r2 * np.array([[0, 1], [0, 0]], dtype=complex),
    ]
    if g is not None:
        g = as_matrix(g)
        mats = [g @ m for m in mats]
    return Rank3Tensor.from_matrices(mats)


def vb_tensor() -> Rank3Tensor:
    """Injective valence-bond tensor: A[2i+j] = |i><j| (d = 4, D = 2)."""
    mats = []
    for i in range(2):
        for j in range(2):
            m = np.zeros((2, 2), dtype=complex)
            m[i, j] = 1.0
            mats.append(m)
    return Rank3Tensor.from_matrices(mats)


def get_tensor(spec: FamilySpec) -> Rank3Tensor:
    """Tensor for a catalogue entry."""
    if spec.name == "W":
        return w_tensor()
    if spec.name == "GHZ":
        return ghz_tensor()
    if spec.name == "Cluster":
        return cluster_tensor()
    if spec.name == "AKLT":
        return aklt_tensor()
    if spec.name == "VB":
        return vb_tensor()
    if spec.name == "GHZ_b":
        return ghz_tensor(spec.param)
    if spec.name == "W_b":
        return w_tensor(spec.param)
    if spec.name == "AKLT_g":
        return aklt_tensor(spec.param)
    raise InvalidInput(f"unknown family {spec.name!r}")
