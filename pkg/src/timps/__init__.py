"""Analysis toolkit for translationally invariant matrix product states:
symmetries, SLOCC classification, and explicit state transformations, with
every symbolic result checkable against a dense brute-force oracle."""

from .cycles import CycleCertificate, TripleOperator
from .families import FamilySpec, get_tensor
from .mps import DenseState, NormalityReport, Rank3Tensor, build_state, fiducial_state
from .slocc import SloccClass, chi, classify, slocc_equivalent, three_tangle
from .transforms import TransformPlan, decide_transform
from .verify import VerificationReport, verify_claim

__version__ = "0.1.0"

__all__ = [
    "CycleCertificate",
    "DenseState",
    "FamilySpec",
    "NormalityReport",
    "Rank3Tensor",
    "SloccClass",
    "TransformPlan",
    "TripleOperator",
    "VerificationReport",
    "build_state",
    "chi",
    "classify",
    "decide_transform",
    "fiducial_state",
    "get_tensor",
    "slocc_equivalent",
    "three_tangle",
    "verify_claim",
]
