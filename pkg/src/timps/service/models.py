"""Pydantic request/response models for the analysis service.

Matrices are row-major nested lists whose leaves are [re, im] pairs (bare
numbers are accepted for real entries); tensors and states follow the file
formats documented in ``timps.serialize``.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field

Matrix = list  # nested [[...[re, im]...]]


class FamilyRef(BaseModel):
    """Either a catalogued family (with optional parameter) or a raw tensor."""

    family: Optional[str] = None
    param: Optional[Matrix] = None
    tensor: Optional[dict] = None


class StateRequest(BaseModel):
    source: FamilyRef
    n: int = Field(ge=1)
    amplitude_cap: int = Field(default=1 << 20, ge=1, le=1 << 22)


class StateResponse(BaseModel):
    state: dict


class ChiRequest(BaseModel):
    b: Matrix
    tol: float = 1e-10


class ChiResponse(BaseModel):
    chi: Any  # [re, im] or "inf"


class ClassifyRequest(BaseModel):
    source: FamilyRef
    tol: float = 1e-10


class ClassifyResponse(BaseModel):
    kind: str
    chi: Any = None
    injectivity_length: Optional[int] = None
    symmetry_order: str = ""
    detail: str = ""


class NormalityRequest(BaseModel):
    source: FamilyRef
    l_max: Optional[int] = None
    tol: float = 1e-10


class NormalityResponse(BaseModel):
    normal: bool
    injectivity_length: Optional[int] = None
    normal_for_sites: Optional[int] = None
    searched_up_to: int
    span_dims: list[int]


class SymmetriesRequest(BaseModel):
    source: FamilyRef
    n: int = Field(ge=1)
    tol: float = 1e-10


class FamilyDescriptor(BaseModel):
    description: str
    parameter: str
    basis: list[Matrix] = []


class SymmetriesResponse(BaseModel):
    n: int
    count: int
    nontrivial_count: int
    certificates: list[dict]
    families: list[FamilyDescriptor]
    plan: dict


class EquivalentRequest(BaseModel):
    b: Matrix
    c: Matrix
    n: int = Field(ge=1)
    witness: bool = False
    tol: float = 1e-10


class EquivalentResponse(BaseModel):
    equivalent: bool
    class_b: ClassifyResponse
    class_c: ClassifyResponse
    witness: Optional[dict] = None
    witness_residual: Optional[float] = None


class TransformRequest(BaseModel):
    source: FamilyRef
    target: FamilyRef
    n: int = Field(ge=1)
    verify: bool = False
    tol: float = 1e-10


class TransformResponse(BaseModel):
    feasible: bool
    reason: str = ""
    plan: Optional[dict] = None
    residual: Optional[float] = None


class VerifyRequest(BaseModel):
    plan: dict
    n_min: Optional[int] = None
    n_max: Optional[int] = None
    tol: float = 1e-9
    scalar_mode: Optional[str] = None  # override: strict | up_to_scalar


class VerifyResponse(BaseModel):
    checked: int
    passed: int
    all_passed: bool
    worst_residual: float
    failures: list


class ErrorBody(BaseModel):
    error: str
    message: str
