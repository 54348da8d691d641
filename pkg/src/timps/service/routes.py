"""HTTP endpoints wrapping the core analysis operations.

Domain errors map to status codes: malformed or inapplicable inputs give
400, requests outside the catalogued solvers give 501.  Negative answers
(infeasible, inequivalent, not normal) are regular 200 responses carrying
the verdict.
"""

from __future__ import annotations

import numpy as np
from fastapi import APIRouter, HTTPException

from .. import serialize as sz
from ..errors import InvalidInput, TimpsError, Unsupported
from ..families import FamilySpec, get_tensor
from ..mps import build_state, injectivity_length
from ..slocc import (
    SloccClass,
    chi,
    classify,
    equivalence_witness,
    classify_ghz_deformation,
    slocc_equivalent,
)
from ..symmetries import (
    SymmetrySolution,
    aklt_symmetries,
    aklt_type_symmetries,
    ghz_symmetry_certificates,
    w_symmetries,
)
from ..transforms import decide_transform
from ..verify import verify_claim
from . import models as md

router = APIRouter()


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Unsupported as exc:
        raise HTTPException(status_code=501, detail={"error": "unsupported", "message": str(exc)})
    except TimpsError as exc:
        raise HTTPException(
            status_code=400, detail={"error": type(exc).__name__, "message": str(exc)}
        )


def _source(ref: md.FamilyRef):
    return sz.source_from_json(ref.model_dump(exclude_none=True))


def _chi_json(value) -> object:
    if value is None:
        return None
    return "inf" if value.infinite else sz.complex_to_json(value.value)


def _class_response(cls: SloccClass) -> md.ClassifyResponse:
    return md.ClassifyResponse(
        kind=cls.kind,
        chi=_chi_json(cls.chi),
        injectivity_length=cls.injectivity_length,
        symmetry_order=cls.symmetry_order,
        detail=cls.detail,
    )


@router.post("/state", response_model=md.StateResponse)
def state_endpoint(req: md.StateRequest) -> md.StateResponse:
    def work():
        tensor, _ = _source(req.source)
        state = build_state(tensor, req.n, cap=req.amplitude_cap)
        return md.StateResponse(state=sz.state_to_json(state))

    return _guard(work)


@router.post("/chi", response_model=md.ChiResponse)
def chi_endpoint(req: md.ChiRequest) -> md.ChiResponse:
    def work():
        value = chi(sz.matrix_from_json(req.b), req.tol)
        return md.ChiResponse(chi=_chi_json(value))

    return _guard(work)


@router.post("/classify", response_model=md.ClassifyResponse)
def classify_endpoint(req: md.ClassifyRequest) -> md.ClassifyResponse:
    def work():
        ref = req.source
        if ref.family is not None and ref.tensor is None:
            spec = FamilySpec.from_cli(
                ref.family, sz.matrix_from_json(ref.param) if ref.param else None
            )
            if spec.name in ("GHZ", "GHZ_b", "Cluster"):
                param = spec.param if spec.param is not None else (
                    np.eye(2) if spec.name == "GHZ" else np.array([[1, 1], [1, -1]])
                )
                return _class_response(classify_ghz_deformation(param, req.tol))
        tensor, _ = _source(ref)
        return _class_response(classify(tensor, req.tol))

    return _guard(work)


@router.post("/normality", response_model=md.NormalityResponse)
def normality_endpoint(req: md.NormalityRequest) -> md.NormalityResponse:
    def work():
        tensor, _ = _source(req.source)
        report = injectivity_length(tensor, req.l_max, req.tol)
        return md.NormalityResponse(
            normal=report.normal,
            injectivity_length=report.injectivity_length,
            normal_for_sites=report.normal_for_sites,
            searched_up_to=report.searched_up_to,
            span_dims=list(report.span_dims),
        )

    return _guard(work)


@router.post("/symmetries", response_model=md.SymmetriesResponse)
def symmetries_endpoint(req: md.SymmetriesRequest) -> md.SymmetriesResponse:
    def work():
        ref = req.source
        if ref.family is None:
            raise Unsupported(
                "symmetry solving is catalogued by family; supply operators to the "
                "cycle engine directly for raw tensors"
            )
        spec = FamilySpec.from_cli(ref.family, sz.matrix_from_json(ref.param) if ref.param else None)
        certs, families = _solve_symmetries(spec, req.n, req.tol)
        source_json = sz.family_ref_to_json(spec)
        plan = sz.plan_to_json("symmetry", source_json, None, certs)
        return md.SymmetriesResponse(
            n=req.n,
            count=len(certs),
            nontrivial_count=sum(1 for c in certs if not c.is_trivial),
            certificates=[sz.certificate_to_json(c) for c in certs],
            families=[
                md.FamilyDescriptor(
                    description=f.description,
                    parameter=f.parameter,
                    basis=[sz.matrix_to_json(m) for m in f.basis],
                )
                for f in families
            ],
            plan=plan,
        )

    return _guard(work)


def _solve_symmetries(spec: FamilySpec, n: int, tol: float):
    if spec.name in ("GHZ", "GHZ_b", "Cluster"):
        param = spec.param
        if param is None:
            param = np.eye(2) if spec.name == "GHZ" else np.array([[1, 1], [1, -1]])
        certs = ghz_symmetry_certificates(param, n, tol)
        return certs, ()
    if spec.name in ("W", "W_b"):
        param = spec.param if spec.param is not None else np.eye(2)
        sol = w_symmetries(param, n, tol)
        return sol.certificates, sol.families
    if spec.name == "AKLT":
        sol = aklt_symmetries(n, tol)
        return sol.certificates, sol.families
    if spec.name == "AKLT_g":
        sol = aklt_type_symmetries(spec.param, n, tol)
        return sol.certificates, sol.families
    if spec.name == "VB":
        sol = _vb_symmetry_solution(n)
        return sol.certificates, sol.families
    raise Unsupported(f"no symmetry solver for family {spec.name}")


def _vb_symmetry_solution(n: int) -> SymmetrySolution:
    from ..families import vb_tensor
    from ..symmetries import ParametrizedFamily, identity_certificate, injective_symmetry_chain

    tensor = vb_tensor()
    fam = ParametrizedFamily(
        description="site-dependent chain from any regular bond matrices x_1..x_N",
        parameter="x_1..x_N (regular 2x2 each)",
        basis=(),
        instantiate=lambda *xs: injective_symmetry_chain(tensor, list(xs)),
    )
    return SymmetrySolution(
        family=f"vb, N={n} (injective: continuum)",
        n=n,
        certificates=[identity_certificate(tensor, n)],
        families=(fam,),
    )


@router.post("/equivalent", response_model=md.EquivalentResponse)
def equivalent_endpoint(req: md.EquivalentRequest) -> md.EquivalentResponse:
    def work():
        b = sz.matrix_from_json(req.b)
        c = sz.matrix_from_json(req.c)
        cls_b = classify_ghz_deformation(b, req.tol)
        cls_c = classify_ghz_deformation(c, req.tol)
        eq = slocc_equivalent(cls_b, cls_c, req.n)
        witness_json = residual = None
        if req.witness and eq:
            cert = equivalence_witness(b, c, req.n, req.tol)
            if cert is not None:
                from ..families import ghz_tensor

                report = verify_claim(cert, ghz_tensor(b), [req.n], ghz_tensor(c))
                residual = report.worst_residual
                witness_json = sz.plan_to_json(
                    "transform",
                    {"family": "ghz-b", "param": sz.matrix_to_json(b)},
                    {"family": "ghz-b", "param": sz.matrix_to_json(c)},
                    [cert],
                    extra={"n": req.n},
                )
        return md.EquivalentResponse(
            equivalent=eq,
            class_b=_class_response(cls_b),
            class_c=_class_response(cls_c),
            witness=witness_json,
            witness_residual=residual,
        )

    return _guard(work)


@router.post("/transform", response_model=md.TransformResponse)
def transform_endpoint(req: md.TransformRequest) -> md.TransformResponse:
    def work():
        if req.source.family is None or req.target.family is None:
            raise Unsupported("transformations are decided between catalogued families")
        src = FamilySpec.from_cli(
            req.source.family, sz.matrix_from_json(req.source.param) if req.source.param else None
        )
        tgt = FamilySpec.from_cli(
            req.target.family, sz.matrix_from_json(req.target.param) if req.target.param else None
        )
        plan = decide_transform(src, tgt, req.n, req.tol)
        if not plan.feasible:
            return md.TransformResponse(feasible=False, reason=plan.reason)
        certs = [plan.certificate, *plan.alternates]
        plan_json = sz.plan_to_json(
            "transform",
            sz.family_ref_to_json(src),
            sz.family_ref_to_json(tgt),
            certs,
            extra={"n": req.n},
        )
        residual = None
        if req.verify:
            report = verify_claim(certs, get_tensor(src), [req.n], get_tensor(tgt))
            if not report.all_passed:
                raise Unsupported(
                    f"emitted plan failed dense verification (worst {report.worst_residual:.2e})"
                )
            residual = report.worst_residual
        return md.TransformResponse(feasible=True, plan=plan_json, residual=residual)

    return _guard(work)


@router.post("/verify", response_model=md.VerifyResponse)
def verify_endpoint(req: md.VerifyRequest) -> md.VerifyResponse:
    def work():
        plan = req.plan
        certs = [sz.certificate_from_json(c) for c in plan.get("certificates", [])]
        if not certs:
            raise InvalidInput("plan carries no certificates")
        if "source" not in plan:
            raise InvalidInput("plan is missing its source reference")
        source, _ = sz.source_from_json(plan["source"])
        target = None
        if plan.get("claim") == "transform":
            if "target" not in plan:
                raise InvalidInput("transform plan is missing its target reference")
            target, _ = sz.source_from_json(plan["target"])
        lengths = sorted({c.n for c in certs})
        n_lo = req.n_min if req.n_min is not None else lengths[0]
        n_hi = req.n_max if req.n_max is not None else lengths[-1]
        report = None
        for n in range(n_lo, n_hi + 1):
            batch = [c for c in certs if c.n == n]
            if not batch:
                continue
            part = verify_claim(batch, source, [n], target, req.tol, mode=req.scalar_mode)
            report = part if report is None else report.merged(part)
        if report is None:
            raise InvalidInput(f"no certificate matches lengths {n_lo}..{n_hi}")
        return md.VerifyResponse(
            checked=report.checked,
            passed=report.passed,
            all_passed=report.all_passed,
            worst_residual=report.worst_residual,
            failures=[list(f) for f in report.failures],
        )

    return _guard(work)
