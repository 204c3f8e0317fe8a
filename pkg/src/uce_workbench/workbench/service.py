"""HTTP service exposing the parser, the homology computations and the
verification suite.  The CLI talks to these endpoints when --server is
given; payloads carry algebra file text, never server-side paths."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..superalg import SuperAlgebraError
from .parser import AlgebraParseError, parse_algebra, serialize_algebra
from .schemas import (CocycleRequest, CocycleResponse, H2Request, ParseRequest,
                      ParseResponse, Report, VerifyRequest)
from .suite import run_single, run_suite

H2_TARGETS = ("sl", "st", "st-sharp")
VARIANT_SHAPES = {"3,1": (3, 1), "2,2": (2, 2)}

app = FastAPI(title="uce-workbench", version=__version__)


def _load(text: str, label: str):
    try:
        return parse_algebra(text, label or "algebra")
    except AlgebraParseError as exc:
        raise HTTPException(status_code=400, detail={
            "message": exc.message, "line": exc.line,
            "column": exc.column, "token": exc.token})
    except SuperAlgebraError as exc:
        raise HTTPException(status_code=400, detail={"message": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/parse", response_model=ParseResponse)
def parse_endpoint(req: ParseRequest) -> ParseResponse:
    A = _load(req.text, req.label)
    return ParseResponse(
        label=A.label, ring=str(A.domain), rank=A.rank, names=list(A.names),
        parity=list(A.parity), unit=A.names[A.unit],
        serialized=serialize_algebra(A))


@app.post("/h2", response_model=Report)
def h2_endpoint(req: H2Request) -> Report:
    if req.target not in H2_TARGETS:
        raise HTTPException(status_code=400, detail={
            "message": f"target must be one of {', '.join(H2_TARGETS)}"})
    A = _load(req.text, req.label)
    return run_single(A, f"h2-{req.target}", req.m, req.n)


@app.post("/verify", response_model=Report)
def verify_endpoint(req: VerifyRequest) -> Report:
    if req.suite != "small-rank":
        raise HTTPException(status_code=400, detail={
            "message": f"unknown suite {req.suite!r}; only small-rank exists"})
    A = _load(req.text, req.label)
    return run_suite(A)


@app.post("/cocycle-check", response_model=CocycleResponse)
def cocycle_endpoint(req: CocycleRequest) -> CocycleResponse:
    if req.variant not in VARIANT_SHAPES:
        raise HTTPException(status_code=400, detail={
            "message": "variant must be 3,1 or 2,2"})
    A = _load(req.text, req.label)
    m, n = VARIANT_SHAPES[req.variant]
    from ..steinberg import build_st
    from ..cocycle import build_psi, check_super_2cocycle
    st = build_st(m, n, A)
    psi = build_psi(st)
    rep = check_super_2cocycle(st.lie, psi.values, psi.w_parities, psi.w_moduli)
    return CocycleResponse(variant=req.variant, passed=rep.passed,
                           verdicts=dict(rep.verdicts),
                           first_failure=rep.first_failure)
