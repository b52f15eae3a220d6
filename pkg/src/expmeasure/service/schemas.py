"""Request/response models for the HTTP API.

Wire conventions: exact rationals as "num/den" strings, certified reals as
"[lo, hi]" decimal enclosures, certified lower bounds as a single decimal
rounded down.  Every response carries a schema tag and echoes the request
verbatim under ``provenance`` so that output artifacts are self-describing.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

TOOL_VERSION = "0.1.0"


class Provenance(BaseModel):
    tool: str = "expmeasure"
    version: str = TOOL_VERSION
    config: dict[str, Any]


class ExponentRequest(BaseModel):
    d: str = Field(description="single value '3' or inclusive range '2..5'")
    delta: str = Field(description="single value or inclusive range")
    check_closed_forms: bool = False


class ExponentRow(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    d: int
    delta: int
    p1: int
    p2: int
    lam: int = Field(alias="lambda")
    psi_lambda: str
    psi_lambda_decimal: str
    zheng: int
    mahler: int
    lang_galochkin: int
    lower_bound_float: float | None = None
    upper_bound_float: float | None = None
    zheng_equality: bool | None = None


class ClosedFormNote(BaseModel):
    d: int
    which: int
    computed: str
    paper_value: str
    matches_paper: bool
    alt_value: str | None = None
    matches_alt: bool | None = None


class ExponentResponse(BaseModel):
    schema_tag: str = Field(default="expmeasure.exponent_table/1", alias="schema")
    provenance: Provenance
    rows: list[ExponentRow]
    closed_form_notes: list[ClosedFormNote] = []


class BoundRequest(BaseModel):
    alpha: str
    delta: int
    d: int | None = None
    p: int | None = Field(default=None, description="defaults to the optimized lambda")
    H: str = "1"
    precision_bits: int = 192


class BoundResponse(BaseModel):
    schema_tag: str = Field(default="expmeasure.bound_certificate/1", alias="schema")
    provenance: Provenance
    certificate: dict[str, Any]
    p_is_default_lambda: bool


class VerifyRequest(BaseModel):
    alpha: str
    delta: int
    d: int | None = None
    H: str = Field(description="single value or inclusive range like '1..100'")
    precision_bits: int = 64
    budget: int = 10 ** 8
    workers: int = 1
    checkpoint: str | None = None


class VerifyRow(BaseModel):
    H: int
    min_enclosure: str
    argmin: list[int]
    bound: str
    log10_gap: float


class VerifyResponse(BaseModel):
    schema_tag: str = Field(default="expmeasure.lab_report/1", alias="schema")
    provenance: Provenance
    ok: bool
    psi_lambda: str
    psi_lambda_decimal: str
    p: int
    rows: list[VerifyRow]
    empirical_exponent: float | None
    exponent_gap: float | None
    evaluations: int
    runtime_seconds: float


class ApproximantsRequest(BaseModel):
    alpha: str
    n: int
    p: int
    q: int | None = Field(default=None, description="defaults to lcm(1..p)*den(1/alpha)")
    metric_report: bool = False
    precision_bits: int = 192


class ApproximantsResponse(BaseModel):
    schema_tag: str = Field(default="expmeasure.approximants/1", alias="schema")
    provenance: Provenance
    system: dict[str, Any]
    det_at_one_nonzero: bool
    q: int
    metric: dict[str, Any] | None = None


class CertificateRequest(BaseModel):
    alpha: str
    P: list[int] = Field(description="coefficients a_0..a_delta")
    n: int | None = None
    p: int | None = None
    H: str | None = None
    precision_bits: int = 192
    symbolic_check: bool = True


class CertificateResponse(BaseModel):
    schema_tag: str = Field(default="expmeasure.siegel_certificate/1", alias="schema")
    provenance: Provenance
    certificate: dict[str, Any]
    chain: list[dict[str, Any]]
    chain_all_passed: bool
    integrality_ok: bool
    column_reduction: dict[str, Any]


class ParityScanRequest(BaseModel):
    d_max: int
    delta_max: int


class ParityScanResponse(BaseModel):
    schema_tag: str = Field(default="expmeasure.parity_scan/1", alias="schema")
    provenance: Provenance
    rows: list[dict[str, Any]]
    counterexamples: list[dict[str, Any]]


class FloorScanRequest(BaseModel):
    d: str
    delta: str


class FloorScanResponse(BaseModel):
    schema_tag: str = Field(default="expmeasure.floor_identity_scan/1", alias="schema")
    provenance: Provenance
    rows: list[dict[str, Any]]


class AsymptoticScanRequest(BaseModel):
    delta: Literal[2, 3]
    d: str


class AsymptoticScanResponse(BaseModel):
    schema_tag: str = Field(default="expmeasure.asymptotic_scan/1", alias="schema")
    provenance: Provenance
    rows: list[dict[str, Any]]
    max_abs_d_times_difference: str


class ErrorPayload(BaseModel):
    code: str
    message: str
