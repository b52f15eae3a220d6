"""Service handlers: pure functions from request models to response models.

The FastAPI app binds these to routes; the CLI calls them directly in
"in-process" mode.  All domain errors propagate as ExpMeasureError and are
translated at the edges.
"""

from __future__ import annotations

from fractions import Fraction

from ..algebraics import parse_algebraic
from ..approximants import build_system, det_at_one_check, metric_bounds_report
from ..effective import (certificate_json_dict, certified_lower_bound, constants,
                         lcm_upto)
from ..errors import ParseError
from ..exponents import (closed_form_check, competing_exponents,
                         floor_identity_check, optimal_p, parity_scan,
                         psi_bounds_check)
from ..lab import asymptotic_spot_check, bound_vs_reality
from ..serialize import enclosure_str, frac_str, fraction_to_decimal
from ..siegel import build_D, column_reduction_check, verify_chain
from . import schemas as S


def parse_range(text: str, what: str = "range") -> list[int]:
    """'3' -> [3]; '2..5' -> [2, 3, 4, 5]."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError as exc:
        raise ParseError(f"bad {what} {text!r}; use N or N..M") from exc


def _provenance(req) -> S.Provenance:
    return S.Provenance(config=req.model_dump())


def parse_fraction(text, what: str = "H") -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad {what} {text!r}; use an integer, decimal or num/den") from exc


def handle_exponent(req: S.ExponentRequest) -> S.ExponentResponse:
    rows = []
    notes = []
    for d in parse_range(req.d, "d"):
        for delta in parse_range(req.delta, "delta"):
            choice = optimal_p(d, delta)
            comp = competing_exponents(d, delta)
            lower = upper = None
            zheq = None
            if d >= 2:
                rep = psi_bounds_check(d, delta)
                lower = float(sum(rep.lower_enclosure) / 2)
                upper = float(sum(rep.upper_enclosure) / 2)
                zheq = rep.zheng_equality
            rows.append(S.ExponentRow(
                d=d, delta=delta, p1=choice.p1, p2=choice.p2, lam=choice.lam,
                psi_lambda=frac_str(choice.psi_lambda),
                psi_lambda_decimal=fraction_to_decimal(choice.psi_lambda),
                zheng=comp.zheng,
                mahler=comp.mahler, lang_galochkin=comp.lang_galochkin,
                lower_bound_float=lower, upper_bound_float=upper,
                zheng_equality=zheq))
        if req.check_closed_forms and d >= 2:
            for which in (1, 2, 3):
                chk = closed_form_check(d, which)
                notes.append(S.ClosedFormNote(
                    d=d, which=which, computed=frac_str(chk.computed),
                    paper_value=frac_str(chk.paper_value),
                    matches_paper=chk.matches_paper,
                    alt_value=frac_str(chk.alt_value) if chk.alt_value is not None else None,
                    matches_alt=chk.matches_alt))
    return S.ExponentResponse(provenance=_provenance(req), rows=rows,
                              closed_form_notes=notes)


def handle_bound(req: S.BoundRequest) -> S.BoundResponse:
    alpha = parse_algebraic(req.alpha)
    d = req.d if req.d is not None else alpha.degree
    default_p = optimal_p(d, req.delta).lam
    p = req.p if req.p is not None else default_p
    consts = constants(alpha, d, req.delta, p, req.precision_bits)
    bound = certified_lower_bound(consts, parse_fraction(req.H), req.precision_bits)
    return S.BoundResponse(
        provenance=_provenance(req),
        certificate=certificate_json_dict(consts, bound),
        p_is_default_lambda=(p == default_p))


def handle_verify(req: S.VerifyRequest) -> S.VerifyResponse:
    alpha = parse_algebraic(req.alpha)
    H_grid = parse_range(req.H, "H")
    report = bound_vs_reality(alpha, req.d, req.delta, H_grid,
                              precision_bits=req.precision_bits,
                              budget=req.budget, workers=req.workers,
                              checkpoint_path=req.checkpoint)
    rows = [S.VerifyRow(H=r.H,
                        min_enclosure=enclosure_str((r.min_lo, r.min_hi)),
                        argmin=list(r.argmin), bound=r.bound_decimal,
                        log10_gap=r.log10_gap)
            for r in report.rows]
    return S.VerifyResponse(
        provenance=_provenance(req), ok=True, psi_lambda=frac_str(report.psi_lambda),
        psi_lambda_decimal=fraction_to_decimal(report.psi_lambda),
        p=report.p, rows=rows, empirical_exponent=report.empirical_exponent,
        exponent_gap=report.exponent_gap, evaluations=report.evaluations,
        runtime_seconds=report.runtime_seconds)


def _default_q(alpha, p: int) -> int:
    from ..algebraics import denominator_surrogate, inverse
    return lcm_upto(p) * denominator_surrogate(inverse(alpha))


def handle_approximants(req: S.ApproximantsRequest) -> S.ApproximantsResponse:
    alpha = parse_algebraic(req.alpha)
    system = build_system(alpha, req.n, req.p)
    q = req.q if req.q is not None else _default_q(alpha, req.p)
    metric = None
    if req.metric_report:
        rep = metric_bounds_report(system, q, req.precision_bits)
        metric = {
            "entries_ok": rep.entries_ok,
            "remainders_ok": rep.remainders_ok,
            "integrality_ok": rep.integrality_ok,
            "rows": [
                {"kind": r.kind, "k": r.k, "ell": r.ell, "embedding": r.embedding,
                 "passed": r.passed, "log_slack": r.log_slack}
                for r in rep.rows
            ],
        }
    return S.ApproximantsResponse(
        provenance=_provenance(req), system=system.to_json_dict(),
        det_at_one_nonzero=det_at_one_check(system), q=q, metric=metric)


def handle_certificate(req: S.CertificateRequest) -> S.CertificateResponse:
    alpha = parse_algebraic(req.alpha)
    delta = len(req.P) - 1
    d = alpha.degree
    p = req.p if req.p is not None else optimal_p(d, delta).lam
    H = (parse_fraction(req.H) if req.H is not None
         else Fraction(max(abs(a) for a in req.P)))
    consts = constants(alpha, d, delta, p, req.precision_bits)
    n = req.n
    if n is None:
        n = min(certified_lower_bound(consts, H, req.precision_bits).n0, 6)
    system = build_system(alpha, n, p)
    cert = build_D(req.P, system, consts.q, delta, req.precision_bits)
    chain = verify_chain(cert, system, consts, H, req.precision_bits)
    reduction = column_reduction_check(cert, system, symbolic=req.symbolic_check,
                                       precision_bits=req.precision_bits)
    return S.CertificateResponse(
        provenance=_provenance(req),
        certificate=cert.to_json_dict(),
        chain=[{"name": c.name, "passed": c.passed, "log_slack": c.log_slack,
                "detail": c.detail} for c in chain.checks],
        chain_all_passed=chain.all_passed,
        integrality_ok=chain.integrality_ok,
        column_reduction=reduction)


def handle_parity_scan(req: S.ParityScanRequest) -> S.ParityScanResponse:
    report = parity_scan(req.d_max, req.delta_max)

    def row_dict(r):
        return {"d": r.d, "delta": r.delta, "psi_p1": frac_str(r.psi_p1),
                "psi_p2": frac_str(r.psi_p2), "winner": r.winner,
                "expected": r.expected, "matches": r.matches}

    return S.ParityScanResponse(
        provenance=_provenance(req),
        rows=[row_dict(r) for r in report.rows],
        counterexamples=[row_dict(r) for r in report.counterexamples])


def handle_floor_scan(req: S.FloorScanRequest) -> S.FloorScanResponse:
    rows = []
    for d in parse_range(req.d, "d"):
        for delta in parse_range(req.delta, "delta"):
            rows.append({"d": d, "delta": delta,
                         "identity_holds": floor_identity_check(d, delta)})
    return S.FloorScanResponse(provenance=_provenance(req), rows=rows)


def handle_asymptotic_scan(req: S.AsymptoticScanRequest) -> S.AsymptoticScanResponse:
    report = asymptotic_spot_check(req.delta, parse_range(req.d, "d"))
    return S.AsymptoticScanResponse(
        provenance=_provenance(req),
        rows=[{"d": r.d, "difference": frac_str(r.difference),
               "d_times_difference": frac_str(r.d_times_difference)}
              for r in report.rows],
        max_abs_d_times_difference=frac_str(report.max_abs_d_times_difference))
