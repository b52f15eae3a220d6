"""Brute-force ground truth for the certified bounds.

Enumerates every nonzero integer polynomial of degree <= delta and height
<= H up to sign, evaluates |P(e^alpha)| in interval arithmetic, and refines
adaptively until the global minimum is separated from the runner-up (or
everything left is enclosed within the requested precision).  The certified
minimum is then compared against the explicit lower bound; the bound landing
above the measured minimum is a build-stopping soundness violation, never a
property of the inputs.

Enumeration order is fixed: vectors (a_0..a_delta) with the highest-index
nonzero coefficient positive, ascending lexicographic in
(a_delta, ..., a_0).  Blocks = values of the leading coefficient a_delta;
they are the unit of checkpointing and of worker partitioning, and the merge
is associative with deterministic block order.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .algebraics import AlgebraicNumber
from .effective import BoundEvaluation, certified_lower_bound, constants
from .errors import (BudgetExceeded, ConstraintViolated, PrecisionExhausted,
                     SoundnessViolation)
from .exponents import optimal_p
from .intervals import IntervalContext, PRECISION_CAP, mpfr_to_fraction

DEFAULT_BUDGET = 10 ** 8


def sign_reduced_count(delta: int, H: int) -> int:
    return ((2 * H + 1) ** (delta + 1) - 1) // 2


def _block_vectors(delta: int, H: int, lead: int):
    """Vectors with a_delta == lead under the sign-reduction rule.

    For lead >= 1 the lower coordinates run over the full box [-H, H]^delta,
    ascending lexicographic in (a_{delta-1}, ..., a_0); lead == 0 recurses on
    the shorter vector and pads with the zero coefficient.
    """
    if delta == 0:
        if lead > 0:
            yield (lead,)
        return
    if lead == 0:
        for sub_lead in range(0, H + 1):
            for vec in _block_vectors(delta - 1, H, sub_lead):
                yield vec + (0,)
        return

    def gen(pos: int):
        # pos counts down from a_{delta-1} to a_0
        if pos < 0:
            yield ()
            return
        for a in range(-H, H + 1):
            for rest in gen(pos - 1):
                yield rest + (a,)

    # gen yields (a_0, ..., a_{delta-1}) with a_{delta-1} outermost
    for body in gen(delta - 1):
        yield body + (lead,)


class _Evaluator:
    """|sum_k a_k e^{k alpha}| with certified mpfr endpoints at one precision."""

    def __init__(self, alpha: AlgebraicNumber, delta: int, precision: int):
        self.ctx = IntervalContext(precision)
        ctx = self.ctx
        ball = alpha.selected_ball(precision)
        # mid_im == 0 certifies a real root: the disk equals its conjugate
        # flip, so the unique root inside is self-conjugate
        self.real = (ball.mid_im == 0)
        rect = ball.rect(ctx)
        if self.real:
            e1 = ctx.exp(rect.re)
            powers = [ctx.one()]
            for _ in range(delta):
                powers.append(ctx.mul(powers[-1], e1))
            self.e_lo = [p.lo for p in powers]
            self.e_hi = [p.hi for p in powers]
        else:
            e1 = ctx.cexp(rect)
            self.cpowers = [ctx.complex_exact(1)]
            for _ in range(delta):
                self.cpowers.append(ctx.cmul(self.cpowers[-1], e1))

    def abs_value(self, vec: tuple[int, ...]):
        ctx = self.ctx
        if self.real:
            dn, up = ctx._dn, ctx._up
            lo = gmpy2.mpfr(0)
            hi = gmpy2.mpfr(0)
            for a, elo, ehi in zip(vec, self.e_lo, self.e_hi):
                if a == 0:
                    continue
                if a > 0:
                    lo = dn.fma(a, elo, lo)
                    hi = up.fma(a, ehi, hi)
                else:
                    lo = dn.fma(a, ehi, lo)
                    hi = up.fma(a, elo, hi)
            if lo >= 0:
                return lo, hi
            if hi <= 0:
                return dn.minus(hi), up.minus(lo)
            return gmpy2.mpfr(0), max(up.minus(lo), hi)
        acc = ctx.complex_exact(0)
        for a, pw in zip(vec, self.cpowers):
            if a:
                acc = ctx.cadd(acc, ctx.cmul_scalar(pw, a))
        mod = ctx.cabs(acc)
        return mod.lo, mod.hi


@dataclass(frozen=True)
class MinAbsResult:
    alpha_descriptor: str
    delta: int
    H: int
    min_lo: Fraction
    min_hi: Fraction
    argmin: tuple[int, ...]
    evaluations: int
    final_precision: int


@dataclass(frozen=True)
class _BlockResult:
    lead: int
    lo: Fraction | None
    hi: Fraction | None
    argmin: tuple[int, ...] | None
    count: int


def _scan_block(alpha, delta, H, lead, precision) -> _BlockResult:
    """Best candidate of one leading-coefficient block."""
    ev = _Evaluator(alpha, delta, precision)
    best_lo = best_hi = None
    best_vec = None
    count = 0
    for vec in _block_vectors(delta, H, lead):
        count += 1
        lo, hi = ev.abs_value(vec)
        if best_hi is None or hi < best_hi:
            best_hi, best_vec = hi, vec
        if best_lo is None or lo < best_lo:
            best_lo = lo
    if best_vec is None:
        return _BlockResult(lead, None, None, None, count)
    return _BlockResult(lead, mpfr_to_fraction(best_lo), mpfr_to_fraction(best_hi),
                        best_vec, count)


def _contender_vectors(alpha, delta, H, lead, precision, threshold: Fraction):
    """Vectors of one block whose enclosure dips below threshold, plus scan count."""
    ev = _Evaluator(alpha, delta, precision)
    thresh = ev.ctx.up(threshold)
    out = []
    count = 0
    for vec in _block_vectors(delta, H, lead):
        count += 1
        lo, hi = ev.abs_value(vec)
        if lo <= thresh:  # inclusive: an exact winner can sit on the threshold
            out.append((vec, mpfr_to_fraction(lo), mpfr_to_fraction(hi)))
    return out, count


def min_abs_value(alpha: AlgebraicNumber, delta: int, H: int,
                  precision_bits: int = 64, budget: int = DEFAULT_BUDGET,
                  workers: int = 1, checkpoint_path: str | None = None) -> MinAbsResult:
    """Certified minimum of |P(e^alpha)| over nonzero P, deg <= delta, height <= H.

    Phase 1 sweeps every sign-reduced vector per leading-coefficient block at
    a 64-bit base precision (checkpointable, parallelizable).  Phase 2
    re-scans only the blocks that can still contain the minimum, doubling
    precision until the winner separates from the runner-up (or all survivors
    are enclosed within the requested relative width) and its enclosure is
    strictly positive.
    """
    if H < 1 or delta < 0:
        raise ConstraintViolated("need H >= 1 and delta >= 0")
    total = sign_reduced_count(delta, H)
    if total > budget:
        raise BudgetExceeded(f"{total} polynomials exceed budget {budget}")

    base_prec = 64
    blocks = _run_blocks(alpha, delta, H, base_prec, workers, checkpoint_path)
    evaluations = sum(b.count for b in blocks)
    global_hi = min(b.hi for b in blocks if b.hi is not None)

    prec = base_prec
    target_width = Fraction(1, 2 ** precision_bits)
    while True:
        cands = []
        for b in blocks:
            if b.lo is None or b.lo > global_hi:
                continue
            found, scanned = _contender_vectors(alpha, delta, H, b.lead, prec,
                                                global_hi)
            cands.extend(found)
            evaluations += scanned
        best = min(cands, key=lambda c: c[2])
        rivals = [c for c in cands if c[1] < best[2] and c[0] != best[0]]
        lo_all = min(c[1] for c in cands)
        widths_ok = all(
            c[2] - c[1] <= target_width * max(c[2], Fraction(1))
            for c in [best] + rivals)
        if best[1] > 0 and (not rivals or widths_ok):
            return MinAbsResult(alpha.descriptor(), delta, H,
                                lo_all, best[2], best[0], evaluations, prec)
        prec *= 2
        if prec > PRECISION_CAP:
            raise PrecisionExhausted("minimum separation")
        global_hi = min(global_hi, best[2])


def _run_blocks(alpha, delta, H, precision, workers, checkpoint_path):
    completed: dict[int, _BlockResult] = {}
    config_key = {"alpha": alpha.descriptor(), "delta": delta, "H": H,
                  "precision": precision}
    if checkpoint_path:
        completed = _load_checkpoint(checkpoint_path, config_key)
    leads = [lead for lead in range(0, H + 1) if lead not in completed]
    if workers > 1 and leads:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda lead: _scan_block(alpha, delta, H, lead, precision), leads))
        for res in results:
            completed[res.lead] = res
        if checkpoint_path:
            _save_checkpoint(checkpoint_path, config_key, completed)
    else:
        for lead in leads:
            completed[lead] = _scan_block(alpha, delta, H, lead, precision)
            if checkpoint_path:
                _save_checkpoint(checkpoint_path, config_key, completed)
    return [completed[lead] for lead in sorted(completed)]


def _load_checkpoint(path: str, config_key: dict) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return {}
    if data.get("config") != config_key:
        return {}
    out = {}
    for item in data.get("blocks", []):
        out[item["lead"]] = _BlockResult(
            lead=item["lead"],
            lo=Fraction(item["lo"]) if item["lo"] is not None else None,
            hi=Fraction(item["hi"]) if item["hi"] is not None else None,
            argmin=tuple(item["argmin"]) if item["argmin"] is not None else None,
            count=item["count"])
    return out


def _save_checkpoint(path: str, config_key: dict, completed: dict) -> None:
    data = {
        "schema": "expmeasure.lab_checkpoint/1",
        "config": config_key,
        "blocks": [
            {"lead": b.lead,
             "lo": str(b.lo) if b.lo is not None else None,
             "hi": str(b.hi) if b.hi is not None else None,
             "argmin": list(b.argmin) if b.argmin is not None else None,
             "count": b.count}
            for b in completed.values()
        ],
    }
    with open(path, "w") as fh:
        json.dump(data, fh)


# ---------------------------------------------------------------------------
# Bound vs reality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabRow:
    H: int
    min_lo: Fraction
    min_hi: Fraction
    argmin: tuple[int, ...]
    bound_decimal: str
    log10_gap: float          # log10(measured minimum / certified bound)


@dataclass(frozen=True)
class LabReport:
    alpha_descriptor: str
    d: int
    delta: int
    p: int
    psi_lambda: Fraction
    rows: tuple[LabRow, ...]
    empirical_exponent: float | None
    exponent_gap: float | None
    evaluations: int
    runtime_seconds: float


def _certify_bound_below(bound: BoundEvaluation, min_lo: Fraction) -> float:
    """Certified exp(ln_bound_lo) <= min_lo; returns the log10 gap.

    Raises SoundnessViolation when the bound provably exceeds the minimum.
    """
    if min_lo <= 0:
        raise PrecisionExhausted("measured minimum not separated from zero")
    L = bound.ln_lower_bound[0]
    bits = 128
    while True:
        ctx = IntervalContext(bits)
        ln_min = ctx.log(ctx.exact(min_lo))
        if ln_min.certainly_ge_scalar(L):
            gap = ctx.div(ctx.sub(ln_min, ctx.exact(L)), ctx.log(ctx.exact(10)))
            return float((gap.lo_fraction() + gap.hi_fraction()) / 2)
        if ln_min.certainly_lt_scalar(L):
            raise SoundnessViolation(
                f"certified bound exceeds measured minimum {float(min_lo):.6g}")
        bits *= 2
        if bits > PRECISION_CAP:
            raise PrecisionExhausted("bound-vs-minimum comparison")


def bound_vs_reality(alpha: AlgebraicNumber, d: int | None, delta: int,
                     H_grid, precision_bits: int = 64,
                     budget: int = DEFAULT_BUDGET, workers: int = 1,
                     checkpoint_path: str | None = None) -> LabReport:
    """Run the enumeration oracle against the certified bound on an H grid."""
    start = time.time()
    if d is None:
        d = alpha.degree
    lam = optimal_p(d, delta).lam
    consts = constants(alpha, d, delta, lam)
    rows = []
    evaluations = 0
    for H in H_grid:
        res = min_abs_value(alpha, delta, H, precision_bits, budget, workers,
                            checkpoint_path=(f"{checkpoint_path}.H{H}"
                                             if checkpoint_path else None))
        bound = certified_lower_bound(consts, H)
        gap = _certify_bound_below(bound, res.min_lo)
        rows.append(LabRow(H, res.min_lo, res.min_hi, res.argmin,
                           bound.lower_bound_decimal, gap))
        evaluations += res.evaluations

    empirical = None
    gap_to_psi = None
    if len(rows) >= 4:
        import math
        upper = rows[len(rows) // 2:]
        xs = [math.log(r.H) for r in upper]
        ys = [-math.log(float((r.min_lo + r.min_hi) / 2)) for r in upper]
        count = len(xs)
        mean_x, mean_y = sum(xs) / count, sum(ys) / count
        sxx = sum((x - mean_x) ** 2 for x in xs)
        if sxx > 0:
            empirical = sum((x - mean_x) * (y - mean_y)
                            for x, y in zip(xs, ys)) / sxx
            gap_to_psi = float(consts.psi) - empirical
    return LabReport(alpha.descriptor(), d, delta, lam, consts.psi, tuple(rows),
                     empirical, gap_to_psi, evaluations, time.time() - start)


@dataclass(frozen=True)
class AsymptoticRow:
    d: int
    difference: Fraction
    d_times_difference: Fraction


@dataclass(frozen=True)
class AsymptoticReport:
    delta: int
    rows: tuple[AsymptoticRow, ...]
    max_abs_d_times_difference: Fraction


def asymptotic_spot_check(delta: int, d_grid) -> AsymptoticReport:
    """psi(d, delta, lambda) minus its quadratic asymptote; d*|difference| stays bounded."""
    if delta == 2:
        def asymptote(d):
            return Fraction(8 * d * d - 4 * d) - Fraction(3, 2)
    elif delta == 3:
        def asymptote(d):
            return Fraction(12 * d * d - 6 * d) - Fraction(5, 3)
    else:
        raise ConstraintViolated("asymptotic forms stated for delta in {2, 3}")
    rows = []
    for d in d_grid:
        if d < 2:
            raise ConstraintViolated("need d >= 2")
        diff = optimal_p(d, delta).psi_lambda - asymptote(d)
        rows.append(AsymptoticRow(d, diff, d * diff))
    peak = max((abs(r.d_times_difference) for r in rows), default=Fraction(0))
    return AsymptoticReport(delta, tuple(rows), peak)
