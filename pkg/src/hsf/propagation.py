"""Executable checks of how frame properties move along the scale.

Two kinds of movement are studied. Transporting a sequence by the unitary
``I_{p,r}`` preserves everything (bounds, duals, Gram matrix). Keeping the
sequence fixed and changing the index only preserves one-sided properties:
Bessel bounds can only shrink towards larger spaces (smaller index), lower
bounds can only grow towards smaller spaces (larger index), and no family can
stay a frame at two different indices of a non-trivial scale.

Every study returns a report whose ``checks`` are flat :class:`Check` rows;
``report.passed`` is true iff every check passed.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .frames import (
    SLOPE_THRESHOLD,
    FrameBoundsRecord,
    _scale_factory,
    analysis_matrix,
    canonical_dual,
    completeness,
    cross_frame_operator,
    frame_bounds,
    frame_operator_matrix,
    gram_matrix,
    loglog_slope,
    numerical_rank,
    synthesis_matrix,
)
from .scale import (
    ChainOperator,
    ScaleSpec,
    berezanskii_map,
    hilbert_adjoint,
    inclusion_adjoint,
    inclusion_adjoint_inverse,
    operator_norm,
    pivot_adjoint,
    weight_power,
)
from .sequences import SequenceFamily, transform_sequence

__all__ = [
    "Check",
    "CollapseReport",
    "DualityReport",
    "PropagationReport",
    "ScaleReport",
    "TransferReport",
    "run_collapse_study",
    "run_duality_study",
    "run_pivot_adjoint_suite",
    "run_propagation_suite",
    "run_transfer_suite",
    "run_unitarity_suite",
]


@dataclass
class Check:
    study: str
    claim: str
    value: float
    threshold: float
    passed: bool
    p: int | None = None
    r: int | None = None
    m: int | None = None
    N: int | None = None
    statement: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["value"] = _finite_or_none(self.value)
        d["threshold"] = _finite_or_none(self.threshold)
        return d


def _finite_or_none(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _bounds_dict(b: FrameBoundsRecord) -> dict:
    return b.to_dict()


class _Report:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        raise NotImplementedError


# ---------------------------------------------------------------- residuals


def _op_residual(scale: ScaleSpec, x: np.ndarray, y: np.ndarray, source: int | None, target: int | None) -> float:
    """``|x - y| / |y|`` in the operator norm between the given spaces; None marks l^2."""
    def sym(a):
        left = np.ones(a.shape[0]) if target is None else weight_power(scale, target / 2)
        right = np.ones(a.shape[1]) if source is None else weight_power(scale, -source / 2)
        return left[:, None] * a * right[None, :]

    num = np.linalg.norm(sym(x - y), 2)
    den = np.linalg.norm(sym(y), 2)
    return float(num / den) if den > 0 else float(num)


def _vec_residual(scale, x, y, f, source, target) -> float:
    """Worst ``|x f - y f|_target / (|y| |f|_source)`` over the columns of ``f``."""
    def nrm(v, idx):
        w = np.ones(v.shape[0]) if idx is None else weight_power(scale, idx)
        return np.sqrt(np.sum(w[:, None] * np.abs(v) ** 2, axis=0))

    left = np.ones(y.shape[0]) if target is None else weight_power(scale, target / 2)
    right = np.ones(y.shape[1]) if source is None else weight_power(scale, -source / 2)
    ynorm = np.linalg.norm(left[:, None] * y * right[None, :], 2)
    if ynorm == 0:
        ynorm = 1.0
    err = nrm(x @ f - y @ f, target) / (ynorm * nrm(f, source))
    return float(err.max())


def _random_vectors(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    return rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def _rows(scale, p, r, mat):
    """``I_{p,r} @ mat`` without forming a dense diagonal."""
    return berezanskii_map(scale, p, r, mat)


def _cols(scale, p, r, mat):
    """``mat @ I_{p,r}``."""
    return berezanskii_map(scale, p, r, mat.T).T


# ---------------------------------------------------------------- transfer


@dataclass
class TransferReport(_Report):
    identity_residuals: dict
    bound_pairs: tuple
    tolerance: float
    p: int
    r: int
    N: int
    checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "study": "transfer",
            "p": self.p,
            "r": self.r,
            "N": self.N,
            "tolerance": self.tolerance,
            "identity_residuals": self.identity_residuals,
            "bound_pairs": [_bounds_dict(b) for b in self.bound_pairs],
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def run_transfer_suite(
    scale: ScaleSpec,
    seq: SequenceFamily,
    p: int,
    r: int,
    n_random: int = 100,
    tolerance: float = 1e-10,
    seed: int = 0,
) -> TransferReport:
    """Compare the frame operators of ``psi`` at H_p with those of ``I_{p,r} psi`` at H_r.

    Each identity is checked as a matrix equation (relative residual in the
    operator norm between the right weighted spaces) and on ``n_random``
    random inputs.
    """
    if n_random < 1:
        raise ValueError("n_random must be at least 1")
    rng = np.random.default_rng(seed)
    n = scale.n
    psi = seq
    phi = transform_sequence(scale, seq, p, r)
    C_p, C_r = analysis_matrix(scale, psi, p), analysis_matrix(scale, phi, r)
    D_p, D_r = synthesis_matrix(scale, psi), synthesis_matrix(scale, phi)
    S_p, S_r = frame_operator_matrix(scale, psi, p), frame_operator_matrix(scale, phi, r)
    G_p, G_r = gram_matrix(scale, psi, p), gram_matrix(scale, phi, r)
    fn = _random_vectors(rng, n, n_random)
    fm = _random_vectors(rng, psi.count, n_random)

    # (name, lhs, rhs, source index, target index, random inputs, description)
    identities = [
        ("analysis_transfer", C_r, _cols(scale, r, p, C_p), r, None, fn,
         "C^r of I_{p,r}psi equals C^p_psi I_{r,p}"),
        ("analysis_transfer_inverse", C_p, _cols(scale, p, r, C_r), p, None, fn,
         "C^p_psi equals C^r of I_{p,r}psi composed with I_{p,r}"),
        ("synthesis_transfer", D_r, _rows(scale, p, r, D_p), None, r, fm,
         "D^r of I_{p,r}psi equals I_{p,r} D^p_psi"),
        ("synthesis_transfer_inverse", D_p, _rows(scale, r, p, D_r), None, p, fm,
         "D^p_psi equals I_{r,p} D^r of I_{p,r}psi"),
        ("frame_operator_transfer", S_p, _cols(scale, p, r, _rows(scale, r, p, S_r)), p, p, fn,
         "S^p_psi equals I_{r,p} S^r of I_{p,r}psi composed with I_{p,r}"),
        ("gram_transfer", G_p, G_r, None, None, fm,
         "Gram matrix at p of psi equals Gram matrix at r of I_{p,r}psi"),
        ("gram_factorization", C_p @ D_p, G_p, None, None, fm,
         "C^p D^p equals G^p at finite truncation"),
        ("frame_operator_factorization", D_p @ C_p, S_p, p, p, fn,
         "D^p C^p equals S^p"),
    ]
    residuals = {}
    checks = []
    common = dict(p=p, r=r, N=n)
    for name, lhs, rhs, src, tgt, vecs, text in identities:
        mat_res = _op_residual(scale, lhs, rhs, src, tgt)
        vec_res = _vec_residual(scale, lhs, rhs, vecs, src, tgt)
        residuals[name] = max(mat_res, vec_res)
        checks.append(Check("transfer", name, mat_res, tolerance, mat_res <= tolerance, statement=text, **common))
        checks.append(Check("transfer", name + "_vectors", vec_res, tolerance, vec_res <= tolerance,
                            statement=text + " (random inputs)", **common))

    b_psi, b_phi = frame_bounds(scale, psi, p), frame_bounds(scale, phi, r)
    for which in ("lower", "upper"):
        d = _rel(getattr(b_psi, which), getattr(b_phi, which))
        residuals[f"bounds_{which}"] = d
        checks.append(Check("transfer", f"same_{which}_bound", d, tolerance, d <= tolerance,
                            statement=f"I_{{p,r}}psi has the same {which} frame bound in H_r as psi in H_p",
                            **common))
    same_rank = b_psi.rank == b_phi.rank
    checks.append(Check("transfer", "completeness_transfer", float(b_phi.rank), float(b_psi.rank), same_rank,
                        statement="I_{p,r}psi is complete in H_r iff psi is complete in H_p", **common))

    if b_psi.complete:
        dual = canonical_dual(scale, psi, p)
        moved_dual = transform_sequence(scale, dual, p, r)
        cf_r = cross_frame_operator(scale, phi, moved_dual, r)
        res = _op_residual(scale, cf_r.matrix, np.eye(n), r, r)
        residuals["dual_transfer"] = res
        checks.append(Check("transfer", "dual_transfer", res, tolerance, res <= tolerance,
                            statement="I_{p,r} of a dual of psi is a dual of I_{p,r}psi", **common))
        direct = canonical_dual(scale, phi, r).vectors
        res = float(np.linalg.norm(moved_dual.vectors - direct) / np.linalg.norm(direct))
        residuals["canonical_dual_transfer"] = res
        checks.append(Check("transfer", "canonical_dual_transfer", res, tolerance, res <= tolerance,
                            statement="the canonical dual commutes with I_{p,r}", **common))
        cf_p = cross_frame_operator(scale, psi, dual, p)
        d = _rel(cf_p.condition_number, cf_r.condition_number)
        ok = cf_p.is_reproducing_pair and cf_r.is_reproducing_pair and d <= tolerance
        residuals["reproducing_pair_transfer"] = d
        checks.append(Check("transfer", "reproducing_pair_transfer", d, tolerance, ok,
                            statement="a reproducing pair maps to a reproducing pair with the same bounds",
                            **common))

    if psi.count == n and _op_residual(scale, G_p, np.eye(n), None, None) <= tolerance:
        res = _op_residual(scale, G_r, np.eye(n), None, None)
        residuals["orthonormal_basis_transfer"] = res
        checks.append(Check("transfer", "orthonormal_basis_transfer", res, tolerance, res <= tolerance,
                            statement="an orthonormal basis of H_p maps to one of H_r", **common))

    T = seq.params.get("operator")
    if isinstance(T, np.ndarray) and seq.ambient_index == p and psi.count == n:
        # T^{-1} psi_k is the orthonormal basis of H_p the family was built from
        onb = SequenceFamily(np.linalg.solve(T, psi.vectors), p)
        moved = transform_sequence(scale, onb, p, r)
        res = _op_residual(scale, gram_matrix(scale, moved, r), np.eye(n), None, None)
        residuals["riesz_orthonormal_transfer"] = res
        checks.append(Check("transfer", "riesz_orthonormal_transfer", res, tolerance, res <= tolerance,
                            statement="I_{p,r} T^{-1} psi is an orthonormal basis of H_r", **common))

    return TransferReport(residuals, (b_psi, b_phi), tolerance, p, r, n, checks)


# ---------------------------------------------------------------- propagation


@dataclass
class PropagationReport(_Report):
    bounds: dict
    r: int
    p: int
    m: int
    N: int
    checks: list = field(default_factory=list)

    @property
    def monotonicity_checks(self) -> list:
        return [c for c in self.checks if c.claim.startswith(("bessel", "lower", "upper", "frame"))]

    @property
    def completeness_checks(self) -> list:
        return [c for c in self.checks if c.claim.startswith("completeness")]

    def to_dict(self) -> dict:
        return {
            "study": "propagation",
            "r": self.r,
            "p": self.p,
            "m": self.m,
            "N": self.N,
            "bounds": {str(k): _bounds_dict(v) for k, v in self.bounds.items()},
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _leq(a: float, b: float, tol: float) -> bool:
    return a <= b + tol * max(1.0, abs(b))


def run_propagation_suite(
    scale: ScaleSpec,
    seq: SequenceFamily,
    r: int,
    p: int,
    m: int,
    n_random: int = 100,
    tolerance: float = 1e-12,
    identity_tolerance: float = 1e-10,
    seed: int = 0,
) -> PropagationReport:
    """One-sided propagation of bounds and completeness for the unchanged sequence.

    ``tolerance`` is the slack on bound inequalities (relative once a bound
    exceeds 1); ``identity_tolerance`` applies to the analysis-operator
    factorizations.
    """
    if not (r <= p <= m):
        raise ValueError(f"indices must satisfy r <= p <= m, got r={r}, p={p}, m={m}")
    if seq.ambient_index < m:
        raise ValueError(f"sequence declared in H_{seq.ambient_index}, which does not lie inside H_{m}")
    rng = np.random.default_rng(seed)
    n = scale.n
    idx = dict(r=r, p=p, m=m, N=n)
    b = {t: frame_bounds(scale, seq, t) for t in sorted({r, p, m})}
    checks = []

    def add(claim, value, threshold, ok, text):
        checks.append(Check("propagation", claim, value, threshold, bool(ok), statement=text, **idx))

    for lo, hi in ((r, p), (p, m), (r, m)):
        add(f"bessel_downward[{lo}<={hi}]", b[lo].upper - b[hi].upper, tolerance,
            _leq(b[lo].upper, b[hi].upper, tolerance),
            f"a Bessel sequence for H_{hi} is one for H_{lo} with no larger bound")
        add(f"lower_bound_upward[{lo}<={hi}]", b[lo].lower - b[hi].lower, tolerance,
            _leq(b[lo].lower, b[hi].lower, tolerance),
            f"a lower frame bound at H_{lo} remains a lower bound at H_{hi}")

    if b[p].complete:
        ok = b[r].complete and _leq(b[r].upper, b[p].upper, tolerance)
        add("upper_semi_frame_downward", b[r].upper - b[p].upper, tolerance, ok,
            "an upper semi-frame for H_p is an upper semi-frame for H_r with the same bound")
    if b[p].lower > 0:
        ok = (b[r].complete and _leq(b[r].upper, b[p].upper, tolerance)
              and _leq(b[p].lower, b[m].lower, tolerance))
        add("frame_splits", b[p].lower - b[m].lower, tolerance, ok,
            "a frame for H_p is an upper semi-frame for H_r and a lower semi-frame for H_m")

    ranks = {t: numerical_rank(analysis_matrix(scale, seq, t))[0] for t in b}
    flags = {t: ranks[t] == n for t in b}
    add("completeness_consistent", float(len(set(flags.values()))), 1.0, len(set(flags.values())) == 1,
        "completeness in H_p implies completeness in H_r and conversely")
    add("completeness_matches_rank", float(ranks[p]), float(completeness(scale, seq, p).numerical_rank),
        ranks[p] == completeness(scale, seq, p).numerical_rank,
        "the analysis operator is injective exactly when the family spans")

    C_r, C_p = analysis_matrix(scale, seq, r), analysis_matrix(scale, seq, p)
    iota = inclusion_adjoint(scale, r, p, np.eye(n))
    iota_inv = inclusion_adjoint_inverse(scale, r, p, np.eye(n))
    f = _random_vectors(rng, n, n_random)
    for claim, lhs, rhs, src, text in (
        ("analysis_factorization", C_r, C_p @ iota, r, "C^r_psi equals C^p_psi iota_{r,p}"),
        ("analysis_factorization_inverse", C_p, C_r @ iota_inv, p, "C^p_psi equals C^r_psi iota_{r,p}^{-1}"),
    ):
        res = max(_op_residual(scale, lhs, rhs, src, None), _vec_residual(scale, lhs, rhs, f, src, None))
        add(claim, res, identity_tolerance, res <= identity_tolerance, text)

    return PropagationReport(b, r, p, m, n, checks)


# ---------------------------------------------------------------- collapse


@dataclass
class CollapseReport(_Report):
    p: int
    q: int
    truncations: list
    lower_bound_at_q: list
    upper_bound_at_q: list
    lower_bound_at_p: list
    upper_bound_at_p: list
    iota_inverse_norm: list
    iota_inverse_bound: list
    factorization_residual: list
    lower_slope: float
    bound_ratio_trend: float
    norm_slope: float
    trivial_scale: bool
    interpretation: str
    checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k != "checks"}
        for key in ("lower_slope", "bound_ratio_trend", "norm_slope"):
            d[key] = _finite_or_none(d[key])
        d["factorization_residual"] = [_finite_or_none(x) for x in self.factorization_residual]
        d["study"] = "collapse"
        d["pass"] = self.passed
        d["checks"] = [c.to_dict() for c in self.checks]
        return d


def run_collapse_study(
    scale,
    seq_generator: Callable[[ScaleSpec], SequenceFamily],
    p: int,
    q: int,
    truncations: Sequence[int],
    delta: float = SLOPE_THRESHOLD,
    identity_tolerance: float = 1e-10,
) -> CollapseReport:
    """Watch a frame for H_p lose its lower bound at H_q < H_p as N grows.

    If the family were a frame for both spaces, ``iota_{q,p}^{-1} =
    (S^q)^{-1} D^q C^p`` would be bounded and the two norms equivalent. At
    each truncation this records the lower bound at q, the norm of
    ``iota_{q,p}^{-1}: H_p -> H_q``, and the bound ``|(S^q)^{-1}| |D^q| |C^p|
    = sqrt(B_q B_p) / A_q`` that the factorization gives for it. A decaying
    lower bound is consistent with, but of course does not prove, the
    impossibility of being a frame at both indices.
    """
    if q >= p:
        raise ValueError(f"collapse study needs q < p, got q={q}, p={p}")
    ns = [int(n) for n in truncations]
    if len(ns) < 3 or any(b2 <= a for a, b2 in zip(ns, ns[1:])):
        raise ValueError("truncations must be strictly increasing with at least 3 values")
    from ._parallel import parallel_map

    factory = _scale_factory(scale)

    def cell(n):
        sc = factory(n)
        seq = seq_generator(sc)
        bq, bp = frame_bounds(sc, seq, q), frame_bounds(sc, seq, p)
        inv = ChainOperator(np.diag(inclusion_adjoint_inverse(sc, q, p, np.ones(n))), p, q)
        inv_norm = operator_norm(sc, inv)
        if bq.lower > 0:
            bound = math.sqrt(bq.upper * bp.upper) / bq.lower
            s_inv = np.linalg.inv(frame_operator_matrix(sc, seq, q))
            routed = s_inv @ synthesis_matrix(sc, seq) @ analysis_matrix(sc, seq, p)
            resid = _op_residual(sc, routed, inv.matrix, p, q)
        else:
            bound, resid = math.inf, math.nan
        return bq, bp, inv_norm, bound, resid, sc.is_trivial

    cells = parallel_map(cell, ns)
    a_q = [c[0].lower for c in cells]
    b_q = [c[0].upper for c in cells]
    a_p = [c[1].lower for c in cells]
    b_p = [c[1].upper for c in cells]
    norms = [c[2] for c in cells]
    bounds = [c[3] for c in cells]
    resid = [c[4] for c in cells]
    trivial = all(c[5] for c in cells)

    lower_slope = loglog_slope(ns, a_q)
    ratio_slope = loglog_slope(ns, [a / b for a, b in zip(a_q, b_p)])
    norm_slope = loglog_slope(ns, norms)
    slopes_p = (loglog_slope(ns, a_p), loglog_slope(ns, b_p))

    common = dict(p=p, r=q)
    checks = [
        Check("collapse", "frame_at_p", max(abs(s) for s in slopes_p), delta,
              all(a > 0 for a in a_p) and all(abs(s) < delta for s in slopes_p),
              statement="the family is a frame for H_p with N-independent bounds", **common),
        Check("collapse", "lower_bound_nonincreasing",
              max(b2 - a for a, b2 in zip(a_q, a_q[1:])), 0.0,
              all(b2 <= a * (1 + 1e-12) for a, b2 in zip(a_q, a_q[1:])),
              statement="the lower bound at H_q does not increase with N", **common),
    ]
    finite = [x for x in resid if math.isfinite(x)]
    if finite:
        worst = max(finite)
        checks.append(Check("collapse", "inverse_inclusion_factorization", worst, identity_tolerance,
                            worst <= identity_tolerance and len(finite) == len(resid),
                            statement="iota_{q,p}^{-1} equals (S^q)^{-1} D^q C^p", **common))
    if trivial:
        interpretation = (
            "scale is trivial: all weights coincide, the norms of H_q and H_p are equal "
            "and the family stays a frame at both indices"
        )
        ok = abs(lower_slope) < delta and abs(norm_slope) < delta
        checks.append(Check("collapse", "trivial_scale_flat", abs(lower_slope), delta, ok,
                            statement="with equivalent norms the lower bound does not decay", **common))
    else:
        interpretation = (
            f"lower bound at H_{q} decays like N^{lower_slope:.3f} while the norm of "
            f"iota_{{{q},{p}}}^{{-1}} grows like N^{norm_slope:.3f}; consistent with no sequence "
            f"being a frame for both H_{q} and H_{p}"
        )
        checks.append(Check("collapse", "lower_bound_decays", lower_slope, -delta, lower_slope <= -delta,
                            statement="the lower bound at H_q tends to 0", **common))
        checks.append(Check("collapse", "inverse_inclusion_unbounded", norm_slope, delta, norm_slope >= delta,
                            statement="the norm of iota_{q,p}^{-1} diverges", **common))

    return CollapseReport(p, q, ns, a_q, b_q, a_p, b_p, norms, bounds, resid, lower_slope, ratio_slope,
                          norm_slope, trivial, interpretation, checks)


# ---------------------------------------------------------------- duality


@dataclass
class DualityReport(_Report):
    r: int
    p: int
    m: int
    N: int
    dual_bounds: dict
    reconstruction_residuals: dict
    tolerance: float
    checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "study": "duality",
            "r": self.r,
            "p": self.p,
            "m": self.m,
            "N": self.N,
            "tolerance": self.tolerance,
            "dual_bounds": {str(k): _bounds_dict(v) for k, v in self.dual_bounds.items()},
            "reconstruction_residuals": {str(k): v for k, v in self.reconstruction_residuals.items()},
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def run_duality_study(
    scale: ScaleSpec,
    seq: SequenceFamily,
    r: int,
    p: int,
    m: int,
    n_random: int = 100,
    tolerance: float = 1e-8,
    seed: int = 0,
) -> DualityReport:
    """Reconstruct from coefficients taken at a lower index using a dual built at H_m.

    With ``phi`` the canonical dual of ``psi`` in H_m, every ``f`` satisfies
    ``f = iota_{t,m}^{-1} sum_k <f, psi_k>_t phi_k`` for ``r <= t <= m``; at
    ``t = m`` the correction is the identity.
    """
    if not (r <= p <= m):
        raise ValueError(f"indices must satisfy r <= p <= m, got r={r}, p={p}, m={m}")
    if not completeness(scale, seq, m).complete:
        raise ValueError("duality study needs a family that is complete at this truncation")
    rng = np.random.default_rng(seed)
    n = scale.n
    phi = canonical_dual(scale, seq, m)
    idx = dict(r=r, p=p, m=m, N=n)
    checks = []
    dual_bounds = {t: frame_bounds(scale, phi, t) for t in range(r, m + 1)}
    top = dual_bounds[m].upper
    worst = max(dual_bounds[t].upper - top for t in dual_bounds)
    checks.append(Check("duality", "dual_bessel_downward", worst, 1e-12,
                        all(_leq(dual_bounds[t].upper, top, 1e-12) for t in dual_bounds),
                        statement="the dual is a Bessel sequence at every index below m", **idx))

    f = _random_vectors(rng, n, n_random)
    residuals = {}
    for t in range(r, m + 1):
        g = phi.vectors @ (analysis_matrix(scale, seq, t) @ f)
        rec = inclusion_adjoint_inverse(scale, t, m, g)
        w = weight_power(scale, t)[:, None]
        err = np.sqrt(np.sum(w * np.abs(rec - f) ** 2, axis=0) / np.sum(w * np.abs(f) ** 2, axis=0))
        residuals[t] = float(err.max())
    for t, res in residuals.items():
        claim = "reconstruction_at_m" if t == m else f"corrected_reconstruction[{t}]"
        text = ("f equals the sum of <f, psi_k>_m phi_k" if t == m else
                f"f equals iota_{{{t},{m}}}^{{-1}} of the sum of <f, psi_k>_{t} phi_k")
        checks.append(Check("duality", claim, res, tolerance, res <= tolerance, statement=text, **idx))
    return DualityReport(r, p, m, n, dual_bounds, residuals, tolerance, checks)


# ---------------------------------------------------------------- scale-level suites


@dataclass
class ScaleReport(_Report):
    study: str
    N: int
    worst: float
    tolerance: float
    checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "study": self.study,
            "N": self.N,
            "worst": self.worst,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def run_unitarity_suite(
    scale: ScaleSpec,
    indices: Sequence[int] = range(-4, 5),
    n_random: int = 100,
    tolerance: float = 1e-12,
    seed: int = 0,
) -> ScaleReport:
    """``|I_{p,r} x|_r = |x|_p`` and ``I_{r,p} I_{p,r} = 1`` over all index pairs."""
    rng = np.random.default_rng(seed)
    x = _random_vectors(rng, scale.n, n_random)
    checks = []
    worst = 0.0
    for p in indices:
        wp = weight_power(scale, p)[:, None]
        nx = np.sqrt(np.sum(wp * np.abs(x) ** 2, axis=0))
        for r in indices:
            y = berezanskii_map(scale, p, r, x)
            wr = weight_power(scale, r)[:, None]
            ny = np.sqrt(np.sum(wr * np.abs(y) ** 2, axis=0))
            err = float(np.max(np.abs(ny - nx) / nx))
            back = berezanskii_map(scale, r, p, y)
            inv_err = float(np.max(np.abs(back - x) / np.abs(x)))
            worst = max(worst, err)
            checks.append(Check("unitarity", "isometry", err, tolerance, err <= tolerance, p=p, r=r, N=scale.n,
                                statement="I_{p,r} is an isometry from H_p onto H_r"))
            checks.append(Check("unitarity", "inverse", inv_err, tolerance, inv_err <= tolerance, p=p, r=r,
                                N=scale.n, statement="I_{r,p} inverts I_{p,r}"))
    return ScaleReport("unitarity", scale.n, worst, tolerance, checks)


def run_pivot_adjoint_suite(
    scale: ScaleSpec,
    index_pairs: Sequence[tuple[int, int]] = ((1, 0), (0, 2), (2, -1), (-1, 1), (3, 3)),
    n_ops: int = 20,
    tolerance: float = 1e-10,
    seed: int = 0,
) -> ScaleReport:
    """Algebra of the pivot adjoint on random operators.

    For ``T: H_p -> H_q`` and ``U: H_q -> H_s`` (``s`` cycling through the
    pair list) checks the defining pairing, ``T★★ = T``, ``|T★| = |T|`` and
    ``(UT)★ = T★ U★``.
    """
    rng = np.random.default_rng(seed)
    n = scale.n
    checks = []
    worst = 0.0

    def rand_op(src, tgt):
        return ChainOperator(_random_vectors(rng, n, n), src, tgt)

    for i in range(n_ops):
        p, q = index_pairs[i % len(index_pairs)]
        s = index_pairs[(i + 1) % len(index_pairs)][1]
        T, U = rand_op(p, q), rand_op(q, s)
        Ts = pivot_adjoint(scale, T)
        alpha, x = _random_vectors(rng, n, 1)[:, 0], _random_vectors(rng, n, 1)[:, 0]
        lhs = np.vdot(T(x), alpha)  # <alpha, T x>_0 is conjugate-linear in T x
        rhs = np.vdot(x, Ts(alpha))
        pair = abs(lhs - rhs) / (np.linalg.norm(alpha) * np.linalg.norm(T.matrix, 2) * np.linalg.norm(x))
        twice = _op_residual(scale, pivot_adjoint(scale, Ts).matrix, T.matrix, p, q)
        nrm = _rel(operator_norm(scale, Ts), operator_norm(scale, T))
        prod = _op_residual(scale, pivot_adjoint(scale, U @ T).matrix,
                            (Ts @ pivot_adjoint(scale, U)).matrix, -s, -p)
        hilbert = _op_residual(scale, hilbert_adjoint(scale, hilbert_adjoint(scale, T)).matrix, T.matrix, p, q)
        for claim, val, text in (
            ("pairing", pair, "<alpha, T x>_0 = <T★ alpha, x>_0"),
            ("double_adjoint", twice, "T★★ = T"),
            ("norm_preserved", nrm, "|T★| = |T| between the declared spaces"),
            ("product_rule", prod, "(UT)★ = T★ U★"),
            ("hilbert_double_adjoint", hilbert, "T** = T"),
        ):
            worst = max(worst, val)
            checks.append(Check("pivot_adjoint", claim, val, tolerance, val <= tolerance, p=p, r=q, m=s, N=n,
                                statement=text))
    return ScaleReport("pivot_adjoint", n, worst, tolerance, checks)
