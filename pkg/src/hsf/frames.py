"""Frame-related operators of a sequence taken at one index of the scale.

With ``Psi`` the N x M matrix of columns and ``W_p = diag(a_j**p)``:

    analysis   C^p = Psi^H W_p            (f -> (<f, psi_k>_p)_k)
    synthesis  D   = Psi                  (c -> sum_k c_k psi_k)
    frame op   S^p = Psi Psi^H W_p = D C^p
    Gram       G^p = Psi^H W_p Psi = C^p D

Optimal frame bounds are the extreme eigenvalues of the similarity-symmetrized
frame operator ``W_p^{1/2} S^p W_p^{-1/2} = K K^H`` with ``K = W_p^{1/2} Psi``,
i.e. the squared extreme singular values of ``K``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .scale import ScaleSpec, make_scale, weight_power
from .sequences import MAX_CONDITION, SequenceFamily

__all__ = [
    "SLOPE_THRESHOLD",
    "ClassificationRecord",
    "CompletenessRecord",
    "CrossFrame",
    "FrameBoundsRecord",
    "analysis_matrix",
    "bound_witnesses",
    "canonical_dual",
    "classify",
    "completeness",
    "cross_frame_operator",
    "frame_bounds",
    "frame_operator_matrix",
    "gram_matrix",
    "loglog_slope",
    "numerical_rank",
    "synthesis_matrix",
]

SLOPE_THRESHOLD = 0.1


@dataclass(frozen=True)
class FrameBoundsRecord:
    lower: float
    upper: float
    index: int
    truncation: int
    sequence_label: str = ""
    span_lower: float = 0.0  # smallest nonzero eigenvalue, i.e. lower bound on span(psi)
    rank: int = 0

    @property
    def complete(self) -> bool:
        return self.rank == self.truncation

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CompletenessRecord:
    numerical_rank: int
    tolerance_used: float
    complete: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ClassificationRecord:
    truncations: list
    lower_bounds: list
    upper_bounds: list
    complete: list
    verdict: str
    slope_lower: float
    slope_upper: float
    index: int = 0
    sequence_label: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        # -inf slope (some lower bound is zero) has no JSON spelling
        for key in ("slope_lower", "slope_upper"):
            if not math.isfinite(d[key]):
                d[key] = None
        return d


class CrossFrame(NamedTuple):
    matrix: np.ndarray
    condition_number: float
    is_reproducing_pair: bool


def _sqrt_weights(scale: ScaleSpec, p: int) -> np.ndarray:
    return weight_power(scale, p / 2)


def _check(scale: ScaleSpec, seq: SequenceFamily) -> np.ndarray:
    if seq.n != scale.n:
        raise ValueError(f"sequence has {seq.n} coordinates, scale has {scale.n}")
    return seq.vectors


def analysis_matrix(scale: ScaleSpec, seq: SequenceFamily, p: int) -> np.ndarray:
    """M x N matrix with row k equal to ``conj(psi_k) * a**p``."""
    psi = _check(scale, seq)
    return psi.conj().T * weight_power(scale, p)[None, :]


def synthesis_matrix(scale: ScaleSpec, seq: SequenceFamily) -> np.ndarray:
    """N x M matrix whose columns are the psi_k.

    The same matrix serves every index p: at finite truncation every
    coefficient vector is summable, so the domains of all D^p coincide.
    """
    return _check(scale, seq).copy()


def frame_operator_matrix(scale: ScaleSpec, seq: SequenceFamily, p: int) -> np.ndarray:
    psi = _check(scale, seq)
    return (psi @ psi.conj().T) * weight_power(scale, p)[None, :]


def gram_matrix(scale: ScaleSpec, seq: SequenceFamily, p: int) -> np.ndarray:
    """``G[k, l] = <psi_l, psi_k>_p``."""
    psi = _check(scale, seq)
    return psi.conj().T @ (weight_power(scale, p)[:, None] * psi)


def numerical_rank(a: np.ndarray) -> tuple[int, float]:
    """Rank with the tolerance ``eps * sigma_max * max(shape)``."""
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0, 0.0
    tol = float(np.finfo(float).eps * s[0] * max(a.shape))
    return int(np.sum(s > tol)), tol


def _symmetrized_svd(scale: ScaleSpec, seq: SequenceFamily, p: int):
    k = _sqrt_weights(scale, p)[:, None] * _check(scale, seq)
    return np.linalg.svd(k, full_matrices=True)


def frame_bounds(scale: ScaleSpec, seq: SequenceFamily, p: int) -> FrameBoundsRecord:
    """Optimal bounds ``A, B`` with ``A|f|_p^2 <= sum_k |<f, psi_k>_p|^2 <= B|f|_p^2``.

    ``A`` is taken over all of H_p, so it is 0 for an incomplete family; the
    lower bound on the span is kept in ``span_lower``.
    """
    s = np.linalg.svd(_sqrt_weights(scale, p)[:, None] * _check(scale, seq), compute_uv=False)
    rank, _ = numerical_rank(seq.vectors)
    upper = float(s[0] ** 2) if s.size else 0.0
    span_lower = float(s[rank - 1] ** 2) if rank else 0.0
    lower = span_lower if rank == scale.n else 0.0
    return FrameBoundsRecord(lower, upper, p, scale.n, seq.label, span_lower, rank)


def bound_witnesses(scale: ScaleSpec, seq: SequenceFamily, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors of H_p at which the lower and upper frame bounds are attained."""
    u, _, _ = _symmetrized_svd(scale, seq, p)
    # last left singular vector: smallest eigenvalue of K K^H over all of C^N
    inv = _sqrt_weights(scale, -p)
    return inv * u[:, -1], inv * u[:, 0]


def completeness(scale: ScaleSpec, seq: SequenceFamily, p: int) -> CompletenessRecord:
    """Whether span(psi) is all of C^N; the answer does not depend on ``p``."""
    rank, tol = numerical_rank(_check(scale, seq))
    return CompletenessRecord(rank, tol, rank == scale.n)


def loglog_slope(ns: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(value) against log(N); -inf if any value is 0."""
    v = np.asarray(values, dtype=float)
    if np.any(v <= 0):
        return -math.inf
    slope, _ = np.polyfit(np.log(np.asarray(ns, dtype=float)), np.log(v), 1)
    return float(slope)


def _verdict(slope_lower: float, slope_upper: float, complete_all: bool, delta: float) -> str:
    upper_bounded = slope_upper < delta
    lower_flat = abs(slope_lower) < delta
    if complete_all and lower_flat and abs(slope_upper) < delta:
        return "frame"
    if slope_lower <= -delta and upper_bounded:
        return "upper_semi_frame" if complete_all else "bessel_only"
    if slope_upper >= delta and complete_all and slope_lower > -delta:
        return "lower_semi_frame"
    return "none"


def _scale_factory(scale) -> Callable[[int], ScaleSpec]:
    if callable(scale):
        return scale
    formula = scale.formula if isinstance(scale, ScaleSpec) else scale
    if formula == "explicit":
        raise ValueError("a sweep over truncations needs a weight formula, not an explicit list")
    return lambda n: make_scale(formula, n)


def classify(
    scale,
    seq_generator: Callable[[ScaleSpec], SequenceFamily],
    p: int,
    truncations: Sequence[int],
    delta: float = SLOPE_THRESHOLD,
) -> ClassificationRecord:
    """Infer frame / semi-frame behaviour from how optimal bounds trend with N.

    ``scale`` is a weight formula name, a formula-built :class:`ScaleSpec`, or
    a callable ``N -> ScaleSpec``. At every truncation ``seq_generator`` builds
    the family; the log-log slopes of the bounds then decide the verdict:

    * both slopes inside (-delta, delta), complete throughout: ``frame``
    * lower slope <= -delta, upper bounded: ``upper_semi_frame`` if complete
      at every N, else ``bessel_only``
    * upper slope >= delta, lower bounded away from 0: ``lower_semi_frame``
    * otherwise ``none``
    """
    ns = [int(n) for n in truncations]
    if len(ns) < 3:
        raise ValueError("classification needs at least 3 truncations")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("truncations must be strictly increasing")
    from ._parallel import parallel_map

    factory = _scale_factory(scale)

    def cell(n):
        sc = factory(n)
        return frame_bounds(sc, seq_generator(sc), p)

    recs = parallel_map(cell, ns)
    lower = [r.lower for r in recs]
    upper = [r.upper for r in recs]
    complete = [r.complete for r in recs]
    sl, su = loglog_slope(ns, lower), loglog_slope(ns, upper)
    verdict = _verdict(sl, su, all(complete), delta)
    label = recs[0].sequence_label
    return ClassificationRecord(ns, lower, upper, complete, verdict, sl, su, p, label)


def canonical_dual(
    scale: ScaleSpec, seq: SequenceFamily, p: int, spectral_cutoff: float = 1e-12
) -> SequenceFamily:
    """Canonical dual ``phi_k = (S^p)^{-1} psi_k``, declared in H_p.

    Eigenvalues of the symmetrized frame operator below ``spectral_cutoff * B``
    are dropped, which turns the inverse into a pseudo-inverse on the span.
    """
    psi = _check(scale, seq)
    u, s, vh = np.linalg.svd(_sqrt_weights(scale, p)[:, None] * psi, full_matrices=False)
    rank, _ = numerical_rank(psi)
    if rank < scale.n and spectral_cutoff <= 0:
        raise ValueError("singular frame operator: the family is incomplete and no cutoff was given")
    eig = s**2
    keep = eig > spectral_cutoff * (eig[0] if eig.size else 0.0)
    if spectral_cutoff <= 0:
        keep = eig > 0
    sinv = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
    # (K K^H)^+ K = U diag(1/s) V^H
    phi = _sqrt_weights(scale, -p)[:, None] * ((u * sinv[None, :]) @ vh)
    params = {
        "dual_of": seq.label,
        "spectral_cutoff": spectral_cutoff,
        "dropped_eigenvalues": int(scale.n - np.sum(keep)),
    }
    return SequenceFamily(phi, p, f"dual[{p}]{seq.label}", params)


def cross_frame_operator(scale: ScaleSpec, psi: SequenceFamily, phi: SequenceFamily, p: int) -> CrossFrame:
    """``S_{psi,phi} f = sum_k <f, psi_k>_p phi_k`` with its condition number on H_p."""
    a, b = _check(scale, psi), _check(scale, phi)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"families have different lengths: {a.shape[1]} vs {b.shape[1]}")
    mat = (b @ a.conj().T) * weight_power(scale, p)[None, :]
    sym = _sqrt_weights(scale, p)[:, None] * mat * _sqrt_weights(scale, -p)[None, :]
    s = np.linalg.svd(sym, compute_uv=False)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else math.inf
    return CrossFrame(mat, cond, bool(cond <= MAX_CONDITION))
