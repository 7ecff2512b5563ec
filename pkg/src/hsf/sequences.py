"""Finite sequences psi = (psi_1..psi_M) living in a space H_m of the scale.

Random families use numpy's PCG64 bit generator (``numpy.random.default_rng``)
seeded with the given integer, so a (scale, m, M, seed) tuple pins the family
bit-for-bit on any platform numpy supports.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .scale import ChainOperator, ScaleSpec, berezanskii_map, weight_power

__all__ = [
    "MAX_CONDITION",
    "SequenceFamily",
    "canonical_basis",
    "random_bessel",
    "riesz_from_operator",
    "transform_sequence",
    "weighted_basis",
]

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class SequenceFamily:
    """Columns of ``vectors`` (shape N x M) are the psi_k, declared to live in H_{ambient_index}."""

    vectors: np.ndarray
    ambient_index: int
    label: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.array(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[1] < 1:
            raise ValueError(f"a sequence needs an N x M array with M >= 1, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("sequence contains non-finite entries")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def count(self) -> int:
        return self.vectors.shape[1]

    def to_dict(self) -> dict:
        params = {k: v for k, v in self.params.items() if not isinstance(v, np.ndarray)}
        return {
            "label": self.label,
            "ambient_index": self.ambient_index,
            "n": self.n,
            "params": params,
            "columns": [[[float(z.real), float(z.imag)] for z in col] for col in self.vectors.T],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SequenceFamily":
        cols = np.array(d["columns"], dtype=float)
        vectors = (cols[..., 0] + 1j * cols[..., 1]).T
        return cls(vectors, int(d["ambient_index"]), d.get("label", ""), dict(d.get("params", {})))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "SequenceFamily":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        """Coordinate matrix as CSV: one row per coordinate j, columns ``re_k``/``im_k`` per vector."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j"] + [f"{part}_{k + 1}" for k in range(self.count) for part in ("re", "im")])
        for j, row in enumerate(self.vectors):
            w.writerow([j + 1] + [repr(float(x)) for z in row for x in (z.real, z.imag)])
        return buf.getvalue()


def canonical_basis(scale: ScaleSpec, m: int) -> SequenceFamily:
    return SequenceFamily(np.eye(scale.n), m, "canonical_basis", {})


def weighted_basis(scale: ScaleSpec, m: int, s: float) -> SequenceFamily:
    """Columns ``a_k**s e_k``; ``s = -m/2`` gives an orthonormal basis of H_m."""
    return SequenceFamily(np.diag(weight_power(scale, s)), m, f"weighted_basis(s={s:g})", {"s": s})


def riesz_from_operator(scale: ScaleSpec, m: int, T) -> SequenceFamily:
    """Image ``T u_k`` of the orthonormal basis ``u_k = a_k**(-m/2) e_k`` of H_m.

    ``T`` is a :class:`ChainOperator` on H_m (or a bare matrix, taken as one).
    Its Riesz bounds are the squared extreme singular values of T as an
    operator on H_m.
    """
    if not isinstance(T, ChainOperator):
        T = ChainOperator(np.asarray(T, dtype=complex), m, m)
    if T.source != m or T.target != m:
        raise ValueError(f"operator is declared H_{T.source}->H_{T.target}, expected H_{m}->H_{m}")
    if T.matrix.shape[0] != scale.n:
        raise ValueError(f"operator size {T.matrix.shape[0]} does not match truncation {scale.n}")
    sym = weight_power(scale, m / 2)[:, None] * T.matrix * weight_power(scale, -m / 2)[None, :]
    cond = np.linalg.cond(sym)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise ValueError(f"operator is numerically singular on H_{m} (condition {cond:.3g})")
    vectors = T.matrix * weight_power(scale, -m / 2)[None, :]
    return SequenceFamily(vectors, m, "riesz_from_operator", {"operator": T.matrix, "condition": float(cond)})


def random_bessel(scale: ScaleSpec, m: int, count: int, seed: int) -> SequenceFamily:
    """Complex Gaussian family rescaled so its Bessel bound in H_m is at most 1."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((scale.n, count)) + 1j * rng.standard_normal((scale.n, count))
    top = np.linalg.norm(weight_power(scale, m / 2)[:, None] * z, 2)
    if top > 0:
        z = z / top
    return SequenceFamily(z, m, f"random_bessel(M={count},seed={seed})", {"count": count, "seed": seed})


def transform_sequence(scale: ScaleSpec, seq: SequenceFamily, p: int, r: int) -> SequenceFamily:
    """Columns ``I_{p,r} psi_k``, now declared in H_r."""
    if p == r:
        return seq
    return replace(
        seq,
        vectors=berezanskii_map(scale, p, r, seq.vectors),
        ambient_index=r,
        label=f"I[{p}->{r}]{seq.label}",
    )
