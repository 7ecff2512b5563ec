"""Finite-dimensional model of an A-scale of Hilbert spaces.

The generator A is diagonal, ``A e_j = a_j e_j`` with every ``a_j >= 1``.
Truncated to N coordinates, the space H_p is C^N with the weighted inner
product

    <x, y>_p = sum_j a_j**p * x_j * conj(y_j)

so every chain operator is an N x N matrix acting on canonical coordinates.
Norms and adjoints of such a matrix depend on the indices it is declared
between, which is why :class:`ChainOperator` carries both.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "FORMULAS",
    "MAX_INDEX",
    "ChainOperator",
    "ScaleSpec",
    "berezanskii_map",
    "berezanskii_operator",
    "dual_index",
    "hilbert_adjoint",
    "inclusion_adjoint",
    "inclusion_adjoint_inverse",
    "inclusion_adjoint_operator",
    "inner_product",
    "is_berezanskii",
    "make_scale",
    "norm",
    "operator_norm",
    "pivot_adjoint",
    "shifted_generator",
    "weight_power",
]

MAX_INDEX = 16
# log of the largest power we allow; float64 overflows just above exp(709.78)
_MAX_LOG_POWER = 700.0

FORMULAS = ("linear", "shifted_quadratic", "exponential", "constant", "explicit")


def _formula_weights(formula: str, n: int) -> np.ndarray:
    j = np.arange(1, n + 1, dtype=float)
    if formula == "linear":
        return j
    if formula == "shifted_quadratic":
        return 1.0 + j**2
    if formula == "exponential":
        return np.ldexp(1.0, np.arange(1, n + 1))
    if formula == "constant":
        return np.ones(n)
    raise ValueError(f"unknown weight formula {formula!r}; expected one of {FORMULAS}")


@dataclass(frozen=True)
class ScaleSpec:
    """Generator weights ``a_1..a_N`` of a truncated diagonal A-scale."""

    weights: tuple[float, ...]
    formula: str = "explicit"
    _w: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("a scale needs at least one weight")
        if not np.all(np.isfinite(w)):
            raise ValueError("non-finite weight")
        if np.any(w < 1.0):
            bad = int(np.argmax(w < 1.0))
            raise ValueError(f"weight below 1 at position {bad}: {w[bad]!r} (the generator must satisfy A >= 1)")
        w.setflags(write=False)
        object.__setattr__(self, "weights", tuple(float(v) for v in w))
        object.__setattr__(self, "_w", w)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def array(self) -> np.ndarray:
        """Read-only float array of the weights."""
        return self._w

    @property
    def is_trivial(self) -> bool:
        """True when all weights coincide, i.e. every H_p carries the same topology."""
        return bool(np.all(self._w == self._w[0]))

    def to_dict(self) -> dict:
        return {"formula": self.formula, "n": self.n, "weights": list(self.weights)}

    @classmethod
    def from_dict(cls, d: dict) -> "ScaleSpec":
        weights = d["weights"]
        if "n" in d and int(d["n"]) != len(weights):
            raise ValueError(f"n={d['n']} does not match {len(weights)} weights")
        return cls(tuple(float(w) for w in weights), d.get("formula", "explicit"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ScaleSpec":
        return cls.from_dict(json.loads(text))


def make_scale(formula: str, n: int | None = None, weights: Sequence[float] | None = None) -> ScaleSpec:
    """Build a scale from a named weight formula or an explicit weight list.

    >>> make_scale("linear", 3).weights
    (1.0, 2.0, 3.0)
    >>> make_scale("explicit", weights=[1, 4, 9]).weights
    (1.0, 4.0, 9.0)
    """
    if formula == "explicit":
        if weights is None:
            raise ValueError("explicit scale needs a weight list")
        if n is not None and n != len(weights):
            raise ValueError(f"n={n} does not match {len(weights)} explicit weights")
        return ScaleSpec(tuple(float(w) for w in weights), "explicit")
    if n is None or int(n) < 1:
        raise ValueError(f"truncation must be a positive integer, got {n!r}")
    return ScaleSpec(tuple(_formula_weights(formula, int(n))), formula)


def _check_index(p) -> None:
    if abs(p) > MAX_INDEX:
        raise ValueError(f"index {p} outside the supported range [-{MAX_INDEX}, {MAX_INDEX}]")


def weight_power(scale: ScaleSpec, p: float) -> np.ndarray:
    """Return the vector ``a_j**p``.

    Raises OverflowError rather than silently producing inf or 0 when the
    power leaves the float64 range.
    """
    _check_index(p)
    return _power(scale, p)


def _power(scale: ScaleSpec, e: float) -> np.ndarray:
    w = scale.array
    if abs(e) * math.log(float(w.max())) > _MAX_LOG_POWER:
        raise OverflowError(f"a_j**{e} leaves the float64 range for max weight {w.max():g}")
    if e == 0:
        return np.ones_like(w)
    return np.power(w, e)


def _scale_rows(scale: ScaleSpec, exponent: float, x: np.ndarray) -> np.ndarray:
    # multiplying by a**e for e >= 0 and dividing by a**|e| otherwise keeps
    # round trips x -> a**e x -> x accurate to an ulp
    x = np.asarray(x)
    if x.shape[0] != scale.n:
        raise ValueError(f"vector length {x.shape[0]} does not match truncation {scale.n}")
    if exponent == 0:
        return x.copy()
    s = _power(scale, abs(exponent))
    if x.ndim == 2:
        s = s[:, None]
    return x * s if exponent > 0 else x / s


def _vec(scale: ScaleSpec, x) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != scale.n:
        raise ValueError(f"expected a vector of length {scale.n}, got shape {x.shape}")
    return x


def inner_product(scale: ScaleSpec, p: int, x, y) -> complex:
    """``<x, y>_p``; linear in ``x``, conjugate-linear in ``y``."""
    x, y = _vec(scale, x), _vec(scale, y)
    return complex(np.sum(weight_power(scale, p) * x * np.conj(y)))


def norm(scale: ScaleSpec, p: int, x) -> float:
    x = _vec(scale, x)
    return float(np.sqrt(np.sum(weight_power(scale, p) * np.abs(x) ** 2)))


def inclusion_adjoint(scale: ScaleSpec, r: int, p: int, f):
    """Apply ``iota_{r,p}: H_r -> H_p``, the adjoint of the inclusion H_p in H_r.

    It is characterised by ``<f, x>_r = <iota_{r,p} f, x>_p`` and acts as
    ``f_j -> a_j**(r-p) f_j``. Accepts a vector or an (N, k) stack.
    """
    if r > p:
        raise ValueError(f"not an inclusion direction: r={r} > p={p}")
    return _scale_rows(scale, r - p, f)


def inclusion_adjoint_inverse(scale: ScaleSpec, r: int, p: int, g):
    """Apply ``iota_{r,p}^{-1}``, i.e. ``g_j -> a_j**(p-r) g_j``.

    Unbounded as r and p drift apart; at finite truncation its norm is
    ``sqrt(max_j a_j**(p-r))`` from H_p to H_r.
    """
    if r > p:
        raise ValueError(f"not an inclusion direction: r={r} > p={p}")
    return _scale_rows(scale, p - r, g)


def berezanskii_map(scale: ScaleSpec, p: int, r: int, x):
    """Apply the unitary ``I_{p,r} = B^r F^p: H_p -> H_r``, i.e. ``x_j -> a_j**((p-r)/2) x_j``."""
    return _scale_rows(scale, (p - r) / 2, x)


def is_berezanskii(p: int, r: int) -> bool:
    """Whether ``I_{p,r}`` links the two extremes of a rigged triple (``p - r`` even)."""
    return (p - r) % 2 == 0


def dual_index(p: int, pivot: int) -> int:
    """Index of the dual of H_p when H_pivot is taken as the central space."""
    if pivot > p:
        raise ValueError(f"pivot {pivot} must not exceed p={p}")
    return 2 * pivot - p


@dataclass(frozen=True)
class ChainOperator:
    """Matrix of an operator ``H_source -> H_target`` in canonical coordinates."""

    matrix: np.ndarray
    source: int
    target: int

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"chain operators are square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: "ChainOperator") -> "ChainOperator":
        if other.target != self.source:
            raise ValueError(
                f"cannot compose H_{other.source}->H_{other.target} with H_{self.source}->H_{self.target}"
            )
        return ChainOperator(self.matrix @ other.matrix, other.source, self.target)

    def __call__(self, x):
        return self.matrix @ np.asarray(x)


def _diag_operator(scale: ScaleSpec, exponent: float, source: int, target: int) -> ChainOperator:
    return ChainOperator(np.diag(_scale_rows(scale, exponent, np.ones(scale.n))), source, target)


def berezanskii_operator(scale: ScaleSpec, p: int, r: int) -> ChainOperator:
    return _diag_operator(scale, (p - r) / 2, p, r)


def inclusion_adjoint_operator(scale: ScaleSpec, r: int, p: int) -> ChainOperator:
    if r > p:
        raise ValueError(f"not an inclusion direction: r={r} > p={p}")
    return _diag_operator(scale, r - p, r, p)


def operator_norm(scale: ScaleSpec, T: ChainOperator) -> float:
    """Norm of ``T`` as a map between its declared weighted spaces."""
    left = weight_power(scale, T.target / 2)[:, None]
    right = weight_power(scale, -T.source / 2)[None, :]
    return float(np.linalg.norm(left * T.matrix * right, 2))


def hilbert_adjoint(scale: ScaleSpec, T: ChainOperator) -> ChainOperator:
    """Hilbert-space adjoint ``T*: H_target -> H_source`` (Riesz maps of both endpoints)."""
    m = T.matrix.conj().T
    m = weight_power(scale, -T.source)[:, None] * m * weight_power(scale, T.target)[None, :]
    return ChainOperator(m, T.target, T.source)


def pivot_adjoint(scale: ScaleSpec, T: ChainOperator) -> ChainOperator:
    """Adjoint with respect to the H_0 pairing: ``T★ = I_{p,-p} T* I_{-q,q}``.

    For ``T: H_p -> H_q`` the result maps ``H_{-q} -> H_{-p}`` and satisfies
    ``<alpha, T x>_0 = <T★ alpha, x>_0``.
    """
    p, q = T.source, T.target
    return berezanskii_operator(scale, p, -p) @ hilbert_adjoint(scale, T) @ berezanskii_operator(scale, -q, q)


def shifted_generator(scale: ScaleSpec, p: int) -> ChainOperator:
    """The generator re-centred at H_p: ``A_p = I_{2+p,p}: H_{2+p} -> H_p``."""
    return berezanskii_operator(scale, 2 + p, p)
