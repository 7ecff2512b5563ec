"""Execute a validated :class:`~hsf.config.ExperimentPlan` and write its report."""

from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .config import ExperimentPlan
from .frames import analysis_matrix, bound_witnesses, classify, completeness, frame_bounds, numerical_rank
from .propagation import (
    Check,
    run_collapse_study,
    run_duality_study,
    run_pivot_adjoint_suite,
    run_propagation_suite,
    run_transfer_suite,
    run_unitarity_suite,
)
from .scale import ChainOperator, ScaleSpec, make_scale
from .sequences import (
    SequenceFamily,
    canonical_basis,
    random_bessel,
    riesz_from_operator,
    weighted_basis,
)

__all__ = ["CSV_COLUMNS", "ReportBundle", "StudyResult", "emit", "load_bundle", "run_plan"]

CSV_COLUMNS = ("study", "claim", "p", "r", "m", "N", "value", "threshold", "pass")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


@dataclass
class StudyResult:
    index: int
    kind: str
    name: str
    status: str  # "ok" or "error"
    report: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    error: str = ""
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "ok" and all(c["pass"] for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "name": self.name,
            "status": self.status,
            "error": self.error,
            "pass": self.passed,
            "checks": self.checks,
            "report": self.report,
        }


@dataclass
class ReportBundle:
    plan: dict
    studies: list
    version: str = __version__
    timestamp: str = ""

    @property
    def summary(self) -> dict:
        checks = [c for s in self.studies for c in s.checks]
        return {
            "studies": len(self.studies),
            "studies_passed": sum(s.passed for s in self.studies),
            "studies_errored": sum(s.status == "error" for s in self.studies),
            "checks": len(checks),
            "checks_passed": sum(bool(c["pass"]) for c in checks),
            "checks_failed": sum(not c["pass"] for c in checks),
        }

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.studies)

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "tool": "hsf",
            "version": self.version,
            "plan": self.plan,
            "summary": self.summary,
            "pass": self.passed,
            "studies": [s.to_dict() for s in self.studies],
        }
        if timing:
            # the only part of the report outside the determinism contract
            d["timing"] = {
                "timestamp": self.timestamp,
                "wall_time_s": [s.wall_time_s for s in self.studies],
            }
        return _jsonable(d)

    @classmethod
    def from_dict(cls, d: dict) -> "ReportBundle":
        timing = d.get("timing", {})
        walls = timing.get("wall_time_s", [])
        studies = []
        for i, s in enumerate(d["studies"]):
            studies.append(StudyResult(
                s["index"], s["kind"], s["name"], s["status"], s.get("report", {}), s.get("checks", []),
                s.get("error", ""), walls[i] if i < len(walls) else 0.0,
            ))
        return cls(d["plan"], studies, d.get("version", __version__), timing.get("timestamp", ""))


def load_bundle(path) -> ReportBundle:
    return ReportBundle.from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------- building blocks


def build_scale(desc: dict, n: int | None = None) -> ScaleSpec:
    if desc["formula"] == "explicit":
        return make_scale("explicit", weights=desc["weights"])
    return make_scale(desc["formula"], n if n is not None else desc["n"])


def _derive_seed(*parts: int) -> int:
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


def sequence_generator(desc: dict, seed: int) -> Callable[[ScaleSpec], SequenceFamily]:
    """Turn a sequence descriptor into ``scale -> SequenceFamily``."""
    kind, m = desc["kind"], desc["m"]
    if kind == "canonical_basis":
        return lambda sc: canonical_basis(sc, m)
    if kind == "weighted_basis":
        s = desc.get("s", -m / 2)
        return lambda sc: weighted_basis(sc, m, s)
    if kind == "riesz_from_operator":
        op = desc["operator"]

        def make(sc):
            if op == "identity":
                mat = np.eye(sc.n)
            elif op == "diag_linear":
                mat = np.diag(np.arange(1.0, sc.n + 1))
            elif isinstance(op, dict):
                mat = op["scalar"] * np.eye(sc.n)
            else:
                mat = np.asarray(op, dtype=float)
            return riesz_from_operator(sc, m, ChainOperator(mat, m, m))

        return make
    if kind == "random_bessel":
        def make(sc):
            if "count" in desc:
                count = desc["count"]
            else:
                count = max(1, math.ceil(desc.get("redundancy", 1.0) * sc.n))
            return random_bessel(sc, m, count, seed)

        return make
    raise ValueError(f"unknown sequence kind {kind!r}")


def _frame_bounds_study(sc, seq, study):
    indices = study.get("indices", [study.get("p", seq.ambient_index)])
    expect = study.get("expect", {})
    tol = study.get("tolerance", 1e-12)
    records, checks = [], []
    for p in indices:
        b = frame_bounds(sc, seq, p)
        records.append(b.to_dict())
        lo, hi = bound_witnesses(sc, seq, p)
        for which, f, target in (("lower", lo, b.lower), ("upper", hi, b.upper)):
            w = sc.array ** p
            attained = float(np.sum(np.abs(analysis_matrix(sc, seq, p) @ f) ** 2) / np.sum(w * np.abs(f) ** 2))
            err = abs(attained - target) / max(1.0, abs(b.upper))
            checks.append(Check("frame_bounds", f"{which}_bound_attained", err, 1e-8, err <= 1e-8, p=p, N=sc.n,
                                statement=f"a unit vector of H_p attains the optimal {which} bound"))
        key = str(p)
        if key in expect:
            for which, val in zip(("lower", "upper"), expect[key]):
                got = getattr(b, which)
                err = abs(got - val) / max(1.0, abs(val))
                checks.append(Check("frame_bounds", f"{which}_bound_expected", err, tol, err <= tol, p=p, N=sc.n,
                                    statement=f"{which} bound equals {val!r}"))
    return {"bounds": records}, checks


def _completeness_study(sc, seq, study):
    indices = study.get("indices", [study.get("p", seq.ambient_index)])
    rec = completeness(sc, seq, indices[0])
    ranks = {p: numerical_rank(analysis_matrix(sc, seq, p))[0] for p in indices}
    same = len(set(ranks.values())) == 1
    checks = [Check("completeness", "rank_independent_of_index", float(len(set(ranks.values()))), 1.0, same,
                    N=sc.n, statement="the analysis operators at all indices have the same rank")]
    if "complete" in study.get("expect", {}):
        want = bool(study["expect"]["complete"])
        checks.append(Check("completeness", "complete_expected", float(rec.complete), float(want),
                            rec.complete == want, N=sc.n, statement=f"completeness is {want}"))
    return {"completeness": rec.to_dict(), "ranks": {str(k): v for k, v in ranks.items()}}, checks


def _classify_study(plan_scale, study, gen):
    rec = classify(lambda n: build_scale(plan_scale, n), gen, study["p"], study["truncations"])
    checks = []
    expect = study.get("expect", {})
    if "verdict" in expect:
        checks.append(Check("classify", "verdict", 0.0, 0.0, rec.verdict == expect["verdict"], p=study["p"],
                            statement=f"verdict is {expect['verdict']}"))
    for key, attr in (("slope_lower", rec.slope_lower), ("slope_upper", rec.slope_upper)):
        if key in expect:
            target, tol = expect[key]
            err = abs(attr - target) if math.isfinite(attr) else math.inf
            checks.append(Check("classify", key, err, tol, err <= tol, p=study["p"],
                                statement=f"{key} within {tol} of {target}"))
    return rec.to_dict(), checks


def _run_study(plan: ExperimentPlan, i: int, study: dict, plan_seed: int):
    kind = study["kind"]
    scale_desc = study.get("scale", plan.scale)
    seed = _derive_seed(plan_seed, i)
    gen = None
    if "sequence" in study:
        desc = plan.sequences[study["sequence"]]
        seq_seed = desc.get("seed", plan_seed)
        if plan_seed != plan.seed:
            seq_seed = _derive_seed(plan_seed, seq_seed)
        gen = sequence_generator(desc, seq_seed)
    kw = {k: study[k] for k in ("n_random", "tolerance") if k in study}

    if kind == "classify":
        return _classify_study(scale_desc, study, gen)
    if kind == "collapse":
        rep = run_collapse_study(lambda n: build_scale(scale_desc, n), gen, study["p"], study["q"],
                                 study["truncations"])
        return rep.to_dict(), rep.checks
    if kind == "unitarity":
        lo, hi = study.get("index_range", [-4, 4])
        rep = run_unitarity_suite(build_scale(scale_desc), range(lo, hi + 1), seed=seed, **kw)
        return rep.to_dict(), rep.checks
    if kind == "pivot_adjoint":
        rep = run_pivot_adjoint_suite(build_scale(scale_desc), n_ops=study.get("n_ops", 20), seed=seed,
                                      **{k: v for k, v in kw.items() if k == "tolerance"})
        return rep.to_dict(), rep.checks

    sc = build_scale(scale_desc)
    seq = gen(sc)
    if kind == "frame_bounds":
        return _frame_bounds_study(sc, seq, study)
    if kind == "completeness":
        return _completeness_study(sc, seq, study)
    if kind == "transfer":
        rep = run_transfer_suite(sc, seq, study["p"], study["r"], seed=seed, **kw)
    elif kind == "propagation":
        rep = run_propagation_suite(sc, seq, study["r"], study["p"], study["m"], seed=seed, **kw)
    elif kind == "duality":
        rep = run_duality_study(sc, seq, study["r"], study["p"], study["m"], seed=seed, **kw)
    else:
        raise ValueError(f"unknown study kind {kind!r}")
    return rep.to_dict(), rep.checks


def run_plan(plan: ExperimentPlan, seed_override: int | None = None) -> ReportBundle:
    """Run every study in declaration order; a failing study never stops the others."""
    plan_seed = plan.seed if seed_override is None else int(seed_override)
    results = []
    for i, study in enumerate(plan.studies):
        name = study.get("name") or f"{study['kind']}#{i}"
        t0 = time.perf_counter()
        try:
            report, checks = _run_study(plan, i, study, plan_seed)
            rows = [c.to_dict() | {"study": name, "pass": c.passed} for c in checks]
            res = StudyResult(i, study["kind"], name, "ok", _jsonable(report), _jsonable(rows))
        except Exception as exc:  # captured per study by contract
            res = StudyResult(i, study["kind"], name, "error", error=f"{type(exc).__name__}: {exc}")
        res.wall_time_s = time.perf_counter() - t0
        results.append(res)
    echo = dict(plan.raw)
    if seed_override is not None:
        echo["seed_override"] = int(seed_override)
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return ReportBundle(_jsonable(echo), results, __version__, stamp)


# ---------------------------------------------------------------- emission


def _csv_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def bundle_to_csv(bundle: ReportBundle) -> str:
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in bundle.studies:
        if s.status == "error":
            w.writerow([s.name, "error", "", "", "", "", "", "", "false"])
            continue
        for c in s.checks:
            w.writerow([_csv_value(c.get(col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def bundle_to_json(bundle: ReportBundle, timing: bool = True) -> str:
    return json.dumps(bundle.to_dict(timing=timing), indent=2, allow_nan=False) + "\n"


def emit(bundle: ReportBundle, fmt: str, path) -> int:
    """Write the bundle as ``csv`` or ``json``; return the exit status (0 iff every check passed)."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    text = bundle_to_csv(bundle) if fmt == "csv" else bundle_to_json(bundle)
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
    return 0 if bundle.passed else 1
