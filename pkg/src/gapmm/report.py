"""Report assembly and serialization.

The JSON schema has stable keys so that reports are machine-diffable:
{run: {seed, version, config, timing}, instances: [{id, kind,
hypotheses: [{name, holds, margin}], conclusions: [{name, holds,
residual}], minimax: [{k, direct, candidate, probe_min, refined,
status}], notes, extras}], summary: {pass, fail, na}}.

Two runs with the same seed and config produce byte-identical files after
removing the run.timing field.
"""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from . import __version__
from .minimax import MinimaxReport
from .theorems import TheoremReport


def jsonify(obj):
    """Recursively convert to JSON-safe values; non-finite floats become
    strings so the output stays strict JSON."""
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [jsonify(v) for v in obj.tolist()]
    return obj


def minimax_dict(r: MinimaxReport) -> dict:
    return {
        "k": r.k,
        "direct": r.direct,
        "candidate": r.candidate_value,
        "probe_min": r.probe_min,
        "refined": r.refined_value,
        "status": r.status,
    }


def theorem_dict(tr: TheoremReport, instance_id: str, kind: str) -> dict:
    return {
        "id": instance_id,
        "kind": kind,
        "hypotheses": [
            {"name": h.name, "holds": h.holds, "margin": h.margin} for h in tr.hypotheses
        ],
        "conclusions": [
            {"name": c.name, "holds": c.holds, "residual": c.residual}
            for c in tr.conclusions
        ],
        "minimax": [minimax_dict(r) for r in tr.minimax],
        "notes": list(tr.notes),
        "extras": tr.extras,
    }


def summarize(instance_dicts) -> dict:
    passed = failed = na = 0
    for inst in instance_dicts:
        for c in inst["conclusions"]:
            if c["holds"] is True:
                passed += 1
            elif c["holds"] is False:
                failed += 1
            else:
                na += 1
    return {"pass": passed, "fail": failed, "na": na}


def build_report(seed: int, config: dict, instance_dicts, timing: float | None = None) -> dict:
    run = {"seed": seed, "version": __version__, "config": config}
    if timing is not None:
        run["timing"] = timing
    return {
        "run": run,
        "instances": instance_dicts,
        "summary": summarize(instance_dicts),
    }


def dump_report(report: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(jsonify(report), fh, indent=2)
        fh.write("\n")


def report_bytes_without_timing(report: dict) -> bytes:
    clean = json.loads(json.dumps(jsonify(report)))
    clean.get("run", {}).pop("timing", None)
    return json.dumps(clean, indent=2).encode()


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
