"""Golden fixtures: recorded CLI runs and their expected output.

A case lives in ``golden/<case>/`` with ``config.json`` holding the argument
list, the output format and a float tolerance, and ``expected.json`` holding
the exit status, the parsed output and a digest of its canonical form.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .cli import run
from .errors import MissingFixture

DEFAULT_ROOT = Path(__file__).resolve().parents[2] / "golden"


def _number(text: str):
    try:
        value = float(text)
    except ValueError:
        return text
    return value if math.isfinite(value) else text


def parse_output(text: str, fmt: str):
    if fmt == "json":
        return json.loads(text)
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        return [rows[0]] + [[_number(c) for c in row] for row in rows[1:]]
    return text.splitlines()


def _canonical_value(value):
    if isinstance(value, float):
        return f"{value:.9f}"
    if isinstance(value, dict):
        return {k: _canonical_value(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_canonical_value(v) for v in value]
    return value


def canonical(value) -> str:
    """Sorted keys, floats at nine fixed decimals, no whitespace."""
    return json.dumps(_canonical_value(value), sort_keys=True, separators=(",", ":"))


def digest(value) -> str:
    return hashlib.sha256(canonical(value).encode()).hexdigest()


def _differences(expected, actual, tol: float, path: str = "$") -> list:
    if isinstance(expected, float) or isinstance(actual, float):
        if isinstance(expected, (int, float)) and isinstance(actual, (int, float)):
            if abs(expected - actual) <= tol:
                return []
        return [f"{path}: expected {expected!r}, got {actual!r}"]
    if isinstance(expected, dict) and isinstance(actual, dict):
        out = []
        for key in sorted(set(expected) | set(actual)):
            if key not in actual or key not in expected:
                out.append(f"{path}.{key}: present on one side only")
            else:
                out += _differences(expected[key], actual[key], tol, f"{path}.{key}")
        return out
    if isinstance(expected, list) and isinstance(actual, list):
        if len(expected) != len(actual):
            return [f"{path}: length {len(expected)} != {len(actual)}"]
        out = []
        for i, (a, b) in enumerate(zip(expected, actual)):
            out += _differences(a, b, tol, f"{path}[{i}]")
        return out
    return [] if expected == actual else [f"{path}: expected {expected!r}, got {actual!r}"]


@dataclass
class GoldenResult:
    case: str
    passed: bool
    differences: list = field(default_factory=list)

    def __str__(self):
        return f"{self.case}: {'PASS' if self.passed else 'FAIL'}"


def _load(case: str, root: Path):
    folder = Path(root) / case
    config_path, expected_path = folder / "config.json", folder / "expected.json"
    if not config_path.exists():
        raise MissingFixture(f"no config.json for golden case {case!r} under {root}")
    config = json.loads(config_path.read_text())
    expected = json.loads(expected_path.read_text()) if expected_path.exists() else None
    return folder, config, expected


def execute(config: dict):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(config["argv"]), out, err)
    lines = err.getvalue().splitlines()
    return status, parse_output(out.getvalue(), config.get("format", "json")), (lines[0] if lines else "")


def verify_golden(case: str, root=DEFAULT_ROOT) -> GoldenResult:
    """Re-run a recorded case and compare with its expected artefact."""
    _, config, expected = _load(case, root)
    if expected is None:
        raise MissingFixture(f"no expected.json for golden case {case!r}")
    status, output, diagnostic = execute(config)
    diffs = []
    if status != expected["exit"]:
        diffs.append(f"exit status {status} != {expected['exit']}")
    if diagnostic != expected.get("diagnostic", ""):
        diffs.append(f"diagnostic {diagnostic!r} != {expected.get('diagnostic', '')!r}")
    if config.get("tolerance", 0) == 0:
        if digest(output) != expected["digest"]:
            diffs.append("digest mismatch")
            diffs += _differences(expected["output"], output, 0.0)
    else:
        diffs += _differences(expected["output"], output, float(config["tolerance"]))
    return GoldenResult(case, not diffs, diffs)


def record_golden(case: str, root=DEFAULT_ROOT) -> dict:
    """Run a case and write its expected.json (used when adding fixtures)."""
    folder, config, _ = _load(case, root)
    status, output, diagnostic = execute(config)
    expected = {"exit": status, "diagnostic": diagnostic, "digest": digest(output), "output": output}
    (folder / "expected.json").write_text(json.dumps(expected, sort_keys=True, indent=2) + "\n")
    return expected


def list_cases(root=DEFAULT_ROOT) -> list:
    root = Path(root)
    if not root.is_dir():
        return []
    return sorted(p.name for p in root.iterdir() if (p / "config.json").exists())
