"""
File Formats and Counts Estimation
Features:
- Correlation files: CSV (index,value,stderr with "# key: value" header lines) or JSON
- Counts, witness and report JSON with deterministic key order
- Correlation estimates from outcome histograms with inverse-variance merging
- Angle parsing with literal pi fractions ("pi/8", "3pi/16")
"""

import io
import json
import math
import re
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config.witness_catalog import MEASURED_CORRELATIONS
from errors import ArgumentError, DataError, DimensionError, ParseError, ValidationError
from pauli_core import MeasurementSetting, PauliString, derivable_indices
from state_engine import CorrelationSet, CountsRecord
from witness_builder import WitnessSpec, witness_from_dict

PathLike = Union[str, Path]
CSV_COLUMNS = ["index", "value", "stderr"]


# ---------------------------------------------------------------------------
# counts -> correlations
# ---------------------------------------------------------------------------

def _estimate(record: CountsRecord) -> Dict[PauliString, tuple]:
    n = record.setting.n_qubits
    outcomes = np.array([sum(int(bit) << i for i, bit in enumerate(bits))
                         for bits in record.counts], dtype=np.int64)
    counts = np.array(list(record.counts.values()), dtype=float)
    m = record.shots
    estimates = {}
    for j in derivable_indices(record.setting):
        support = j.support_mask
        parity = np.zeros_like(outcomes)
        for b in range(n):
            parity ^= (outcomes >> b) & 1 & ((support >> b) & 1)
        value = float(np.sum((1 - 2 * (parity & 1)) * counts) / m)
        if j.is_identity():
            estimates[j] = (1.0, 0.0)
            continue
        estimates[j] = (value, math.sqrt(max(0.0, 1.0 - value * value) / (m - 1)))
    return estimates


def correlations_from_counts(records: Sequence[CountsRecord]) -> CorrelationSet:
    """
    Estimate correlations from outcome histograms

    Each setting yields T̂_j for every derivable j with stderr sqrt((1 - T̂²)/(M - 1)).
    Estimates of one j from several settings are merged by inverse variance;
    zero-stderr estimates dominate and are averaged among themselves.
    """
    if not records:
        raise DataError("no counts records given")
    sizes = {r.setting.n_qubits for r in records}
    if len(sizes) != 1:
        raise DimensionError(f"records mix qubit numbers {sorted(sizes)}")
    for r in records:
        if r.shots < 2:
            raise DataError(f"setting {r.setting.label} has {r.shots} shot(s); at least 2 needed")

    collected: Dict[PauliString, List[tuple]] = {}
    for r in records:
        for j, estimate in _estimate(r).items():
            collected.setdefault(j, []).append(estimate + (r.shots,))
    return CorrelationSet(sizes.pop(), _merge(collected))


def _merge(collected: Mapping[PauliString, List[tuple]]) -> Dict[PauliString, Tuple[float, float]]:
    """Items are (value, stderr, shots); exact items are averaged by shots"""
    entries = {}
    for j, items in collected.items():
        exact = [(v, m) for v, s, m in items if s == 0]
        if exact:
            total = sum(m for _, m in exact)
            entries[j] = (sum(v * m for v, m in exact) / total, 0.0)
            continue
        weights = [1.0 / (s * s) for _, s, _ in items]
        value = sum(w * v for w, (v, _, _) in zip(weights, items)) / sum(weights)
        entries[j] = (value, 1.0 / math.sqrt(sum(weights)))
    return entries


def merge_correlations(*sets: CorrelationSet) -> CorrelationSet:
    """
    Combine correlation sets of one system

    Indices present in several sets are merged by inverse variance, the same
    way estimates from several settings are.
    """
    if not sets:
        raise DataError("no correlation sets given")
    sizes = {c.n_qubits for c in sets}
    if len(sizes) != 1:
        raise DimensionError(f"correlation sets mix qubit numbers {sorted(sizes)}")
    collected: Dict[PauliString, List[tuple]] = {}
    for corrs in sets:
        for j, (value, stderr) in corrs.items():
            collected.setdefault(j, []).append((value, stderr, 1))
    return CorrelationSet(sizes.pop(), _merge(collected))


# ---------------------------------------------------------------------------
# correlation files
# ---------------------------------------------------------------------------

def _read_header(lines: List[str]) -> Tuple[Dict[str, str], int]:
    meta, count = {}, 0
    for line in lines:
        if not line.startswith("#"):
            break
        count += 1
        if ":" in line:
            key, value = line[1:].split(":", 1)
            meta[key.strip()] = value.strip()
    return meta, count


def _parse_correlation_csv(text: str) -> CorrelationSet:
    lines = text.splitlines()
    meta, skipped = _read_header(lines)
    body = "\n".join(lines[skipped:])
    if not body.strip():
        raise ParseError("file holds no correlation rows", line=skipped + 1)
    try:
        frame = pd.read_csv(io.StringIO(body), dtype=str, keep_default_na=False,
                            skip_blank_lines=False, skipinitialspace=True)
    except pd.errors.ParserError as e:
        raise ParseError(f"malformed CSV: {e}")
    columns = [c.strip().lower() for c in frame.columns]
    if columns[:2] != ["index", "value"] or len(columns) > 3 or (len(columns) == 3 and columns[2] != "stderr"):
        raise ParseError(f"header must be 'index,value,stderr', got '{','.join(frame.columns)}'",
                         line=skipped + 1)
    frame.columns = columns

    expected = int(meta["n_qubits"]) if meta.get("n_qubits", "").isdigit() else None
    entries = {}
    for position, row in enumerate(frame.itertuples(index=False)):
        line = skipped + 2 + position
        cells = ["" if isinstance(c, float) else str(c).strip() for c in row]
        if not any(cells):
            continue
        label = cells[0]
        if not label or any(ch not in "0123" for ch in label):
            raise ParseError(f"index '{label}' is not a digit string over 0..3", line=line)
        if expected is not None and len(label) != expected:
            raise ParseError(f"index '{label}' does not cover {expected} qubits", line=line)
        try:
            value = float(cells[1])
            stderr = float(cells[2]) if len(cells) > 2 and cells[2] else 0.0
        except ValueError:
            raise ParseError(f"non-numeric value in row '{','.join(cells)}'", line=line)
        if not (math.isfinite(value) and math.isfinite(stderr)):
            raise ParseError(f"non-finite number in row '{','.join(cells)}'", line=line)
        if abs(value) > 1.0 + 1e-9:
            raise ValidationError(f"line {line}: T_{label} = {value} outside [-1, 1]")
        if stderr < 0:
            raise ValidationError(f"line {line}: negative stderr for T_{label}")
        j = PauliString.from_digits(label)
        if j in entries:
            raise ParseError(f"duplicate index '{label}'", line=line)
        if entries and j.n_qubits != next(iter(entries)).n_qubits:
            raise ParseError(f"index '{label}' has a different length", line=line)
        entries[j] = (value, stderr)
    if not entries:
        raise ParseError("file holds no correlation rows")
    return CorrelationSet(next(iter(entries)).n_qubits, entries)


def _parse_correlation_json(text: str) -> CorrelationSet:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno)
    if not isinstance(payload, dict):
        raise ParseError("correlation JSON must be an object")
    table = payload.get("correlations", payload)
    if not table:
        raise ParseError("file holds no correlations")
    values = {}
    for label, item in table.items():
        try:
            if isinstance(item, (list, tuple)):
                values[label] = (float(item[0]), float(item[1]) if len(item) > 1 else 0.0)
            elif isinstance(item, dict):
                values[label] = (float(item["value"]), float(item.get("stderr", 0.0)))
            else:
                values[label] = (float(item), 0.0)
        except (KeyError, IndexError, TypeError, ValueError):
            raise ParseError(f"entry '{label}' is not a value or [value, stderr] pair")
    try:
        return CorrelationSet.from_labels(values)
    except ArgumentError as e:
        raise ParseError(str(e))


def parse_correlations(path: PathLike) -> CorrelationSet:
    """Read a correlation file; JSON when the suffix is .json, CSV otherwise"""
    path = Path(path)
    text = path.read_text()
    if not text.strip():
        raise ParseError(f"{path} is empty", line=1)
    if path.suffix.lower() == ".json":
        return _parse_correlation_json(text)
    return _parse_correlation_csv(text)


def write_correlations(corrs: CorrelationSet, path: PathLike,
                       source: Optional[str] = None) -> Path:
    """Write a correlation file in the format implied by the suffix"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == ".json":
        payload = {"n_qubits": corrs.n_qubits, "source": source, "correlations": corrs.to_dict()}
        path.write_text(json.dumps(payload, indent=2) + "\n")
        return path
    frame = pd.DataFrame(
        [(j.label, v, s) for j, (v, s) in corrs.items()], columns=CSV_COLUMNS
    )
    with open(path, "w") as f:
        f.write(f"# n_qubits: {corrs.n_qubits}\n")
        if source:
            f.write(f"# source: {source}\n")
        frame.to_csv(f, index=False, lineterminator="\n")
    return path


def published_correlations(family: str = "ghz4") -> CorrelationSet:
    """Measured GHZ ("ghz4") or cluster ("cluster4") correlations with their errors"""
    key = family.strip().lower()
    key = {"ghz": "ghz4", "cluster": "cluster4"}.get(key, key)
    if key not in MEASURED_CORRELATIONS:
        raise ArgumentError(f"no measured correlations for '{family}'")
    return CorrelationSet.from_labels(MEASURED_CORRELATIONS[key])


# ---------------------------------------------------------------------------
# counts files
# ---------------------------------------------------------------------------

def _record_from_dict(item: Mapping) -> CountsRecord:
    try:
        setting = MeasurementSetting.from_label(str(item["setting"]))
        counts = {str(k): int(v) for k, v in item["counts"].items()}
        shots = int(item.get("shots", sum(counts.values())))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"counts record is malformed: {e}")
    return CountsRecord(setting, shots, counts)


def parse_counts(path: PathLike) -> List[CountsRecord]:
    """Read a single record, a list of records or {"records": [...]}"""
    text = Path(path).read_text()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno)
    if isinstance(payload, dict) and "records" in payload:
        payload = payload["records"]
    items = payload if isinstance(payload, list) else [payload]
    if not items:
        raise DataError(f"{path} holds no counts records")
    return [_record_from_dict(item) for item in items]


def write_counts(records: Sequence[CountsRecord], path: PathLike) -> Path:
    return _write_json({"records": [r.to_dict() for r in records]}, path)


# ---------------------------------------------------------------------------
# witness and report files
# ---------------------------------------------------------------------------

def _write_json(payload: Union[Mapping, list], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, allow_nan=False) + "\n")
    return path


def write_witness(spec: WitnessSpec, path: PathLike, timestamp: bool = False) -> Path:
    payload = spec.to_dict()
    if timestamp:
        payload["metadata"] = dict(payload["metadata"], generated_at=datetime.now().isoformat())
    return _write_json(payload, path)


def read_witness(path: PathLike) -> WitnessSpec:
    """Load a witness file; malformed content raises ParseError"""
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid witness JSON: {e.msg}", line=e.lineno)
    if not isinstance(payload, dict):
        raise ParseError("witness JSON must be an object")
    try:
        return witness_from_dict(payload)
    except (ArgumentError, DimensionError, TypeError, ValueError) as e:
        raise ParseError(f"{path}: {e}")


def write_report(report, path: PathLike) -> Path:
    """Write an EvaluationReport (or anything with to_dict) as JSON"""
    return _write_json(report.to_dict(), path)


def write_oracle_reports(reports: Sequence, path: PathLike) -> Path:
    """Write oracle suite reports as a JSON list"""
    return _write_json([r.to_dict() for r in reports], path)


# ---------------------------------------------------------------------------
# angles
# ---------------------------------------------------------------------------

_ANGLE = re.compile(r"^\s*([+-]?\d*\.?\d*)\s*\*?\s*(pi|π)?\s*(?:/\s*(\d+\.?\d*))?\s*$", re.IGNORECASE)


def parse_angle(text: Union[str, float]) -> float:
    """
    Parse an angle in radians

    Accepts plain numbers ("0.3927") and pi fractions ("pi", "-pi/2", "3pi/16", "3*pi/16").
    """
    if not isinstance(text, str):
        return float(text)
    match = _ANGLE.match(text)
    if not match or not (match.group(1) or match.group(2)):
        raise ArgumentError(f"cannot parse angle '{text}'")
    factor_text, pi, denominator = match.groups()
    if factor_text in ("", "+", "-"):
        if not pi:
            raise ArgumentError(f"cannot parse angle '{text}'")
        factor = -1.0 if factor_text == "-" else 1.0
    else:
        try:
            factor = float(factor_text)
        except ValueError:
            raise ArgumentError(f"cannot parse angle '{text}'")
    value = factor * (math.pi if pi else 1.0)
    if denominator:
        if float(denominator) == 0:
            raise ArgumentError("angle denominator must be nonzero")
        value /= float(denominator)
    return value
