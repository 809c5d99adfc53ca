"""File formats: interval files, run manifests, MF descriptors, cut tables and curves."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import InputError
from .intervals import Interval, IntervalSet
from .synthesis import (
    DroopHeights,
    FOUCategory,
    IT2MembershipFunction,
    OverlapResult,
    SynthesisConfig,
    TrapezoidSpec,
    expand_single_sme,
)

BAYES_ROLES = ("likelihood", "prior", "evidence")


class ParseError(InputError):
    pass


def fmt(v: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(float(v), ".17g")


def _num_out(v):
    if v is None:
        return None
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _num_in(v, what: str):
    if v is None:
        return None
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        if v.strip().lower() in ("-inf", "-infinity"):
            return -math.inf
    try:
        out = float(v)
    except (TypeError, ValueError):
        raise ParseError(f"{what}: expected a number, got {v!r}") from None
    if math.isnan(out):
        raise ParseError(f"{what}: NaN is not allowed")
    return out


def parse_bounds(text: Optional[str]) -> tuple:
    """``"LO,HI"`` with empty or ``none`` for an unbounded side."""
    if text is None:
        return (None, None)
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"bounds must look like LO,HI, got {text!r}")
    out = []
    for p in parts:
        p = p.strip()
        out.append(None if p.lower() in ("", "none", "null") else _num_in(p, "bounds"))
    return tuple(out)


def _bounds_from_json(raw, where: str) -> tuple:
    if raw is None:
        return (None, None)
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ParseError(f"{where}: bounds must be a two-element array")
    return tuple(_num_in(b, f"{where} bounds") for b in raw)


def _intervals_from_json(raw, where: str) -> list:
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{where}: 'intervals' must be a non-empty array of [lo, hi] pairs")
    out = []
    for k, pair in enumerate(raw):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ParseError(f"{where}: interval {k} is not a [lo, hi] pair")
        lo, hi = (_num_in(v, f"{where} interval {k}") for v in pair)
        if lo > hi:
            raise InputError(f"{where}: lo > hi in interval {k} ([{lo}, {hi}])")
        out.append(Interval(lo, hi))
    return out


def _format_of(path: Path, fmt_name: Optional[str]) -> str:
    if fmt_name:
        fmt_name = fmt_name.lower()
    else:
        fmt_name = "json" if path.suffix.lower() == ".json" else "csv"
    if fmt_name not in ("csv", "json"):
        raise ParseError(f"unknown interval file format {fmt_name!r}")
    return fmt_name


def load_intervals(path, fmt_name: Optional[str] = None, bounds: Optional[tuple] = None) -> IntervalSet:
    """Read an interval file.

    CSV holds one ``lo,hi`` pair per line (blank lines and ``#`` comments
    are skipped). JSON holds ``{"intervals": [[lo, hi], ...], "bounds": [lo|null, hi|null]}``.
    ``bounds``, when given, overrides whatever the file declares.
    """
    path = Path(path)
    kind = _format_of(path, fmt_name)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None

    if kind == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise ParseError(f"{path}: expected a JSON object")
        ivs = _intervals_from_json(doc.get("intervals"), str(path))
        file_bounds = _bounds_from_json(doc.get("bounds"), str(path))
    else:
        ivs = []
        for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 2:
                raise ParseError(f"{path}: expected 'lo,hi' at line {lineno}, got {len(row)} fields")
            try:
                lo, hi = (_num_in(v.strip(), "value") for v in row)
            except ParseError:
                raise ParseError(f"{path}: malformed number at line {lineno}") from None
            if lo > hi:
                raise InputError(f"{path}: lo > hi at line {lineno}")
            ivs.append(Interval(lo, hi))
        file_bounds = (None, None)
    if not ivs:
        raise ParseError(f"{path}: no intervals found")
    return IntervalSet(tuple(ivs), *(bounds if bounds is not None else file_bounds))


def write_intervals(path, ivset: IntervalSet, fmt_name: Optional[str] = None) -> None:
    path = Path(path)
    if _format_of(path, fmt_name) == "json":
        doc = {
            "intervals": [[iv.lo, iv.hi] for iv in ivset],
            "bounds": [ivset.lower_bound, ivset.upper_bound],
        }
        path.write_text(json.dumps(doc, indent=2) + "\n")
    else:
        path.write_text("".join(f"{fmt(iv.lo)},{fmt(iv.hi)}\n" for iv in ivset))


# -- membership function descriptors -------------------------------------------

_TRAP_KEYS = ("lb", "lt", "rt", "rb", "clip_lo", "clip_hi", "height")


def _trap_to_dict(spec: TrapezoidSpec) -> dict:
    return {k: getattr(spec, k) for k in _TRAP_KEYS}


def _trap_from_dict(d: dict, where: str) -> TrapezoidSpec:
    try:
        return TrapezoidSpec(**{k: _num_in(d[k], f"{where}.{k}") for k in _TRAP_KEYS})
    except (KeyError, TypeError):
        raise ParseError(f"{where}: trapezoid needs keys {', '.join(_TRAP_KEYS)}") from None


def _overlap_to_dict(ov: Optional[OverlapResult]):
    if ov is None:
        return None
    if ov.is_null:
        return {"kind": "Null", "mean": ov.mean_m}
    return {"kind": "NonNull", "interval": [ov.interval.lo, ov.interval.hi]}


def _overlap_from_dict(d) -> Optional[OverlapResult]:
    if d is None:
        return None
    if d.get("kind") == "Null":
        return OverlapResult("Null", mean_m=_num_in(d.get("mean"), "overlap mean"))
    lo, hi = d["interval"]
    return OverlapResult("NonNull", interval=Interval(lo, hi))


def mf_to_dict(mf: IT2MembershipFunction, name: Optional[str] = None) -> dict:
    doc = {}
    if name is not None:
        doc["name"] = name
    doc.update({
        "category": mf.category.value,
        "domain": list(mf.domain),
        "r": [_num_out(v) for v in mf.r],
        "overlap": _overlap_to_dict(mf.overlap),
        "umf": _trap_to_dict(mf.umf),
        "lmf": _trap_to_dict(mf.lmf),
        "droop_heights": None if mf.droop_heights is None else {
            "umf_left": mf.droop_heights.umf_left,
            "umf_right": mf.droop_heights.umf_right,
            "lmf_left": mf.droop_heights.lmf_left,
            "lmf_right": mf.droop_heights.lmf_right,
        },
    })
    return doc


def mf_from_dict(doc: dict) -> IT2MembershipFunction:
    try:
        category = FOUCategory(doc["category"])
    except (KeyError, ValueError):
        raise ParseError(f"descriptor has no valid category: {doc.get('category')!r}") from None
    dh = doc.get("droop_heights")
    return IT2MembershipFunction(
        umf=_trap_from_dict(doc.get("umf") or {}, "umf"),
        lmf=_trap_from_dict(doc.get("lmf") or {}, "lmf"),
        category=category,
        domain=_bounds_from_json(doc.get("domain"), "descriptor"),
        droop_heights=None if dh is None else DroopHeights(**dh),
        overlap=_overlap_from_dict(doc.get("overlap")),
        r=tuple(_num_in(v, "r") for v in doc.get("r", [1.0, 1.0])),
    )


def write_json(path, doc) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, allow_nan=False) + "\n")


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


# -- tables ---------------------------------------------------------------------

def write_table(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            ("true" if v else "false") if isinstance(v, (bool, np.bool_)) else fmt(v) for v in row
        ))
    Path(path).write_text("\n".join(lines) + "\n")


def write_curve(path, x, umf, lmf) -> None:
    write_table(path, ("x", "umf", "lmf"), zip(x, umf, lmf))


def read_curve(path) -> tuple:
    """Inverse of :func:`write_curve`: arrays (x, umf, lmf)."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if not lines or [h.strip() for h in lines[0].split(",")] != ["x", "umf", "lmf"]:
        raise ParseError(f"{path}: expected header 'x,umf,lmf' at line 1")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ParseError(f"{path}: expected 3 fields at line {lineno}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise ParseError(f"{path}: malformed number at line {lineno}") from None
    if not rows:
        raise ParseError(f"{path}: no samples")
    arr = np.array(rows)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def write_cuts(path, cuts, umf_flags=None, lmf_flags=None) -> None:
    header = ["alpha", "umf_lo", "umf_hi", "lmf_lo", "lmf_hi"]
    rows = [list(r) for r in cuts.as_array()]
    if umf_flags is not None:
        header += ["umf_adjusted", "lmf_adjusted"]
        rows = [r + [u, l] for r, u, l in zip(rows, umf_flags, lmf_flags)]
    write_table(path, header, rows)


# -- manifests ------------------------------------------------------------------

@dataclass
class QuantitySpec:
    name: str
    intervals: IntervalSet
    config: SynthesisConfig


@dataclass
class RunManifest:
    quantities: list
    config: SynthesisConfig = field(default_factory=SynthesisConfig)
    alpha_levels: int = 101
    grid_points: int = 2001
    out: Optional[str] = None

    def quantity(self, name: str) -> QuantitySpec:
        for q in self.quantities:
            if q.name == name:
                return q
        raise InputError(f"manifest has no quantity named {name!r}")

    def check_bayes(self) -> None:
        for role in BAYES_ROLES:
            q = self.quantity(role)
            b = (q.intervals.lower_bound, q.intervals.upper_bound)
            if b != (0.0, 1.0):
                raise InputError(f"quantity {role!r} must declare bounds [0, 1], got {list(b)}")


_CFG_KEYS = ("r", "r0", "r1", "single_sme_pairs", "rng_seed")


def _config_from(raw: dict, base: SynthesisConfig, where: str) -> SynthesisConfig:
    kw = {k: getattr(base, k) for k in _CFG_KEYS}
    for k in _CFG_KEYS:
        if k in raw:
            v = raw[k]
            if k == "r" and v == "auto":
                kw[k] = "auto"
            elif k in ("single_sme_pairs", "rng_seed"):
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ParseError(f"{where}: {k} must be an integer")
                kw[k] = v
            else:
                kw[k] = _num_in(v, f"{where} {k}")
    return SynthesisConfig(**kw)


def load_manifest(path, overrides: Optional[dict] = None) -> RunManifest:
    """Parse a JSON run manifest.

    Interval files named in a manifest are resolved relative to it. Each
    quantity supplies exactly one of ``file``, ``intervals`` or
    ``single_sme`` (``{"min": [lo, hi], "max": [lo, hi]}``). ``overrides``
    replace keys of the global ``config`` block; per-quantity settings
    still take precedence.
    """
    path = Path(path)
    doc = read_json(path)
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: manifest must be a JSON object")
    global_raw = dict(doc.get("config") or {})
    global_raw.update(overrides or {})
    config = _config_from(global_raw, SynthesisConfig(), "config")
    raw_qs = doc.get("quantities")
    if not isinstance(raw_qs, list) or not raw_qs:
        raise ParseError(f"{path}: 'quantities' must be a non-empty array")

    quantities, seen = [], set()
    for idx, raw in enumerate(raw_qs):
        name = raw.get("name") if isinstance(raw, dict) else None
        if not isinstance(name, str) or not name.isidentifier():
            raise ParseError(f"{path}: quantity {idx} needs an identifier 'name'")
        if name in seen:
            raise ParseError(f"{path}: duplicate quantity name {name!r}")
        seen.add(name)
        cfg = _config_from(raw, config, name)
        bounds = _bounds_from_json(raw.get("bounds"), name) if "bounds" in raw else None
        sources = [k for k in ("file", "intervals", "single_sme") if k in raw]
        if len(sources) != 1:
            raise ParseError(f"{name}: give exactly one of 'file', 'intervals', 'single_sme'")
        if "file" in raw:
            ivset = load_intervals(path.parent / raw["file"], raw.get("format"), bounds)
        elif "intervals" in raw:
            ivset = IntervalSet(tuple(_intervals_from_json(raw["intervals"], name)), *(bounds or (None, None)))
        else:
            sme = raw["single_sme"]
            try:
                lo_iv, hi_iv = Interval(*sme["min"]), Interval(*sme["max"])
            except (KeyError, TypeError):
                raise ParseError(f"{name}: single_sme needs 'min' and 'max' pairs") from None
            rng = np.random.default_rng([cfg.rng_seed, idx])
            ivset = expand_single_sme(lo_iv, hi_iv, cfg.single_sme_pairs, rng, bounds or (None, None))
        quantities.append(QuantitySpec(name, ivset, cfg))

    alpha_levels = doc.get("alpha_levels", 101)
    grid_points = doc.get("grid_points", 2001)
    for k, v in (("alpha_levels", alpha_levels), ("grid_points", grid_points)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 2:
            raise ParseError(f"{path}: {k} must be an integer >= 2")
    out = doc.get("out")
    if out is not None:
        out = str(path.parent / out)
    return RunManifest(quantities, config, alpha_levels, grid_points, out)
