"""Dataset model, CSV parsing/serialization, and the sidecar JSON config.

The file layout is one header row ``case,<name>_obs,<name>_mod[,<name>_se]``
with one to five response series, then one row per case.  An empty cell is a
missing value; a case contributes a usable pair to a series only when both
the observed and the modeled cell are present, and a half-present pair is a
parse error.  Case alignment is by the explicit case-id column, never by row
order, so patchy files are unambiguous.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError

SCALAR_KINDS = ("stdev", "iqr", "mean", "median")

MAX_SERIES = 5
DEFAULT_MAX_ROWS = 1000

MIN_PAIRS = 3  # analysis minimum: below this the projection regression degenerates


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ResponseSeries:
    """One response type's case-aligned observed/modeled values.

    ``y_obs``/``y_mod`` run over the dataset's full case index with NaN in
    missing slots; ``present`` marks the usable pairs (both values given).
    ``se`` carries optional per-case standard errors for the scaled-deviation
    statistics and may be NaN anywhere.
    """

    name: str
    y_obs: np.ndarray
    y_mod: np.ndarray
    present: np.ndarray
    se: np.ndarray | None = None

    def __post_init__(self):
        _readonly(self.y_obs)
        _readonly(self.y_mod)
        _readonly(self.present)
        if self.se is not None:
            _readonly(self.se)

    @property
    def n_complete(self) -> int:
        return int(self.present.sum())

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """The usable (y_obs, y_mod) values, in case order."""
        return self.y_obs[self.present], self.y_mod[self.present]

    def se_pairs(self) -> np.ndarray | None:
        """Standard errors aligned with :meth:`pairs`, or None if absent."""
        if self.se is None:
            return None
        return self.se[self.present]


@dataclass(frozen=True)
class Dataset:
    """Response series sharing one case index, plus weighting metadata.

    ``case_match[i, j]`` declares whether series i and j arise from the same
    cases (diagonal unused); ``importance`` holds strictly positive
    user-assigned relevance weights, 1 by default.  Instances are immutable
    and safe to share across threads.
    """

    case_ids: tuple[str, ...]
    series: tuple[ResponseSeries, ...]
    case_match: np.ndarray = None
    importance: np.ndarray = None

    def __post_init__(self):
        m = len(self.series)
        if not 1 <= m <= MAX_SERIES:
            raise ParseError(f"expected 1..{MAX_SERIES} response series, got {m}")
        if self.case_match is None:
            object.__setattr__(self, "case_match", np.ones((m, m), dtype=bool))
        else:
            cm = np.asarray(self.case_match, dtype=bool)
            if cm.shape != (m, m):
                raise ValueError(f"case_match must be {m}x{m}")
            if not np.array_equal(cm, cm.T):
                raise ValueError("case_match must be symmetric")
            object.__setattr__(self, "case_match", cm)
        if self.importance is None:
            object.__setattr__(self, "importance", np.ones(m))
        else:
            imp = np.asarray(self.importance, dtype=float)
            if imp.shape != (m,):
                raise ValueError(f"importance must have {m} entries")
            if not np.all(imp > 0.0):
                raise ValueError("importance weights must be strictly positive")
            object.__setattr__(self, "importance", imp)
        _readonly(self.case_match)
        _readonly(self.importance)

    @property
    def m(self) -> int:
        return len(self.series)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.series)

    def series_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no series named {name!r}") from None

    def replace_weighting(self, case_match=None, importance=None) -> "Dataset":
        """A copy with new case-match flags and/or importance weights."""
        return Dataset(
            case_ids=self.case_ids,
            series=self.series,
            case_match=self.case_match if case_match is None else case_match,
            importance=self.importance if importance is None else importance,
        )


def overlap_count(dataset: Dataset, i: int, j: int) -> int:
    """Number of case ids at which both series i and j have usable pairs."""
    if i == j:
        raise ValueError("overlap_count requires two distinct series")
    a = dataset.series[i]
    b = dataset.series[j]
    return int(np.sum(a.present & b.present))


def _parse_cell(text: str, *, column: str, case_id: str) -> float | None:
    text = text.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"non-numeric cell {text!r} in column {column!r}",
                         case_id=case_id) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite cell {text!r} in column {column!r}",
                         case_id=case_id)
    return value


def _parse_header(header: list[str]):
    """Returns ([(series name, has se column), ...], column index map)."""
    if not header or header[0].strip().lower() != "case":
        raise ParseError("first header column must be 'case'")
    order: list[str] = []
    cols: dict[str, dict[str, int]] = {}
    for pos, raw in enumerate(header[1:], start=1):
        name = raw.strip()
        for suffix in ("_obs", "_mod", "_se"):
            if name.endswith(suffix):
                base, role = name[: -len(suffix)], suffix[1:]
                break
        else:
            raise ParseError(f"column {name!r} must end in _obs, _mod or _se")
        if not base:
            raise ParseError(f"column {name!r} has an empty series name")
        if base not in cols:
            cols[base] = {}
            order.append(base)
        if role in cols[base]:
            raise ParseError(f"duplicate column {name!r}")
        cols[base][role] = pos
    for base in order:
        roles = cols[base]
        if "obs" not in roles or "mod" not in roles:
            raise ParseError(f"series {base!r} needs both {base}_obs and {base}_mod")
    if not 1 <= len(order) <= MAX_SERIES:
        raise ParseError(f"expected 1..{MAX_SERIES} response series, "
                         f"got {len(order)}")
    return [(base, "se" in cols[base]) for base in order], cols


def parse_dataset(source, *, max_rows: int = DEFAULT_MAX_ROWS) -> Dataset:
    """Parse the CSV layout into a :class:`Dataset`.

    ``source`` may be a string, an iterable of lines, or an open text file.
    ``max_rows`` is a soft safety limit against runaway inputs; raise it for
    larger files.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input: missing header row") from None
    layout, cols = _parse_header(header)
    width = len(header)

    case_ids: list[str] = []
    seen: set[str] = set()
    rows: list[list[str]] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != width:
            raise ParseError(f"line {lineno}: expected {width} cells, got {len(row)}")
        case_id = row[0].strip()
        if not case_id:
            raise ParseError(f"line {lineno}: empty case id")
        if case_id in seen:
            raise ParseError(f"duplicate case id {case_id!r}")
        seen.add(case_id)
        case_ids.append(case_id)
        rows.append(row)
    if len(rows) > max_rows:
        raise ParseError(f"{len(rows)} data rows exceed the row limit "
                         f"{max_rows}; pass a larger max_rows to override")

    n = len(rows)
    series = []
    for name, has_se in layout:
        y_obs = np.full(n, np.nan)
        y_mod = np.full(n, np.nan)
        se = np.full(n, np.nan) if has_se else None
        present = np.zeros(n, dtype=bool)
        i_obs = cols[name]["obs"]
        i_mod = cols[name]["mod"]
        for k, row in enumerate(rows):
            case_id = case_ids[k]
            obs = _parse_cell(row[i_obs], column=f"{name}_obs", case_id=case_id)
            mod = _parse_cell(row[i_mod], column=f"{name}_mod", case_id=case_id)
            if (obs is None) != (mod is None):
                half = "observed" if obs is not None else "modeled"
                raise ParseError(f"half-present pair: only the {half} value is "
                                 f"given", case_id=case_id, series=name)
            if obs is not None:
                y_obs[k] = obs
                y_mod[k] = mod
                present[k] = True
            if has_se:
                val = _parse_cell(row[cols[name]["se"]], column=f"{name}_se",
                                  case_id=case_id)
                if val is not None:
                    se[k] = val
        series.append(ResponseSeries(name=name, y_obs=y_obs, y_mod=y_mod,
                                     present=present, se=se))
    return Dataset(case_ids=tuple(case_ids), series=tuple(series))


def load_dataset(path, *, max_rows: int = DEFAULT_MAX_ROWS) -> Dataset:
    with open(path, "r", newline="") as fh:
        return parse_dataset(fh, max_rows=max_rows)


def dump_dataset(dataset: Dataset) -> str:
    """Serialize back to the canonical CSV layout (round-trip safe)."""
    header = ["case"]
    for s in dataset.series:
        header.extend([f"{s.name}_obs", f"{s.name}_mod"])
        if s.se is not None:
            header.append(f"{s.name}_se")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for k, case_id in enumerate(dataset.case_ids):
        row = [case_id]
        for s in dataset.series:
            if s.present[k]:
                row.extend([repr(float(s.y_obs[k])), repr(float(s.y_mod[k]))])
            else:
                row.extend(["", ""])
            if s.se is not None:
                row.append("" if math.isnan(s.se[k]) else repr(float(s.se[k])))
        writer.writerow(row)
    return out.getvalue()


# ---------------------------------------------------------------------------
# Sidecar JSON configuration

_CONFIG_KEYS = {"scalar", "case_match", "importance", "alphas", "seed",
                "replicates"}


@dataclass(frozen=True)
class AnalysisConfig:
    """Analysis settings carried by the sidecar JSON file.

    ``case_match`` accepts a single bool (applied to every pair), a full
    MxM nested list, or ``{"default": bool, "overrides": [[name_i, name_j,
    bool], ...]}``.  ``importance`` accepts a list in series order or a
    ``{name: weight}`` mapping (unnamed series keep weight 1).
    """

    scalar: str = "stdev"
    case_match: object = None
    importance: object = None
    alphas: tuple[float, ...] = (0.01, 0.05, 0.10, 0.25, 0.50)
    seed: int | None = None
    replicates: int = 1000

    def __post_init__(self):
        if self.scalar not in SCALAR_KINDS:
            raise ValueError(f"scalar must be one of {SCALAR_KINDS}, "
                             f"got {self.scalar!r}")
        if not isinstance(self.replicates, int) or self.replicates < 1:
            raise ValueError("replicates must be a positive integer")
        if self.seed is not None and not isinstance(self.seed, int):
            raise ValueError("seed must be an integer")
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))

    def to_dict(self) -> dict:
        return {
            "scalar": self.scalar,
            "case_match": self.case_match,
            "importance": self.importance,
            "alphas": list(self.alphas),
            "seed": self.seed,
            "replicates": self.replicates,
        }


def load_config(path) -> AnalysisConfig:
    with open(path, "r") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ParseError("config file must contain a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ParseError(f"unknown config keys: {sorted(unknown)}")
    try:
        return AnalysisConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad config: {exc}") from None


def resolve_case_match(dataset: Dataset, value) -> np.ndarray:
    """Expand a config case_match value to a full symmetric MxM bool table."""
    m = dataset.m
    if value is None:
        return dataset.case_match
    if isinstance(value, bool):
        table = np.full((m, m), value, dtype=bool)
        np.fill_diagonal(table, True)
        return table
    if isinstance(value, dict):
        default = value.get("default", True)
        if not isinstance(default, bool):
            raise ParseError("case_match default must be a bool")
        table = np.full((m, m), default, dtype=bool)
        np.fill_diagonal(table, True)
        for entry in value.get("overrides", []):
            if len(entry) != 3 or not isinstance(entry[2], bool):
                raise ParseError(f"bad case_match override {entry!r}; expected "
                                 "[name_i, name_j, bool]")
            try:
                i = dataset.series_index(entry[0])
                j = dataset.series_index(entry[1])
            except KeyError as exc:
                raise ParseError(f"case_match override: {exc.args[0]}") from None
            table[i, j] = table[j, i] = entry[2]
        return table
    try:
        table = np.asarray(value, dtype=bool)
    except (ValueError, TypeError):
        raise ParseError(f"bad case_match value {value!r}") from None
    if table.shape != (m, m):
        raise ParseError(f"case_match table must be {m}x{m}")
    return table


def resolve_importance(dataset: Dataset, value) -> np.ndarray:
    """Expand a config importance value to a per-series weight vector."""
    if value is None:
        return dataset.importance
    if isinstance(value, dict):
        weights = np.ones(dataset.m)
        for name, w in value.items():
            try:
                weights[dataset.series_index(name)] = float(w)
            except KeyError as exc:
                raise ParseError(f"importance: {exc.args[0]}") from None
        return weights
    try:
        weights = np.asarray(value, dtype=float)
    except (ValueError, TypeError):
        raise ParseError(f"bad importance value {value!r}") from None
    if weights.shape != (dataset.m,):
        raise ParseError(f"importance must list {dataset.m} weights")
    return weights


def apply_config(dataset: Dataset, config: AnalysisConfig) -> Dataset:
    """Apply the config's case_match/importance settings to a dataset."""
    try:
        return dataset.replace_weighting(
            case_match=resolve_case_match(dataset, config.case_match),
            importance=resolve_importance(dataset, config.importance),
        )
    except ValueError as exc:
        raise ParseError(f"bad config: {exc}") from None
