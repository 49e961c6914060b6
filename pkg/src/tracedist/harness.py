"""Experiment orchestration: config parsing, seeded parallel runs, CSV output.

Every task draws from ``RngStream(seed, task_index)``, where the index is
fixed by the task's position in a canonical ordering before anything runs,
so results do not depend on the worker count or scheduling order.
"""
from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import combinatorics as comb
from .models import (
    ISING_ENERGY_WINDOW,
    IsingSpec,
    SykSpec,
    band_center_eigenstates,
    build_ising_hamiltonian,
    build_syk_hamiltonian,
    even_parity_sector,
    momentum_sectors,
    pair_distance_samples,
    sector_hamiltonian,
)
from .predictions import (
    Bipartition,
    ChargeModel,
    charge_general_trace_distance,
    charge_q0_trace_distance,
    page_trace_distance,
)
from .quantum import ChargeAssignment, RngStream, trace_distance_estimator
from .special import SeriesControl

DEFAULT_SEED = 20240917

EXPERIMENTS = ("predict", "sample-page", "sample-charge", "syk", "ising", "combinatorics-table")
PREDICT_MODELS = ("page", "q0", "qgen")
TABLE_KINDS = ("narayana", "even", "kreweras")

# Hamming-weight charge: each qubit carries 0 or 1, so the spectrum width is sqrt(N)/2
HAMMING_GAMMA = 0.5


class ConfigError(ValueError):
    """Invalid experiment configuration, with optional field and line context."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None, source: str | None = None):
        self.message, self.field, self.line, self.source = message, field, line, source
        where = ""
        if source is not None:
            where = f"{source}:{line}: " if line is not None else f"{source}: "
        elif line is not None:
            where = f"line {line}: "
        what = f"field '{field}': " if field else ""
        super().__init__(f"{where}{what}{message}")


@dataclass
class ExperimentConfig:
    experiment: str
    n: list[int] = field(default_factory=list)
    f_grid: list[float] | None = None
    model: str = "page"
    samples: int = 500
    realizations: int | None = None
    states: int | None = None
    q: float = 0.0
    gamma: float = HAMMING_GAMMA
    k: int = 0
    window: tuple[float, float] | None = None
    charge_spacing: float = 1.0
    kind: str = "even"
    seed: int = DEFAULT_SEED
    workers: int = 1
    out: str | None = None
    rel_tol: float = 1e-12
    max_terms: int = 10_000

    @property
    def series_control(self) -> SeriesControl:
        return SeriesControl(self.rel_tol, self.max_terms)

    def realization_count(self, n_majorana: int) -> int:
        if self.realizations is not None:
            return self.realizations
        return 50 if n_majorana <= 18 else 10

    def state_count(self) -> int:
        if self.states is not None:
            return self.states
        return 7 if self.experiment == "ising" else 10

    def qubit_count(self, n: int) -> int:
        """Size of the register that gets bipartitioned."""
        return n // 2 - 1 if self.experiment == "syk" else n

    def nb_grid(self, n: int) -> list[int]:
        """``N_B`` values for an ``n``-qubit register."""
        if self.f_grid is None:
            top = n if self.experiment in ("sample-page",) or (self.experiment == "predict" and self.model == "page") else n - 1
            return list(range(1, top + 1))
        return sorted({round(f * n) for f in self.f_grid})

    # ------------------------------------------------------------------
    @classmethod
    def from_dict(cls, data: dict, text: str | None = None, source: str | None = None) -> "ExperimentConfig":
        def fail(msg, key=None):
            raise ConfigError(msg, key, _line_of(text, key), source)

        if not isinstance(data, dict):
            fail("top level must be a JSON object")
        data = dict(data)
        tol = data.pop("tolerances", None)
        if tol is not None:
            if not isinstance(tol, dict):
                fail("must be an object", "tolerances")
            for key, val in tol.items():
                if key not in ("rel_tol", "max_terms"):
                    fail(f"unknown tolerance '{key}'", "tolerances")
                data[key] = val
        known = {f.name for f in dataclasses.fields(cls)}
        for key in data:
            if key not in known:
                fail("unknown field", key)
        if "experiment" not in data:
            fail("missing required field", "experiment")
        try:
            cfg = cls(**data)
        except TypeError as exc:
            fail(str(exc))
        cfg.validate(text, source)
        return cfg

    @classmethod
    def from_json(cls, text: str, source: str | None = None, overrides: dict | None = None) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(exc.msg, line=exc.lineno, source=source) from None
        if not isinstance(data, dict):
            raise ConfigError("top level must be a JSON object", line=1, source=source)
        data.update(overrides or {})
        return cls.from_dict(data, text, source)

    def validate(self, text: str | None = None, source: str | None = None) -> None:
        def fail(msg, key):
            raise ConfigError(msg, key, _line_of(text, key), source)

        if self.experiment not in EXPERIMENTS:
            fail(f"must be one of {', '.join(EXPERIMENTS)}", "experiment")
        if isinstance(self.n, (int, np.integer)) and not isinstance(self.n, bool):
            self.n = [int(self.n)]
        if not isinstance(self.n, (list, tuple)) or not self.n:
            fail("need at least one system size", "n")
        if any(not _is_int(v) or v < 1 for v in self.n):
            fail("system sizes must be positive integers", "n")
        self.n = [int(v) for v in self.n]
        for key in ("samples", "workers", "max_terms"):
            if not _is_int(getattr(self, key)) or getattr(self, key) < 1:
                fail("must be a positive integer", key)
        for key in ("realizations", "states"):
            val = getattr(self, key)
            if val is not None and (not _is_int(val) or val < 1):
                fail("must be a positive integer", key)
        if not _is_int(self.seed) or self.seed < 0:
            fail("must be a non-negative integer", "seed")
        for key in ("gamma", "rel_tol", "charge_spacing"):
            if not _is_real(getattr(self, key)) or not getattr(self, key) > 0:
                fail("must be a positive number", key)
        if not _is_real(self.q):
            fail("must be a number", "q")
        if self.model not in PREDICT_MODELS:
            fail(f"must be one of {', '.join(PREDICT_MODELS)}", "model")
        if self.kind not in TABLE_KINDS:
            fail(f"must be one of {', '.join(TABLE_KINDS)}", "kind")
        if self.window is not None:
            if len(self.window) != 2 or not all(_is_real(v) for v in self.window) or self.window[0] >= self.window[1]:
                fail("must be [lo, hi] with lo < hi", "window")
            self.window = (float(self.window[0]), float(self.window[1]))
        if self.f_grid is not None:
            if not isinstance(self.f_grid, (list, tuple)) or len(self.f_grid) == 0:
                fail("f-grid is empty", "f_grid")
            if any(not _is_real(f) or not 0 <= f <= 1 for f in self.f_grid):
                fail("points must lie in [0, 1]", "f_grid")
            self.f_grid = [float(f) for f in self.f_grid]
        self._validate_kind(fail)

    def _validate_kind(self, fail) -> None:
        exp = self.experiment
        for n in self.n:
            if exp == "syk":
                if n % 2 or n < 6:
                    fail(f"Majorana count {n} must be even and >= 6", "n")
                if n > 28:
                    fail(f"Majorana count {n} exceeds 28", "n")
            if exp == "ising" and not 2 <= n <= 14:
                fail(f"chain length {n} outside 2..14", "n")
            if exp in ("sample-page", "sample-charge") and n > 24:
                fail(f"N={n} exceeds the 24-qubit memory guard", "n")
            if exp == "combinatorics-table" and (n % 2 or n > 40):
                fail(f"table size {n} must be even and at most 40", "n")
            if exp == "sample-charge":
                raw = n / 2 + self.q
                if not float(raw).is_integer() or not 0 <= raw <= n:
                    fail(f"charge sector N/2 + q = {raw} is empty for N={n}", "q")
            if exp == "ising" and not 0 <= self.k < n:
                fail(f"momentum {self.k} outside 0..{n - 1}", "k")
            if exp == "combinatorics-table":
                continue
            m = self.qubit_count(n)
            if self.f_grid is not None:
                for f in self.f_grid:
                    if not math.isclose(f * m, round(f * m), abs_tol=1e-9):
                        fail(f"f={f} is not a multiple of 1/{m}", "f_grid")
                charge_like = exp == "sample-charge" or (exp == "predict" and self.model != "page")
                if exp != "predict" and any(round(f * m) == 0 for f in self.f_grid):
                    fail("f=0 leaves nothing to trace out", "f_grid")
                if charge_like and any(round(f * m) in (0, m) for f in self.f_grid):
                    fail("charge predictions are singular at f in {0, 1}", "f_grid")
            if exp == "predict" and self.model == "q0" and m < 2:
                fail("charge predictions need N >= 2", "n")


def _is_int(v) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


def _is_real(v) -> bool:
    return isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) and math.isfinite(v)


def _line_of(text: str | None, key: str | None) -> int | None:
    if text is None or key is None:
        return None
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return None


# ----------------------------------------------------------------------
# result rows
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    N: int
    N_B: int
    f: float
    Q: float | None
    samples: int
    mean_D1: float
    stderr: float
    stddev: float
    analytic_page: float | None
    analytic_q0: float | None
    analytic_reference: float | None

    def value(self, column: str):
        if column == "D1":
            return self.mean_D1
        if column == "P_discrimination":
            return 0.5 * (1.0 + self.mean_D1)
        return getattr(self, column)


@dataclass(frozen=True)
class TableRow:
    n: int
    k: int
    count: int
    breakdown: str = ""

    def value(self, column: str):
        return getattr(self, column)


RESULT_COLUMNS = tuple(f.name for f in dataclasses.fields(ResultRow))
TABLE_COLUMNS = tuple(f.name for f in dataclasses.fields(TableRow))


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    return str(v)


def emit_csv(rows, path, columns=None) -> None:
    """Header plus one line per row; floats at 12 significant digits.

    ``path`` may be a filesystem path or an open text stream.  Missing
    values are written as empty cells.
    """
    if columns is None:
        columns = TABLE_COLUMNS if rows and isinstance(rows[0], TableRow) else RESULT_COLUMNS
    columns = list(columns)

    def write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.value(c)) for c in columns])

    if hasattr(path, "write"):
        write(path)
        return
    try:
        with open(path, "w", newline="") as fh:
            write(fh)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


def emit_gnuplot(rows, path, columns) -> None:
    """Whitespace-separated columns with a ``#`` header; blank cells become ``nan``."""
    with open(path, "w") as fh:
        fh.write("# " + " ".join(columns) + "\n")
        prev_n = None
        for r in rows:
            n = getattr(r, "N", None)
            if prev_n is not None and n != prev_n:
                fh.write("\n\n")  # gnuplot dataset separator
            prev_n = n
            fh.write(" ".join(_fmt(r.value(c)) or "nan" for c in columns) + "\n")


def read_csv(path) -> list[dict[str, Any]]:
    """Parse an emitted CSV back into dicts of floats (``None`` for empty cells)."""

    def conv(s):
        if s == "":
            return None
        try:
            return int(s)
        except ValueError:
            pass
        try:
            return float(s)
        except ValueError:
            return s

    with open(path, newline="") as fh:
        return [{k: conv(v) for k, v in row.items()} for row in csv.DictReader(fh)]


# ----------------------------------------------------------------------
# tasks (module level so they pickle)
# ----------------------------------------------------------------------


def _analytics(n: int, nb: int, ctrl: SeriesControl):
    part = Bipartition(n, nb)
    page = page_trace_distance(part, ctrl)
    q0 = charge_q0_trace_distance(part, ctrl) if 0 < nb < n else None
    return page, q0


def _predict_task(args):
    cfg, n, nb = args
    ctrl = cfg.series_control
    part = Bipartition(n, nb)
    page, q0 = _analytics(n, nb, ctrl)
    if cfg.model == "page":
        value, q = page, None
    elif cfg.model == "q0":
        value, q = q0, 0.0
    else:
        q = float(cfg.q)
        value = charge_general_trace_distance(part, ChargeModel(cfg.gamma, q), spacing=cfg.charge_spacing, ctrl=ctrl)
    return ResultRow("predict", n, nb, part.f, q, 0, value, 0.0, 0.0, page, q0, value)


def _sample_task(args):
    cfg, n, nb, stream = args
    ctrl = cfg.series_control
    part = Bipartition(n, nb)
    page, q0 = _analytics(n, nb, ctrl)
    if cfg.experiment == "sample-page":
        mean, se, sd = trace_distance_estimator(part, cfg.samples, stream)
        return ResultRow("sample-page", n, nb, part.f, None, cfg.samples, mean, se, sd, page, q0, page)
    raw = int(round(n / 2 + cfg.q))
    mean, se, sd = trace_distance_estimator(
        part, cfg.samples, stream, ensemble="charge", charge=ChargeAssignment.hamming(n), q_total=raw
    )
    if nb == n:
        ref = None
    elif cfg.q == 0:
        ref = q0
    else:
        ref = charge_general_trace_distance(part, ChargeModel(HAMMING_GAMMA, float(cfg.q)), ctrl=ctrl)
    return ResultRow("sample-charge", n, nb, part.f, float(cfg.q), cfg.samples, mean, se, sd, page, q0, ref)


def syk_realization_distances(n_majorana: int, stream: RngStream, states: int, nb_grid) -> dict[int, np.ndarray]:
    """Pair distances among band-center even-parity eigenstates of one realization."""
    h = even_parity_sector(build_syk_hamiltonian(SykSpec(n_majorana, stream)))
    sel = band_center_eigenstates(h, states)
    return {nb: pair_distance_samples(sel.states, nb) for nb in nb_grid}


def ising_distances(n: int, k: int, states: int, nb_grid, window=None) -> dict[int, np.ndarray]:
    """Pair distances among band-center eigenstates of one momentum sector."""
    h = build_ising_hamiltonian(IsingSpec(n))
    sector = momentum_sectors(n)[k]
    block = sector_hamiltonian(h, sector)
    sel = band_center_eigenstates(block, states, window=window, basis=sector.basis, energy_scale=n)
    return {nb: pair_distance_samples(sel.states, nb) for nb in nb_grid}


def _syk_task(args):
    n_majorana, stream, states, nb_grid = args
    return syk_realization_distances(n_majorana, stream, states, nb_grid)


def _ising_task(args):
    n, k, states, nb_grid, window = args
    return ising_distances(n, k, states, nb_grid, window)


def _pooled_rows(experiment, n, nb_grid, chunks, ctrl):
    rows = []
    for nb in nb_grid:
        d = np.concatenate([c[nb] for c in chunks])
        sd = float(d.std(ddof=1)) if d.size > 1 else 0.0
        page, q0 = _analytics(n, nb, ctrl)
        ref = q0 if experiment == "ising" else page
        rows.append(ResultRow(experiment, n, nb, nb / n, None, int(d.size), float(d.mean()), sd / math.sqrt(d.size), sd, page, q0, ref))
    return rows


def _map(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def combinatorics_rows(n: int, kind: str) -> list[TableRow]:
    rows = []
    if kind == "narayana":
        for k in range(1, n + 1):
            rows.append(TableRow(n, k, comb.narayana(n, k)))
    elif kind == "even":
        for k in range(1, n // 2 + 1):
            rows.append(TableRow(n, k, comb.even_narayana(n, k)))
    else:
        for k in range(1, n + 1):
            parts = list(comb.integer_partitions(n, parts=k))
            counts = [(p, comb.kreweras(p)) for p in parts]
            rows.append(TableRow(n, k, sum(c for _, c in counts), " ".join(f"{p}:{c}" for p, c in counts)))
    return rows


def run(config: ExperimentConfig) -> list:
    """Execute a validated config; rows come back sorted by ``(N, f, Q)``."""
    config.validate()
    exp = config.experiment
    ctrl = config.series_control
    if exp == "combinatorics-table":
        return [r for n in sorted(config.n) for r in combinatorics_rows(n, config.kind)]

    rows: list[ResultRow] = []
    if exp == "predict":
        tasks = [(config, n, nb) for n in config.n for nb in config.nb_grid(n)]
        rows = _map(_predict_task, tasks, config.workers)
    elif exp in ("sample-page", "sample-charge"):
        tasks = []
        for n in config.n:
            for nb in config.nb_grid(n):
                tasks.append((config, n, nb, RngStream(config.seed, len(tasks))))
        rows = _map(_sample_task, tasks, config.workers)
    elif exp == "syk":
        tasks, spans = [], []
        for nm in config.n:
            grid = config.nb_grid(config.qubit_count(nm))
            start = len(tasks)
            for r in range(config.realization_count(nm)):
                # stream id packs (Majorana count, realization) so sizes never share couplings
                tasks.append((nm, RngStream(config.seed, (nm << 20) | r), config.state_count(), grid))
            spans.append((nm, grid, start, len(tasks)))
        results = _map(_syk_task, tasks, config.workers)
        for nm, grid, a, b in spans:
            rows.extend(_pooled_rows("syk", config.qubit_count(nm), grid, results[a:b], ctrl))
    elif exp == "ising":
        tasks = [(n, config.k, config.state_count(), config.nb_grid(n), config.window) for n in config.n]
        results = _map(_ising_task, tasks, config.workers)
        for n, res in zip(config.n, results):
            rows.extend(_pooled_rows("ising", n, config.nb_grid(n), [res], ctrl))
    rows.sort(key=lambda r: (r.N, r.f, -math.inf if r.Q is None else r.Q))
    return rows


def load_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror or exc}", source=path) from None
    return ExperimentConfig.from_json(text, source=os.fspath(path), overrides=overrides)


__all__ = [
    "DEFAULT_SEED",
    "ISING_ENERGY_WINDOW",
    "ConfigError",
    "ExperimentConfig",
    "ResultRow",
    "TableRow",
    "RESULT_COLUMNS",
    "emit_csv",
    "emit_gnuplot",
    "read_csv",
    "run",
    "load_config",
    "combinatorics_rows",
    "syk_realization_distances",
    "ising_distances",
]
