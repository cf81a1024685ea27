"""Parameter-plane sweeps over (k, omega) producing tongue diagrams.

Each grid cell is probed for every target orbit class (p, w_J): Newton from a
small seed lattice, every admissible theta-winding.  A class counts as found
when any seed converges with the right windings; non-convergence is treated
as absence, which under-reports near tongue boundaries (the p = 1 class has
the exact existence condition k >= |omega - 2*pi*n|, which quantifies that
error).  Cells are independent, so rows are farmed out to worker processes;
records are sorted afterwards and the CSV/SVG emitters format deterministically,
making repeated runs byte-identical.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from math import gcd

import numpy as np

from .kicked import (
    PARABOLIC_TOL,
    TWO_PI,
    Stability,
    _newton_batch,
    w_theta_range,
)

WORKERS_ENV = "SHEARORBITS_WORKERS"

MAX_SWEEP_PERIOD = 16
_SWEEP_MAX_ITER = 30


@dataclass(frozen=True)
class SweepConfig:
    k_min: float = 0.0
    k_max: float = 1.0
    omega_min: float = 0.0
    omega_max: float = TWO_PI
    nk: int = 200
    nomega: int = 200
    max_period: int = 5
    grid_n: int = 3
    tol: float = 1e-10
    periods: tuple[tuple[int, int], ...] | None = None  # explicit (p, w_J) targets

    def validate(self) -> None:
        if not (math.isfinite(self.k_min) and math.isfinite(self.k_max)) or self.k_max <= self.k_min:
            raise ValueError(f"empty k range [{self.k_min}, {self.k_max}]")
        if not (math.isfinite(self.omega_min) and math.isfinite(self.omega_max)) or self.omega_max <= self.omega_min:
            raise ValueError(f"empty omega range [{self.omega_min}, {self.omega_max}]")
        if self.nk < 1 or self.nomega < 1:
            raise ValueError(f"grid sizes must be positive, got {self.nk}x{self.nomega}")
        if not 1 <= self.max_period <= MAX_SWEEP_PERIOD:
            raise ValueError(f"max_period must be in 1..{MAX_SWEEP_PERIOD}, got {self.max_period}")
        if self.grid_n < 1:
            raise ValueError(f"grid_n must be positive, got {self.grid_n}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.periods is not None:
            for p, q in self.periods:
                if p < 1 or p > MAX_SWEEP_PERIOD:
                    raise ValueError(f"target period {p} out of range 1..{MAX_SWEEP_PERIOD}")

    def targets(self) -> list[tuple[int, int]]:
        """Explicit (p, w_J) targets, else all reduced q/p with p <= max_period."""
        if self.periods is not None:
            return sorted(set(self.periods))
        return [
            (p, q)
            for p in range(1, self.max_period + 1)
            for q in range(p)
            if gcd(p, q) == 1
        ]

    def k_centers(self) -> np.ndarray:
        return self.k_min + (np.arange(self.nk) + 0.5) * (self.k_max - self.k_min) / self.nk

    def omega_centers(self) -> np.ndarray:
        return self.omega_min + (np.arange(self.nomega) + 0.5) * (self.omega_max - self.omega_min) / self.nomega


@dataclass(frozen=True)
class TongueRecord:
    """Result for one (cell, orbit class); diagnostics only when found."""

    k: float
    omega: float
    p: int
    w_J: int
    found: bool
    stability: Stability | None = None
    alpha: float | None = None
    residual: float | None = None


def _worker_count() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {env!r}")
        return n
    return os.cpu_count() or 1


def _sweep_row(args: tuple[SweepConfig, int]) -> list[TongueRecord]:
    """All records for one k row: every omega cell, every target class."""
    config, ik = args
    k = float(config.k_centers()[ik])
    omegas = config.omega_centers()
    g = config.grid_n
    xs = (np.arange(g) + 0.5) * TWO_PI / g
    Jg, Tg = np.meshgrid(xs, xs, indexing="ij")
    Js, Ts = Jg.ravel(), Tg.ravel()
    seeds = Js.size
    records = []
    for p, q in config.targets():
        wts = np.array(list(w_theta_range(k, p, q)), dtype=float)
        nwt = wts.size
        ncell = omegas.size
        # layout: (w_theta, cell, seed)
        J0 = np.tile(Js, nwt * ncell)
        T0 = np.tile(Ts, nwt * ncell)
        W = np.tile(np.repeat(omegas, seeds), nwt)
        WT = np.repeat(wts, ncell * seeds)
        _, _, conv, _, residual, trace = _newton_batch(
            J0, T0, k, W, p, q, WT, config.tol, _SWEEP_MAX_ITER
        )
        conv = conv.reshape(nwt, ncell, seeds)
        residual = residual.reshape(nwt, ncell, seeds)
        trace = trace.reshape(nwt, ncell, seeds)
        abs_tr = np.abs(trace)
        parabolic = np.abs(abs_tr - 2.0) <= PARABOLIC_TOL
        elliptic = (abs_tr < 2.0) & ~parabolic
        any_found = conv.any(axis=(0, 2))
        any_ell = (conv & elliptic).any(axis=(0, 2))
        any_par = (conv & parabolic).any(axis=(0, 2))
        best_res = np.where(conv, residual, np.inf).min(axis=(0, 2))
        for j, omega in enumerate(omegas):
            if any_found[j]:
                if any_ell[j]:
                    stab = Stability.ELLIPTIC
                elif any_par[j]:
                    stab = Stability.PARABOLIC
                else:
                    stab = Stability.HYPERBOLIC
                records.append(
                    TongueRecord(
                        k=k,
                        omega=float(omega),
                        p=p,
                        w_J=q,
                        found=True,
                        stability=stab,
                        alpha=TWO_PI * q / p - float(omega),
                        residual=float(best_res[j]),
                    )
                )
            else:
                records.append(TongueRecord(k=k, omega=float(omega), p=p, w_J=q, found=False))
    return records


def run_sweep(config: SweepConfig, workers: int | None = None) -> list[TongueRecord]:
    """One record per (cell, target class), sorted by (k, omega, p, w_J).

    Rows are independent work items; `workers` defaults to SHEARORBITS_WORKERS
    or the machine parallelism.  Output is schedule-independent.
    """
    config.validate()
    if workers is None:
        workers = _worker_count()
    tasks = [(config, ik) for ik in range(config.nk)]
    if workers > 1 and config.nk > 1:
        chunk = max(1, config.nk // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, tasks, chunksize=chunk))
    else:
        rows = [_sweep_row(t) for t in tasks]
    records = [r for row in rows for r in row]
    records.sort(key=lambda r: (r.k, r.omega, r.p, r.w_J))
    return records


def tip_locations(records: list[TongueRecord]) -> list[tuple[int, int, float]]:
    """(p, w_J, omega of the found cell with minimal k) per orbit class."""
    best: dict[tuple[int, int], tuple[float, float]] = {}
    for r in sorted(records, key=lambda r: (r.k, r.omega)):
        if r.found and (r.p, r.w_J) not in best:
            best[(r.p, r.w_J)] = (r.k, r.omega)
    return [(p, q, best[(p, q)][1]) for p, q in sorted(best)]


def _fmt(x: float) -> str:
    return format(x, ".17g")


def emit_csv(records: list[TongueRecord], path: str) -> None:
    """Deterministic CSV; header k,omega,p,w_J,found,stability,alpha,residual."""
    rows = sorted(records, key=lambda r: (r.k, r.omega, r.p, r.w_J))
    lines = ["k,omega,p,w_J,found,stability,alpha,residual"]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.k),
                    _fmt(r.omega),
                    str(r.p),
                    str(r.w_J),
                    "true" if r.found else "false",
                    r.stability.value if r.stability is not None else "",
                    _fmt(r.alpha) if r.alpha is not None else "",
                    _fmt(r.residual) if r.residual is not None else "",
                ]
            )
        )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _cell_edges(centers: np.ndarray) -> np.ndarray:
    if centers.size == 1:
        half = 0.5 if centers[0] == 0 else abs(centers[0]) * 0.05 + 0.5
        return np.array([centers[0] - half, centers[0] + half])
    mids = (centers[:-1] + centers[1:]) / 2.0
    first = centers[0] - (mids[0] - centers[0])
    last = centers[-1] + (centers[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def emit_svg(records: list[TongueRecord], path: str) -> None:
    """Static SVG heatmap of the sweep: x = omega, y = k, one colored cell per
    (k, omega) where any target was found, keyed by the smallest found period."""
    import matplotlib
    from matplotlib.colors import ListedColormap
    from matplotlib.figure import Figure
    from matplotlib.patches import Patch

    fig = Figure(figsize=(8.0, 6.0))
    ax = fig.add_subplot(111)
    ax.set_xlabel("omega")
    ax.set_ylabel("k")
    ax.set_title("periodic-orbit tongues")

    found = [r for r in records if r.found]
    if found:
        ks = np.array(sorted({r.k for r in records}))
        oms = np.array(sorted({r.omega for r in records}))
        ki = {v: i for i, v in enumerate(ks)}
        oi = {v: i for i, v in enumerate(oms)}
        period = np.full((ks.size, oms.size), np.iinfo(np.int32).max, dtype=np.int32)
        for r in found:
            i, j = ki[r.k], oi[r.omega]
            period[i, j] = min(period[i, j], r.p)
        present = sorted({int(p) for p in np.unique(period) if p != np.iinfo(np.int32).max})
        rank = {p: i for i, p in enumerate(present)}
        img = np.full(period.shape, np.nan)
        for p, i in rank.items():
            img[period == p] = i
        cmap = ListedColormap([matplotlib.colormaps["tab10"](i % 10) for i in range(len(present))])
        ax.pcolormesh(
            _cell_edges(oms),
            _cell_edges(ks),
            np.ma.masked_invalid(img),
            cmap=cmap,
            vmin=-0.5,
            vmax=len(present) - 0.5,
            rasterized=False,
        )
        handles = [
            Patch(facecolor=matplotlib.colormaps["tab10"](rank[p] % 10), label=f"period {p}")
            for p in present
        ]
        ax.legend(handles=handles, loc="upper right", fontsize="small")
    with matplotlib.rc_context({"svg.hashsalt": "shearorbits"}):
        fig.savefig(path, format="svg", metadata={"Date": None})


def parse_real(text: str) -> float:
    """Decimal float, with multiples of pi written as e.g. '1pi' or '0.5pi'."""
    s = text.strip()
    if s.lower().endswith("pi"):
        head = s[:-2].strip()
        factor = 1.0 if head in ("", "+") else -1.0 if head == "-" else float(head)
        return factor * math.pi
    return float(s)


_FLOAT_KEYS = {"k_min", "k_max", "omega_min", "omega_max", "tol"}
_INT_KEYS = {"nk", "nomega", "max_period", "grid_n"}


def _parse_periods(text: str) -> tuple[tuple[int, int], ...]:
    """Comma-separated 'w_J/p' entries, e.g. '0/1,1/2,1/3'."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        bits = part.split("/")
        if len(bits) != 2:
            raise ValueError(f"bad periods entry {part!r}; expected 'w_J/p'")
        q, p = int(bits[0]), int(bits[1])
        out.append((p, q))
    if not out:
        raise ValueError("periods list is empty")
    return tuple(out)


def load_config(path: str, base: SweepConfig | None = None) -> SweepConfig:
    """Flat key=value config file; '#' starts a comment, blank lines ignored."""
    config = base if base is not None else SweepConfig()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in _FLOAT_KEYS:
                config = replace(config, **{key: parse_real(value)})
            elif key in _INT_KEYS:
                config = replace(config, **{key: int(value)})
            elif key == "periods":
                config = replace(config, periods=_parse_periods(value))
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    return config
