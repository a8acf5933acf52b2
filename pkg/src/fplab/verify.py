"""Sweep harness: run parameter grids, evaluate envelopes, fit trend exponents.

Configs are flat key = value text (documented in the README); reports are
CSV with a frozen column order, or an equivalent JSON-lines stream. Every
grid point is seeded deterministically from (config seed, grid index), so
identical configs reproduce byte-identical reports.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import energy, envelopes, prodset, spectra, tkcount
from .errors import BudgetError, DomainError
from .modfield import PrimeContext, is_prime
from .sets import (SplitMix64, initial_interval, mix_seed, random_subset,
                   shifted_interval)

MEASURES = ("prodset", "ratio", "energy_j", "energy_js", "recip_energy",
            "kloosterman", "burgess", "tk")

CSV_COLUMNS = ("index", "measure", "p", "H", "M", "L", "s", "ell", "k",
               "epsilon", "seed", "value", "envelope", "ratio", "flags",
               "skip_reason")


def fmt_number(x) -> str:
    """Canonical text form: ints verbatim, floats at 12 significant digits."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


@dataclass(frozen=True)
class SweepConfig:
    measure: str
    primes: tuple[int, ...]
    h_exps: tuple[float, ...]
    m_exps: tuple[float, ...] = (0.5,)
    s_list: tuple[int, ...] = (1,)
    ell_list: tuple[int, ...] = (2,)
    k: int = 6
    l_policy: str = "zero"          # zero | random | explicit:<int>
    epsilon: float = 0.05
    seed: int = 1
    budget: int = 1_000_000_000
    workers: int = 1
    out_format: str = "csv"         # csv | jsonl
    out_path: str = ""

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise DomainError(f"unknown measure {self.measure!r}; one of {MEASURES}")
        if self.out_format not in ("csv", "jsonl"):
            raise DomainError(f"format must be csv or jsonl, got {self.out_format!r}")
        if not (self.l_policy in ("zero", "random") or self.l_policy.startswith("explicit:")):
            raise DomainError(f"bad L policy {self.l_policy!r}")
        for p in self.primes:
            if not is_prime(p) or p < 3:
                raise DomainError(f"{p} is not an odd prime")


@dataclass(frozen=True)
class ReportRow:
    index: int
    measure: str
    p: int
    H: int | None = None
    M: int | None = None
    L: int | None = None
    s: int | None = None
    ell: int | None = None
    k: int | None = None
    epsilon: float | None = None
    seed: int | None = None
    value: float | int | None = None
    envelope: float | None = None
    ratio: float | None = None
    flags: str = ""
    skip_reason: str = ""

    def csv_cells(self) -> list[str]:
        out = []
        for name in CSV_COLUMNS:
            v = getattr(self, name)
            out.append(v if isinstance(v, str) else fmt_number(v))
        return out

    def json_obj(self) -> dict:
        obj = {}
        for name in CSV_COLUMNS:
            v = getattr(self, name)
            if isinstance(v, float):
                v = float(format(v, ".12g"))
            elif isinstance(v, np.integer):
                v = int(v)
            obj[name] = v
        return obj


def parse_config(text: str) -> SweepConfig:
    """Parse the flat key = value format ('#' starts a comment)."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected key = value, got {line!r}")
        key, val = line.split("=", 1)
        raw[key.strip().lower()] = val.strip()

    def ints(key, default):
        if key not in raw:
            return default
        return tuple(int(t) for t in raw[key].replace(",", " ").split())

    def floats(key, default):
        if key not in raw:
            return default
        return tuple(float(t) for t in raw[key].replace(",", " ").split())

    known = {"measure", "primes", "h_exp", "m_exp", "s", "ell", "k", "l_policy",
             "epsilon", "seed", "budget", "workers", "format", "out"}
    unknown = set(raw) - known
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    if "measure" not in raw or "primes" not in raw or "h_exp" not in raw:
        raise DomainError("config requires at least: measure, primes, h_exp")
    return SweepConfig(
        measure=raw["measure"],
        primes=ints("primes", ()),
        h_exps=floats("h_exp", ()),
        m_exps=floats("m_exp", (0.5,)),
        s_list=ints("s", (1,)),
        ell_list=ints("ell", (2,)),
        k=int(raw.get("k", "6")),
        l_policy=raw.get("l_policy", "zero"),
        epsilon=float(raw.get("epsilon", "0.05")),
        seed=int(raw.get("seed", "1")),
        budget=int(raw.get("budget", "1000000000")),
        workers=int(raw.get("workers", "1")),
        out_format=raw.get("format", "csv"),
        out_path=raw.get("out", ""),
    )


def _sized(p: int, exponent: float) -> int:
    return math.ceil(p ** exponent)


def _draw_shift(policy: str, rng: SplitMix64, p: int, h: int) -> int:
    if policy == "zero":
        return 0
    if policy == "random":
        return rng.below(p - h)  # shifts in [0, p-h) never wrap through 0
    return int(policy.split(":", 1)[1])


def _run_point(cfg: SweepConfig, index: int, point, ctx_cache: dict) -> ReportRow:
    p, h_exp, m_exp, s, ell = point
    seed = mix_seed(cfg.seed, index)
    base = ReportRow(index=index, measure=cfg.measure, p=p, s=s, ell=ell,
                     k=cfg.k, epsilon=cfg.epsilon, seed=seed)
    h = _sized(p, h_exp)
    m = _sized(p, m_exp)
    if h > p - 1:
        return replace(base, H=h, skip_reason="h_exceeds_field")
    if m > p - 1:
        return replace(base, H=h, M=m, skip_reason="m_exceeds_field")
    if p not in ctx_cache:
        ctx_cache[p] = PrimeContext(p)
    ctx = ctx_cache[p]
    rng = SplitMix64(seed)
    set_seed = rng.next_u64()
    shift = _draw_shift(cfg.l_policy, rng, p, h)
    try:
        return _measure(cfg, base, ctx, h, m, shift, s, ell, set_seed, rng)
    except BudgetError:
        return replace(base, H=h, M=m, L=shift, skip_reason="budget_exceeded")
    except DomainError as exc:
        reason = "interval_covers_zero" if "0 mod" in str(exc) else f"domain:{exc}"
        return replace(base, H=h, M=m, L=shift, skip_reason=reason)
    except Exception as exc:  # a broken point must never abort the sweep
        return replace(base, H=h, M=m, L=shift, skip_reason=f"error:{type(exc).__name__}")


def _measure(cfg: SweepConfig, base: ReportRow, ctx: PrimeContext,
             h: int, m: int, shift: int, s: int, ell: int,
             set_seed: int, rng: SplitMix64) -> ReportRow:
    p = ctx.p
    measure = cfg.measure
    mset = None
    if measure != "burgess":
        mset = random_subset(m, set_seed, ctx)

    if measure in ("prodset", "ratio"):
        fn = prodset.product_set if measure == "prodset" else prodset.ratio_set
        rep = fn(initial_interval(h, ctx), mset, ctx,
                 epsilon=cfg.epsilon, budget=cfg.budget)
        return replace(base, H=h, M=m, L=0, value=rep.missing,
                       envelope=float(p), ratio=rep.missing / p,
                       flags=rep.hypothesis_branch)

    if measure == "energy_j":
        val = energy.energy_J(initial_interval(h, ctx), mset, ctx, cfg.budget)
        env = envelopes.pair_energy_envelope(h, m, p)
        return replace(base, H=h, M=m, L=0, value=val, envelope=env,
                       ratio=val / env)

    if measure == "energy_js":
        val = energy.energy_Js(shift, initial_interval(h, ctx), mset, s, ctx, cfg.budget)
        env = envelopes.pair_energy_envelope(h, m, p)
        return replace(base, H=h, M=m, L=shift, value=val, envelope=env,
                       ratio=val / env)

    if measure == "recip_energy":
        x = shifted_interval(shift, h, ctx, require_denominator_safe=True)
        val = energy.additive_energy_recip(x, s, ell, ctx, cfg.budget)
        env = envelopes.recip_energy_envelope(h, p, ell)
        return replace(base, H=h, M=m, L=shift, value=val, envelope=env,
                       ratio=val / env)

    if measure == "kloosterman":
        x = shifted_interval(shift, h, ctx, require_denominator_safe=True)
        a = 1 + rng.below(p - 1)
        res = spectra.kloosterman_frac_sum(a, mset, x, s, ctx, ell=ell)
        return replace(base, H=h, M=m, L=shift, value=res.value,
                       envelope=res.envelope, ratio=res.value / res.envelope)

    if measure == "burgess":
        env = envelopes.burgess_envelope(h, p)
        ratio = spectra.burgess_ratio(h, ctx)
        return replace(base, H=h, M=None, L=0, value=ratio * env,
                       envelope=env, ratio=ratio)

    # tk: k independently seeded factor sets, shifts drawn per factor
    factors = []
    for _ in range(cfg.k):
        factors.append((random_subset(m, rng.next_u64(), ctx),
                        _draw_shift(cfg.l_policy, rng, p, h)))
    rep = tkcount.tk_experiment(cfg.k, factors, h, s, ctx,
                                epsilon=cfg.epsilon, budget=cfg.budget)
    return replace(base, H=h, M=m, L=factors[0][1], value=rep.max_abs_dev,
                   envelope=1.0, ratio=rep.max_abs_dev,
                   flags="".join("1" if f else "0" for f in rep.hyp_flags))


def run_sweep(cfg: SweepConfig, sink=None) -> list[ReportRow]:
    """Execute every grid point; emit rows incrementally to sink if given.

    The grid is the cartesian product primes x h_exp x m_exp x s x ell,
    in that nesting order; rows are ordered by grid index regardless of
    worker scheduling.
    """
    grid = list(itertools.product(cfg.primes, cfg.h_exps, cfg.m_exps,
                                  cfg.s_list, cfg.ell_list))
    ctx_cache: dict[int, PrimeContext] = {}
    writer = _RowWriter(cfg.out_format, sink) if sink is not None else None
    rows: list[ReportRow] = []
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = pool.map(lambda args: _run_point(cfg, *args, ctx_cache),
                               list(enumerate(grid)))
            for row in results:
                rows.append(row)
                if writer:
                    writer.write(row)
    else:
        for index, point in enumerate(grid):
            row = _run_point(cfg, index, point, ctx_cache)
            rows.append(row)
            if writer:
                writer.write(row)
    if writer:
        writer.finish()
    return rows


class _RowWriter:
    def __init__(self, out_format: str, sink):
        self.fmt = out_format
        self.sink = sink
        self.started = False

    def write(self, row: ReportRow):
        if self.fmt == "csv":
            if not self.started:
                self.sink.write(",".join(CSV_COLUMNS) + "\n")
                self.started = True
            self.sink.write(",".join(row.csv_cells()) + "\n")
        else:
            self.sink.write(json.dumps(row.json_obj()) + "\n")

    def finish(self):
        if self.fmt == "csv" and not self.started:
            self.sink.write(",".join(CSV_COLUMNS) + "\n")


def write_rows(rows: list[ReportRow], sink, out_format: str = "csv") -> None:
    writer = _RowWriter(out_format, sink)
    for row in rows:
        writer.write(row)
    writer.finish()


def fit_exponent(rows, x_field: str, y_field: str) -> tuple[float, float, float]:
    """Least-squares slope/intercept/RMS-residual of log(y) against log(x).

    Rows may be ReportRow instances or plain dicts; skipped rows and
    non-positive values are excluded.
    """
    def get(row, name):
        if isinstance(row, dict):
            return row.get(name)
        return getattr(row, name)

    xs, ys = [], []
    for row in rows:
        if get(row, "skip_reason"):
            continue
        x, y = get(row, x_field), get(row, y_field)
        if x is None or y is None or x <= 0 or y <= 0:
            continue
        xs.append(math.log(float(x)))
        ys.append(math.log(float(y)))
    if len(xs) < 3:
        raise DomainError(f"exponent fit needs >= 3 usable rows, got {len(xs)}")
    if max(xs) - min(xs) < 1e-12:
        raise DomainError("exponent fit is degenerate: x is constant")
    slope, intercept = np.polyfit(xs, ys, 1)
    pred = slope * np.asarray(xs) + intercept
    residual = float(np.sqrt(np.mean((np.asarray(ys) - pred) ** 2)))
    return float(slope), float(intercept), residual
