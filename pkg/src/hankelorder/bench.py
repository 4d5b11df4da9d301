"""Seeded Monte Carlo experiments: COR curves, order histograms and bound sweeps.

Every random draw is keyed by ``(master_seed, index...)`` through
:class:`numpy.random.SeedSequence`, so results do not depend on how the
trials are scheduled across worker threads.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from . import thresholds
from ._validation import check_positive_int, check_probability
from .criteria import CRITERIA, DegenerateCostError, criterion_trace, default_s_max
from .criteria import block_angles, ester_cost, samos_cost
from .hankel import HankelShape, hankel, svd_subspaces
from .selectors import RULES, OrderSelectionError, select_constrained, select_threshold
from .signal_model import SignalSpec, add_noise, preset, synthesize

FAILED = "failed"


def _rng(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))


@dataclass(frozen=True)
class RuleConfig:
    """One selection rule as run by the bench.

    ``tau`` names the threshold for the ``threshold`` and ``constrained``
    rules; ``None`` picks the default (Gavish for ``threshold``; the
    complex or real Hankel bound for ``constrained``, matching the noise).
    """

    name: str
    criterion: str = "samos"
    tau: str | None = None

    def __post_init__(self):
        if self.name not in RULES:
            raise ValueError(f"unknown rule {self.name!r}; choose from {RULES}")
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}; choose from {CRITERIA}")
        if self.tau is not None:
            thresholds.resolve_kind(self.tau)

    @classmethod
    def parse(cls, text: str) -> "RuleConfig":
        """Parse ``name[:key=value...]``, e.g. ``constrained:criterion=ester:tau=t2``."""
        name, *options = text.strip().split(":")
        kwargs = {}
        for option in options:
            key, sep, value = option.partition("=")
            if not sep or key not in ("criterion", "tau"):
                raise ValueError(f"bad rule option {option!r} in {text!r}")
            kwargs[key] = value
        return cls(name, **kwargs)

    @property
    def label(self) -> str:
        parts = [self.name]
        if self.name == "constrained" and self.criterion != "samos":
            parts.append(f"criterion={self.criterion}")
        if self.name in ("threshold", "constrained") and self.tau is not None:
            parts.append(f"tau={self.tau}")
        return ":".join(parts)

    def threshold_kind(self, noise_kind: str) -> str:
        if self.tau is not None:
            return thresholds.resolve_kind(self.tau)
        if self.name == "threshold":
            return thresholds.GAVISH
        return thresholds.COMPLEX_HANKEL if noise_kind == "complex" else thresholds.REAL_HANKEL


def parse_rules(text) -> tuple[RuleConfig, ...]:
    if isinstance(text, str):
        text = [t for t in text.split(",") if t.strip()]
    return tuple(r if isinstance(r, RuleConfig) else RuleConfig.parse(r) for r in text)


@dataclass(frozen=True)
class BenchConfig:
    spec: SignalSpec
    snr_grid: tuple[float, ...]
    trials: int = 500
    rules: tuple[RuleConfig, ...] = tuple(RuleConfig(r) for r in RULES)
    master_seed: int = 0
    noise_kind: str = "complex"
    beta: float = thresholds.DEFAULT_BETA
    m: int | None = None
    s_max: int | None = None
    example_id: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "snr_grid", tuple(float(s) for s in self.snr_grid))
        object.__setattr__(self, "rules", parse_rules(self.rules))
        check_positive_int(self.trials, name="trials")
        check_probability(self.beta)
        if not self.snr_grid:
            raise ValueError("snr_grid must not be empty")
        if any(math.isnan(s) or s == -math.inf for s in self.snr_grid):
            raise ValueError("snr_grid entries must be finite or +inf")
        if self.noise_kind not in ("complex", "real"):
            raise ValueError(f"noise_kind must be 'complex' or 'real', got {self.noise_kind!r}")
        if not self.rules:
            raise ValueError("at least one rule is required")
        labels = [r.label for r in self.rules]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate rules in {labels}")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        self.shape  # validates m against the record length

    @classmethod
    def from_preset(cls, example_id: int, snr_grid, *, length=None, dt=None, **kwargs) -> "BenchConfig":
        spec = preset(example_id, **({} if length is None else {"length": length}), dt=dt)
        return cls(spec, snr_grid, example_id=example_id, **kwargs)

    @property
    def shape(self) -> HankelShape:
        if self.m is None:
            return HankelShape.square(self.spec.length)
        return HankelShape(self.m, self.spec.length - self.m + 1)

    @property
    def true_order(self) -> int:
        return self.spec.order

    def to_dict(self) -> dict:
        shape = self.shape
        return {
            "example_id": self.example_id,
            "signal": self.spec.to_dict(),
            "snr_grid": [_format_snr(s) for s in self.snr_grid],
            "trials": self.trials,
            "rules": [r.label for r in self.rules],
            "master_seed": self.master_seed,
            "noise_kind": self.noise_kind,
            "beta": self.beta,
            "m": shape.m,
            "n": shape.n,
            "s_max": default_s_max(shape.m) if self.s_max is None else self.s_max,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BenchConfig":
        data = dict(data)
        if "signal" in data:
            spec = SignalSpec.from_dict(data.pop("signal"))
        elif data.get("example_id") is not None:
            spec = preset(int(data["example_id"]), **{k: data.pop(k) for k in ("length", "dt") if k in data})
        else:
            raise ValueError("config needs either 'signal' or 'example_id'")
        data.pop("n", None)
        snr_grid = [float(s) for s in data.pop("snr_grid")]
        unknown = set(data) - {"trials", "rules", "master_seed", "noise_kind", "beta", "m", "s_max", "example_id"}
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(spec, snr_grid, **data)


def _format_snr(snr: float) -> str:
    return "inf" if snr == math.inf else repr(float(snr))


@dataclass
class BenchResult:
    config: BenchConfig
    cor: dict[tuple[str, float], float]
    histograms: dict[tuple[str, float], Counter]
    meta: dict = field(default_factory=dict)

    def cor_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rule", "snr_db", "cor"])
        for rule in self.config.rules:
            for snr in self.config.snr_grid:
                writer.writerow([rule.label, _format_snr(snr), repr(self.cor[rule.label, snr])])
        return buf.getvalue()

    def hist_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rule", "snr_db", "order", "count"])
        for rule in self.config.rules:
            for snr in self.config.snr_grid:
                hist = self.histograms[rule.label, snr]
                orders = sorted(k for k in hist if k != FAILED)
                if FAILED in hist:
                    orders.append(FAILED)
                for order in orders:
                    writer.writerow([rule.label, _format_snr(snr), order, hist[order]])
        return buf.getvalue()

    def manifest(self) -> dict:
        return {"config": self.config.to_dict(), **self.meta}

    def summary_lines(self) -> list[str]:
        lines = []
        for rule in self.config.rules:
            for snr in self.config.snr_grid:
                hist = self.histograms[rule.label, snr]
                lines.append(
                    f"{rule.label:<28} snr={_format_snr(snr):>6} dB  COR={self.cor[rule.label, snr]:.4f}"
                    f"  failed={hist.get(FAILED, 0)}"
                )
        return lines


class _Trial:
    """Everything one noisy realisation needs, with criterion traces cached."""

    def __init__(self, y, eta, shape, s_max):
        self.subspaces = svd_subspaces(hankel(y, shape))
        self.eta = eta
        self.shape = shape
        self.s_max = s_max
        self._traces = {}

    def trace(self, kind):
        if kind not in self._traces:
            self._traces[kind] = criterion_trace(self.subspaces, kind, self.s_max)
        return self._traces[kind]

    def select(self, rule: RuleConfig, noise_kind: str, beta: float) -> int:
        if rule.name in ("ester", "samos"):
            return self.trace(rule.name).argmin()
        tau = thresholds.threshold(rule.threshold_kind(noise_kind), self.shape.m, self.shape.n, self.eta, beta)
        if rule.name == "threshold":
            return select_threshold(self.subspaces.singular_values, tau).r_hat
        result = select_constrained(
            self.subspaces, tau, rule.criterion, self.s_max, trace=self.trace(rule.criterion)
        )
        return result.r_hat


def _run_cell(config: BenchConfig, clean, snr_index: int, trial_index: int) -> tuple:
    shape = config.shape
    s_max = default_s_max(shape.m) if config.s_max is None else config.s_max
    rng = _rng(config.master_seed, snr_index, trial_index)
    noisy = add_noise(clean, config.snr_grid[snr_index], config.noise_kind, rng)
    try:
        trial = _Trial(noisy.samples, noisy.eta, shape, s_max)
    except linalg.LinAlgError:
        return tuple(FAILED for _ in config.rules)
    out = []
    for rule in config.rules:
        try:
            out.append(trial.select(rule, config.noise_kind, config.beta))
        except (OrderSelectionError, DegenerateCostError, linalg.LinAlgError, ValueError):
            out.append(FAILED)
    return tuple(out)


def run_trials(config: BenchConfig, threads: int = 1, progress=None) -> BenchResult:
    """Run every rule on ``trials`` noisy realisations per SNR and tally the orders."""
    threads = check_positive_int(threads, name="threads")
    start = time.perf_counter()
    clean = synthesize(config.spec)
    jobs = [(i, t) for i in range(len(config.snr_grid)) for t in range(config.trials)]

    def work(job):
        return _run_cell(config, clean, *job)

    if threads == 1:
        outcomes = [work(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(work, jobs))

    histograms = {}
    cor = {}
    for k, rule in enumerate(config.rules):
        for i, snr in enumerate(config.snr_grid):
            hist = Counter(outcomes[i * config.trials + t][k] for t in range(config.trials))
            histograms[rule.label, snr] = hist
            cor[rule.label, snr] = hist.get(config.true_order, 0) / config.trials
        if progress is not None:
            progress(rule.label)
    meta = {"wall_time_s": time.perf_counter() - start, "threads": threads, "true_order": config.true_order}
    return BenchResult(config, cor, histograms, meta)


def _hankel_noise(rng, m, n, eta, kind):
    size = m + n - 1
    if kind == "complex":
        w = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) * (eta / math.sqrt(2))
    else:
        w = rng.standard_normal(size) * eta
    return w


NORM_SWEEP_COLUMNS = ("n", "eta", "norm_min", "norm_mean", "norm_max", "tau2", "tau3")


def norm_bound_sweep(n_grid, eta_grid, trials=200, beta=thresholds.DEFAULT_BETA, master_seed=0, threads=1):
    """Spread of ``||H_w||_2`` for real square Hankel noise next to the real-noise and Gavish thresholds.

    One unit-variance draw per ``(n, trial)`` is reused for every ``eta``, so
    each row scales exactly linearly in ``eta``.
    """
    check_positive_int(trials, name="trials")
    check_probability(beta)
    rows = []
    for i, n in enumerate(n_grid):
        n = check_positive_int(int(n), name="n", minimum=2)

        def draw(t, i=i, n=n):
            w = _rng(master_seed, i, t).standard_normal(2 * n - 1)
            return linalg.svdvals(linalg.hankel(w[:n], w[n - 1 :]))[0]

        if threads == 1:
            base = np.array([draw(t) for t in range(trials)])
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                base = np.array(list(pool.map(draw, range(trials))))
        for eta in eta_grid:
            eta = float(eta)
            norms = base * eta
            rows.append({
                "n": n,
                "eta": eta,
                "norm_min": float(norms.min()),
                "norm_mean": float(norms.mean()),
                "norm_max": float(norms.max()),
                "tau2": thresholds.tau_real(n, n, eta, beta),
                "tau3": thresholds.tau_gavish(n, n, eta),
            })
    return rows


def random_mode_signal(rng, order: int, length: int) -> np.ndarray:
    """Undamped modes with frequencies uniform on (0, 1] and real amplitudes uniform on [1, 1.5]."""
    freqs = 1.0 - rng.random(order)
    amps = rng.uniform(1.0, 1.5, order)
    k = np.arange(length)
    return np.exp(2j * np.pi * np.outer(k, freqs)) @ amps


TIGHTNESS_COLUMNS = (
    "r", "s", "ester_gap_mean", "ester_gap_max", "samos_gap_mean", "samos_gap_max", "violations",
)


def bound_tightness_sweep(r_grid, s_max=None, trials=20, master_seed=0, length=65):
    """Distance of the ESTER and SAMOS costs from their principal-angle expressions.

    For each noiseless random-mode signal of order ``r`` and each candidate
    ``s`` this records ``|ester - sin(theta_1)|`` and
    ``|samos - (sqrt(2)/s) sum sin(theta_i/2)|``, averaged and maximised over
    trials, plus the number of draws where either cost exceeds its bound.
    """
    check_positive_int(trials, name="trials")
    shape = HankelShape.square(length)
    s_max = default_s_max(shape.m) if s_max is None else s_max
    rows = []
    for i, r in enumerate(r_grid):
        r = check_positive_int(int(r), name="r")
        gaps_e = np.zeros((trials, s_max))
        gaps_s = np.zeros((trials, s_max))
        violations = np.zeros(s_max, dtype=int)
        for t in range(trials):
            x = random_mode_signal(_rng(master_seed, i, t), r, shape.length)
            sub = svd_subspaces(hankel(x, shape))
            for s in range(1, s_max + 1):
                e = ester_cost(sub, s)
                q = samos_cost(sub, s)
                angles = block_angles(sub, s)
                rho = math.sin(angles[0])
                gaps_e[t, s - 1] = abs(e - rho)
                gaps_s[t, s - 1] = abs(q - math.sqrt(2) * float(np.mean(np.sin(angles / 2))))
                e_bound = rho
                q_bound = math.sqrt(2) * (1 + float(np.mean(np.sin(angles / 2))))
                violations[s - 1] += (e > e_bound + 1e-9) or (q > q_bound + 1e-9)
        for s in range(1, s_max + 1):
            rows.append({
                "r": r,
                "s": s,
                "ester_gap_mean": float(gaps_e[:, s - 1].mean()),
                "ester_gap_max": float(gaps_e[:, s - 1].max()),
                "samos_gap_mean": float(gaps_s[:, s - 1].mean()),
                "samos_gap_max": float(gaps_s[:, s - 1].max()),
                "violations": int(violations[s - 1]),
            })
    return rows


@dataclass
class SpectrumHistogram:
    kind: str
    m: int
    n: int
    edges: np.ndarray
    density: np.ndarray
    mp: np.ndarray
    singular_values: np.ndarray
    max_per_draw: np.ndarray

    @property
    def c(self) -> float:
        return min(self.m, self.n) / max(self.m, self.n)

    def fraction_outside(self, margin: float = 0.0) -> float:
        lo, hi = 1 - math.sqrt(self.c) - margin, 1 + math.sqrt(self.c) + margin
        sv = self.singular_values
        return float(np.mean((sv < lo) | (sv > hi)))

    def rows(self) -> list[dict]:
        centers = 0.5 * (self.edges[:-1] + self.edges[1:])
        return [
            {"bin_left": float(a), "bin_right": float(b), "center": float(c), "density": float(d), "mp_density": float(f)}
            for a, b, c, d, f in zip(self.edges[:-1], self.edges[1:], centers, self.density, self.mp)
        ]


SPECTRUM_COLUMNS = ("bin_left", "bin_right", "center", "density", "mp_density")


def spectrum_histogram(kind, m=1024, n=512, eta=1.0, bins=60, master_seed=0, draws=1, noise="real"):
    """Histogram of the singular values of ``W / (eta sqrt(m))`` next to the Marchenko-Pastur density.

    ``kind="iid"`` draws a matrix with independent entries, ``kind="hankel"``
    a Hankel matrix generated by ``m + n - 1`` independent samples.
    """
    if kind not in ("iid", "hankel"):
        raise ValueError(f"kind must be 'iid' or 'hankel', got {kind!r}")
    check_positive_int(draws, name="draws")
    if eta <= 0:
        raise ValueError("eta must be > 0")
    big, small = max(m, n), min(m, n)
    pooled, maxima = [], []
    for d in range(draws):
        rng = _rng(master_seed, d)
        if kind == "iid":
            if noise == "complex":
                W = (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) * (eta / math.sqrt(2))
            else:
                W = rng.standard_normal((m, n)) * eta
        else:
            w = _hankel_noise(rng, m, n, eta, noise)
            W = linalg.hankel(w[:m], w[m - 1 :])
        sv = linalg.svdvals(W) / (eta * math.sqrt(big))
        pooled.append(sv)
        maxima.append(sv[0])
    sv = np.concatenate(pooled)
    c = small / big
    upper = max(1 + math.sqrt(c), float(sv.max())) * 1.02
    edges = np.linspace(0.0, upper, bins + 1)
    density, _ = np.histogram(sv, bins=edges, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return SpectrumHistogram(kind, m, n, edges, density, thresholds.mp_density(centers, c), sv, np.array(maxima))


def write_rows(path, rows, columns):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})


def write_bench(result: BenchResult, out_dir) -> dict:
    """Write ``cor.csv``, ``hist.csv`` and ``manifest.json`` into ``out_dir``."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"cor": out / "cor.csv", "hist": out / "hist.csv", "manifest": out / "manifest.json"}
    paths["cor"].write_text(result.cor_csv())
    paths["hist"].write_text(result.hist_csv())
    paths["manifest"].write_text(json.dumps(result.manifest(), indent=2) + "\n")
    return paths
