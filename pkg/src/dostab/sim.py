"""Synthetic opinion-poll experiments.

Two vote generators: uniform (each voter picks one of the five choices with
probability 1/5) and drifting (choice probabilities move toward choice 1 by a
fixed step each interval). ``run_experiment`` pushes the generated votes
through the real ledger, scores every interval and builds the three charts.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .charts import ControlChart, EwmaConfig, Side, detect_violations, ewma_chart, i_chart, mr_chart
from .core import IdentityProof, NUM_CHOICES, ProposalKind, Tally, VoteChoice
from .errors import ConfigError, SeriesTooShortError
from .ledger import VoteLedger
from .metrics import NiwaScore, niwa_series
from .triggers import BlockHeightProof

SIM_EA_TOKEN = "sim-ea"
SIM_PROPOSAL = 0


@dataclass(frozen=True)
class UniformSamplerConfig:
    voters: int = 8
    intervals: int = 30
    seed: int = 0

    def __post_init__(self):
        if self.voters < 1 or self.intervals < 1:
            raise ConfigError("voters and intervals must be >= 1")


@dataclass(frozen=True)
class DriftingSamplerConfig:
    initial_p: Tuple[float, ...] = (0.05, 0.15, 0.15, 0.30, 0.35)
    step_up: float = 0.02
    step_down: float = 0.005
    voters: int = 8
    intervals: int = 30
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "initial_p", tuple(float(p) for p in self.initial_p))
        if self.voters < 1 or self.intervals < 1:
            raise ConfigError("voters and intervals must be >= 1")
        if len(self.initial_p) != NUM_CHOICES:
            raise ConfigError(f"initial_p needs {NUM_CHOICES} entries")
        if any(p < 0 for p in self.initial_p) or not math.isclose(sum(self.initial_p), 1.0, abs_tol=1e-9):
            raise ConfigError("initial_p must be non-negative and sum to 1")
        if self.step_up < 0 or self.step_down < 0:
            raise ConfigError("step sizes must be non-negative")


SamplerConfig = Union[UniformSamplerConfig, DriftingSamplerConfig]


def voter_ids(n: int) -> List[str]:
    return [f"v{k + 1}" for k in range(n)]


def sample_uniform_interval(cfg: UniformSamplerConfig, rng: np.random.Generator):
    draws = rng.integers(1, NUM_CHOICES + 1, size=cfg.voters)
    return [(j, VoteChoice(int(c))) for j, c in zip(voter_ids(cfg.voters), draws)]


def drift_probabilities(cfg: DriftingSamplerConfig, k: int) -> np.ndarray:
    """Choice probabilities for interval ``k``: p1 up, p2..p5 down, clamped at 0, renormalised."""
    if k < 0:
        raise ValueError("interval index must be >= 0")
    p = np.array(cfg.initial_p, dtype=float)
    p[0] += k * cfg.step_up
    p[1:] -= k * cfg.step_down
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def sample_drift_interval(cfg: DriftingSamplerConfig, k: int, rng: np.random.Generator):
    probs = drift_probabilities(cfg, k)
    draws = rng.choice(NUM_CHOICES, size=cfg.voters, p=probs) + 1
    return [(j, VoteChoice(int(c))) for j, c in zip(voter_ids(cfg.voters), draws)]


def sample_interval(cfg: SamplerConfig, k: int, rng: np.random.Generator):
    if isinstance(cfg, DriftingSamplerConfig):
        return sample_drift_interval(cfg, k, rng)
    return sample_uniform_interval(cfg, rng)


@dataclass
class ExperimentResult:
    scores: List[NiwaScore]
    tallies: List[Tally]
    ledger: VoteLedger
    i_chart: Optional[ControlChart] = None
    mr_chart: Optional[ControlChart] = None
    ewma_chart: Optional[ControlChart] = None
    chart_error: Optional[str] = None

    @property
    def niwa(self) -> List[float]:
        return [float(s) for s in self.scores]

    @property
    def violations(self) -> Dict[str, List[Tuple[int, Side]]]:
        out = {}
        for name in ("i_chart", "mr_chart", "ewma_chart"):
            chart = getattr(self, name)
            if chart is not None:
                out[name] = [(k + chart.offset, side) for k, side in detect_violations(chart)]
        return out


def run_experiment(cfg: SamplerConfig, ewma: EwmaConfig = EwmaConfig(),
                   blocks_per_interval: int = 16) -> ExperimentResult:
    rng = np.random.default_rng(cfg.seed)
    ledger = VoteLedger(SIM_EA_TOKEN, blocks_per_interval=blocks_per_interval)
    ledger.add_proposal(SIM_EA_TOKEN, SIM_PROPOSAL, "synthetic poll", ProposalKind.GENERIC)
    for j in voter_ids(cfg.voters):
        ledger.register_stakeholder(SIM_EA_TOKEN, j, 1)
    ledger.advance_phase(SIM_EA_TOKEN)

    height = 0  # simulation clock standing in for the chain's block height
    tallies = []
    for k in range(cfg.intervals):
        i = ledger.current_interval
        for j, choice in sample_interval(cfg, k, rng):
            ledger.vote_in_interval(SIM_PROPOSAL, i, j, choice,
                                    IdentityProof(j, ledger.stakeholders[j].credential))
        ledger.advance_phase(SIM_EA_TOKEN)
        tallies.append(ledger.tally_in_interval(SIM_PROPOSAL, i))
        ledger.update_interval(BlockHeightProof(height, height + blocks_per_interval, blocks_per_interval))
        height += blocks_per_interval

    scores = niwa_series(ledger, SIM_PROPOSAL, range(cfg.intervals))
    result = ExperimentResult(scores, tallies, ledger)
    series = result.niwa
    try:
        result.i_chart = i_chart(series)
        result.mr_chart = mr_chart(series)
        result.ewma_chart = ewma_chart(series, ewma)
    except SeriesTooShortError as e:
        result.chart_error = str(e)
    return result


@dataclass(frozen=True)
class ExperimentSettings:
    sampler: SamplerConfig
    ewma: EwmaConfig = field(default_factory=EwmaConfig)
    blocks_per_interval: int = 16
    svg: bool = False


def _floats(text: str) -> Tuple[float, ...]:
    return tuple(float(t) for t in text.replace(",", " ").split())


def parse_settings(text: str, seed: int) -> ExperimentSettings:
    """Parse an INI experiment file; schema in docs/schema.md."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
        exp = cp["experiment"] if cp.has_section("experiment") else {}
        kind = exp.get("sampler", "uniform").strip().lower()
        voters = int(exp.get("voters", 8))
        intervals = int(exp.get("intervals", 30))
        blocks = int(exp.get("blocks_per_interval", 16))
        if blocks < 1:
            raise ConfigError("blocks_per_interval must be >= 1")
        if kind == "uniform":
            sampler = UniformSamplerConfig(voters, intervals, seed)
        elif kind in ("drift", "purposive"):
            d = cp["drift"] if cp.has_section("drift") else {}
            defaults = DriftingSamplerConfig()
            sampler = DriftingSamplerConfig(
                _floats(d["initial_p"]) if "initial_p" in d else defaults.initial_p,
                float(d.get("step_up", defaults.step_up)),
                float(d.get("step_down", defaults.step_down)),
                voters, intervals, seed)
        else:
            raise ConfigError(f"unknown sampler {kind!r} (expected uniform or drift)")
        ch = cp["chart"] if cp.has_section("chart") else {}
        ewma = EwmaConfig(float(ch.get("ewma_lambda", 0.2)))
        svg = cp.getboolean("chart", "svg", fallback=False) if cp.has_section("chart") else False
    except ConfigError:
        raise
    except (configparser.Error, ValueError, KeyError) as e:
        raise ConfigError(f"bad experiment config: {e}") from None
    return ExperimentSettings(sampler, ewma, blocks, svg)
