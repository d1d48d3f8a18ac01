"""
Power and type-I error simulation for forward selection on a blocked design,
case-study response generation and ranking of addition sequences.
"""
import logging
from dataclasses import dataclass, field
from functools import partial

import numpy as np
import pandas as pd

from .core import full_oofa_design
from .exceptions import ConfigInvalid, UnknownLabel
from .stats import (
    INTERCEPT, ForwardFit, ModelOrder, forward_select, is_block_label, model_matrix, position_labels,
)
from .utils import default_seed, oofa_setting, run_parallel, substream

logger = logging.getLogger(__name__)

TRUE_MODEL = {
    INTERCEPT: 23.13,
    'Z1^l': 0.26,
    'Z2^l': -3.19,
    'Z5^l': 1.3,
    'Z2^q': -3.21,
    'Z1^lZ5^l': 1.05,
    'Z2^lZ5^l': 1.82,
}
BATCH_EFFECTS = {'B^l': -4.08, 'B^q': 1.2}

EFFECT_LOW, EFFECT_HIGH = 2.0, 4.0
SEQUENCE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class SimConfig:
    design: object
    p: int
    reps: int = None
    alpha: float = None
    sigma: float = None
    seed: int = None

    def __post_init__(self):
        defaults = oofa_setting('SIMULATION', {})
        for name, fallback in (('reps', 1000), ('alpha', 0.05), ('sigma', 1.0)):
            if getattr(self, name) is None:
                object.__setattr__(self, name, defaults.get(name, fallback))
        if self.seed is None:
            object.__setattr__(self, 'seed', default_seed())

    def validate(self):
        design = self.design
        if not design.blocked or design.k < 2:
            raise ConfigInvalid("simulation needs a design with at least two blocks")
        available = len(position_labels(design.m))
        if not 0 <= self.p <= available:
            raise ConfigInvalid(f"p must lie in 0..{available}, got {self.p}")
        if self.reps < 1:
            raise ConfigInvalid("reps must be at least 1")
        if not self.sigma > 0:
            raise ConfigInvalid("sigma must be positive")
        if not 0 < self.alpha < 1:
            raise ConfigInvalid("alpha must lie in (0, 1)")
        return self


@dataclass(frozen=True, eq=False)
class SimulationReport:
    config: SimConfig
    pw: np.ndarray
    ty1: np.ndarray
    n_active: np.ndarray
    n_inactive: np.ndarray
    true_positives: np.ndarray = field(default=None)
    false_positives: np.ndarray = field(default=None)

    @property
    def power(self):
        return float(self.pw.mean())

    @property
    def type1_error(self):
        return float(self.ty1.mean())

    def summary(self):
        return {
            'p': self.config.p,
            'reps': self.config.reps,
            'alpha': self.config.alpha,
            'sigma': self.config.sigma,
            'seed': self.config.seed,
            'PW': self.power,
            'TY1': self.type1_error,
        }

    def per_rep(self):
        return pd.DataFrame({
            'rep': np.arange(1, len(self.pw) + 1),
            'pw': self.pw,
            'ty1': self.ty1,
            'n_act': self.n_active,
            'n_inact': self.n_inactive,
            'true_positive': self.true_positives,
            'false_positive': self.false_positives,
        })


def _simulate_rep(design, p, alpha, sigma, seed, rep):
    rng = substream(seed, rep)
    X = model_matrix(design, ModelOrder.SECOND_ORDER)
    candidates = X.position_labels
    blocks = X.block_labels

    # draw order: terms, magnitudes, signs, block magnitudes, block signs, noise
    chosen = rng.choice(len(candidates), size=p, replace=False)
    magnitudes = rng.uniform(EFFECT_LOW, EFFECT_HIGH, size=p) * sigma
    signs = rng.integers(0, 2, size=p) * 2 - 1
    block_magnitudes = rng.uniform(EFFECT_LOW, EFFECT_HIGH, size=len(blocks)) * sigma
    block_signs = rng.integers(0, 2, size=len(blocks)) * 2 - 1
    noise = sigma * rng.standard_normal(design.n)

    beta = np.zeros(len(X.labels))
    active = {candidates[i] for i in chosen}
    for i, size, sign in zip(chosen, magnitudes, signs):
        beta[X.index(candidates[i])] = sign * size
    for label, size, sign in zip(blocks, block_magnitudes, block_signs):
        beta[X.index(label)] = sign * size
    y = X.values @ beta + noise

    fit = forward_select(X, y, alpha)
    selected = set(fit.selected)
    n_active = len(blocks) + p
    n_inactive = len(candidates) - p
    true_positive = len(selected & (active | set(blocks)))
    false_positive = len(selected - active - set(blocks))
    pw = true_positive / n_active if n_active else 0.0
    ty1 = false_positive / n_inactive if n_inactive else 0.0
    return pw, ty1, n_active, n_inactive, true_positive, false_positive


def simulate(config, threads=1):
    config.validate()
    worker = partial(_simulate_rep, config.design, config.p, config.alpha, config.sigma, config.seed)
    outcomes = np.array(run_parallel(worker, range(config.reps), threads), dtype=float).reshape(-1, 6)
    report = SimulationReport(
        config=config,
        pw=outcomes[:, 0],
        ty1=outcomes[:, 1],
        n_active=outcomes[:, 2].astype(int),
        n_inactive=outcomes[:, 3].astype(int),
        true_positives=outcomes[:, 4].astype(int),
        false_positives=outcomes[:, 5].astype(int),
    )
    logger.info("simulated p=%d over %d reps: PW=%.3f TY1=%.3f", config.p, config.reps,
                report.power, report.type1_error)
    return report


def simulate_grid(design, ps=range(1, 7), threads=1, **options):
    return [simulate(SimConfig(design=design, p=p, **options), threads=threads) for p in ps]


def case_study_responses(design, model=None, block_effects=None, sigma=1.0, seed=None):
    """mu(design) + block effects + Normal(0, sigma^2) noise."""
    model = TRUE_MODEL if model is None else model
    block_effects = {} if block_effects is None else block_effects
    X = model_matrix(design, ModelOrder.SECOND_ORDER)
    effects = {**model, **block_effects}
    unknown = [label for label in effects if label not in X.labels]
    if unknown:
        raise UnknownLabel(f"unknown model terms: {', '.join(unknown)}")
    mean = np.zeros(design.n)
    for label, value in effects.items():
        mean += value * X.column(label)
    rng = substream(default_seed() if seed is None else seed, 0)
    return mean + sigma * rng.standard_normal(design.n)


def _effect_map(effects):
    if isinstance(effects, ForwardFit):
        return effects.estimates()
    return dict(effects)


def sequence_of(row):
    """A run as a sequence label: its level vector (z1, ..., zm), unchanged."""
    return tuple(int(z) for z in row)


def format_sequence(sequence):
    return '->'.join(f"Z{c}" for c in sequence)


def rank_sequences(effects, m, top=None):
    """
    Predicted response of every addition sequence, best first. Intercept and
    block terms are constant across sequences and left out.
    """
    effects = _effect_map(effects)
    runs = full_oofa_design(m)
    X = model_matrix(runs, ModelOrder.SECOND_ORDER)
    predicted = np.zeros(runs.n)
    for label, value in effects.items():
        if label == INTERCEPT or is_block_label(label):
            continue
        if label not in X.labels:
            raise UnknownLabel(f"{label} is not a position term for m={m}")
        predicted += value * X.column(label)

    ranked = sorted(
        ((sequence_of(row), float(value)) for row, value in zip(runs.rows, predicted)),
        key=lambda item: (-item[1], item[0]),
    )
    return ranked[:top] if top else ranked


def argmax_sequences(effects, m):
    ranked = rank_sequences(effects, m)
    best = ranked[0][1]
    return [sequence for sequence, value in ranked if best - value <= SEQUENCE_TOLERANCE]
