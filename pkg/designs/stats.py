"""
Block-position model matrices, least squares, forward selection and column
correlations.
"""
import enum
import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np
import pandas as pd
from scipy import linalg, special

from .contrasts import block_contrast_table, contrast_table
from .exceptions import RankDeficient, UnknownLabel, ZeroVariance

logger = logging.getLogger(__name__)

INTERCEPT = '(Intercept)'
RANK_TOLERANCE = 1e-10
_BLOCK_SUFFIXES = ('l', 'q', 'c')


class ModelOrder(enum.Enum):
    FIRST = 'first'
    QUADRATIC = 'quadratic'
    SECOND_ORDER = 'second'


def block_label(s):
    return f"B^{_BLOCK_SUFFIXES[s - 1]}" if s <= len(_BLOCK_SUFFIXES) else f"B^{s}"


def linear_label(j):
    return f"Z{j}^l"


def quadratic_label(j):
    return f"Z{j}^q"


def interaction_label(i, j):
    return f"Z{i}^lZ{j}^l"


def position_labels(m, order=ModelOrder.SECOND_ORDER):
    labels = [linear_label(j) for j in range(1, m + 1)]
    if order in (ModelOrder.QUADRATIC, ModelOrder.SECOND_ORDER):
        labels += [quadratic_label(j) for j in range(1, m + 1)]
    if order is ModelOrder.SECOND_ORDER:
        labels += [interaction_label(i, j) for i, j in combinations(range(1, m + 1), 2)]
    return labels


def is_block_label(label):
    return label.startswith('B^')


@dataclass(frozen=True, eq=False)
class ModelMatrix:
    labels: tuple
    values: np.ndarray

    @property
    def n(self):
        return self.values.shape[0]

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"{label} is not a column of this model") from None

    def column(self, label):
        return self.values[:, self.index(label)]

    def subset(self, labels):
        columns = [self.index(label) for label in labels]
        return ModelMatrix(labels=tuple(labels), values=self.values[:, columns])

    @property
    def block_labels(self):
        return [label for label in self.labels if is_block_label(label)]

    @property
    def position_labels(self):
        return [label for label in self.labels if label != INTERCEPT and not is_block_label(label)]

    def to_frame(self):
        return pd.DataFrame(self.values, columns=list(self.labels))


def model_matrix(design, order=ModelOrder.SECOND_ORDER, include_blocks=True):
    """Intercept, block contrasts, then linear, quadratic and interaction columns."""
    order = ModelOrder(order)
    m, n = design.m, design.n
    P = contrast_table(m).values
    linear = P[1, design.rows - 1]
    columns = [np.ones(n)]
    labels = [INTERCEPT]

    if include_blocks and design.blocked and design.k >= 2:
        C = block_contrast_table(design.k).values
        for s in range(1, design.k):
            columns.append(C[s, design.blocks - 1])
            labels.append(block_label(s))

    for j in range(m):
        columns.append(linear[:, j])
    if order in (ModelOrder.QUADRATIC, ModelOrder.SECOND_ORDER):
        quadratic = P[2, design.rows - 1] if m > 2 else np.zeros_like(linear)
        for j in range(m):
            columns.append(quadratic[:, j])
    if order is ModelOrder.SECOND_ORDER:
        for i, j in combinations(range(m), 2):
            columns.append(linear[:, i] * linear[:, j])
    labels += position_labels(m, order)

    values = np.column_stack(columns) if n else np.zeros((0, len(labels)))
    values.setflags(write=False)
    return ModelMatrix(labels=tuple(labels), values=values)


def t_pvalue(t, df):
    """Two-sided Student t tail probability."""
    t = np.asarray(t, dtype=float)
    df = np.asarray(df, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        x = df / (df + t * t)
    p = special.betainc(df / 2.0, 0.5, x)
    p = np.where(np.isinf(t), 0.0, p)
    return float(p) if p.ndim == 0 else p


@dataclass(frozen=True, eq=False)
class OlsResult:
    labels: tuple
    estimates: np.ndarray
    std_errors: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    df: int
    sigma2: float
    residuals: np.ndarray

    def table(self):
        return pd.DataFrame(
            {
                'Estimate': self.estimates,
                'Std. Error': self.std_errors,
                't value': self.t_values,
                'Pr(>|t|)': self.p_values,
            },
            index=pd.Index(self.labels, name='term'),
        )


def ols(X, y):
    y = np.asarray(y, dtype=float)
    n, p = X.values.shape
    if n <= p:
        raise RankDeficient(f"{n} runs cannot estimate {p} terms with residual degrees of freedom")
    Q, R, pivots = linalg.qr(X.values, mode='economic', pivoting=True)
    diagonal = np.abs(np.diag(R))
    rank = int(np.sum(diagonal > RANK_TOLERANCE * diagonal[0])) if p else 0
    if rank < p:
        label = X.labels[pivots[rank]]
        raise RankDeficient(f"column {label} is linearly dependent on earlier columns", label=label)

    coef = linalg.solve_triangular(R, Q.T @ y)
    estimates = np.empty(p)
    estimates[pivots] = coef
    residuals = y - X.values @ estimates
    df = n - p
    sigma2 = float(residuals @ residuals) / df

    R_inv = linalg.solve_triangular(R, np.eye(p))
    variances = np.empty(p)
    variances[pivots] = np.sum(R_inv ** 2, axis=1)
    std_errors = np.sqrt(sigma2 * variances)
    with np.errstate(divide='ignore', invalid='ignore'):
        t_values = np.where(
            std_errors > 0, estimates / std_errors, np.where(estimates == 0, 0.0, np.copysign(np.inf, estimates))
        )
    return OlsResult(
        labels=tuple(X.labels),
        estimates=estimates,
        std_errors=std_errors,
        t_values=t_values,
        p_values=np.atleast_1d(t_pvalue(t_values, df)),
        df=df,
        sigma2=sigma2,
        residuals=residuals,
    )


@dataclass(frozen=True, eq=False)
class ForwardFit:
    selected: tuple
    entry_p_values: tuple
    alpha: float
    result: OlsResult

    @property
    def df(self):
        return self.result.df

    @property
    def sigma2(self):
        return self.result.sigma2

    def estimates(self):
        return dict(zip(self.result.labels, self.result.estimates.tolist()))

    def table(self):
        return self.result.table()


def forward_select(X, y, alpha=0.05, candidates=None, start=(INTERCEPT,)):
    """
    Add, one at a time, the candidate whose partial t-test has the smallest
    p-value while it stays below alpha. Candidates that are linearly dependent
    on the current model are skipped.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    y = np.asarray(y, dtype=float)
    n = len(y)
    selected = list(start)
    pool = [label for label in (candidates or X.labels) if label not in selected]
    entry_p = []

    while pool:
        df = n - (len(selected) + 1)
        if df < 1:
            break
        Q, _ = linalg.qr(X.subset(selected).values, mode='economic')
        e = y - Q @ (Q.T @ y)
        Xc = X.subset(pool).values
        Rc = Xc - Q @ (Q.T @ Xc)
        norms = np.linalg.norm(Rc, axis=0)
        admissible = norms > RANK_TOLERANCE * np.maximum(np.linalg.norm(Xc, axis=0), 1e-300)
        if not admissible.any():
            break

        with np.errstate(divide='ignore', invalid='ignore'):
            projection = np.where(admissible, (Rc.T @ e) / np.where(admissible, norms, 1.0), 0.0)
            rss = max(float(e @ e), 0.0) - projection ** 2
            s2 = np.maximum(rss, 0.0) / df
            t = np.where(s2 > 0, projection / np.sqrt(s2), np.where(projection == 0, 0.0, np.inf))
        p = np.where(admissible, t_pvalue(t, df), np.inf)
        best = int(np.argmin(p))
        if not p[best] < alpha:
            break
        entry_p.append(float(p[best]))
        selected.append(pool.pop(best))
        logger.debug("entered %s (p=%.3g)", selected[-1], entry_p[-1])

    return ForwardFit(
        selected=tuple(label for label in selected if label not in start),
        entry_p_values=tuple(entry_p),
        alpha=alpha,
        result=ols(X.subset(selected), y),
    )


def correlation_matrix(X):
    labels = [label for label in X.labels if label != INTERCEPT]
    values = X.subset(labels).values
    spread = values.std(axis=0)
    for label, sd in zip(labels, spread):
        if sd <= 1e-12:
            raise ZeroVariance(label)
    corr = np.clip(np.corrcoef(values, rowvar=False), -1.0, 1.0)
    corr = np.atleast_2d(corr)
    np.fill_diagonal(corr, 1.0)
    return pd.DataFrame(corr, index=pd.Index(labels, name='term'), columns=labels)
