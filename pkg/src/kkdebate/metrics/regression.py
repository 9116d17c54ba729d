"""Linear fits with an unpenalized intercept: ridge for lam > 0, OLS at lam = 0.

Features and target are centered, the penalized normal equations
``(Xc'Xc + lam I) b = Xc'yc`` are solved for the slopes, and the intercept is
recovered from the means.  At lam = 0 the fit also reports classical
(homoskedastic) standard errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.stats


class RankDeficientError(np.linalg.LinAlgError):
    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        super().__init__(f"design matrix is rank deficient; dependent column(s): {', '.join(self.columns)}")


@dataclass(frozen=True)
class RegressionFit:
    names: tuple[str, ...]
    coefficients: np.ndarray
    intercept: float
    lam: float
    r_squared: float
    adj_r_squared: float
    n: int
    standard_errors: np.ndarray | None = None
    intercept_se: float | None = None

    @property
    def residual_df(self) -> int:
        return self.n - len(self.names) - 1

    def predict(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.coefficients + self.intercept

    def p_values(self) -> np.ndarray | None:
        if self.standard_errors is None:
            return None
        tvals = self.coefficients / self.standard_errors
        return 2 * scipy.stats.t.sf(np.abs(tvals), self.residual_df)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, self.coefficients.tolist()))


def significance_stars(p: float | None) -> str:
    """Two-sided t-test convention: *** p<0.01, ** p<0.05, * p<0.1."""
    if p is None or np.isnan(p):
        return ""
    return "***" if p < 0.01 else "**" if p < 0.05 else "*" if p < 0.1 else ""


def dependent_columns(Xc: np.ndarray, names: Sequence[str], rtol: float = 1e-10) -> list[str]:
    """Columns of the centered design that add no rank beyond the columns before them."""
    kept: list[int] = []
    bad = []
    scale = max(float(np.abs(Xc).max()) if Xc.size else 0.0, 1.0)
    for i in range(Xc.shape[1]):
        cols = Xc[:, kept + [i]]
        if np.linalg.matrix_rank(cols, tol=rtol * scale * max(Xc.shape)) == len(kept) + 1:
            kept.append(i)
        else:
            bad.append(names[i])
    return bad


def fit_linear(X, y, lam: float = 1.0, names: Sequence[str] | None = None) -> RegressionFit:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError(f"need X of shape (n, k) and y of shape (n,), got {X.shape} and {y.shape}")
    if lam < 0:
        raise ValueError("lam must be non-negative")
    n, k = X.shape
    if n == 0:
        raise ValueError("no observations")
    names = tuple(names) if names is not None else tuple(f"x{i + 1}" for i in range(k))
    if len(names) != k:
        raise ValueError("one name per column required")
    xm, ym = X.mean(axis=0), y.mean()
    Xc, yc = X - xm, y - ym
    if lam == 0:
        bad = dependent_columns(Xc, names)
        if bad:
            raise RankDeficientError(bad)
    G = Xc.T @ Xc + lam * np.eye(k)
    beta = scipy.linalg.solve(G, Xc.T @ yc, assume_a="pos") if k else np.zeros(0)
    intercept = float(ym - xm @ beta)
    resid = yc - Xc @ beta
    rss = float(resid @ resid)
    tss = float(yc @ yc)
    r2 = 1.0 - rss / tss if tss > 0 else float("nan")
    df = n - k - 1
    adj = 1.0 - (1.0 - r2) * (n - 1) / df if df > 0 else float("nan")
    se = intercept_se = None
    if lam == 0 and df > 0:
        Xa = np.column_stack([np.ones(n), X])
        cov = rss / df * scipy.linalg.inv(Xa.T @ Xa)
        sd = np.sqrt(np.clip(np.diag(cov), 0.0, None))
        intercept_se, se = float(sd[0]), sd[1:]
    return RegressionFit(names, beta, intercept, float(lam), r2, adj, n, se, intercept_se)


def fit_dropping_dependent(X, y, names: Sequence[str], lam: float = 0.0) -> tuple[RegressionFit, list[str]]:
    """Fit after removing constant and linearly dependent columns; returns the dropped names."""
    X = np.asarray(X, dtype=float)
    names = list(names)
    Xc = X - X.mean(axis=0) if len(X) else X
    dropped = dependent_columns(Xc, names) if lam == 0 else [
        nm for i, nm in enumerate(names) if np.all(Xc[:, i] == 0)]
    keep = [i for i, nm in enumerate(names) if nm not in dropped]
    return fit_linear(X[:, keep], y, lam, [names[i] for i in keep]), dropped
