"""(mu/mu_w, lambda)-CMA-ES with rank-one and rank-mu covariance updates.

Follows the standard formulation with cumulative step-size adaptation.
Minimizes; all randomness comes from one seeded numpy Generator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class CMAConfig:
    max_evals: int = 10_000
    popsize: int | None = None  # default 4 + floor(3 ln n)
    tolfun: float = 1e-15  # stop when recent best values span less than this
    tolx: float = 1e-14  # stop when the search distribution collapses below this
    ftarget: float | None = None
    seed: int = 0


@dataclass
class CMAResult:
    x_best: np.ndarray
    f_best: float
    evaluations: int
    iterations: int
    stop: str
    history: list = field(default_factory=list)  # best f per generation


class CMAES:
    """Ask/tell interface; ``cma_es_minimize`` wraps the usual loop."""

    def __init__(self, x0, sigma0: float, popsize: int | None = None, seed: int = 0):
        self.mean = np.array(x0, dtype=float).reshape(-1)
        n = self.n = self.mean.size
        if n < 1:
            raise ValidationError("CMA-ES needs at least one dimension")
        if not sigma0 > 0:
            raise ValidationError(f"sigma0 must be positive, got {sigma0}")
        self.sigma = float(sigma0)
        self.rng = np.random.default_rng(seed)

        self.lam = popsize or 4 + int(3 * math.log(n))
        self.mu = self.lam // 2
        w = math.log(self.mu + 0.5) - np.log(np.arange(1, self.mu + 1))
        self.weights = w / w.sum()
        self.mueff = 1.0 / np.sum(self.weights ** 2)

        mueff = self.mueff
        self.cc = (4 + mueff / n) / (n + 4 + 2 * mueff / n)
        self.cs = (mueff + 2) / (n + mueff + 5)
        self.c1 = 2 / ((n + 1.3) ** 2 + mueff)
        self.cmu = min(1 - self.c1, 2 * (mueff - 2 + 1 / mueff) / ((n + 2) ** 2 + mueff))
        self.damps = 1 + 2 * max(0.0, math.sqrt((mueff - 1) / (n + 1)) - 1) + self.cs
        self.chi_n = math.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n * n))

        self.pc = np.zeros(n)
        self.ps = np.zeros(n)
        self.C = np.eye(n)
        self.B = np.eye(n)
        self.D = np.ones(n)
        self.generation = 0
        self._y = None

    def ask(self) -> np.ndarray:
        z = self.rng.standard_normal((self.lam, self.n))
        self._y = z @ (self.B * self.D).T
        return self.mean + self.sigma * self._y

    def tell(self, solutions: np.ndarray, values) -> None:
        values = np.asarray(values, dtype=float)
        values = np.where(np.isfinite(values), values, np.inf)
        order = np.argsort(values, kind="stable")[: self.mu]
        y = (np.asarray(solutions)[order] - self.mean) / self.sigma
        y_w = self.weights @ y
        self.mean = self.mean + self.sigma * y_w

        n, cs, cc = self.n, self.cs, self.cc
        inv_sqrt_C = self.B @ np.diag(1 / self.D) @ self.B.T
        self.ps = (1 - cs) * self.ps + math.sqrt(cs * (2 - cs) * self.mueff) * inv_sqrt_C @ y_w
        self.generation += 1
        ps_norm = np.linalg.norm(self.ps)
        hsig = ps_norm / math.sqrt(1 - (1 - cs) ** (2 * self.generation)) / self.chi_n < 1.4 + 2 / (n + 1)
        self.pc = (1 - cc) * self.pc + hsig * math.sqrt(cc * (2 - cc) * self.mueff) * y_w

        rank_one = np.outer(self.pc, self.pc) + (1 - hsig) * cc * (2 - cc) * self.C
        rank_mu = (y.T * self.weights) @ y
        self.C = (1 - self.c1 - self.cmu) * self.C + self.c1 * rank_one + self.cmu * rank_mu
        self.sigma *= math.exp((cs / self.damps) * (ps_norm / self.chi_n - 1))

        self.C = (self.C + self.C.T) / 2
        evals, vecs = np.linalg.eigh(self.C)
        self.D = np.sqrt(np.maximum(evals, 1e-300))
        self.B = vecs

    @property
    def condition(self) -> float:
        return float((self.D.max() / self.D.min()) ** 2)


def cma_es_minimize(objective, x0, sigma0: float, cfg: CMAConfig = CMAConfig()) -> CMAResult:
    """Minimize ``objective`` from ``x0``; returns the best point ever evaluated."""
    es = CMAES(x0, sigma0, cfg.popsize, cfg.seed)
    f0 = float(objective(es.mean.copy()))
    if not math.isfinite(f0):
        raise ValidationError(f"objective is not finite at x0 (got {f0})")
    x_best, f_best = es.mean.copy(), f0
    evals = 1
    hist_len = 10 + int(math.ceil(30 * es.n / es.lam))
    history: list[float] = []
    stop = "max_evals"
    while evals + es.lam <= cfg.max_evals:
        X = es.ask()
        F = np.array([float(objective(x)) for x in X])
        evals += len(X)
        i = int(np.argmin(np.where(np.isfinite(F), F, np.inf)))
        if F[i] < f_best:
            x_best, f_best = X[i].copy(), float(F[i])
        es.tell(X, F)
        history.append(float(F[i]))
        if cfg.ftarget is not None and f_best <= cfg.ftarget:
            stop = "ftarget"
            break
        recent = history[-hist_len:]
        finite = F[np.isfinite(F)]
        if (len(history) >= hist_len and finite.size
                and max(max(recent), finite.max()) - min(min(recent), finite.min()) < cfg.tolfun):
            stop = "tolfun"
            break
        if es.sigma * np.sqrt(np.max(np.diag(es.C))) < cfg.tolx:
            stop = "tolx"
            break
        if es.condition > 1e14:
            stop = "condition"
            break
    return CMAResult(x_best, f_best, evals, es.generation, stop, history)
