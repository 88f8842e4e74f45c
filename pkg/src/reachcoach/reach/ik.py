"""Position-only inverse kinematics by damped least squares with restarts."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinematics import SerialChain, fk_batch, first_joint_origin


@dataclass(frozen=True)
class IKSettings:
    iterations: int = 100
    damping: float = 0.05
    max_step: float = 0.15  # meters of task-space error chased per iteration
    stop_error: float = 0.005  # rows this close are frozen early
    stall_window: int = 10  # iterations between progress checks
    stall_progress: float = 1e-4  # meters; less improvement than this freezes a row


def restart_seeds(chain: SerialChain, restarts: int, seed: int) -> np.ndarray:
    """Shared initial configurations: the clipped zero pose, then uniform draws.

    Every target sees the same seeds, so a verdict never depends on which
    other targets were solved alongside it.
    """
    rng = np.random.default_rng(seed)
    lo, hi = chain.lower, chain.upper
    home = np.clip(np.zeros(chain.dof), lo, hi)
    rest = rng.uniform(lo, hi, size=(max(restarts - 1, 0), chain.dof))
    return np.vstack([home[None, :], rest])[:max(restarts, 1)]


def dls_solve(chain: SerialChain, targets: np.ndarray, q0: np.ndarray,
              base: np.ndarray | None = None, settings: IKSettings = IKSettings()):
    """Run DLS from ``q0`` (B, dof) toward ``targets`` (B, 3).

    Returns final joints (B, dof) and their exact position errors (B,).
    """
    lo, hi = chain.lower, chain.upper
    q = np.clip(np.array(q0, dtype=float), lo, hi)
    active = np.ones(len(q), dtype=bool)
    checkpoint = np.full(len(q), np.inf)
    lam2 = settings.damping ** 2
    eye = np.eye(3)
    for it in range(settings.iterations):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        p, J = fk_batch(chain, q[idx], base, jacobian=True)
        e = targets[idx] - p
        norm = np.linalg.norm(e, axis=1)
        done = norm <= settings.stop_error
        if it % settings.stall_window == 0:
            done |= norm > checkpoint[idx] - settings.stall_progress
            checkpoint[idx] = norm
        active[idx[done]] = False
        keep = ~done
        if not np.any(keep):
            break
        idx, e, J, norm = idx[keep], e[keep], J[keep], norm[keep]
        scale = np.minimum(1.0, settings.max_step / np.maximum(norm, 1e-12))
        e = e * scale[:, None]
        JJt = J @ np.transpose(J, (0, 2, 1)) + lam2 * eye
        dq = np.einsum("bij,bi->bj", J, np.linalg.solve(JJt, e[..., None])[..., 0])
        q[idx] = np.clip(q[idx] + dq, lo, hi)
    err = np.linalg.norm(targets - fk_batch(chain, q, base), axis=1)
    return q, err


def best_ik(chain: SerialChain, targets: np.ndarray, seeds: np.ndarray,
            base: np.ndarray | None = None, tolerance: float = 0.02,
            settings: IKSettings = IKSettings()):
    """Smallest position error over all restart seeds for each target.

    Targets farther than the chain can stretch are not attempted at all; for
    those the reported error is the reach shortfall, a lower bound.
    Returns (errors (M,), joints (M, dof)).
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    M = len(targets)
    best_err = np.full(M, np.inf)
    best_q = np.tile(seeds[0], (M, 1))
    origin = first_joint_origin(chain, base)
    shortfall = np.linalg.norm(targets - origin, axis=1) - chain.max_reach()
    hopeless = shortfall > tolerance
    best_err[hopeless] = shortfall[hopeless]
    todo = np.flatnonzero(~hopeless)
    if todo.size == 0:
        return best_err, best_q
    # All restarts of all targets in one batch: row r * len(todo) + k is
    # restart r of target todo[k].
    R = len(seeds)
    q, err = dls_solve(chain, np.tile(targets[todo], (R, 1)), np.repeat(seeds, todo.size, axis=0),
                       base, settings)
    err = err.reshape(R, todo.size)
    q = q.reshape(R, todo.size, chain.dof)
    # Keep the best restart per target.
    pick = err.argmin(axis=0)
    cols = np.arange(todo.size)
    best_err[todo] = err[pick, cols]
    best_q[todo] = q[pick, cols]
    return best_err, best_q
