"""Seeded sampling and Newton projection onto constraint sets.

Every semantic decision downstream ("vanishes on the feasible set", rank
classification, level-set geometry) reduces to evaluating expressions at
points of a constraint set.  This module owns the two primitives: drawing
reproducible box samples and Gauss-Newton projection onto the zero set of a
stack of expressions, with symbolic Jacobians.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .expr import Expr, box_bounds, compile_expr, diff

RANK_TOL = 1e-9  # singular values below RANK_TOL * max(s_max, 1) count as zero
PROJECT_TOL = 1e-10
ATTEMPTS_PER_POINT = 200


class SamplingError(Exception):
    """Feasible-set sampling failed; carries attempt statistics."""

    def __init__(self, message: str, attempts: int = 0, found: int = 0):
        super().__init__(f"{message} ({found} points from {attempts} attempts)")
        self.attempts = attempts
        self.found = found


def svd_rank(matrix: np.ndarray, rank_tol: float = RANK_TOL) -> int:
    """Numerical rank with threshold rank_tol * max(largest singular value, 1)."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    cutoff = rank_tol * max(s[0] if s.size else 0.0, 1.0)
    return int(np.sum(s > cutoff))


def left_nullspace(matrix: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal rows w with w @ matrix = 0 (the cokernel basis)."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if m.shape[0] == 0:
        return np.zeros((0, 0))
    u, s, _ = np.linalg.svd(m)
    cutoff = rank_tol * max(s[0] if s.size else 0.0, 1.0)
    rank = int(np.sum(s > cutoff))
    return u[:, rank:].T.copy()


def nullspace(matrix: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal columns spanning the kernel of ``matrix``."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if m.shape[1] == 0:
        return np.zeros((0, 0))
    if m.shape[0] == 0:
        return np.eye(m.shape[1])
    _, s, vh = np.linalg.svd(m)
    cutoff = rank_tol * max(s[0] if s.size else 0.0, 1.0)
    rank = int(np.sum(s > cutoff))
    return vh[rank:].T.copy()


def sample_box(names: Sequence[str], domain, trials: int, rng) -> np.ndarray:
    """Uniform samples from the per-variable box, shape (trials, len(names))."""
    bounds = np.array(box_bounds(names, domain), dtype=float)
    return rng.uniform(bounds[:, 0], bounds[:, 1], size=(trials, len(names)))


@dataclass
class ConstraintSystem:
    """Compiled residuals and Jacobian of a stack of expressions."""

    exprs: tuple
    names: tuple

    def __post_init__(self):
        self._res = [compile_expr(e, self.names) for e in self.exprs]
        self._jac = [
            [compile_expr(diff(e, n), self.names) for n in self.names] for e in self.exprs
        ]

    def residual(self, z: np.ndarray) -> np.ndarray:
        return np.array([f(z) for f in self._res], dtype=float)

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        return np.array([[d(z) for d in row] for row in self._jac], dtype=float)

    def max_residual(self, z: np.ndarray) -> float:
        if not self.exprs:
            return 0.0
        return float(np.max(np.abs(self.residual(z))))


def newton_project(
    system: ConstraintSystem,
    z0: np.ndarray,
    tol: float = PROJECT_TOL,
    max_iter: int = 30,
) -> "tuple[np.ndarray, bool]":
    """Gauss-Newton projection of z0 onto {residual = 0}.

    Uses minimum-norm least-squares steps, so under- and over-determined
    (rank-deficient) constraint stacks are both handled.  Returns the final
    iterate and whether it converged below ``tol``.
    """
    z = np.array(z0, dtype=float)
    if not system.exprs:
        return z, True
    for _ in range(max_iter):
        try:
            r = system.residual(z)
        except (ValueError, ZeroDivisionError, OverflowError):
            return z, False
        if not np.all(np.isfinite(r)):
            return z, False
        if np.max(np.abs(r)) <= tol:
            return z, True
        try:
            jac = system.jacobian(z)
        except (ValueError, ZeroDivisionError, OverflowError):
            return z, False
        if not np.all(np.isfinite(jac)):
            return z, False
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        if not np.all(np.isfinite(step)):
            return z, False
        z = z + step
    try:
        ok = system.max_residual(z) <= tol
    except (ValueError, ZeroDivisionError, OverflowError):
        ok = False
    return z, ok


def sample_constraint_set(
    exprs: Sequence[Expr],
    names: Sequence[str],
    domain,
    count: int,
    rng,
    tol: float = PROJECT_TOL,
    attempts_per_point: int = ATTEMPTS_PER_POINT,
    require_in_box: bool = True,
) -> np.ndarray:
    """Draw box points and Newton-project them onto the constraint set.

    Keeps converged points (optionally only those still inside the box, with
    a small tolerance inflation); raises :class:`SamplingError` when
    ``attempts_per_point * count`` draws do not yield ``count`` points.
    """
    names = tuple(names)
    system = ConstraintSystem(tuple(exprs), names)
    bounds = np.array(box_bounds(names, domain), dtype=float)
    slack = 1e-9 * np.maximum(1.0, np.abs(bounds).max(axis=1))
    points = []
    attempts = 0
    max_attempts = attempts_per_point * count
    while len(points) < count and attempts < max_attempts:
        attempts += 1
        z0 = rng.uniform(bounds[:, 0], bounds[:, 1])
        z, ok = newton_project(system, z0, tol=tol)
        if not ok:
            continue
        if require_in_box and (
            np.any(z < bounds[:, 0] - slack) or np.any(z > bounds[:, 1] + slack)
        ):
            continue
        points.append(z)
    if len(points) < count:
        raise SamplingError(
            "could not sample the constraint set inside the domain box",
            attempts=attempts,
            found=len(points),
        )
    return np.array(points)
