"""Alternating projections between an l1-ball and an affine set.

One call to :func:`run_map` either finds an (approximate) point of the
intersection, or detects that the sets do not meet and returns an
(approximate) best approximation pair together with its displacement
vector.  Exhausting the iteration budget is reported as a third, distinct
status, never misclassified as either outcome.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .projections import AffineProjector, L1Ball, project_affine, project_l1_ball


class MapStatus(Enum):
    INTERSECTING = "intersecting"
    BEST_PAIR = "best-pair"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class MapConfig:
    """Inner-loop tolerances.

    feas_tol: the sets are declared intersecting once the sup-norm distance
    between the latest pair of projections drops below this, in absolute or
    relative terms.  stall_tol: a best approximation pair is declared once
    the Euclidean gap between successive projection pairs improves by less
    than this relative amount.
    """

    feas_tol: float = 1e-6
    stall_tol: float = 1e-6
    max_inner: int = 1_000_000

    def __post_init__(self):
        if not self.feas_tol > 0.0:
            raise ValueError("feas_tol must be > 0")
        if not self.stall_tol > 0.0:
            raise ValueError("stall_tol must be > 0")
        if self.max_inner < 1:
            raise ValueError("max_inner must be >= 1")


@dataclass
class MapOutcome:
    """Result of one alternating-projection run.

    ``x`` always lies in the affine set, ``z`` in the ball.  For BEST_PAIR
    outcomes ``displacement`` is ``z - x``; ``gap`` is the final Euclidean
    distance between the pair (meaningful for every status).
    """

    status: MapStatus
    x: np.ndarray
    z: np.ndarray
    gap: float
    displacement: np.ndarray | None = None
    inner_iterations: int = 0
    affine_projections: int = 0
    ball_projections: int = 0
    gaps: list[float] = field(default_factory=list, repr=False)

    @property
    def point(self) -> np.ndarray:
        """The intersection point (affine-side) for INTERSECTING outcomes."""
        return self.x


def run_map(
    ball: L1Ball,
    proj: AffineProjector,
    z_start: np.ndarray,
    cfg: MapConfig | None = None,
    trace: Callable[[int, float], None] | None = None,
    deadline: float | None = None,
) -> MapOutcome:
    """Alternate projections from ``z_start`` (a point of the ball).

    Each sweep computes ``x_j`` on the affine set then ``z_j`` back on the
    ball.  The feasibility test runs after every full sweep, before the
    stall test; the stall test never fires on the first sweep.  The gap
    sequence ``||z_j - x_j||_2`` is nonincreasing; ``deadline`` (a
    ``time.perf_counter`` value) turns budget exhaustion into an early
    EXHAUSTED return.
    """
    cfg = cfg or MapConfig()
    z = np.array(z_start, dtype=float)
    if np.abs(z).sum() > ball.radius * (1.0 + 1e-12):
        raise ValueError("z_start must lie in the l1-ball")
    prev_gap = None
    gaps: list[float] = []
    x = z
    for j in range(1, cfg.max_inner + 1):
        x = project_affine(proj, z)
        z_new = project_l1_ball(ball, x)
        diff = x - z_new
        gap = float(np.linalg.norm(diff))
        assert prev_gap is None or gap <= prev_gap + 1e-12, "alternating-projection gap increased"
        gaps.append(gap)
        if trace is not None:
            trace(j, gap)
        inf_gap = float(np.abs(diff).max()) if diff.size else 0.0
        if inf_gap <= cfg.feas_tol or inf_gap <= cfg.feas_tol * float(np.abs(x).max(initial=0.0)):
            return MapOutcome(
                MapStatus.INTERSECTING, x, z_new, gap,
                inner_iterations=j, affine_projections=j, ball_projections=j, gaps=gaps,
            )
        if prev_gap is not None and (prev_gap - gap) <= cfg.stall_tol * prev_gap:
            return MapOutcome(
                MapStatus.BEST_PAIR, x, z_new, gap, displacement=z_new - x,
                inner_iterations=j, affine_projections=j, ball_projections=j, gaps=gaps,
            )
        prev_gap = gap
        z = z_new
        if deadline is not None and time.perf_counter() > deadline:
            return MapOutcome(
                MapStatus.EXHAUSTED, x, z, gap,
                inner_iterations=j, affine_projections=j, ball_projections=j, gaps=gaps,
            )
    return MapOutcome(
        MapStatus.EXHAUSTED, x, z, gaps[-1] if gaps else float("inf"),
        inner_iterations=cfg.max_inner, affine_projections=cfg.max_inner,
        ball_projections=cfg.max_inner, gaps=gaps,
    )
