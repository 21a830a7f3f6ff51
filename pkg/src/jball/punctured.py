"""Exact shape of metric balls in the once-punctured plane.

After moving the puncture to 0 and the centre to 1 by a similarity, the
ball of radius M is cut out by two circles: the circle of radius
e^M - 1 about 1 and the locus |z - 1| = (e^M - 1)|z|.  Depending on M
the second circle bounds an intersection cap, degenerates to a vertical
line, or bounds a removed hole.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import PuncturedSpace, as_point, as_points
from .metric import in_j_ball_many


@dataclass(frozen=True)
class Thresholds:
    """Radius thresholds for ball geometry in the punctured plane."""

    convexity: float        # balls convex exactly up to this radius
    starlikeness: float     # starlike about the centre up to this radius
    annulus_onset: float    # hole detaches from the outer boundary here
    qh_convexity: float     # same role for the quasihyperbolic metric
    qh_starlikeness: float  # numeric constant, not derived in this package


def thresholds() -> Thresholds:
    return Thresholds(
        convexity=float(np.log(2.0)),
        starlikeness=float(np.log(1.0 + np.sqrt(2.0))),
        annulus_onset=float(np.log(3.0)),
        qh_convexity=1.0,
        qh_starlikeness=2.83297,
    )


def tangency_residual(M: float) -> float:
    """e^2M - 2 e^M - 1: zero exactly when the cut circles touch the
    tangent-ray configuration that ends starlikeness."""
    M = float(M)
    return float(np.exp(2.0 * M) - 2.0 * np.exp(M) - 1.0)


@dataclass(frozen=True)
class DiskDecomposition:
    """Canonical ball about 1 with puncture at 0, as circles and a cut.

    kind "cap":      open disk about outer_center intersect open disk
                     about inner_center.
    kind "halfplane": open outer disk intersect {first coordinate > cut_real}.
    kind "hole":     open outer disk minus the closed inner disk.
    """

    M: float
    kind: str
    outer_center: np.ndarray
    outer_radius: float
    inner_center: np.ndarray | None
    inner_radius: float | None
    cut_real: float | None

    def contains_many(self, pts) -> np.ndarray:
        pts = as_points(pts, 2)
        z = pts - self.outer_center
        in_outer = np.hypot(z[:, 0], z[:, 1]) < self.outer_radius
        if self.kind == "halfplane":
            return in_outer & (pts[:, 0] > self.cut_real)
        w = pts - self.inner_center
        rin = np.hypot(w[:, 0], w[:, 1])
        if self.kind == "cap":
            return in_outer & (rin < self.inner_radius)
        return in_outer & (rin > self.inner_radius)

    def contains(self, p) -> bool:
        return bool(self.contains_many(as_point(p, 2)[None, :])[0])


_HALFPLANE_GUARD = 1e-9


def disk_decomposition(M: float) -> DiskDecomposition:
    """Exact decomposition of the canonical ball of radius M."""
    M = float(M)
    if not np.isfinite(M) or M <= 0.0:
        raise ValueError("ball radius must be a positive real number")
    lam = np.expm1(M)
    outer_center = np.array([1.0, 0.0])
    if abs(np.exp(M) - 2.0) < _HALFPLANE_GUARD:
        return DiskDecomposition(
            M=M,
            kind="halfplane",
            outer_center=outer_center,
            outer_radius=float(lam),
            inner_center=None,
            inner_radius=None,
            cut_real=0.5,
        )
    denom = np.exp(M) * (2.0 - np.exp(M))  # = 1 - lam^2
    c = 1.0 / denom
    s = lam / abs(denom)
    kind = "cap" if lam < 1.0 else "hole"
    return DiskDecomposition(
        M=M,
        kind=kind,
        outer_center=outer_center,
        outer_radius=float(lam),
        inner_center=np.array([c, 0.0]),
        inner_radius=float(s),
        cut_real=None,
    )


def perpendicularity_residual(M: float) -> float:
    """|C1 - C2|^2 - r1^2 - r2^2 for the two cut circles; zero when they
    meet at right angles (exactly at the starlikeness threshold)."""
    dec = disk_decomposition(M)
    if dec.kind == "halfplane":
        raise ValueError("the cut is a line at this radius, not a circle")
    gap2 = float(np.sum((dec.outer_center - dec.inner_center) ** 2))
    return gap2 - dec.outer_radius**2 - dec.inner_radius**2


def annulus_margin(M: float) -> float:
    """outer_radius - |centres gap| - inner_radius for the hole regime.

    Negative: the hole reaches the outer boundary.  Zero: internal
    tangency.  Positive: the hole sits strictly inside and the ball is a
    full ring around it.
    """
    dec = disk_decomposition(M)
    if dec.kind != "hole":
        raise ValueError("annulus margin is defined for the hole regime only")
    gap = float(np.linalg.norm(dec.outer_center - dec.inner_center))
    return dec.outer_radius - gap - dec.inner_radius


@dataclass(frozen=True)
class Similarity:
    """Plane similarity z -> (z - p) / (x - p) sending p to 0 and x to 1."""

    puncture: complex
    base: complex

    def to_canonical(self, pts) -> np.ndarray:
        pts = as_points(pts, 2)
        z = pts[:, 0] + 1j * pts[:, 1]
        w = (z - self.puncture) / (self.base - self.puncture)
        return np.column_stack([w.real, w.imag])

    def from_canonical(self, pts) -> np.ndarray:
        pts = as_points(pts, 2)
        w = pts[:, 0] + 1j * pts[:, 1]
        z = self.puncture + w * (self.base - self.puncture)
        return np.column_stack([z.real, z.imag])


def canonical_transport(puncture, x) -> Similarity:
    p = as_point(puncture, 2)
    x = as_point(x, 2)
    if np.array_equal(p, x):
        raise ValueError("the ball centre must differ from the puncture")
    return Similarity(
        puncture=complex(p[0], p[1]), base=complex(x[0], x[1])
    )


def punctured_ball_contains(puncture, x, M: float, pts) -> np.ndarray:
    """Membership via the decomposition, valid for any puncture and centre."""
    sim = canonical_transport(puncture, x)
    dec = disk_decomposition(M)
    return dec.contains_many(sim.to_canonical(pts))


def intersection_identity(punctures, x, M: float, pts) -> dict:
    """Ball in the finitely punctured plane versus the intersection of the
    one-puncture balls.  The two memberships agree exactly: the smallest
    per-puncture depth decides both sides."""
    punctures = as_points(punctures)
    pts = as_points(pts, punctures.shape[1])
    joint = in_j_ball_many(PuncturedSpace(punctures), x, M, pts)
    split = np.ones(len(pts), dtype=bool)
    for p in punctures:
        split &= in_j_ball_many(PuncturedSpace(p[None, :]), x, M, pts)
    return {
        "joint": joint,
        "intersection": split,
        "agree": bool(np.array_equal(joint, split)),
    }
