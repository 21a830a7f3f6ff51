"""Triangle equality and geodesic segments for the distance-ratio metric.

Equality j(x, z) + j(z, y) = j(x, y) holds along a whole segment exactly
when the segment extends a ray from a boundary point u through the
shallow endpoint, with the boundary distance growing linearly (u stays a
nearest boundary point).  Generic pairs admit no midpoint at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Domain, as_point
from .metric import j_distance

_SIN_TOL = 1e-9


def triangle_defect(domain: Domain, x, z, y) -> float:
    """j(x, z) + j(z, y) - j(x, y); nonnegative, zero only for betweenness."""
    return (
        j_distance(domain, x, z)
        + j_distance(domain, z, y)
        - j_distance(domain, x, y)
    )


@dataclass(frozen=True)
class SegmentDefects:
    max_defect: float
    min_defect: float
    worst_point: np.ndarray
    samples: int


def equality_witnesses(domain: Domain, x, y, n: int = 257) -> SegmentDefects:
    """Triangle defects at interior points of the segment [x, y]."""
    x = as_point(x, domain.dim)
    y = as_point(y, domain.dim)
    ts = np.linspace(0.0, 1.0, n + 2)[1:-1]
    defects = np.empty(n)
    jxy = j_distance(domain, x, y)
    for i, t in enumerate(ts):
        z = x + t * (y - x)
        defects[i] = (
            j_distance(domain, x, z) + j_distance(domain, z, y) - jxy
        )
    k = int(np.argmax(defects))
    return SegmentDefects(
        max_defect=float(defects[k]),
        min_defect=float(defects.min()),
        worst_point=x + ts[k] * (y - x),
        samples=n,
    )


@dataclass(frozen=True)
class GeodesicCertificate:
    exists: bool
    reason: str
    boundary_point: np.ndarray | None
    shallow: np.ndarray
    deep: np.ndarray
    max_depth_error: float


def geodesic_certificate(
    domain: Domain, x, y, tol: float = 1e-9, n: int = 257
) -> GeodesicCertificate:
    """Decide whether [x, y] is a geodesic segment of the metric.

    Requires a nearest boundary point u of the shallow end that is
    collinear with the segment, lies outside it beyond the shallow end,
    and stays a nearest boundary point along the whole segment.
    """
    x = as_point(x, domain.dim)
    y = as_point(y, domain.dim)
    dx = domain.boundary_distance(x)
    dy = domain.boundary_distance(y)
    shallow, deep = (x, y) if dx <= dy else (y, x)
    seg = deep - shallow
    seg_len = float(np.linalg.norm(seg))
    if seg_len == 0.0:
        raise ValueError("endpoints must be distinct")
    scale = max(seg_len, dx, dy)

    chosen = None
    for u in domain.nearest_boundary(shallow).points:
        v = shallow - u
        vlen = float(np.linalg.norm(v))
        a, b = v / vlen, seg / seg_len
        if len(a) == 2:
            cross = abs(a[0] * b[1] - a[1] * b[0])
        else:
            cross = float(np.linalg.norm(np.cross(a, b)))
        if cross > _SIN_TOL:
            continue
        if float(v @ seg) <= 0.0:
            continue  # u must sit beyond the shallow end, not between
        chosen = u
        break
    if chosen is None:
        return GeodesicCertificate(
            exists=False,
            reason="no collinear nearest boundary point",
            boundary_point=None,
            shallow=shallow,
            deep=deep,
            max_depth_error=np.inf,
        )

    ts = np.linspace(0.0, 1.0, n)
    worst = 0.0
    for t in ts:
        z = shallow + t * seg
        err = abs(domain.boundary_distance(z) - float(np.linalg.norm(z - chosen)))
        worst = max(worst, err)
    ok = worst <= tol * scale
    return GeodesicCertificate(
        exists=ok,
        reason="radial segment" if ok else "boundary distance is not radial",
        boundary_point=chosen,
        shallow=shallow,
        deep=deep,
        max_depth_error=worst,
    )


def radial_pair(domain: Domain, x, extent: float) -> tuple[np.ndarray, np.ndarray]:
    """A pair (x, y) whose segment is a geodesic: y sits deeper along the
    ray from the nearest boundary point through x."""
    x = as_point(x, domain.dim)
    extent = float(extent)
    if extent <= 0.0:
        raise ValueError("extent must be positive")
    dx = domain.boundary_distance(x)
    u = domain.nearest_boundary(x).points[0]
    n_hat = (x - u) / dx
    y = x + extent * n_hat
    if not domain.contains(y):
        raise ValueError("extent leaves the domain")
    dy = domain.boundary_distance(y)
    if abs(dy - (dx + extent)) > 1e-9 * (dx + extent):
        raise ValueError("extent leaves the radial regime of the boundary point")
    return x, y


@dataclass(frozen=True)
class MidpointGap:
    x: np.ndarray
    y: np.ndarray
    delta: float              # smallest sampled midpoint defect, positive
    best_candidate: np.ndarray
    samples: int


def no_geodesic_pair(
    domain: Domain, x, span: float = 0.8, n_seg: int = 257, n_box: int = 256
) -> MidpointGap:
    """A pair admitting no metric midpoint: equal-depth points placed
    symmetrically across the boundary ray of x.

    delta is the sampled minimum of max(j(p,z), j(z,q)) - j(p,q)/2 over
    the segment and a surrounding box; positive delta demonstrates that
    no sampled point is halfway between p and q.
    """
    x = as_point(x, domain.dim)
    if domain.dim != 2:
        raise ValueError("the midpoint-free construction is 2D only")
    if not (0.0 < span < 2.0):
        raise ValueError("span must lie in (0, 2)")
    dx = domain.boundary_distance(x)
    u = domain.nearest_boundary(x).points[0]
    n_hat = (x - u) / dx
    t_hat = np.array([-n_hat[1], n_hat[0]])
    half = 0.5 * span * dx
    p = x + half * t_hat
    q = x - half * t_hat
    if not (domain.contains(p) and domain.contains(q)):
        raise RuntimeError("perpendicular pair leaves the domain; reduce span")

    jpq = j_distance(domain, p, q)
    zs = [p + t * (q - p) for t in np.linspace(0.0, 1.0, n_seg + 2)[1:-1]]
    rng = np.random.default_rng(20240816)
    reach = float(np.linalg.norm(p - q))
    lo = np.minimum(p, q) - reach
    hi = np.maximum(p, q) + reach
    drawn = 0
    while drawn < n_box:
        z = rng.uniform(lo, hi)
        if domain.contains(z):
            zs.append(z)
            drawn += 1
    best = np.inf
    best_z = None
    for z in zs:
        gap = max(j_distance(domain, p, z), j_distance(domain, z, q)) - 0.5 * jpq
        if gap < best:
            best = float(gap)
            best_z = np.asarray(z)
    if best <= 0.0:
        raise RuntimeError("a sampled point is halfway between the pair")
    return MidpointGap(x=p, y=q, delta=best, best_candidate=best_z, samples=len(zs))
