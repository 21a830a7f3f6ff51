"""Distance-ratio metric, ball membership, Euclidean bounds, and a grid
quasihyperbolic distance for two-dimensional comparisons.

j(x, y) = log(1 + |x - y| / min(d(x), d(y))) with d the boundary distance.
The quasihyperbolic distance integrates |dz| / d(z) along curves; here it
is approximated from above by shortest paths in a 16-neighbour grid graph
with Simpson-rule edge weights, then tightened by polyline shortcutting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from .domain import (
    ConvexPolygon,
    Domain,
    HalfSpace,
    PuncturedSpace,
    as_point,
    as_points,
)


@dataclass(frozen=True)
class AnnulusBounds:
    """Euclidean sandwich of a ball of radius M centred at depth dx."""

    inner_radius: float  # (1 - e^-M) d(x): ball of this radius is inside
    outer_radius: float  # (e^M - 1) d(x): the ball fits in this radius
    depth_min: float     # members satisfy d(y) >= e^-M d(x)
    depth_max: float     # and d(y) <= e^M d(x)


@dataclass
class CheckReport:
    """Outcome of a sampled geometric predicate with a re-verifiable witness."""

    passed: bool
    witness: dict | None
    samples_used: int
    tol: float
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "passed": bool(self.passed),
            "witness": self.witness,
            "samples_used": int(self.samples_used),
            "tol": float(self.tol),
            "notes": self.notes,
        }


def _check_radius(M: float) -> float:
    M = float(M)
    if not np.isfinite(M) or M <= 0.0:
        raise ValueError("ball radius must be a positive real number")
    return M


def annulus_bounds(dx: float, M: float) -> AnnulusBounds:
    dx = float(dx)
    if not np.isfinite(dx) or dx <= 0.0:
        raise ValueError("boundary distance must be positive")
    M = _check_radius(M)
    return AnnulusBounds(
        inner_radius=(1.0 - np.exp(-M)) * dx,
        outer_radius=np.expm1(M) * dx,
        depth_min=np.exp(-M) * dx,
        depth_max=np.exp(M) * dx,
    )


def j_distance(domain: Domain, x, y) -> float:
    x = as_point(x, domain.dim)
    y = as_point(y, domain.dim)
    dx = domain.boundary_distance(x)
    dy = domain.boundary_distance(y)
    return float(np.log1p(np.linalg.norm(x - y) / min(dx, dy)))


def j_field(domain: Domain, x, pts) -> np.ndarray:
    """j(x, p) for an array of points; +inf where p is outside the domain."""
    x = as_point(x, domain.dim)
    pts = as_points(pts, domain.dim)
    dx = domain.boundary_distance(x)
    inside = domain.contains_many(pts)
    out = np.full(len(pts), np.inf)
    if np.any(inside):
        sub = pts[inside]
        dsub = domain.boundary_set_distance_many(sub)
        dist = np.linalg.norm(sub - x, axis=1)
        out[inside] = np.log1p(dist / np.minimum(dx, dsub))
    return out


def in_j_ball(domain: Domain, x, M: float, y) -> bool:
    return bool(in_j_ball_many(domain, x, M, as_point(y, domain.dim)[None, :])[0])


def in_j_ball_many(domain: Domain, x, M: float, pts) -> np.ndarray:
    M = _check_radius(M)
    vals = j_field(domain, x, pts)
    return vals < M


def j_gradient_bound(domain: Domain, x, M: float) -> float:
    """Upper bound on |grad_y j(x, y)| over the ball: 1 / min depth."""
    M = _check_radius(M)
    return float(np.exp(M) / domain.boundary_distance(x))


def exhaustion_radius(domain: Domain, x, s: float) -> float:
    """Radius M with {y : d(y) > s} inside the ball of radius M at x (bounded G)."""
    x = as_point(x, domain.dim)
    if not domain.bounded:
        raise ValueError("exhaustion radius needs a bounded domain")
    s = float(s)
    dx = domain.boundary_distance(x)
    if not (0.0 < s <= dx):
        raise ValueError("threshold s must satisfy 0 < s <= d(x)")
    d_far = domain.farthest_boundary_distance(x)
    return float(np.log1p(d_far / s))


# --------------------------------------------------------------------------
# quasihyperbolic distance on a grid graph
# --------------------------------------------------------------------------

# 16-neighbour stencil: axis, diagonal and knight moves (negatives implied)
_STENCIL = np.array(
    [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2)],
    dtype=int,
)

_CONVEX_VARIANTS = (HalfSpace, ConvexPolygon)


@dataclass
class PathGraph:
    """Grid graph whose shortest paths upper-bound the quasihyperbolic metric."""

    points: np.ndarray          # (N, 2) node coordinates; special nodes appended last
    matrix: Any                 # scipy.sparse CSR of symmetric edge weights
    spacing: float
    source: int
    targets: np.ndarray         # node indices of the query targets


def _segment_weights(domain: Domain, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Simpson-rule weights for straight edges a[i] -> b[i]; inf if invalid."""
    mid = 0.5 * (a + b)
    da = domain.boundary_set_distance_many(a)
    db = domain.boundary_set_distance_many(b)
    dm = domain.boundary_set_distance_many(mid)
    ok = (da > 0.0) & (db > 0.0) & (dm > 0.0)
    if not isinstance(domain, (_CONVEX_VARIANTS, PuncturedSpace)):
        # non-convex boundary: the open segment can leave G even with valid ends
        for t in (0.25, 0.5, 0.75):
            ok &= domain.contains_many(a + t * (b - a))
    length = np.linalg.norm(b - a, axis=1)
    with np.errstate(divide="ignore"):
        w = length * (1.0 / da + 4.0 / dm + 1.0 / db) / 6.0
    return np.where(ok, w, np.inf)


def _segment_cost(domain: Domain, a: np.ndarray, b: np.ndarray, h: float) -> float:
    """Composite-Simpson cost of one straight segment; inf if it leaves G."""
    length = float(np.linalg.norm(b - a))
    if length == 0.0:
        return 0.0
    panels = int(min(512, max(4, np.ceil(4.0 * length / h))))
    t = np.linspace(0.0, 1.0, 2 * panels + 1)
    pts = a[None, :] + t[:, None] * (b - a)[None, :]
    d = domain.boundary_set_distance_many(pts)
    if np.any(d <= 0.0) or not np.all(domain.contains_many(pts)):
        return np.inf
    f = 1.0 / d
    weights = np.ones_like(f)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return float((length / (6.0 * panels)) * np.sum(weights * f))


def _qh_bbox(domain: Domain, anchors: np.ndarray, h: float) -> np.ndarray:
    pts = [anchors]
    if isinstance(domain, PuncturedSpace):
        pts.append(domain.punctures)
    pts = np.vstack(pts)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(np.max(hi - lo))
    depth = max(float(domain.boundary_set_distance_many(anchors).max()), h)
    pad = 1.25 * max(span, depth) + 4.0 * h
    lo, hi = lo - pad, hi + pad
    box = domain.bbox()
    if box is not None:
        lo = np.maximum(lo, box[0] - h)
        hi = np.minimum(hi, box[1] + h)
    return np.array([lo, hi])


def build_path_graph(domain: Domain, x, targets, h: float) -> PathGraph:
    """Grid graph over a box around x and the targets, with endpoint links."""
    if domain.dim != 2:
        raise ValueError("the grid quasihyperbolic distance is 2D only")
    x = as_point(x, 2)
    targets = as_points(targets, 2)
    for p in np.vstack([x[None, :], targets]):
        if not domain.contains(p):
            raise ValueError("quasihyperbolic endpoints must lie inside the domain")
    anchors = np.vstack([x[None, :], targets])
    lo, hi = _qh_bbox(domain, anchors, h)
    nx = int(np.ceil((hi[0] - lo[0]) / h)) + 1
    ny = int(np.ceil((hi[1] - lo[1]) / h)) + 1
    xs = lo[0] + h * np.arange(nx)
    ys = lo[1] + h * np.arange(ny)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    d = domain.boundary_set_distance_many(pts)
    keep = (d >= 0.5 * h) & domain.contains_many(pts)
    ids = np.full(nx * ny, -1, dtype=np.int64)
    ids[keep] = np.arange(int(keep.sum()))
    node_pts = pts[keep]
    n_grid = len(node_pts)

    rows, cols, weights = [], [], []
    idx_grid = ids.reshape(nx, ny)
    for dx_step, dy_step in _STENCIL:
        ia0, ia1 = max(0, -dx_step), nx - max(0, dx_step)
        ja0, ja1 = max(0, -dy_step), ny - max(0, dy_step)
        a_ids = idx_grid[ia0:ia1, ja0:ja1]
        b_ids = idx_grid[ia0 + dx_step: ia1 + dx_step, ja0 + dy_step: ja1 + dy_step]
        a_flat, b_flat = a_ids.ravel(), b_ids.ravel()
        ok = (a_flat >= 0) & (b_flat >= 0)
        a_flat, b_flat = a_flat[ok], b_flat[ok]
        if len(a_flat) == 0:
            continue
        w = _segment_weights(domain, node_pts[a_flat], node_pts[b_flat])
        fin = np.isfinite(w)
        rows.append(a_flat[fin])
        cols.append(b_flat[fin])
        weights.append(w[fin])

    # special nodes: source then targets, linked to nearby grid nodes
    specials = anchors
    n_total = n_grid + len(specials)
    for k, p in enumerate(specials):
        node_id = n_grid + k
        i0 = int(np.clip(np.round((p[0] - lo[0]) / h), 0, nx - 1))
        j0 = int(np.clip(np.round((p[1] - lo[1]) / h), 0, ny - 1))
        window = idx_grid[max(0, i0 - 2): i0 + 3, max(0, j0 - 2): j0 + 3].ravel()
        near = window[window >= 0]
        if len(near) > 0:
            w = _segment_weights(domain, np.repeat(p[None, :], len(near), axis=0), node_pts[near])
            fin = np.isfinite(w)
            rows.append(np.full(int(fin.sum()), node_id))
            cols.append(near[fin])
            weights.append(w[fin])
    # direct source -> target edges when the straight segment is admissible
    for k in range(1, len(specials)):
        w = _segment_cost(domain, specials[0], specials[k], h)
        if np.isfinite(w):
            rows.append(np.array([n_grid]))
            cols.append(np.array([n_grid + k]))
            weights.append(np.array([w]))

    if rows:
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        weights = np.concatenate(weights)
    else:
        rows = np.array([], dtype=int)
        cols = np.array([], dtype=int)
        weights = np.array([])
    mat = sp.coo_matrix((weights, (rows, cols)), shape=(n_total, n_total)).tocsr()
    all_points = np.vstack([node_pts, specials])
    return PathGraph(
        points=all_points,
        matrix=mat,
        spacing=h,
        source=n_grid,
        targets=np.arange(n_grid + 1, n_total),
    )


def _default_spacing(domain: Domain, x: np.ndarray, y: np.ndarray) -> float:
    scale = max(
        float(np.linalg.norm(x - y)),
        domain.boundary_distance(x),
        domain.boundary_distance(y),
    )
    return scale / 64.0


_PANEL_T = np.linspace(0.0, 1.0, 33)
_PANEL_W = np.ones(33)
_PANEL_W[1:-1:2] = 4.0
_PANEL_W[2:-1:2] = 2.0


def _panel_costs(domain: Domain, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Fixed 16-panel Simpson costs of segments a[i] -> b[i]; inf if any
    sample leaves the domain.  Comparison-grade, not the final value."""
    seg = b - a
    pts = a[:, None, :] + _PANEL_T[None, :, None] * seg[:, None, :]
    flat = pts.reshape(-1, 2)
    d = domain.boundary_set_distance_many(flat)
    ok = (d > 0.0) & domain.contains_many(flat)
    d = np.where(ok, d, np.nan)
    f = (1.0 / d).reshape(len(a), 33)
    length = np.linalg.norm(seg, axis=1)
    vals = (length / 96.0) * (f @ _PANEL_W)
    return np.where(np.isnan(vals), np.inf, vals)


def _relax_polyline(
    domain: Domain, poly: np.ndarray, h: float, levels: int = 2, sweeps: int = 2
) -> np.ndarray:
    """Midpoint subdivision plus odd-even perpendicular descent of interior
    vertices; pulls the polyline off the grid toward the true geodesic."""
    offsets = np.array([0.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0]) * h
    for _ in range(levels):
        mids = 0.5 * (poly[:-1] + poly[1:])
        out = np.empty((len(poly) + len(mids), 2))
        out[0::2] = poly
        out[1::2] = mids
        poly = out
        n = len(poly)
        if n < 3:
            continue
        for _ in range(sweeps):
            for parity in (1, 0):
                idx = np.arange(1 + parity, n - 1, 2)
                if len(idx) == 0:
                    continue
                a, b, c = poly[idx - 1], poly[idx], poly[idx + 1]
                t = c - a
                nrm = np.column_stack([-t[:, 1], t[:, 0]])
                nl = np.linalg.norm(nrm, axis=1, keepdims=True)
                nrm = np.where(nl > 0.0, nrm / np.maximum(nl, 1e-300), 0.0)
                cand = b[None, :, :] + offsets[:, None, None] * nrm[None, :, :]
                flat = cand.reshape(-1, 2)
                rep_a = np.tile(a, (len(offsets), 1))
                rep_c = np.tile(c, (len(offsets), 1))
                total = _panel_costs(domain, rep_a, flat) + _panel_costs(
                    domain, flat, rep_c
                )
                total = total.reshape(len(offsets), len(idx))
                best = np.argmin(total, axis=0)
                picked = total[best, np.arange(len(idx))]
                keep = np.isfinite(picked)
                poly[idx[keep]] = cand[best[keep], np.arange(len(idx))[keep]]
    return poly


def _shortcut(domain: Domain, path_pts: np.ndarray, h: float, window: int = 24) -> float:
    """Windowed shortest polyline through the path vertices, then local
    geodesic relaxation (upper bound on the true distance)."""
    k = len(path_pts)
    if k > 500:
        stride = int(np.ceil(k / 500))
        path_pts = np.vstack([path_pts[::stride], path_pts[-1][None, :]])
        k = len(path_pts)
    if k < 2:
        return 0.0
    window = min(window, k - 1)
    # comparison-grade cost of every windowed vertex pair, vectorized
    wmat = np.full((k, window), np.inf)  # wmat[i, d-1] = cost(i-d -> i)
    for dlt in range(1, window + 1):
        wmat[dlt:, dlt - 1] = _panel_costs(domain, path_pts[:-dlt], path_pts[dlt:])
    cost = np.full(k, np.inf)
    parent = np.zeros(k, dtype=int)
    cost[0] = 0.0
    for i in range(1, k):
        lo = max(0, i - window)
        cand = cost[lo:i] + wmat[i, : i - lo][::-1]
        j = int(np.argmin(cand))
        cost[i] = cand[j]
        parent[i] = lo + j
    if not np.isfinite(cost[-1]):
        return np.inf
    chain = [k - 1]
    while chain[-1] != 0:
        chain.append(int(parent[chain[-1]]))
    poly = path_pts[chain[::-1]]
    poly = _relax_polyline(domain, poly, h)
    # final value from the adaptive rule; keep the monotone-safe minimum
    refined = float(
        sum(_segment_cost(domain, a, b, h) for a, b in zip(poly[:-1], poly[1:]))
    )
    dp_exact = float(
        sum(
            _segment_cost(domain, path_pts[i], path_pts[j], h)
            for i, j in zip(chain[::-1][:-1], chain[::-1][1:])
        )
    )
    return min(refined, dp_exact)


def qh_distance(domain: Domain, x, y, h: float | None = None) -> float:
    """Grid upper bound for the quasihyperbolic distance (2D domains)."""
    x = as_point(x, 2)
    y = as_point(y, 2)
    if np.array_equal(x, y):
        if not domain.contains(x):
            raise ValueError("quasihyperbolic endpoints must lie inside the domain")
        return 0.0
    if h is None:
        h = _default_spacing(domain, x, y)
    graph = build_path_graph(domain, x, y[None, :], h)
    dist, pred = dijkstra(
        graph.matrix, directed=False, indices=graph.source, return_predecessors=True
    )
    target = int(graph.targets[0])
    raw = float(dist[target])
    if not np.isfinite(raw):
        raise ValueError(f"endpoints are disconnected at grid spacing {h}")
    chain = [target]
    while chain[-1] != graph.source:
        chain.append(int(pred[chain[-1]]))
    path_pts = graph.points[chain[::-1]]
    smooth = _shortcut(domain, path_pts, h)
    direct = _segment_cost(domain, x, y, h)
    return min(raw, smooth, direct)


def qh_distances_from(
    domain: Domain, x, targets, h: float, smooth: bool = True
) -> np.ndarray:
    """Single-source grid quasihyperbolic distances to many targets."""
    x = as_point(x, 2)
    targets = as_points(targets, 2)
    graph = build_path_graph(domain, x, targets, h)
    dist, pred = dijkstra(
        graph.matrix, directed=False, indices=graph.source, return_predecessors=True
    )
    out = dist[graph.targets].copy()
    if np.any(~np.isfinite(out)):
        raise ValueError(f"some targets are disconnected at grid spacing {h}")
    if smooth:
        for k, node in enumerate(graph.targets):
            chain = [int(node)]
            while chain[-1] != graph.source:
                chain.append(int(pred[chain[-1]]))
            path_pts = graph.points[chain[::-1]]
            better = _shortcut(domain, path_pts, h)
            direct = _segment_cost(domain, x, targets[k], h)
            out[k] = min(out[k], better, direct)
    return out


def qh_punctured_closed_form(puncture, x, y) -> float:
    """Exact quasihyperbolic distance in the once-punctured plane."""
    p = as_point(puncture, 2)
    u = as_point(x, 2) - p
    v = as_point(y, 2) - p
    ru, rv = np.linalg.norm(u), np.linalg.norm(v)
    if ru == 0.0 or rv == 0.0:
        raise ValueError("endpoints must differ from the puncture")
    theta = abs(float(np.arctan2(u[0] * v[1] - u[1] * v[0], u @ v)))
    return float(np.hypot(theta, np.log(ru / rv)))


def comparison_check(
    domain: Domain, x, y, s: float = 0.5, h: float | None = None, tol: float = 1e-6
) -> CheckReport:
    """Check j <= k and, for nearby pairs, k <= j / (1 - s).

    The second inequality is enforced when |x - y| < s d(x); whether it
    also held under the weaker hypothesis |x - y| < d(x) is recorded in
    the notes without being enforced.
    """
    x = as_point(x, 2)
    y = as_point(y, 2)
    if not (0.0 < s < 1.0):
        raise ValueError("the nearness parameter s must lie in (0, 1)")
    j = j_distance(domain, x, y)
    k = qh_distance(domain, x, y, h=h)
    dx = domain.boundary_distance(x)
    gap = float(np.linalg.norm(x - y))
    near = gap < s * dx
    bound = j / (1.0 - s)
    notes = {
        "j": j,
        "k": k,
        "bound": bound,
        "near": bool(near),
        "literal_hypothesis": bool(gap < dx),
        "bound_holds": bool(k <= bound + 0.01),
    }
    passed = j <= k + tol
    witness = None
    if not passed:
        witness = {"kind": "minorant", "x": x.tolist(), "y": y.tolist(), "j": j, "k": k}
    if near and k > bound + 0.01:
        passed = False
        witness = {
            "kind": "majorant",
            "x": x.tolist(),
            "y": y.tolist(),
            "j": j,
            "k": k,
            "bound": bound,
        }
    return CheckReport(passed=passed, witness=witness, samples_used=1, tol=tol, notes=notes)
