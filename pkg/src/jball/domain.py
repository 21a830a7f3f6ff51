"""Proper subdomains of R^n with exact boundary-distance geometry.

Every domain is an open set whose boundary admits closed-form distance
queries: finite puncture sets, half-planes, polygons, and connected
unions of open disks (whose boundary is the set of circular arcs left
exposed after clipping away arcs buried inside neighbouring disks).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


def as_point(x, dim: int | None = None) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"point must be a flat coordinate vector, got shape {p.shape}")
    if p.size < 2:
        raise ValueError("points must have dimension >= 2")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {p.size}")
    return p


def as_points(pts, dim: int | None = None) -> np.ndarray:
    arr = np.asarray(pts, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected an array of points, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {arr.shape[1]}")
    return arr


@dataclass(frozen=True)
class NearestBoundarySet:
    """Boundary points realizing d(x), together with that distance."""

    points: np.ndarray  # (k, n)
    distance: float


class Domain:
    """Open proper subdomain G of R^n; boundary points are never members."""

    dim: int
    bounded: bool

    def contains(self, x) -> bool:
        return bool(self.contains_many(as_point(x, self.dim)[None, :])[0])

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def boundary_set_distance_many(self, pts: np.ndarray) -> np.ndarray:
        """Euclidean distance from arbitrary points to the boundary set."""
        raise NotImplementedError

    def boundary_distance(self, x) -> float:
        p = as_point(x, self.dim)
        if not self.contains(p):
            raise ValueError("point is not inside the domain")
        return float(self.boundary_set_distance_many(p[None, :])[0])

    def _nearest_candidates(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def nearest_boundary(self, x, tol: float | None = None) -> NearestBoundarySet:
        p = as_point(x, self.dim)
        d = self.boundary_distance(p)
        if tol is None:
            tol = 1e-9 * d
        cands = as_points(self._nearest_candidates(p), self.dim)
        dist = np.linalg.norm(cands - p, axis=1)
        keep = cands[dist <= d + tol]
        return NearestBoundarySet(points=_dedupe_points(keep, 1e-9 * (1.0 + d)), distance=d)

    def sample_boundary(self, count: int, rng, near=None) -> np.ndarray:
        raise NotImplementedError

    def farthest_boundary_distance(self, x) -> float:
        raise ValueError("farthest boundary point needs a bounded domain")

    def bbox(self) -> np.ndarray | None:
        """[[xmin, ymin], [xmax, ymax]] for bounded variants, else None."""
        return None


def _dedupe_points(pts: np.ndarray, tol: float) -> np.ndarray:
    if len(pts) <= 1:
        return pts
    out = [pts[0]]
    for p in pts[1:]:
        if all(np.linalg.norm(p - q) > tol for q in out):
            out.append(p)
    return np.array(out)


class PuncturedSpace(Domain):
    """R^n minus a finite, pairwise-distinct set of points; n >= 2."""

    def __init__(self, punctures):
        pts = as_points(punctures)
        if pts.shape[1] < 2:
            raise ValueError("punctures must live in dimension >= 2")
        if not np.all(np.isfinite(pts)):
            raise ValueError("punctures must be finite")
        m = len(pts)
        for i in range(m):
            for j in range(i + 1, m):
                if np.linalg.norm(pts[i] - pts[j]) == 0.0:
                    raise ValueError("punctures must be pairwise distinct")
        self.punctures = pts
        self.dim = pts.shape[1]
        self.bounded = False

    def contains_many(self, pts):
        pts = as_points(pts, self.dim)
        return self.boundary_set_distance_many(pts) > 0.0

    def boundary_set_distance_many(self, pts):
        pts = as_points(pts, self.dim)
        d = np.full(len(pts), np.inf)
        for q in self.punctures:
            d = np.minimum(d, np.linalg.norm(pts - q, axis=1))
        return d

    def _nearest_candidates(self, x):
        return self.punctures

    def sample_boundary(self, count, rng, near=None):
        idx = rng.integers(0, len(self.punctures), size=count)
        return self.punctures[idx]


class HalfSpace(Domain):
    """Open half-plane {x : <normal, x> < offset}; 2D, unit normal."""

    def __init__(self, normal, offset: float):
        n = as_point(normal, 2)
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise ValueError("normal must be a unit vector")
        if not np.isfinite(offset):
            raise ValueError("offset must be finite")
        self.normal = n
        self.offset = float(offset)
        self.dim = 2
        self.bounded = False

    def contains_many(self, pts):
        pts = as_points(pts, 2)
        return pts @ self.normal < self.offset

    def boundary_set_distance_many(self, pts):
        pts = as_points(pts, 2)
        return np.abs(self.offset - pts @ self.normal)

    def _nearest_candidates(self, x):
        gap = self.offset - x @ self.normal
        return (x + gap * self.normal)[None, :]

    def sample_boundary(self, count, rng, near=None):
        anchor = np.zeros(2) if near is None else as_point(near, 2)
        foot = anchor + (self.offset - anchor @ self.normal) * self.normal
        tangent = np.array([-self.normal[1], self.normal[0]])
        halfwidth = 10.0 * (1.0 + np.linalg.norm(anchor - foot))
        t = rng.uniform(-halfwidth, halfwidth, size=count)
        return foot[None, :] + t[:, None] * tangent[None, :]


def _signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _segment_feet(pts: np.ndarray, a: np.ndarray, b: np.ndarray):
    """Closest points on segment [a, b] for each query point."""
    ab = b - a
    denom = float(ab @ ab)
    t = np.clip(((pts - a) @ ab) / denom, 0.0, 1.0)
    feet = a[None, :] + t[:, None] * ab[None, :]
    return np.linalg.norm(pts - feet, axis=1), feet


def _segments_properly_intersect(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    return False


class _Polygon(Domain):
    def __init__(self, vertices):
        v = as_points(vertices, 2)
        if len(v) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices must be finite")
        edges = np.roll(v, -1, axis=0) - v
        if np.any(np.linalg.norm(edges, axis=1) == 0.0):
            raise ValueError("degenerate zero-length edge")
        self.vertices = v
        self.dim = 2
        self.bounded = True

    def boundary_set_distance_many(self, pts):
        pts = as_points(pts, 2)
        d = np.full(len(pts), np.inf)
        v = self.vertices
        for i in range(len(v)):
            di, _ = _segment_feet(pts, v[i], v[(i + 1) % len(v)])
            d = np.minimum(d, di)
        return d

    def _nearest_candidates(self, x):
        v = self.vertices
        feet = []
        for i in range(len(v)):
            _, f = _segment_feet(x[None, :], v[i], v[(i + 1) % len(v)])
            feet.append(f[0])
        return np.array(feet)

    def sample_boundary(self, count, rng, near=None):
        v = self.vertices
        nxt = np.roll(v, -1, axis=0)
        lengths = np.linalg.norm(nxt - v, axis=1)
        idx = rng.choice(len(v), size=count, p=lengths / lengths.sum())
        t = rng.uniform(0.0, 1.0, size=count)
        return v[idx] + t[:, None] * (nxt[idx] - v[idx])

    def farthest_boundary_distance(self, x):
        p = as_point(x, 2)
        # the max of a convex function over each boundary segment sits at a vertex
        return float(np.max(np.linalg.norm(self.vertices - p, axis=1)))

    def bbox(self):
        return np.array([self.vertices.min(axis=0), self.vertices.max(axis=0)])


class ConvexPolygon(_Polygon):
    """Strictly convex polygon, vertices in counterclockwise order."""

    def __init__(self, vertices):
        super().__init__(vertices)
        v = self.vertices
        if _signed_area(v) <= 0.0:
            raise ValueError("vertices must be in counterclockwise order")
        scale2 = float(np.max(np.abs(v))) ** 2
        for i in range(len(v)):
            a, b, c = v[i - 1], v[i], v[(i + 1) % len(v)]
            cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if cross <= 1e-12 * scale2:
                raise ValueError("polygon is not strictly convex")

    def contains_many(self, pts):
        pts = as_points(pts, 2)
        v = self.vertices
        inside = np.ones(len(pts), dtype=bool)
        for i in range(len(v)):
            a, b = v[i], v[(i + 1) % len(v)]
            cross = (b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0])
            inside &= cross > 0.0
        return inside


class SimplePolygon(_Polygon):
    """Simple (non-self-intersecting) polygon; orientation normalized."""

    def __init__(self, vertices):
        super().__init__(vertices)
        if _signed_area(self.vertices) < 0.0:
            self.vertices = self.vertices[::-1].copy()
        v = self.vertices
        m = len(v)
        for i in range(m):
            for j in range(i + 1, m):
                if j == i or (j + 1) % m == i or (i + 1) % m == j:
                    continue
                if _segments_properly_intersect(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]):
                    raise ValueError("polygon edges cross: not a simple polygon")

    def contains_many(self, pts):
        pts = as_points(pts, 2)
        v = self.vertices
        inside = np.zeros(len(pts), dtype=bool)
        px, py = pts[:, 0], pts[:, 1]
        for i in range(len(v)):
            x1, y1 = v[i]
            x2, y2 = v[(i + 1) % len(v)]
            crosses = (y1 > py) != (y2 > py)
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = (x2 - x1) * (py - y1) / (y2 - y1) + x1
            inside ^= crosses & (px < xint)
        # open-set semantics: points on an edge are not members
        return inside & (self.boundary_set_distance_many(pts) > 0.0)


class BallUnion(Domain):
    """Connected union of open disks in the plane.

    The boundary is computed exactly by arc clipping: each circle keeps
    the angular intervals not strictly covered by another disk.
    """

    def __init__(self, balls):
        parsed = []
        for ball in balls:
            if isinstance(ball, dict):
                c, r = ball["c"], ball["r"]
            else:
                c, r = ball
            parsed.append((as_point(c, 2), float(r)))
        if not parsed:
            raise ValueError("ball union needs at least one ball")
        centers = np.array([c for c, _ in parsed])
        radii = np.array([r for _, r in parsed])
        if np.any(~np.isfinite(radii)) or np.any(radii <= 0.0):
            raise ValueError("ball radii must be positive and finite")
        self.centers = centers
        self.radii = radii
        self.dim = 2
        self.bounded = True
        self._check_connected()
        self._exposed = [self._exposed_arcs(i) for i in range(len(radii))]

    def _check_connected(self):
        m = len(self.radii)
        parent = list(range(m))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(m):
            for j in range(i + 1, m):
                gap = np.linalg.norm(self.centers[i] - self.centers[j])
                # open disks must genuinely overlap: tangency leaves the union disconnected
                if gap < self.radii[i] + self.radii[j]:
                    parent[find(i)] = find(j)
        if len({find(i) for i in range(m)}) != 1:
            raise ValueError("union of balls is not connected")

    def _exposed_arcs(self, i):
        """Closed angular intervals of circle i not buried inside other disks."""
        ci, ri = self.centers[i], self.radii[i]
        covered = []
        for j in range(len(self.radii)):
            if j == i:
                continue
            cj, rj = self.centers[j], self.radii[j]
            gap = np.linalg.norm(cj - ci)
            if gap < 1e-15:
                if ri < rj:
                    return []  # whole circle buried
                continue
            t = (ri * ri + gap * gap - rj * rj) / (2.0 * ri * gap)
            if t >= 1.0:
                continue
            if t <= -1.0:
                return []
            w = float(np.arccos(t))
            psi = float(np.arctan2(cj[1] - ci[1], cj[0] - ci[0]))
            lo, hi = psi - w, psi + w
            lo %= TWO_PI
            hi = lo + 2.0 * w
            if hi <= TWO_PI:
                covered.append((lo, hi))
            else:
                covered.append((lo, TWO_PI))
                covered.append((0.0, hi - TWO_PI))
        if not covered:
            return [(0.0, TWO_PI)]
        covered.sort()
        merged = [list(covered[0])]
        for lo, hi in covered[1:]:
            if lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        exposed = []
        cursor = 0.0
        for lo, hi in merged:
            if lo > cursor:
                exposed.append((cursor, lo))
            cursor = max(cursor, hi)
        if cursor < TWO_PI:
            exposed.append((cursor, TWO_PI))
        return exposed

    def contains_many(self, pts):
        pts = as_points(pts, 2)
        inside = np.zeros(len(pts), dtype=bool)
        for c, r in zip(self.centers, self.radii):
            inside |= np.linalg.norm(pts - c, axis=1) < r
        return inside

    def _arc_distance(self, i, pts):
        arcs = self._exposed[i]
        if not arcs:
            return np.full(len(pts), np.inf)
        c, r = self.centers[i], self.radii[i]
        v = pts - c
        dist_c = np.linalg.norm(v, axis=1)
        radial = np.abs(dist_c - r)
        if len(arcs) == 1 and arcs[0] == (0.0, TWO_PI):
            return radial
        phi = np.arctan2(v[:, 1], v[:, 0]) % TWO_PI
        best = np.full(len(pts), np.inf)
        for lo, hi in arcs:
            on_arc = (phi >= lo) & (phi <= hi)
            best = np.where(on_arc, np.minimum(best, radial), best)
            for ang in (lo, hi):
                q = c + r * np.array([np.cos(ang), np.sin(ang)])
                best = np.minimum(best, np.linalg.norm(pts - q, axis=1))
        return best

    def boundary_set_distance_many(self, pts):
        pts = as_points(pts, 2)
        d = np.full(len(pts), np.inf)
        for i in range(len(self.radii)):
            d = np.minimum(d, self._arc_distance(i, pts))
        return d

    def _nearest_candidates(self, x):
        cands = []
        for i, arcs in enumerate(self._exposed):
            if not arcs:
                continue
            c, r = self.centers[i], self.radii[i]
            v = x - c
            dist_c = np.linalg.norm(v)
            full = len(arcs) == 1 and arcs[0] == (0.0, TWO_PI)
            if dist_c < 1e-15:
                # x is the center: every arc point is equidistant; keep endpoints and midpoints
                for lo, hi in arcs:
                    for ang in (lo, hi, 0.5 * (lo + hi)):
                        cands.append(c + r * np.array([np.cos(ang), np.sin(ang)]))
                continue
            phi = float(np.arctan2(v[1], v[0])) % TWO_PI
            foot = c + r * v / dist_c
            for lo, hi in arcs:
                if full or (lo <= phi <= hi):
                    cands.append(foot)
                cands.append(c + r * np.array([np.cos(lo), np.sin(lo)]))
                cands.append(c + r * np.array([np.cos(hi), np.sin(hi)]))
        return np.array(cands)

    def sample_boundary(self, count, rng, near=None):
        arcs = []
        for i, intervals in enumerate(self._exposed):
            for lo, hi in intervals:
                arcs.append((i, lo, hi, self.radii[i] * (hi - lo)))
        weights = np.array([a[3] for a in arcs])
        idx = rng.choice(len(arcs), size=count, p=weights / weights.sum())
        out = np.empty((count, 2))
        for k, a in enumerate(idx):
            i, lo, hi, _ = arcs[a]
            ang = rng.uniform(lo, hi)
            out[k] = self.centers[i] + self.radii[i] * np.array([np.cos(ang), np.sin(ang)])
        return out

    def farthest_boundary_distance(self, x):
        p = as_point(x, 2)
        best = 0.0
        for i, arcs in enumerate(self._exposed):
            if not arcs:
                continue
            c, r = self.centers[i], self.radii[i]
            v = p - c
            dist_c = np.linalg.norm(v)
            if dist_c < 1e-15:
                best = max(best, r)
                continue
            anti = float(np.arctan2(-v[1], -v[0])) % TWO_PI
            full = len(arcs) == 1 and arcs[0] == (0.0, TWO_PI)
            for lo, hi in arcs:
                if full or (lo <= anti <= hi):
                    best = max(best, dist_c + r)
                for ang in (lo, hi):
                    q = c + r * np.array([np.cos(ang), np.sin(ang)])
                    best = max(best, float(np.linalg.norm(p - q)))
        return best

    def bbox(self):
        lo = (self.centers - self.radii[:, None]).min(axis=0)
        hi = (self.centers + self.radii[:, None]).max(axis=0)
        return np.array([lo, hi])


def _require_keys(obj: dict, required: set[str], kind: str):
    keys = set(obj.keys())
    if keys != required:
        missing = required - keys
        extra = keys - required
        parts = []
        if missing:
            parts.append(f"missing {sorted(missing)}")
        if extra:
            parts.append(f"unknown {sorted(extra)}")
        raise ValueError(f"invalid {kind} description: " + ", ".join(parts))


def domain_from_json(obj: dict) -> Domain:
    """Build a domain from its JSON description; unknown fields are rejected."""
    if not isinstance(obj, dict):
        raise ValueError("domain JSON must be an object")
    kind = obj.get("type")
    if kind == "punctured":
        _require_keys(obj, {"type", "dim", "points"}, kind)
        pts = as_points(obj["points"])
        if pts.shape[1] != int(obj["dim"]):
            raise ValueError("puncture coordinates do not match 'dim'")
        return PuncturedSpace(pts)
    if kind == "half_space":
        _require_keys(obj, {"type", "normal", "offset"}, kind)
        return HalfSpace(obj["normal"], obj["offset"])
    if kind == "convex_polygon":
        _require_keys(obj, {"type", "vertices"}, kind)
        return ConvexPolygon(obj["vertices"])
    if kind == "simple_polygon":
        _require_keys(obj, {"type", "vertices"}, kind)
        return SimplePolygon(obj["vertices"])
    if kind == "ball_union":
        _require_keys(obj, {"type", "balls"}, kind)
        balls = []
        for ball in obj["balls"]:
            if not isinstance(ball, dict):
                raise ValueError("each ball must be an object with keys 'c' and 'r'")
            _require_keys(ball, {"c", "r"}, "ball")
            balls.append((ball["c"], ball["r"]))
        return BallUnion(balls)
    raise ValueError(f"unknown domain type: {kind!r}")


def domain_to_json(domain: Domain) -> dict:
    if isinstance(domain, PuncturedSpace):
        return {
            "type": "punctured",
            "dim": domain.dim,
            "points": domain.punctures.tolist(),
        }
    if isinstance(domain, HalfSpace):
        return {"type": "half_space", "normal": domain.normal.tolist(), "offset": domain.offset}
    if isinstance(domain, ConvexPolygon):
        return {"type": "convex_polygon", "vertices": domain.vertices.tolist()}
    if isinstance(domain, SimplePolygon):
        return {"type": "simple_polygon", "vertices": domain.vertices.tolist()}
    if isinstance(domain, BallUnion):
        return {
            "type": "ball_union",
            "balls": [
                {"c": c.tolist(), "r": float(r)}
                for c, r in zip(domain.centers, domain.radii)
            ],
        }
    raise ValueError(f"cannot serialize domain of type {type(domain).__name__}")
