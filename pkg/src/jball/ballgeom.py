"""Grid geometry of metric balls: rasterisation, boundary tracing,
connectivity, convexity and starlikeness probes, sphere components.

Conventions: ball regions are open (strict inequality), grids are cell
centred with the ball centre on a cell centre, foreground connectivity
is 4-neighbour and background connectivity 8-neighbour so that traced
boundaries and counted holes agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .domain import Domain, as_point
from .metric import CheckReport, annulus_bounds, in_j_ball_many, j_field

_CROSS = ndimage.generate_binary_structure(2, 1)   # 4-connectivity
_BLOCK = ndimage.generate_binary_structure(2, 2)   # 8-connectivity


@dataclass
class RegionGrid:
    """Square raster of a metric value field around a centre point."""

    values: np.ndarray    # (n, n) metric values, +inf outside the domain
    mask: np.ndarray      # values < level
    level: float
    origin: np.ndarray    # world coordinates of cell (0, 0)
    spacing: float
    center_index: tuple[int, int]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def world(self, ii, jj) -> np.ndarray:
        ii = np.asarray(ii, dtype=float)
        jj = np.asarray(jj, dtype=float)
        return np.stack(
            [self.origin[0] + ii * self.spacing, self.origin[1] + jj * self.spacing],
            axis=-1,
        )

    def area(self) -> float:
        return float(self.mask.sum()) * self.spacing**2


def extract_region(
    domain: Domain, x, M: float, cells_per_side: int = 1024
) -> RegionGrid:
    """Raster of the ball of radius M about x, sized from the outer bound."""
    x = as_point(x, 2)
    if domain.dim != 2:
        raise ValueError("region extraction is 2D only")
    n = int(cells_per_side)
    if n < 16:
        raise ValueError("cells_per_side is too small")
    if n % 2 == 0:
        n += 1  # odd count puts x exactly on a cell centre
    reach = annulus_bounds(domain.boundary_distance(x), M).outer_radius
    half = 1.02 * reach * (n - 1) / (n - 5)
    h = 2.0 * half / (n - 1)
    if h > reach / 64.0:
        raise ValueError("grid resolution is too coarse for this ball")
    c = (n - 1) // 2
    offs = (np.arange(n) - c) * h
    values = np.empty((n, n))
    chunk = max(1, (1 << 18) // n)
    for i0 in range(0, n, chunk):
        i1 = min(n, i0 + chunk)
        gx, gy = np.meshgrid(offs[i0:i1] + x[0], offs + x[1], indexing="ij")
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        values[i0:i1, :] = j_field(domain, x, pts).reshape(i1 - i0, n)
    return RegionGrid(
        values=values,
        mask=values < M,
        level=float(M),
        origin=x - c * h,
        spacing=h,
        center_index=(c, c),
    )


# --------------------------------------------------------------------------
# boundary tracing (marching squares on the boolean mask)
# --------------------------------------------------------------------------

# per corner case: list of (edge_a, edge_b) segments, edges coded S, E, N, W.
# saddle cases 5 and 10 split so diagonal true corners stay 4-disconnected.
_MS_SEGMENTS: dict[int, list[tuple[str, str]]] = {
    0: [],
    1: [("S", "W")],
    2: [("S", "E")],
    3: [("W", "E")],
    4: [("E", "N")],
    5: [("S", "W"), ("E", "N")],
    6: [("S", "N")],
    7: [("W", "N")],
    8: [("W", "N")],
    9: [("S", "N")],
    10: [("S", "E"), ("W", "N")],
    11: [("E", "N")],
    12: [("W", "E")],
    13: [("S", "E")],
    14: [("S", "W")],
    15: [],
}


def _edge_key(i: int, j: int, edge: str) -> tuple[int, int]:
    # doubled-index midpoint of the block edge: exact integer stitching
    if edge == "S":
        return (2 * i + 1, 2 * j)
    if edge == "E":
        return (2 * i + 2, 2 * j + 1)
    if edge == "N":
        return (2 * i + 1, 2 * j + 2)
    return (2 * i, 2 * j + 1)


def trace_boundary(grid: RegionGrid) -> list[np.ndarray]:
    """Closed boundary loops of the mask, as world-coordinate polylines."""
    mask = np.pad(grid.mask, 1, constant_values=False)
    n0, n1 = mask.shape
    c0 = mask[:-1, :-1]
    c1 = mask[1:, :-1]
    c2 = mask[1:, 1:]
    c3 = mask[:-1, 1:]
    case = (
        c0.astype(np.uint8)
        + 2 * c1.astype(np.uint8)
        + 4 * c2.astype(np.uint8)
        + 8 * c3.astype(np.uint8)
    )
    adjacency: dict[tuple[int, int], list[tuple[int, int]]] = {}
    blocks = np.argwhere((case > 0) & (case < 15))
    for i, j in blocks:
        for ea, eb in _MS_SEGMENTS[int(case[i, j])]:
            ka = _edge_key(int(i), int(j), ea)
            kb = _edge_key(int(i), int(j), eb)
            adjacency.setdefault(ka, []).append(kb)
            adjacency.setdefault(kb, []).append(ka)

    loops: list[np.ndarray] = []
    seen: set[tuple[int, int]] = set()
    for start in adjacency:
        if start in seen:
            continue
        walk = [start]
        seen.add(start)
        prev = None
        cur = start
        while True:
            nbrs = adjacency[cur]
            nxt = nbrs[0] if nbrs[0] != prev else nbrs[1]
            if nxt == start:
                break
            walk.append(nxt)
            seen.add(nxt)
            prev, cur = cur, nxt
        keys = np.array(walk, dtype=float)
        # doubled padded index -> world: subtract the pad, halve, scale
        pts = np.column_stack(
            [
                grid.origin[0] + (keys[:, 0] / 2.0 - 1.0) * grid.spacing,
                grid.origin[1] + (keys[:, 1] / 2.0 - 1.0) * grid.spacing,
            ]
        )
        loops.append(pts)
    loops.sort(key=len, reverse=True)
    return loops


@dataclass(frozen=True)
class TopologyReport:
    n_components: int
    n_holes: int
    simply_connected: bool
    component_cells: tuple[int, ...]


def topology_check(grid: RegionGrid, min_cells: int = 1) -> TopologyReport:
    """Connected components (4-conn) and holes (8-conn complement)."""
    mask = grid.mask
    labels, n = ndimage.label(mask, structure=_CROSS)
    if n and min_cells > 1:
        sizes = np.bincount(labels.ravel())
        keep = sizes >= min_cells
        keep[0] = False
        mask = keep[labels]
        labels, n = ndimage.label(mask, structure=_CROSS)
    sizes = np.bincount(labels.ravel(), minlength=n + 1)[1:]
    padded = np.pad(mask, 1, constant_values=False)
    _, n_comp_bg = ndimage.label(~padded, structure=_BLOCK)
    n_holes = n_comp_bg - 1  # one background component touches the frame
    return TopologyReport(
        n_components=int(n),
        n_holes=int(n_holes),
        simply_connected=bool(n == 1 and n_holes == 0),
        component_cells=tuple(int(s) for s in np.sort(sizes)[::-1]),
    )


# --------------------------------------------------------------------------
# sampled convexity and starlikeness probes
# --------------------------------------------------------------------------


def _sample_members(member_fn, lo, hi, rng, count: int, budget: int | None = None):
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if budget is None:
        budget = max(200000, 30 * count)
    got = []
    used = 0
    while sum(len(g) for g in got) < count:
        if used >= budget:
            raise ValueError("membership sampling failed: region too sparse in its box")
        batch = rng.uniform(lo, hi, size=(max(4096, count // 2), 2))
        used += len(batch)
        inside = member_fn(batch)
        got.append(batch[inside])
    pts = np.vstack(got)[:count]
    return pts, used


def _chord_escape(member_fn, u, v, n_chord: int):
    t = np.linspace(0.0, 1.0, n_chord + 2)[1:-1]
    chord = u[:, None, :] + t[None, :, None] * (v - u)[:, None, :]
    ok = member_fn(chord.reshape(-1, 2)).reshape(len(u), n_chord)
    return t, chord, np.argwhere(~ok)


def probe_convexity(
    member_fn,
    lo,
    hi,
    rng,
    n_pairs: int = 220,
    n_chord: int = 64,
    anchor=None,
    reach: float | None = None,
    n_bdry: int = 256,
) -> CheckReport:
    """Sampled chord test: both ends in, every interior chord point in.

    With an interior anchor and a reach, chords between traced boundary
    points are tested as well; random pairs alone can miss a thin bite.
    """
    pts, used = _sample_members(member_fn, lo, hi, rng, 2 * n_pairs)
    u, v = pts[:n_pairs], pts[n_pairs:]
    if anchor is not None:
        angles = np.linspace(0.0, 2.0 * np.pi, n_bdry, endpoint=False)
        bpts = _ray_boundary_points(member_fn, anchor, reach, angles)
        used += n_bdry * (128 + 48)
        # pull boundary pairs a hair inward so both ends are members
        inner = np.asarray(anchor, dtype=float)[None, :] * 0.002 + bpts * 0.998
        keep = member_fn(inner)
        used += n_bdry
        inner = inner[keep]
        strides = [1, 2, 4, 8, 16, len(inner) // 4, len(inner) // 3, len(inner) // 2]
        for st in strides:
            if st < 1 or st >= len(inner):
                continue
            u = np.vstack([u, inner])
            v = np.vstack([v, np.roll(inner, -st, axis=0)])
    t, chord, bad = _chord_escape(member_fn, u, v, n_chord)
    used += len(u) * n_chord
    if len(bad) == 0:
        return CheckReport(passed=True, witness=None, samples_used=used, tol=0.0)
    # pick the escape farthest outside along its chord: re-verifiable witness
    i, k = bad[0]
    a, b, w = u[i], v[i], chord[i, k]
    confirm = member_fn(np.vstack([a, b, w]))
    witness = {
        "kind": "chord_escape",
        "u": a.tolist(),
        "v": b.tolist(),
        "t": float(t[k]),
        "point": w.tolist(),
        "confirmed": bool(confirm[0] and confirm[1] and not confirm[2]),
    }
    return CheckReport(passed=False, witness=witness, samples_used=used + 3, tol=0.0)


def _ray_boundary_points(member_fn, center, reach, angles) -> np.ndarray:
    """First in-to-out crossing along each ray, bisected to 1e-12 reach."""
    center = np.asarray(center, dtype=float)
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    t_lo = np.zeros(len(angles))
    t_hi = np.full(len(angles), reach)
    # coarse scan locates the first flip, bisection sharpens it
    ts = np.linspace(0.0, 1.0, 129)[1:]
    samples = center[None, None, :] + (ts[None, :, None] * reach) * dirs[:, None, :]
    inside = member_fn(samples.reshape(-1, 2)).reshape(len(angles), len(ts))
    for r in range(len(angles)):
        flips = np.nonzero(~inside[r])[0]
        if len(flips) == 0:
            raise ValueError("ray never leaves the region: reach is too small")
        k = flips[0]
        t_lo[r] = ts[k - 1] * reach if k > 0 else 0.0
        t_hi[r] = ts[k] * reach
    for _ in range(48):
        tm = 0.5 * (t_lo + t_hi)
        pts = center[None, :] + tm[:, None] * dirs
        ins = member_fn(pts)
        t_lo = np.where(ins, tm, t_lo)
        t_hi = np.where(ins, t_hi, tm)
    tb = 0.5 * (t_lo + t_hi)
    return center[None, :] + tb[:, None] * dirs


def probe_strict_convexity(
    member_fn,
    value_fn,
    level: float,
    center,
    reach: float,
    n_rays: int = 256,
    depth_tol: float = 1e-9,
) -> CheckReport:
    """Midpoints of boundary chords must sit strictly below the level."""
    angles = np.linspace(0.0, 2.0 * np.pi, n_rays, endpoint=False)
    bpts = _ray_boundary_points(member_fn, center, reach, angles)
    used = n_rays * (128 + 48)
    worst = np.inf
    witness = None
    for stride in (1, 2, 4):
        mids = 0.5 * (bpts + np.roll(bpts, -stride, axis=0))
        depth = level - value_fn(mids)
        used += n_rays
        k = int(np.argmin(depth))
        if depth[k] < worst:
            worst = float(depth[k])
            witness = {
                "kind": "flat_or_folded_chord",
                "u": bpts[k].tolist(),
                "v": bpts[(k + stride) % n_rays].tolist(),
                "midpoint": mids[k].tolist(),
                "depth": float(depth[k]),
            }
    passed = worst > depth_tol
    return CheckReport(
        passed=passed,
        witness=None if passed else witness,
        samples_used=used,
        tol=depth_tol,
        notes={"min_midpoint_depth": worst},
    )


def probe_starlike(
    member_fn,
    center,
    reach: float,
    n_rays: int = 1024,
    n_steps: int = 1024,
    bisect_tol: float = 1e-10,
) -> CheckReport:
    """Strict star shape: each ray from the centre leaves the region once.

    The first exit along each ray is bisected down to bisect_tol * reach;
    any sample beyond it that is back inside disproves star shape.
    """
    center = np.asarray(center, dtype=float)
    if not member_fn(center[None, :])[0]:
        return CheckReport(
            passed=False,
            witness={"kind": "center_outside", "center": center.tolist()},
            samples_used=1,
            tol=bisect_tol,
        )
    angles = np.linspace(0.0, 2.0 * np.pi, n_rays, endpoint=False)
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    ts = np.linspace(0.0, reach, n_steps + 1)[1:]
    used = 1
    n_bisect = int(np.ceil(np.log2(1.0 / bisect_tol)))
    for r0 in range(0, n_rays, 128):
        r1 = min(n_rays, r0 + 128)
        block = center[None, None, :] + ts[None, :, None] * dirs[r0:r1, None, :]
        inside = member_fn(block.reshape(-1, 2)).reshape(r1 - r0, n_steps)
        used += (r1 - r0) * n_steps
        if np.any(inside[:, -1]):
            raise ValueError("ray never leaves the region: reach is too small")
        first_out = np.argmin(inside, axis=1)  # first False along each ray
        t_lo = np.where(first_out > 0, ts[np.maximum(first_out - 1, 0)], 0.0)
        t_hi = ts[first_out]
        for _ in range(n_bisect):
            tm = 0.5 * (t_lo + t_hi)
            ins = member_fn(center[None, :] + tm[:, None] * dirs[r0:r1])
            t_lo = np.where(ins, tm, t_lo)
            t_hi = np.where(ins, t_hi, tm)
        used += n_bisect * (r1 - r0)
        # any inside sample at a parameter past the refined exit re-enters
        reentry = inside & (ts[None, :] > t_hi[:, None])
        bad = np.argwhere(reentry)
        if len(bad) > 0:
            i, k = bad[0]
            pt = block[i, k]
            witness = {
                "kind": "ray_reentry",
                "angle": float(angles[r0 + i]),
                "exit_t": float(t_hi[i]),
                "t": float(ts[k]),
                "point": pt.tolist(),
                "confirmed": bool(member_fn(pt[None, :])[0]),
            }
            return CheckReport(
                passed=False, witness=witness, samples_used=used + 1, tol=bisect_tol
            )
    return CheckReport(passed=True, witness=None, samples_used=used, tol=bisect_tol)


def probe_starlike_nonstrict(
    member_fn, center, lo, hi, rng, n_pts: int = 300, n_chord: int = 64
) -> CheckReport:
    """Every sampled member must see the centre along an interior segment."""
    center = np.asarray(center, dtype=float)
    if not member_fn(center[None, :])[0]:
        return CheckReport(
            passed=False,
            witness={"kind": "center_outside", "center": center.tolist()},
            samples_used=1,
            tol=0.0,
        )
    pts, used = _sample_members(member_fn, lo, hi, rng, n_pts)
    t = np.linspace(0.0, 1.0, n_chord + 2)[1:-1]
    chord = center[None, None, :] + t[None, :, None] * (pts - center)[:, None, :]
    ok = member_fn(chord.reshape(-1, 2)).reshape(n_pts, n_chord)
    used += n_pts * n_chord + 1
    bad = np.argwhere(~ok)
    if len(bad) == 0:
        return CheckReport(passed=True, witness=None, samples_used=used, tol=0.0)
    i, k = bad[0]
    w = chord[i, k]
    confirm = member_fn(np.vstack([pts[i], w]))
    witness = {
        "kind": "blocked_sightline",
        "member": pts[i].tolist(),
        "point": w.tolist(),
        "confirmed": bool(confirm[0] and not confirm[1]),
    }
    return CheckReport(passed=False, witness=witness, samples_used=used + 2, tol=0.0)


def _ball_member_fn(domain: Domain, x, M: float):
    def member(pts):
        return in_j_ball_many(domain, x, M, pts)

    return member


def _ball_box(domain: Domain, x, M: float):
    x = as_point(x, 2)
    reach = annulus_bounds(domain.boundary_distance(x), M).outer_radius
    lo, hi = x - reach, x + reach
    box = domain.bbox()
    if box is not None:
        # huge radii cover the whole bounded domain; keep rejection viable
        lo = np.maximum(lo, box[0])
        hi = np.minimum(hi, box[1])
    return lo, hi, reach


def convexity_check(
    domain: Domain,
    x,
    M: float,
    rng=None,
    strict: bool = False,
    n_pairs: int = 220,
    n_rays: int = 256,
    depth_tol: float = 1e-9,
) -> CheckReport:
    """Sampled convexity of the ball of radius M about x; optional strictness."""
    x = as_point(x, 2)
    rng = np.random.default_rng(0) if rng is None else rng
    member = _ball_member_fn(domain, x, M)
    lo, hi, reach = _ball_box(domain, x, M)
    report = probe_convexity(
        member, lo, hi, rng, n_pairs=n_pairs, anchor=x, reach=reach * 1.05
    )
    if not report.passed or not strict:
        return report

    def value(pts):
        return j_field(domain, x, pts)

    strict_rep = probe_strict_convexity(
        member, value, M, x, reach * 1.05, n_rays=n_rays, depth_tol=depth_tol
    )
    strict_rep.samples_used += report.samples_used
    return strict_rep


def starlikeness_check(
    domain: Domain,
    x,
    M: float,
    center=None,
    rng=None,
    strict: bool = True,
    n_rays: int = 1024,
    n_pts: int = 300,
) -> CheckReport:
    """Star shape of the ball about a centre (default: the ball centre x)."""
    x = as_point(x, 2)
    center = x if center is None else as_point(center, 2)
    rng = np.random.default_rng(0) if rng is None else rng
    member = _ball_member_fn(domain, x, M)
    lo, hi, reach = _ball_box(domain, x, M)
    span = float(np.linalg.norm(center - x)) + reach * 1.05
    if strict:
        return probe_starlike(member, center, span, n_rays=n_rays)
    return probe_starlike_nonstrict(member, center, lo, hi, rng, n_pts=n_pts)


# --------------------------------------------------------------------------
# metric sphere components
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SphereComponent:
    cells: int
    diameter: float
    representative: np.ndarray  # cell centre with the smallest |value - level|
    isolated: bool


@dataclass(frozen=True)
class SphereReport:
    components: tuple[SphereComponent, ...]
    band_halfwidth: float
    spacing: float
    closure_gap: np.ndarray | None  # closed-ball cell far from the open ball
    closure_gap_dist: float


def sphere_components(
    domain: Domain, x, M: float, cells_per_side: int = 1024
) -> SphereReport:
    """Components of the level set {value = M} on a grid band, plus a check
    that every closed-ball cell sits near the open ball."""
    x = as_point(x, 2)
    grid = extract_region(domain, x, M, cells_per_side=cells_per_side)
    h = grid.spacing
    grad = float(np.exp(M) / domain.boundary_distance(x))
    band_hw = max(1e-3, 2.0 * h * grad)
    finite = np.isfinite(grid.values)
    band = finite & (np.abs(grid.values - M) < band_hw)
    labels, n = ndimage.label(band, structure=_BLOCK)
    comps = []
    diams = np.zeros(n)
    for k in range(1, n + 1):
        ij = np.argwhere(labels == k)
        span = (ij.max(axis=0) - ij.min(axis=0)) * h
        diams[k - 1] = float(np.hypot(span[0], span[1]))
    d_big = diams.max() if n else 0.0
    for k in range(1, n + 1):
        ij = np.argwhere(labels == k)
        vals = np.abs(grid.values[ij[:, 0], ij[:, 1]] - M)
        b = ij[np.argmin(vals)]
        comps.append(
            SphereComponent(
                cells=len(ij),
                diameter=diams[k - 1],
                representative=grid.world(b[0], b[1]),
                isolated=bool(diams[k - 1] <= max(3.0 * h, 0.15 * d_big)),
            )
        )
    comps.sort(key=lambda c: c.cells, reverse=True)

    closed = finite & (grid.values <= M + h * grad)
    open_cells = grid.mask
    dist_to_open = ndimage.distance_transform_edt(~open_cells) * h
    gap_limit = (max(8.0, 4.0 * np.exp(2.0 * M)) + 4.0) * h
    far = closed & (dist_to_open > gap_limit)
    witness = None
    wdist = 0.0
    if np.any(far):
        ij = np.argwhere(far)
        k = int(np.argmax(dist_to_open[far]))
        witness = grid.world(ij[k, 0], ij[k, 1])
        wdist = float(np.max(dist_to_open[far]))
    return SphereReport(
        components=tuple(comps),
        band_halfwidth=float(band_hw),
        spacing=float(h),
        closure_gap=witness,
        closure_gap_dist=wdist,
    )


# --------------------------------------------------------------------------
# SVG output
# --------------------------------------------------------------------------


def loops_to_svg(
    loops: list[np.ndarray],
    extras: list[dict] | None = None,
    width: int = 640,
) -> str:
    """Standalone SVG of closed loops (y axis flipped to screen sense).

    extras: optional overlay shapes, dicts {"kind": "circle", "c": (x, y),
    "r": r, "color": "#888"} or {"kind": "point", "p": (x, y), "color": ...}.
    """
    if not loops and not extras:
        raise ValueError("nothing to draw")
    pts = np.vstack(loops) if loops else np.zeros((0, 2))
    if extras:
        for e in extras:
            if e["kind"] == "circle":
                c, r = np.asarray(e["c"], dtype=float), float(e["r"])
                pts = np.vstack([pts, c + [r, r], c - [r, r]])
            else:
                pts = np.vstack([pts, np.asarray(e["p"], dtype=float)[None, :]])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = hi - lo
    pad = 0.05 * max(float(span[0]), float(span[1]), 1e-12)
    lo = lo - pad
    hi = hi + pad
    w = hi[0] - lo[0]
    ht = hi[1] - lo[1]
    height = int(round(width * ht / w))

    def fx(v: float) -> str:
        return f"{v:.12g}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{fx(lo[0])} {fx(-hi[1])} {fx(w)} {fx(ht)}">'
    ]
    sw = fx(0.003 * max(w, ht))
    for loop in loops:
        coords = " ".join(f"{fx(p[0])},{fx(-p[1])}" for p in loop)
        parts.append(
            f'<polygon points="{coords}" fill="none" stroke="#1a1a1a" stroke-width="{sw}"/>'
        )
    for e in extras or []:
        color = e.get("color", "#a33")
        if e["kind"] == "circle":
            c, r = e["c"], e["r"]
            parts.append(
                f'<circle cx="{fx(c[0])}" cy="{fx(-c[1])}" r="{fx(r)}" fill="none" '
                f'stroke="{color}" stroke-width="{sw}" stroke-dasharray="{fx(float(sw) * 3)}"/>'
            )
        elif e["kind"] == "point":
            p = e["p"]
            parts.append(
                f'<circle cx="{fx(p[0])}" cy="{fx(-p[1])}" r="{fx(float(sw) * 2.5)}" fill="{color}"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
