"""Zone partitioning: seeds to space-filling per-net zones to vectors.

Pipeline: rasterize seeds -> geodesic partition (every cell joins the
geodesically nearest net) -> carve isolation gaps -> enforce the
minimum weedable feature -> vectorize.  All stages are pure functions
of their inputs; label grids are numpy int16 arrays indexed [row, col]
with row = y cell index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from skimage.graph import MCP

from .board import Board
from .errors import (FeatureTooThin, NoSeeds, PadClearanceViolation,
                     SeedConflict, UnknownNetName, ValidationError)
from .footprint import PadKind

EMPTY = -1
KEEPOUT = -2
GAP = -3
OUTSIDE = -4

_FOUR = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass
class SeedGrid:
    nx: int
    ny: int
    cells: np.ndarray  # (ny, nx) int16: net id, EMPTY or KEEPOUT
    board: Board


@dataclass
class ZoneMap:
    nx: int
    ny: int
    cells: np.ndarray  # (ny, nx) int16: net id, GAP or OUTSIDE
    board: Board

    def copy(self) -> "ZoneMap":
        return ZoneMap(self.nx, self.ny, self.cells.copy(), self.board)


@dataclass(frozen=True)
class ZonePolygon:
    outer: tuple[tuple[float, float], ...]   # counterclockwise
    holes: tuple[tuple[tuple[float, float], ...], ...]  # clockwise


@dataclass(frozen=True)
class CutPath:
    points: tuple[tuple[float, float], ...]
    closed: bool


@dataclass
class ZoneLayout:
    zones: dict[int, list[ZonePolygon]] = field(default_factory=dict)
    cut_paths: list[CutPath] = field(default_factory=list)
    board: Board = None


def _cell_centers(b: Board):
    r = b.resolution
    xs = (np.arange(b.nx) + 0.5) * r
    ys = (np.arange(b.ny) + 0.5) * r
    return xs, ys


def _disk_structure(radius_cells: float) -> np.ndarray:
    """Boolean mask of offsets with center distance <= radius (in cells)."""
    n = int(math.floor(radius_cells + 1e-9))
    ax = np.arange(-n, n + 1)
    dx, dy = np.meshgrid(ax, ax)
    return (dx * dx + dy * dy) <= radius_cells * radius_cells + 1e-9


def _square_structure(half_cells: int) -> np.ndarray:
    side = 2 * half_cells + 1
    return np.ones((side, side), dtype=bool)


def _strict_disk_structure(radius_cells: float) -> np.ndarray:
    """Offsets with center distance strictly below radius (in cells)."""
    n = int(math.ceil(radius_cells))
    ax = np.arange(-n, n + 1)
    dx, dy = np.meshgrid(ax, ax)
    return (dx * dx + dy * dy) < radius_cells * radius_cells - 1e-6


def pad_cells_mask(pad, b: Board) -> np.ndarray:
    """Cells whose center falls inside the pad shape.

    The cell containing the pad center is always included so every pad
    seeds at least one cell.
    """
    xs, ys = _cell_centers(b)
    cx, cy = pad.center
    if pad.shape.kind is PadKind.CIRCLE:
        rad = pad.shape.w / 2
        inx = np.abs(xs - cx) <= rad + 1e-9
        iny = np.abs(ys - cy) <= rad + 1e-9
        mask = np.zeros((b.ny, b.nx), dtype=bool)
        jj = np.where(iny)[0]
        ii = np.where(inx)[0]
        if len(jj) and len(ii):
            sub = ((xs[ii][None, :] - cx) ** 2 + (ys[jj][:, None] - cy) ** 2
                   <= rad * rad + 1e-9)
            mask[np.ix_(jj, ii)] = sub
    else:
        hx, hy = pad.shape.half_extent
        inx = np.abs(xs - cx) <= hx + 1e-9
        iny = np.abs(ys - cy) <= hy + 1e-9
        mask = iny[:, None] & inx[None, :]
    ci = min(max(int(cx / b.resolution), 0), b.nx - 1)
    cj = min(max(int(cy / b.resolution), 0), b.ny - 1)
    mask[cj, ci] = True
    return mask


def rasterize_pads(pads, b: Board) -> SeedGrid:
    """Stamp pad shapes into a seed grid.

    Same-net overlaps merge; different-net overlaps raise SeedConflict.
    Pads without a net stamp KEEPOUT.
    """
    cells = np.full((b.ny, b.nx), EMPTY, dtype=np.int16)
    for pad in pads:
        label = KEEPOUT if pad.net_id is None else pad.net_id
        mask = pad_cells_mask(pad, b)
        clash = mask & (cells != EMPTY) & (cells != label)
        if clash.any():
            j, i = np.argwhere(clash)[0]
            raise SeedConflict(
                f"cell ({i}, {j}) claimed by net {int(cells[j, i])} and pad "
                f"{pad.part_id}.{pad.pin} (net {pad.net_id})")
        cells[mask] = label
    return SeedGrid(b.nx, b.ny, cells, b)


def _stamp(cells, mask, label, what):
    clash = mask & (cells != EMPTY) & (cells != label)
    if clash.any():
        j, i = np.argwhere(clash)[0]
        raise SeedConflict(
            f"cell ({i}, {j}) claimed by net {int(cells[j, i])} and {what}")
    cells[mask] = label


def rasterize_traces(t, b: Board, net_index: dict[str, int]) -> SeedGrid:
    """Rasterize a trace layer: cells within half the stroke width of a
    polyline, or inside a closed polygon, get the trace's net id."""
    cells = np.full((b.ny, b.nx), EMPTY, dtype=np.int16)
    xs, ys = _cell_centers(b)

    def geometry_mask(geom) -> np.ndarray:
        mask = np.zeros((b.ny, b.nx), dtype=bool)
        pts = geom.points
        if geom.closed and len(pts) >= 3:
            from matplotlib.path import Path

            gx, gy = np.meshgrid(xs, ys)
            inside = Path(pts).contains_points(
                np.column_stack([gx.ravel(), gy.ravel()]))
            mask |= inside.reshape(b.ny, b.nx)
            return mask
        half = geom.width / 2
        segs = list(zip(pts[:-1], pts[1:]))
        for (x1, y1), (x2, y2) in segs:
            x0 = min(x1, x2) - half - b.resolution
            x3 = max(x1, x2) + half + b.resolution
            y0 = min(y1, y2) - half - b.resolution
            y3 = max(y1, y2) + half + b.resolution
            ii = np.where((xs >= x0) & (xs <= x3))[0]
            jj = np.where((ys >= y0) & (ys <= y3))[0]
            if not len(ii) or not len(jj):
                continue
            px = xs[ii][None, :]
            py = ys[jj][:, None]
            vx, vy = x2 - x1, y2 - y1
            ll = vx * vx + vy * vy
            if ll == 0:
                d2 = (px - x1) ** 2 + (py - y1) ** 2
            else:
                tt = np.clip(((px - x1) * vx + (py - y1) * vy) / ll, 0.0, 1.0)
                d2 = (px - (x1 + tt * vx)) ** 2 + (py - (y1 + tt * vy)) ** 2
            mask[np.ix_(jj, ii)] |= d2 <= half * half + 1e-9
        return mask

    for name in sorted(t.nets):
        if name not in net_index:
            raise UnknownNetName(name)
        label = net_index[name]
        for geom in t.nets[name]:
            _stamp(cells, geometry_mask(geom), label, f"trace net {name!r}")
    for geom in t.unassigned:
        _stamp(cells, geometry_mask(geom), KEEPOUT, "unassigned trace geometry")
    return SeedGrid(b.nx, b.ny, cells, b)


def geodesic_partition(s: SeedGrid) -> np.ndarray:
    """Assign every reachable cell to the geodesically nearest net.

    Distance is 4-connected unit steps avoiding KEEPOUT; ties go to the
    lower net id.  Unreachable and KEEPOUT cells become GAP.
    """
    net_ids = sorted(int(v) for v in np.unique(s.cells) if v >= 0)
    if not net_ids:
        raise NoSeeds("seed grid has no net seeds")
    passable = s.cells != KEEPOUT
    costs = np.where(passable, 1.0, np.inf)
    offsets = [(0, 1), (0, -1), (1, 0), (-1, 0)]
    dists = np.full((len(net_ids), s.ny, s.nx), np.inf)
    for k, net in enumerate(net_ids):
        starts = np.argwhere(s.cells == net)
        mcp = MCP(costs, offsets=offsets, fully_connected=False)
        d, _ = mcp.find_costs([tuple(p) for p in starts])
        dists[k] = d
    best = np.argmin(dists, axis=0)  # first (lowest net id) wins ties
    best_dist = np.take_along_axis(dists, best[None], axis=0)[0]
    labels = np.array(net_ids, dtype=np.int16)[best]
    labels[~np.isfinite(best_dist)] = GAP
    labels[s.cells == KEEPOUT] = GAP
    return labels.astype(np.int16)


def carve_gaps(labels: np.ndarray, b: Board, seeds: SeedGrid | None = None) -> ZoneMap:
    """Carve isolation channels of width ``gap`` between zones.

    A cell keeps its net label iff every cell within Euclidean radius
    gap/2 (center distance) shares the label or lies outside the board.
    Seed cells are exempt from carving, but only when the exemption
    keeps different nets at least gap - 2*resolution apart.
    """
    r = b.resolution
    struct = _disk_structure(b.gap / 2 / r)
    carved = np.full(labels.shape, GAP, dtype=np.int16)
    net_ids = sorted(int(v) for v in np.unique(labels) if v >= 0)
    for net in net_ids:
        mask = labels == net
        keep = ndimage.binary_erosion(mask, structure=struct, border_value=1)
        carved[keep] = net

    if seeds is not None:
        seed_mask = seeds.cells >= 0
        restored = seed_mask & (carved == GAP)
        carved[restored] = seeds.cells[restored]
        # exemption must preserve the electrical separation guarantee
        sep = _strict_disk_structure((b.gap - 2 * r) / r)
        for net in net_ids:
            restored_net = restored & (seeds.cells == net)
            if not restored_net.any():
                continue
            near = ndimage.binary_dilation(restored_net, structure=sep)
            other = (carved >= 0) & (carved != net)
            if (near & other).any():
                raise PadClearanceViolation(
                    f"pads of net {net} sit closer than the gap width to "
                    f"another net; carving would eat a pad")

    ny, nx = labels.shape
    xs, ys = _cell_centers(b)
    in_margin = ((xs < b.margin) | (xs > b.width - b.margin))[None, :] | \
                ((ys < b.margin) | (ys > b.height - b.margin))[:, None]
    if seeds is not None and (in_margin & (seeds.cells >= 0)).any():
        raise ValidationError("pad seed cells fall inside the board margin")
    carved[in_margin] = OUTSIDE
    return ZoneMap(nx, ny, carved, b)


def _opening_half_cells(b: Board) -> int:
    # Features of exactly min_feature survive; anything a cell narrower dies.
    return max(int(math.floor((b.min_feature / b.resolution - 1) / 2)), 0)


def enforce_min_feature(z: ZoneMap, b: Board, seeds: SeedGrid | None = None) -> ZoneMap:
    """Remove zone slivers narrower than ``min_feature`` by per-net
    morphological opening (square element, so right angles survive)."""
    hw = _opening_half_cells(b)
    out = z.copy()
    if hw == 0:
        return out
    struct = _square_structure(hw)
    net_ids = sorted(int(v) for v in np.unique(z.cells) if v >= 0)
    for net in net_ids:
        mask = z.cells == net
        opened = ndimage.binary_opening(mask, structure=struct)
        out.cells[mask & ~opened] = GAP
    if seeds is not None:
        for net in net_ids:
            seed_net = seeds.cells == net
            if not seed_net.any():
                continue
            # only blame the opening for damage it caused; nets already
            # split before this stage are a DRC matter, not a crash
            if _seed_cells_connected(z.cells, net, seed_net) and \
                    not _seed_cells_connected(out.cells, net, seed_net):
                raise FeatureTooThin(
                    net, f"opening at min_feature {b.min_feature} mm "
                         f"disconnects or removes pads of net {net}")
    return out


def _seed_cells_connected(cells: np.ndarray, net: int, seed_mask: np.ndarray) -> bool:
    zone = cells == net
    if not (seed_mask <= zone).all():
        return False
    comp, _ = ndimage.label(zone, structure=_FOUR)
    ids = np.unique(comp[seed_mask])
    return len(ids) == 1


def check_zone_connectivity(z: ZoneMap, pads) -> dict[int, bool]:
    """True for net k iff all its pad seed cells share one 4-connected
    component of label-k cells."""
    b = z.board
    result: dict[int, bool] = {}
    seed_masks: dict[int, np.ndarray] = {}
    for pad in pads:
        if pad.net_id is None:
            continue
        m = seed_masks.setdefault(pad.net_id, np.zeros(z.cells.shape, dtype=bool))
        m |= pad_cells_mask(pad, b)
    for net, seed_mask in sorted(seed_masks.items()):
        result[net] = _seed_cells_connected(z.cells, net, seed_mask)
    return result


# ---------------------------------------------------------------------------
# Vectorization

_LEFT_TURN_ORDER = {
    (1, 0): [(0, 1), (1, 0), (0, -1)],
    (0, 1): [(-1, 0), (0, 1), (1, 0)],
    (-1, 0): [(0, -1), (-1, 0), (0, 1)],
    (0, -1): [(1, 0), (0, -1), (-1, 0)],
}


def _trace_rings(mask: np.ndarray, r: float):
    """Closed boundary rings of a binary mask along cell edges.

    Interior is kept on the left, so outer rings are counterclockwise
    and holes clockwise.  Diagonal pinch points split into simple rings
    by always preferring the left turn.
    """
    ny, nx = mask.shape
    edges: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def add(a, b_):
        edges.setdefault(a, []).append(b_)

    js, is_ = np.nonzero(mask)
    for j, i in zip(js.tolist(), is_.tolist()):
        if j == 0 or not mask[j - 1, i]:
            add((i, j), (i + 1, j))
        if i == nx - 1 or not mask[j, i + 1]:
            add((i + 1, j), (i + 1, j + 1))
        if j == ny - 1 or not mask[j + 1, i]:
            add((i + 1, j + 1), (i, j + 1))
        if i == 0 or not mask[j, i - 1]:
            add((i, j + 1), (i, j))
    for v in edges.values():
        v.sort()

    rings = []
    while edges:
        start = min(edges)
        cur = start
        nxt = edges[cur][0]
        _pop(edges, cur, nxt)
        ring = [cur]
        prev_dir = (nxt[0] - cur[0], nxt[1] - cur[1])
        cur = nxt
        while cur != start:
            ring.append(cur)
            options = edges.get(cur, [])
            chosen = None
            for d in _LEFT_TURN_ORDER[prev_dir]:
                cand = (cur[0] + d[0], cur[1] + d[1])
                if cand in options:
                    chosen = cand
                    prev_dir = d
                    break
            if chosen is None:
                raise AssertionError("boundary tracing lost its way")
            _pop(edges, cur, chosen)
            cur = chosen
        rings.append([(x * r, y * r) for x, y in ring])
    return rings


def _pop(edges, a, b_):
    lst = edges[a]
    lst.remove(b_)
    if not lst:
        del edges[a]


def _merge_collinear(points, closed=True):
    if len(points) < 3:
        return list(points)
    pts = list(points)
    out = []
    n = len(pts)
    rng = range(n) if closed else range(1, n - 1)
    if not closed:
        out.append(pts[0])
    for k in rng:
        a = pts[k - 1] if closed or k > 0 else None
        p = pts[k]
        b_ = pts[(k + 1) % n] if closed else pts[k + 1]
        cross = (p[0] - a[0]) * (b_[1] - p[1]) - (p[1] - a[1]) * (b_[0] - p[0])
        if abs(cross) > 1e-12:
            out.append(p)
    if not closed:
        out.append(pts[-1])
    return out if len(out) >= (3 if closed else 2) else list(points)


def _perp_dist(p, a, b_):
    vx, vy = b_[0] - a[0], b_[1] - a[1]
    ll = math.hypot(vx, vy)
    if ll == 0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    return abs((p[0] - a[0]) * vy - (p[1] - a[1]) * vx) / ll


def douglas_peucker(points, eps):
    """Iterative Douglas-Peucker keeping both endpoints."""
    pts = list(points)
    if len(pts) < 3:
        return pts
    keep = [False] * len(pts)
    keep[0] = keep[-1] = True
    stack = [(0, len(pts) - 1)]
    while stack:
        a, b_ = stack.pop()
        if b_ - a < 2:
            continue
        dmax, imax = -1.0, None
        for k in range(a + 1, b_):
            d = _perp_dist(pts[k], pts[a], pts[b_])
            if d > dmax:
                dmax, imax = d, k
        if dmax > eps:
            keep[imax] = True
            stack.append((a, imax))
            stack.append((imax, b_))
    return [p for p, k_ in zip(pts, keep) if k_]


def simplify_ring(ring, eps):
    """Simplify a closed ring: anchor at the two mutually farthest of the
    collinear-merged vertices, then Douglas-Peucker each half."""
    pts = _merge_collinear(ring, closed=True)
    if len(pts) <= 4:
        return pts
    far = max(range(1, len(pts)),
              key=lambda k: (pts[k][0] - pts[0][0]) ** 2 + (pts[k][1] - pts[0][1]) ** 2)
    first = douglas_peucker(pts[:far + 1], eps)
    second = douglas_peucker(pts[far:] + [pts[0]], eps)
    return first[:-1] + second[:-1]


SIMPLIFY_EPS = 0.1  # mm


def vectorize(z: ZoneMap, eps: float = SIMPLIFY_EPS) -> ZoneLayout:
    """Trace zone polygons and cut paths out of a zone map.

    Cut paths are the interfaces between neighbouring zones after every
    non-zone cell is assigned to its geodesically nearest zone, so each
    physical cut between two nets appears exactly once, centred in its
    gap channel.
    """
    b = z.board
    r = b.resolution
    layout = ZoneLayout(board=b)
    net_ids = sorted(int(v) for v in np.unique(z.cells) if v >= 0)

    for net in net_ids:
        mask = z.cells == net
        comp, ncomp = ndimage.label(mask, structure=_FOUR)
        polys = []
        for c in range(1, ncomp + 1):
            rings = _trace_rings(comp == c, r)
            outer = None
            holes = []
            for ring in rings:
                simplified = simplify_ring(ring, eps)
                if _signed_area(ring) > 0:
                    outer = tuple(simplified)
                else:
                    holes.append(tuple(simplified))
            polys.append(ZonePolygon(outer=outer, holes=tuple(holes)))
        if polys:
            layout.zones[net] = polys

    if len(net_ids) >= 1:
        layout.cut_paths = _cut_centerlines(z, net_ids, eps)
    return layout


def _signed_area(ring):
    s = 0.0
    n = len(ring)
    for k in range(n):
        x1, y1 = ring[k]
        x2, y2 = ring[(k + 1) % n]
        s += x1 * y2 - x2 * y1
    return s / 2


def _cut_centerlines(z: ZoneMap, net_ids, eps):
    """Interfaces of the nearest-zone relabelling of the whole grid."""
    b = z.board
    r = b.resolution
    costs = np.ones(z.cells.shape)
    offsets = [(0, 1), (0, -1), (1, 0), (-1, 0)]
    dists = np.full((len(net_ids), z.ny, z.nx), np.inf)
    for k, net in enumerate(net_ids):
        starts = np.argwhere(z.cells == net)
        mcp = MCP(costs, offsets=offsets, fully_connected=False)
        d, _ = mcp.find_costs([tuple(p) for p in starts])
        dists[k] = d
    assign = np.argmin(dists, axis=0)

    # segments between horizontally/vertically adjacent cells of
    # different assignment, as cell-corner graph edges
    segs: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def join(a, b_):
        segs.setdefault(a, []).append(b_)
        segs.setdefault(b_, []).append(a)

    diff_h = assign[:, :-1] != assign[:, 1:]
    for j, i in np.argwhere(diff_h).tolist():
        join((i + 1, j), (i + 1, j + 1))  # vertical edge between (j,i),(j,i+1)
    diff_v = assign[:-1, :] != assign[1:, :]
    for j, i in np.argwhere(diff_v).tolist():
        join((i, j + 1), (i + 1, j + 1))  # horizontal edge between rows j,j+1
    for v in segs.values():
        v.sort()

    paths = []
    visited: set[tuple[tuple[int, int], tuple[int, int]]] = set()

    def take(a, b_):
        visited.add((a, b_))
        visited.add((b_, a))

    def walk(start, nxt):
        pts = [start, nxt]
        take(start, nxt)
        cur, prev = nxt, start
        while True:
            options = [q for q in segs.get(cur, [])
                       if (cur, q) not in visited]
            if not options:
                return pts, False
            if pts[0] == cur:
                return pts[:-1], True  # closed loop
            d = (cur[0] - prev[0], cur[1] - prev[1])
            straight = (cur[0] + d[0], cur[1] + d[1])
            q = straight if straight in options else options[0]
            take(cur, q)
            pts.append(q)
            prev, cur = cur, q

    # open chains first, starting from odd-degree corners (grid border ends)
    for start in sorted(segs):
        if len(segs[start]) % 2 == 1:
            for nxt in list(segs[start]):
                if (start, nxt) in visited:
                    continue
                pts, closed = walk(start, nxt)
                paths.append((pts, closed))
    for start in sorted(segs):
        for nxt in list(segs[start]):
            if (start, nxt) in visited:
                continue
            pts, closed = walk(start, nxt)
            paths.append((pts, closed))

    out = []
    for pts, closed in paths:
        mm = [(x * r, y * r) for x, y in pts]
        if closed:
            mm = simplify_ring(mm, eps)
        else:
            mm = douglas_peucker(_merge_collinear(mm, closed=False), eps)
        out.append(CutPath(points=tuple(mm), closed=closed))
    out.sort(key=lambda p: (min(p.points), len(p.points)))
    return out


# ---------------------------------------------------------------------------
# Debug dump (portable graymap variant)

_DUMP_GAP, _DUMP_OUTSIDE, _DUMP_KEEPOUT = 251, 252, 253


def dump_zonemap(z: ZoneMap) -> bytes:
    """One-line ``nx ny r`` header plus one byte per cell, row-major."""
    cells = z.cells
    if (cells > 250).any():
        raise ValidationError("net ids above 250 cannot be dumped")
    data = np.zeros(cells.shape, dtype=np.uint8)
    data[cells >= 0] = cells[cells >= 0].astype(np.uint8)
    data[cells == GAP] = _DUMP_GAP
    data[cells == OUTSIDE] = _DUMP_OUTSIDE
    data[cells == KEEPOUT] = _DUMP_KEEPOUT
    header = f"{z.nx} {z.ny} {z.board.resolution:g}\n".encode()
    return header + data.tobytes()


def load_zonemap(blob: bytes, board: Board | None = None) -> ZoneMap:
    nl = blob.index(b"\n")
    nx_s, ny_s, r_s = blob[:nl].split()
    nx, ny, r = int(nx_s), int(ny_s), float(r_s)
    raw = np.frombuffer(blob[nl + 1:], dtype=np.uint8)
    if raw.size != nx * ny:
        raise ValidationError(f"dump holds {raw.size} cells, expected {nx * ny}")
    data = raw.reshape(ny, nx).astype(np.int16)
    cells = data.copy()
    cells[data == _DUMP_GAP] = GAP
    cells[data == _DUMP_OUTSIDE] = OUTSIDE
    cells[data == _DUMP_KEEPOUT] = KEEPOUT
    if board is None:
        board = Board(width=nx * r, height=ny * r, resolution=r)
    return ZoneMap(nx, ny, cells, board)
