"""Independent brute-force oracles used to check the pipeline.

Each oracle is a direct transliteration of a definition, kept free of
the implementation path it checks.
"""

from collections import deque

import numpy as np

from papercircuit.partition import EMPTY, GAP, KEEPOUT, OUTSIDE


def bfs_distance(cells: np.ndarray, net: int) -> np.ndarray:
    """4-connected unit-step geodesic distance to the nearest seed of
    ``net``, avoiding KEEPOUT.  Plain deque BFS."""
    ny, nx = cells.shape
    dist = np.full((ny, nx), np.inf)
    q = deque()
    for j, i in np.argwhere(cells == net):
        dist[j, i] = 0
        q.append((j, i))
    while q:
        j, i = q.popleft()
        d = dist[j, i] + 1
        for dj, di in ((0, 1), (0, -1), (1, 0), (-1, 0)):
            jj, ii = j + dj, i + di
            if 0 <= jj < ny and 0 <= ii < nx and cells[jj, ii] != KEEPOUT \
                    and d < dist[jj, ii]:
                dist[jj, ii] = d
                q.append((jj, ii))
    return dist


def dijkstra_partition_oracle(cells: np.ndarray) -> np.ndarray:
    """Per-cell label: the net minimizing (geodesic distance, net id);
    unreachable and KEEPOUT cells become GAP."""
    nets = sorted(int(v) for v in np.unique(cells) if v >= 0)
    ny, nx = cells.shape
    labels = np.full((ny, nx), GAP, dtype=np.int16)
    best = np.full((ny, nx), np.inf)
    for net in nets:  # ascending ids: strict improvement keeps lower id on ties
        d = bfs_distance(cells, net)
        win = d < best
        labels[win] = net
        best[win] = d[win]
    labels[~np.isfinite(best)] = GAP
    labels[cells == KEEPOUT] = GAP
    return labels


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def connectivity_oracle(cells: np.ndarray, seed_masks: dict[int, np.ndarray]):
    """Union-find over same-label 4-adjacency; True iff all of a net's
    seed cells share one root."""
    ny, nx = cells.shape
    uf = UnionFind(ny * nx)
    for j in range(ny):
        for i in range(nx):
            if cells[j, i] < 0:
                continue
            if i + 1 < nx and cells[j, i + 1] == cells[j, i]:
                uf.union(j * nx + i, j * nx + i + 1)
            if j + 1 < ny and cells[j + 1, i] == cells[j, i]:
                uf.union(j * nx + i, (j + 1) * nx + i)
    out = {}
    for net, mask in seed_masks.items():
        idx = [j * nx + i for j, i in np.argwhere(mask)]
        if not idx:
            continue
        if any(cells[divmod(k, nx)] != net for k in idx):
            out[net] = False
            continue
        roots = {uf.find(k) for k in idx}
        out[net] = len(roots) == 1
    return out


def clearance_pairs_oracle(cells: np.ndarray, min_dist_cells: float):
    """All pairs of differently-labeled net cells with center distance
    strictly below ``min_dist_cells``.  Brute-force double scan."""
    pts = np.argwhere(cells >= 0)
    pairs = []
    for a in range(len(pts)):
        ja, ia = pts[a]
        la = cells[ja, ia]
        for b_ in range(a + 1, len(pts)):
            jb, ib = pts[b_]
            if cells[jb, ib] == la:
                continue
            if (ja - jb) ** 2 + (ia - ib) ** 2 < min_dist_cells ** 2 - 1e-9:
                pairs.append(((ja, ia), (jb, ib)))
    return pairs


def point_in_ring(x, y, ring) -> bool:
    """Even-odd ray casting."""
    inside = False
    n = len(ring)
    for k in range(n):
        x1, y1 = ring[k]
        x2, y2 = ring[(k + 1) % n]
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < xc:
                inside = not inside
    return inside


def rasterize_layout_oracle(layout, board) -> np.ndarray:
    """Re-rasterize vectorized zones at the board resolution by
    cell-center point-in-polygon tests."""
    cells = np.full((board.ny, board.nx), GAP, dtype=np.int16)
    r = board.resolution
    for net, polys in layout.zones.items():
        for poly in polys:
            xs = [p[0] for p in poly.outer]
            ys = [p[1] for p in poly.outer]
            i0 = max(int(min(xs) / r) - 1, 0)
            i1 = min(int(max(xs) / r) + 2, board.nx)
            j0 = max(int(min(ys) / r) - 1, 0)
            j1 = min(int(max(ys) / r) + 2, board.ny)
            for j in range(j0, j1):
                y = (j + 0.5) * r
                for i in range(i0, i1):
                    x = (i + 0.5) * r
                    if point_in_ring(x, y, poly.outer) and \
                            not any(point_in_ring(x, y, h) for h in poly.holes):
                        cells[j, i] = net
    xs = (np.arange(board.nx) + 0.5) * r
    ys = (np.arange(board.ny) + 0.5) * r
    in_margin = ((xs < board.margin) | (xs > board.width - board.margin))[None, :] | \
                ((ys < board.margin) | (ys > board.height - board.margin))[:, None]
    cells[in_margin] = OUTSIDE
    return cells


def rasterize_layout_mpl(layout, board) -> np.ndarray:
    """Re-rasterize vectorized zones via matplotlib's point-in-polygon,
    for maps too large for the pure-python oracle."""
    from matplotlib.path import Path

    cells = np.full((board.ny, board.nx), GAP, dtype=np.int16)
    r = board.resolution
    xs = (np.arange(board.nx) + 0.5) * r
    ys = (np.arange(board.ny) + 0.5) * r
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    for net, polys in layout.zones.items():
        for poly in polys:
            inside = Path(poly.outer).contains_points(pts)
            for hole in poly.holes:
                inside &= ~Path(hole).contains_points(pts)
            cells[inside.reshape(board.ny, board.nx)] = net
    in_margin = ((xs < board.margin) | (xs > board.width - board.margin))[None, :] | \
                ((ys < board.margin) | (ys > board.height - board.margin))[:, None]
    cells[in_margin] = OUTSIDE
    return cells


def hausdorff(points_a, points_b) -> float:
    """Symmetric Hausdorff distance between two point sets, where each
    polyline is densified along its segments first."""
    a = _densify(points_a)
    b = _densify(points_b)
    return max(_directed(a, b), _directed(b, a))


def _densify(points, step=0.05):
    out = []
    pts = list(points)
    for p, q in zip(pts, pts[1:]):
        seg = np.hypot(q[0] - p[0], q[1] - p[1])
        n = max(int(seg / step), 1)
        for k in range(n):
            t = k / n
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    out.append(pts[-1])
    return np.array(out)


def _directed(a, b) -> float:
    worst = 0.0
    for p in a:
        d = np.min(np.hypot(b[:, 0] - p[0], b[:, 1] - p[1]))
        worst = max(worst, d)
    return worst
