"""Part positions and rotations: manual placement files and annealing.

The netlist format carries no geometry, so positions always come either
from a placement file (``part_id x_mm y_mm rot`` lines) or from the
simulated-annealing auto-placer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .board import Board
from .errors import (BadRotation, Infeasible, MissingPlacement, ParseError,
                     UnknownPart)
from .footprint import FootprintLibrary, courtyard_rect, instantiate_pads

CARDINALS = (0, 90, 180, 270)

# Penalty weights; large enough that any feasible layout beats any
# infeasible one at desk scales.
LAMBDA_OVERLAP = 10.0
LAMBDA_BOARD = 100.0


class PlacementSet(dict):
    """part_id -> (x_mm, y_mm, rot); rot restricted to the four cardinals."""

    def __setitem__(self, part_id, value):
        x, y, rot = value
        if rot not in CARDINALS:
            raise BadRotation(f"rotation {rot} not in {CARDINALS}")
        super().__setitem__(part_id, (float(x), float(y), int(rot)))


def snap_01(v: float) -> float:
    """Snap to the 0.1 mm grid used by files and the service."""
    return round(round(v * 10) / 10, 1)


def load_placement(text: str, n) -> PlacementSet:
    """Parse a placement file; every entry must name a part of ``n``."""
    known = {p.id for p in n.parts}
    pl = PlacementSet()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ParseError(f"expected 'part_id x y rot'", line=lineno, column=1)
        part_id, xs, ys, rs = fields
        if part_id not in known:
            raise UnknownPart(f"part {part_id!r} not in netlist")
        try:
            x, y = float(xs), float(ys)
            rot = int(rs)
        except ValueError as e:
            raise ParseError(f"bad number in placement line", line=lineno, column=1) from e
        if rot not in CARDINALS:
            raise BadRotation(f"rotation {rot} not in {CARDINALS} (line {lineno})")
        pl[part_id] = (snap_01(x), snap_01(y), rot)
    return pl


def save_placement(pl: PlacementSet) -> str:
    lines = [f"{pid} {snap_01(x):g} {snap_01(y):g} {rot}"
             for pid, (x, y, rot) in sorted(pl.items())]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PlacementCost:
    wirelength: float
    overlap: float
    out_of_board: float

    @property
    def total(self) -> float:
        return (self.wirelength + LAMBDA_OVERLAP * self.overlap
                + LAMBDA_BOARD * self.out_of_board)

    @property
    def feasible(self) -> bool:
        return self.overlap == 0.0 and self.out_of_board == 0.0


def _rect_intersection(a, b) -> float:
    w = min(a[2], b[2]) - max(a[0], b[0])
    h = min(a[3], b[3]) - max(a[1], b[1])
    return w * h if w > 0 and h > 0 else 0.0


def _expanded_courtyards(n, lib: FootprintLibrary, b: Board, pl):
    """Courtyards grown by gap/2 so carving has room between neighbours."""
    halo = b.gap / 2
    rects = {}
    for part in n.parts:
        if part.id not in pl:
            raise MissingPlacement(part.id)
        x, y, rot = pl[part.id]
        x0, y0, x1, y1 = courtyard_rect(lib[part.footprint_key], x, y, rot)
        rects[part.id] = (x0 - halo, y0 - halo, x1 + halo, y1 + halo)
    return rects


def placement_cost(n, lib: FootprintLibrary, b: Board, pl) -> PlacementCost:
    pads = instantiate_pads(n, lib, pl)
    by_net: dict[int, list[tuple[float, float]]] = {}
    for pad in pads:
        if pad.net_id is not None:
            by_net.setdefault(pad.net_id, []).append(pad.center)
    wirelength = 0.0
    for centers in by_net.values():
        xs = [c[0] for c in centers]
        ys = [c[1] for c in centers]
        wirelength += (max(xs) - min(xs)) + (max(ys) - min(ys))

    rects = _expanded_courtyards(n, lib, b, pl)
    ids = sorted(rects)
    overlap = 0.0
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            overlap += _rect_intersection(rects[ids[i]], rects[ids[j]])

    ux0, uy0, ux1, uy1 = b.usable_rect()
    out = 0.0
    for part in n.parts:
        x, y, rot = pl[part.id]
        x0, y0, x1, y1 = courtyard_rect(lib[part.footprint_key], x, y, rot)
        area = (x1 - x0) * (y1 - y0)
        inside = _rect_intersection((x0, y0, x1, y1), (ux0, uy0, ux1, uy1))
        out += area - inside
    return PlacementCost(wirelength, overlap, max(out, 0.0))


@dataclass(frozen=True)
class PlacementViolation:
    kind: str  # "OVERLAP" | "OUT_OF_BOARD"
    part_ids: tuple[str, ...]
    area: float


def check_overlaps(n, lib: FootprintLibrary, b: Board, pl) -> list[PlacementViolation]:
    """One violation per intersecting expanded-courtyard pair and per
    courtyard leaving the board minus margin."""
    rects = _expanded_courtyards(n, lib, b, pl)
    out: list[PlacementViolation] = []
    ids = sorted(rects)
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            area = _rect_intersection(rects[ids[i]], rects[ids[j]])
            if area > 0:
                out.append(PlacementViolation("OVERLAP", (ids[i], ids[j]), area))
    ux0, uy0, ux1, uy1 = b.usable_rect()
    for part in n.parts:
        x, y, rot = pl[part.id]
        r = courtyard_rect(lib[part.footprint_key], x, y, rot)
        area = (r[2] - r[0]) * (r[3] - r[1]) - _rect_intersection(r, (ux0, uy0, ux1, uy1))
        if area > 1e-12:
            out.append(PlacementViolation("OUT_OF_BOARD", (part.id,), area))
    return out


# ---------------------------------------------------------------------------
# Simulated annealing

COOLING = 0.95
MOVES_PER_TEMP = 200
STOP_FRACTION = 1e-3
MOVE_GRID = 1.0  # mm; integer-grid candidates keep runs bit-identical


def _part_dims(lib, part, rot):
    w, h = lib[part.footprint_key].courtyard
    return (h, w) if rot in (90, 270) else (w, h)


def _shelf_initial(n, lib, b: Board) -> PlacementSet:
    """Deterministic row packing with gap halos; feasible whenever it fits."""
    halo = b.gap / 2
    ux0, uy0, ux1, uy1 = b.usable_rect()
    pl = PlacementSet()
    x = ux0 + halo
    y = uy0 + halo
    row_h = 0.0
    for part in sorted(n.parts, key=lambda p: p.id):
        w, h = _part_dims(lib, part, 0)
        if x + w + halo > ux1 and x > ux0 + halo:
            x = ux0 + halo
            y += row_h + b.gap
            row_h = 0.0
        if x + w + halo > ux1 or y + h + halo > uy1:
            raise Infeasible("parts do not fit on the board with gap halos")
        cx = round(x + w / 2)
        cy = round(y + h / 2)
        # keep the rounded center in-board
        cx = min(max(cx, ux0 + w / 2), ux1 - w / 2)
        cy = min(max(cy, uy0 + h / 2), uy1 - h / 2)
        pl[part.id] = (cx, cy, 0)
        x += w + b.gap
        row_h = max(row_h, h)
    return pl


def _random_move(rng: random.Random, n, lib, b: Board, pl: PlacementSet):
    """Mutate ``pl`` in place; returns an undo closure."""
    ids = sorted(pl)
    kind = rng.randrange(3) if len(ids) > 1 else rng.randrange(2)
    if kind == 0:  # translate, snapped to the move grid
        pid = ids[rng.randrange(len(ids))]
        x, y, rot = pl[pid]
        dx = rng.randint(-10, 10) * MOVE_GRID
        dy = rng.randint(-10, 10) * MOVE_GRID
        w, h = _part_dims(lib, n.part_by_id(pid), rot)
        ux0, uy0, ux1, uy1 = b.usable_rect()
        nx = min(max(x + dx, ux0 + w / 2), ux1 - w / 2)
        ny = min(max(y + dy, uy0 + h / 2), uy1 - h / 2)
        pl[pid] = (nx, ny, rot)
        return lambda: pl.__setitem__(pid, (x, y, rot))
    if kind == 1:  # rotate +-90
        pid = ids[rng.randrange(len(ids))]
        x, y, rot = pl[pid]
        nrot = (rot + rng.choice((90, 270))) % 360
        pl[pid] = (x, y, nrot)
        return lambda: pl.__setitem__(pid, (x, y, rot))
    a, bid = rng.sample(ids, 2)  # swap two parts
    pa, pb = pl[a], pl[bid]
    pl[a] = (pb[0], pb[1], pa[2])
    pl[bid] = (pa[0], pa[1], pb[2])
    return lambda: (pl.__setitem__(a, pa), pl.__setitem__(bid, pb))


def auto_place(n, lib: FootprintLibrary, b: Board, seed: int) -> PlacementSet:
    """Best-cost feasible placement found by simulated annealing.

    Deterministic for a fixed seed.  Raises Infeasible before annealing
    when the parts cannot fit at all.
    """
    halo_area = sum((lib[p.footprint_key].courtyard[0] + b.gap)
                    * (lib[p.footprint_key].courtyard[1] + b.gap)
                    for p in n.parts)
    ux0, uy0, ux1, uy1 = b.usable_rect()
    if halo_area > (ux1 - ux0) * (uy1 - uy0):
        raise Infeasible("total courtyard area with gap halos exceeds the board")

    if len(n.parts) == 1:
        pl = PlacementSet()
        pl[n.parts[0].id] = (b.width / 2, b.height / 2, 0)
        return pl

    rng = random.Random(seed)
    pl = _shelf_initial(n, lib, b)
    cost = placement_cost(n, lib, b, pl).total
    best = PlacementSet(pl)
    best_cost = cost

    # Initial temperature from the mean |delta cost| of probe moves.
    deltas = []
    for _ in range(100):
        undo = _random_move(rng, n, lib, b, pl)
        deltas.append(abs(placement_cost(n, lib, b, pl).total - cost))
        undo()
    t0 = max(sum(deltas) / len(deltas), 1e-6)

    t = t0
    while t > STOP_FRACTION * t0:
        for _ in range(MOVES_PER_TEMP):
            undo = _random_move(rng, n, lib, b, pl)
            c = placement_cost(n, lib, b, pl)
            if c.total <= cost or rng.random() < _accept_prob(c.total - cost, t):
                cost = c.total
                if c.feasible and c.total < best_cost:
                    best = PlacementSet(pl)
                    best_cost = c.total
            else:
                undo()
        t *= COOLING

    if not placement_cost(n, lib, b, best).feasible:
        raise Infeasible("annealing found no feasible placement")
    return best


def _accept_prob(delta: float, t: float) -> float:
    import math

    return math.exp(-delta / t) if t > 0 else 0.0
