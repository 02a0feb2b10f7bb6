"""Simulated-annealing placement versus random sampling.

The placer minimizes half-perimeter wirelength while keeping gap-wide
halos between courtyards and everything inside the board margin. This
script races it against plain rejection sampling to show the annealer
is doing real work, then runs the placed chain through the compiler.
"""

import importlib.resources as resources
import random

from papercircuit import Board, builtin_library, parse_netlist_xml
from papercircuit.pipeline import convert_netlist
from papercircuit.placement import (CARDINALS, PlacementSet, auto_place,
                                    placement_cost, snap_01)

fixtures = resources.files("papercircuit") / "fixtures"
chain = parse_netlist_xml((fixtures / "chain.xml").read_text())
board = Board()
lib = builtin_library()

placed = auto_place(chain, lib, board, seed=0)
cost = placement_cost(chain, lib, board, placed)
print("annealed placement:")
for pid, (x, y, rot) in sorted(placed.items()):
    print(f"  {pid} at ({x:5.1f}, {y:5.1f}) rot {rot}")
print(f"  wirelength {cost.wirelength:.2f} mm, feasible={cost.feasible}")

# Rejection sampling baseline: draw feasible placements uniformly and
# keep the best one.
rng = random.Random(99)
best = None
for _ in range(1000):
    pl = PlacementSet()
    for part in chain.parts:
        rot = rng.choice(CARDINALS)
        w, h = lib[part.footprint_key].courtyard
        if rot in (90, 270):
            w, h = h, w
        x0, y0, x1, y1 = board.usable_rect()
        pl[part.id] = (snap_01(rng.uniform(x0 + w / 2, x1 - w / 2)),
                       snap_01(rng.uniform(y0 + h / 2, y1 - h / 2)), rot)
    c = placement_cost(chain, lib, board, pl)
    if c.feasible and (best is None or c.total < best):
        best = c.total
print(f"best of 1000 random feasible placements: {best:.2f} mm "
      f"(annealed: {cost.total:.2f} mm)")

result = convert_netlist(chain, lib, board, placed)
print(f"converted: {len(result.layout.zones)} zones, "
      f"DRC {'clean' if result.report.passed else 'violations'}")
