"""From a freehand trace sketch to space-filling zones.

A trace layer is how you would draw a circuit in Inkscape: a few fat
strokes, each tagged with a data-net attribute. The compiler inflates
every stroke into the largest zone it can claim, so the final board is
almost entirely conductor with narrow cut channels between nets.

Outputs land in demos/out/sketch/.
"""

from pathlib import Path

from papercircuit import Board, export_zone_preview, parse_trace_layer
from papercircuit.pipeline import convert_traces

SKETCH = """
<svg xmlns="http://www.w3.org/2000/svg" width="80mm" height="50mm"
     viewBox="0 0 80 50">
  <!-- a supply rail across the top, ground along the bottom, and a
       signal elbow between them -->
  <path d="M 8 10 L 72 10" stroke-width="3" data-net="vcc"/>
  <path d="M 8 40 L 72 40" stroke-width="3" data-net="gnd"/>
  <path d="M 12 25 L 50 25 L 50 32" stroke-width="2.5" data-net="sig"/>
</svg>
"""

out_dir = Path(__file__).parent / "out" / "sketch"
out_dir.mkdir(parents=True, exist_ok=True)

layer = parse_trace_layer(SKETCH)
board = Board(width=80, height=50)
result = convert_traces(layer, board)

for name, net_id in sorted(result.net_index.items()):
    cells = int((result.zone_map.cells == net_id).sum())
    area = cells * board.resolution ** 2
    ok = "ok" if result.connectivity[net_id] else "SPLIT"
    print(f"net {name!r}: {area:7.1f} mm^2 of copper, {ok}")
print("DRC:", "clean" if result.report.passed else "violations")

# The preview makes the zone inflation obvious: three thin strokes have
# become three regions covering the whole usable sheet.
(out_dir / "preview.png").write_bytes(export_zone_preview(result.zone_map))
print(f"wrote preview.png to {out_dir}")
