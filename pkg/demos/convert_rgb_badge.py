"""Convert the bundled RGB-LED badge into a cuttable layout.

Walks the whole pipeline by hand instead of going through the CLI, so
each intermediate product can be inspected: pads -> seed grid ->
partition -> carved zone map -> polygons -> fabrication files.

Outputs land in demos/out/rgb_badge/.
"""

import importlib.resources as resources
from pathlib import Path

from papercircuit import (Board, ExportMode, ExportOptions, builtin_library,
                          export_cut_svg, export_zone_preview,
                          parse_netlist_xml)
from papercircuit.drc import serialize_report
from papercircuit.pipeline import convert_netlist
from papercircuit.placement import load_placement

out_dir = Path(__file__).parent / "out" / "rgb_badge"
out_dir.mkdir(parents=True, exist_ok=True)

fixtures = resources.files("papercircuit") / "fixtures"
netlist = parse_netlist_xml((fixtures / "rgb_led.xml").read_text())
placement = load_placement((fixtures / "rgb_led_placement.txt").read_text(),
                           netlist)

# A 100 x 70 mm sheet of copper-foil-on-paper, 0.2 mm raster, 1 mm cut
# channels, nothing narrower than 2 mm anywhere.
board = Board()
lib = builtin_library()

result = convert_netlist(netlist, lib, board, placement)

print(f"parts: {len(netlist.parts)}, nets: {len(netlist.nets)}")
print(f"zones: {len(result.layout.zones)}, "
      f"cut paths: {len(result.layout.cut_paths)}")
for net in netlist.nets:
    state = "connected" if result.connectivity[net.id] else "SPLIT"
    n_polys = len(result.layout.zones.get(net.id, []))
    print(f"  net {net.id} {net.name:6s} -> {n_polys} polygon(s), {state}")
print("DRC:", "clean" if result.report.passed else
      f"{len(result.report.violations)} violation(s)")

(out_dir / "cut.svg").write_text(
    export_cut_svg(result.layout, ExportOptions(ExportMode.VINYL_CUT)))
(out_dir / "drc.txt").write_text(
    serialize_report(result.report, {n.id: n.name for n in netlist.nets}))
(out_dir / "preview.png").write_bytes(export_zone_preview(result.zone_map))
print(f"wrote cut.svg, drc.txt, preview.png to {out_dir}")
