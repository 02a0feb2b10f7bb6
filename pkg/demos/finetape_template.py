"""Fine-tape fabrication template for the cutterless workflow.

Instead of cutting channels out of the foil, you can lay narrow masking
tape along the channel centerlines, cover the whole sheet with foil,
and peel the tape to lift the foil above it. The template this script
writes is printed at 1:1: orange zones, white corridors at the tape
width, and dashed guides showing exactly where the tape goes. The
guides are, by construction, the same polylines a vinyl cutter would
cut.

Outputs land in demos/out/finetape/.
"""

import importlib.resources as resources
from pathlib import Path

from papercircuit import (Board, ExportMode, ExportOptions, builtin_library,
                          export_cut_svg, export_finetape_svg,
                          parse_netlist_xml)
from papercircuit.pipeline import convert_netlist
from papercircuit.placement import load_placement

TAPE_WIDTH = 1.0  # mm; must equal the board gap, the compiler enforces it

out_dir = Path(__file__).parent / "out" / "finetape"
out_dir.mkdir(parents=True, exist_ok=True)

fixtures = resources.files("papercircuit") / "fixtures"
netlist = parse_netlist_xml((fixtures / "rgb_led.xml").read_text())
placement = load_placement((fixtures / "rgb_led_placement.txt").read_text(),
                           netlist)
board = Board(gap=TAPE_WIDTH)

result = convert_netlist(netlist, builtin_library(), board, placement)
assert result.report.passed, "fix DRC before printing a template"

tape = export_finetape_svg(
    result.zone_map, result.layout,
    ExportOptions(ExportMode.FINE_TAPE, tape_width=TAPE_WIDTH,
                  include_labels=True, include_registration_marks=True))
cut = export_cut_svg(result.layout, ExportOptions(ExportMode.VINYL_CUT))

(out_dir / "finetape.svg").write_text(tape)
(out_dir / "cut.svg").write_text(cut)

n_guides = tape.count("stroke-dasharray")
print(f"{n_guides} tape guides at {TAPE_WIDTH:g} mm width")
print(f"wrote finetape.svg and cut.svg to {out_dir}")
print("both files describe the same circuit; pick your workflow")
