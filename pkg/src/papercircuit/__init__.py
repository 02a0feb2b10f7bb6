"""papercircuit: compile circuit descriptions into subtractive
paper-circuit layouts of large conductive zones separated by narrow cut
channels, validate them, and emit vinyl-cutter and fine-tape
fabrication files."""

from .board import Board
from .drc import DrcReport, Violation, ViolationKind, explain_violation, run_drc
from .export import (ExportMode, ExportOptions, export_cut_svg,
                     export_finetape_svg, export_zone_preview)
from .footprint import (Attach, Footprint, FootprintLibrary, PadInstance,
                        PadKind, PadShape, builtin_library,
                        instantiate_pads, load_footprint_library)
from .netmodel import (Net, Netlist, Part, PinRef, TraceLayer,
                       parse_netlist_xml, parse_trace_layer, validate_netlist)
from .partition import (SeedGrid, ZoneLayout, ZoneMap, carve_gaps,
                        check_zone_connectivity, dump_zonemap,
                        enforce_min_feature, geodesic_partition, load_zonemap,
                        rasterize_pads, rasterize_traces, vectorize)
from .pipeline import convert_netlist, convert_traces
from .placement import (PlacementCost, PlacementSet, auto_place,
                        check_overlaps, load_placement, placement_cost,
                        save_placement)

__version__ = "0.1.0"
