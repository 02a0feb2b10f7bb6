"""End-to-end conversion shared by the CLI and the HTTP service."""

from __future__ import annotations

from dataclasses import dataclass, field

from .board import Board
from .drc import DrcReport, run_drc
from .errors import ValidationError
from .footprint import FootprintLibrary, instantiate_pads
from .netmodel import Netlist, TraceLayer, validate_netlist
from .partition import (SeedGrid, ZoneLayout, ZoneMap, _seed_cells_connected,
                        carve_gaps, check_zone_connectivity,
                        enforce_min_feature, geodesic_partition,
                        rasterize_pads, rasterize_traces, vectorize)


@dataclass
class ConvertResult:
    pads: list
    seeds: SeedGrid
    zone_map: ZoneMap
    layout: ZoneLayout
    report: DrcReport
    connectivity: dict[int, bool] = field(default_factory=dict)


def convert_netlist(n: Netlist, lib: FootprintLibrary, b: Board,
                    pl) -> ConvertResult:
    """Run the full netlist-driven pipeline.

    Raises on structural failures (unknown footprints, seed conflicts,
    features too thin); rule violations that leave the layout
    producible land in the DRC report instead.
    """
    blocking = [i for i in validate_netlist(n, lib) if i.blocking]
    if blocking:
        raise ValidationError("; ".join(i.message for i in blocking))
    pads = instantiate_pads(n, lib, pl)
    seeds = rasterize_pads(pads, b)
    labels = geodesic_partition(seeds)
    carved = carve_gaps(labels, b, seeds)
    refined = enforce_min_feature(carved, b, seeds)
    connectivity = check_zone_connectivity(refined, pads)
    layout = vectorize(refined)
    report = run_drc(refined, layout, pads, b)
    return ConvertResult(pads=pads, seeds=seeds, zone_map=refined,
                         layout=layout, report=report,
                         connectivity=connectivity)


@dataclass
class TraceConvertResult:
    net_index: dict[str, int]
    seeds: SeedGrid
    zone_map: ZoneMap
    layout: ZoneLayout
    report: DrcReport
    connectivity: dict[int, bool] = field(default_factory=dict)


def convert_traces(t: TraceLayer, b: Board) -> TraceConvertResult:
    """Trace-layer-driven pipeline.

    Net ids are assigned to trace net names in sorted order.  The
    connectivity map records, per net, whether its input geometry ended
    up in a single conductive component.
    """
    net_index = {name: i for i, name in enumerate(sorted(t.nets))}
    seeds = rasterize_traces(t, b, net_index)
    labels = geodesic_partition(seeds)
    carved = carve_gaps(labels, b, seeds)
    refined = enforce_min_feature(carved, b, seeds)
    connectivity = {
        net_index[name]: _seed_cells_connected(
            refined.cells, net_index[name], seeds.cells == net_index[name])
        for name in sorted(t.nets)
    }
    layout = vectorize(refined)
    report = run_drc(refined, layout, [], b)
    return TraceConvertResult(net_index=net_index, seeds=seeds,
                              zone_map=refined, layout=layout, report=report,
                              connectivity=connectivity)
