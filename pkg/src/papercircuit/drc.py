"""Design-rule checking over the finished zone map and layout.

The rules encode what is physically weedable and electrically sound:
isolation clearance, per-net connectivity, minimum feature width, pad
coverage and the board margin.  The pipeline's own stage errors are
strictly stronger than these rules, so a run that completed without an
error always yields a passing report; DRC exists to judge maps that
arrive from outside the pipeline (debug dumps, hand edits).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import ndimage

from .board import Board
from .partition import (ZoneMap, _FOUR, _opening_half_cells,
                        _square_structure, _strict_disk_structure,
                        check_zone_connectivity, pad_cells_mask)


class ViolationKind(Enum):
    CLEARANCE = "CLEARANCE"
    DISCONNECTED_NET = "DISCONNECTED_NET"
    THIN_FEATURE = "THIN_FEATURE"
    PAD_UNCOVERED = "PAD_UNCOVERED"
    OUT_OF_BOARD = "OUT_OF_BOARD"
    SEED_CONFLICT = "SEED_CONFLICT"


_KIND_ORDER = {k: i for i, k in enumerate(ViolationKind)}


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    location: tuple[float, float]
    net_ids: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class DrcReport:
    violations: tuple[Violation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def _blob_violations(mask: np.ndarray, b: Board, kind, net_ids, detail):
    """One violation per connected violating region, at its centroid."""
    out = []
    comp, ncomp = ndimage.label(mask, structure=np.ones((3, 3), dtype=bool))
    r = b.resolution
    for c in range(1, ncomp + 1):
        js, is_ = np.nonzero(comp == c)
        x = (is_.mean() + 0.5) * r
        y = (js.mean() + 0.5) * r
        out.append(Violation(kind, (round(x, 3), round(y, 3)), net_ids, detail))
    return out


def run_drc(z: ZoneMap, layout, pads, b: Board) -> DrcReport:
    """Aggregate all rule checks into one deterministic report."""
    violations: list[Violation] = []
    cells = z.cells
    cells_before = cells.copy()
    net_ids = sorted(int(v) for v in np.unique(cells) if v >= 0)

    # CLEARANCE: different-net cells closer than gap - 2*resolution
    r = b.resolution
    sep = _strict_disk_structure((b.gap - 2 * r) / r)
    for net in net_ids:
        mask = cells == net
        near = ndimage.binary_dilation(mask, structure=sep)
        for other in net_ids:
            if other <= net:
                continue
            clash = near & (cells == other)
            if clash.any():
                violations.extend(_blob_violations(
                    clash, b, ViolationKind.CLEARANCE, (net, other),
                    f"nets {net} and {other} closer than "
                    f"{b.gap - 2 * r:g} mm"))

    # DISCONNECTED_NET
    for net, ok in check_zone_connectivity(z, pads).items():
        if not ok:
            locs = [p.center for p in pads if p.net_id == net]
            loc = locs[0] if locs else (0.0, 0.0)
            violations.append(Violation(
                ViolationKind.DISCONNECTED_NET, loc, (net,),
                f"net {net} pads do not share one conductive zone"))

    # THIN_FEATURE: residue of the min-feature opening
    hw = _opening_half_cells(b)
    if hw > 0:
        struct = _square_structure(hw)
        for net in net_ids:
            mask = cells == net
            residue = mask & ~ndimage.binary_opening(mask, structure=struct)
            if residue.any():
                violations.extend(_blob_violations(
                    residue, b, ViolationKind.THIN_FEATURE, (net,),
                    f"net {net} features narrower than min_feature "
                    f"{b.min_feature:g} mm"))

    # PAD_UNCOVERED: a pad seed cell not carrying its net's label
    for pad in pads:
        if pad.net_id is None:
            continue
        mask = pad_cells_mask(pad, b)
        if (cells[mask] != pad.net_id).any():
            violations.append(Violation(
                ViolationKind.PAD_UNCOVERED,
                (round(pad.center[0], 3), round(pad.center[1], 3)),
                (pad.net_id,),
                f"pad {pad.part_id}.{pad.pin} not covered by net "
                f"{pad.net_id}'s zone"))

    # OUT_OF_BOARD: zone copper inside the margin band
    xs = (np.arange(z.nx) + 0.5) * r
    ys = (np.arange(z.ny) + 0.5) * r
    in_margin = ((xs < b.margin) | (xs > b.width - b.margin))[None, :] | \
                ((ys < b.margin) | (ys > b.height - b.margin))[:, None]
    stray = in_margin & (cells >= 0)
    if stray.any():
        for net in net_ids:
            m = stray & (cells == net)
            if m.any():
                violations.extend(_blob_violations(
                    m, b, ViolationKind.OUT_OF_BOARD, (net,),
                    f"net {net} copper inside the {b.margin:g} mm margin"))

    assert (cells == cells_before).all(), "DRC must not mutate its input"
    violations.sort(key=lambda v: (_KIND_ORDER[v.kind], v.location[1],
                                   v.location[0], v.net_ids))
    return DrcReport(tuple(violations))


def explain_violation(v: Violation, net_names: dict[int, str] | None = None) -> str:
    """Stable human-readable one-liner naming the rule and the fix."""
    def name(nid):
        if net_names and nid in net_names:
            return net_names[nid]
        return f"net {nid}"

    nets = " and ".join(name(n) for n in v.net_ids)
    x, y = v.location
    if v.kind is ViolationKind.CLEARANCE:
        return (f"clearance: {nets} too close near ({x:g}, {y:g}); "
                f"move the parts apart")
    if v.kind is ViolationKind.DISCONNECTED_NET:
        return (f"{nets} is disconnected near ({x:g}, {y:g}); "
                f"move its parts closer together")
    if v.kind is ViolationKind.THIN_FEATURE:
        return (f"thin feature: {nets} near ({x:g}, {y:g}), {v.detail}; "
                f"widen the zone")
    if v.kind is ViolationKind.PAD_UNCOVERED:
        return (f"pad uncovered: {nets} near ({x:g}, {y:g}); "
                f"check pad placement and clearances")
    if v.kind is ViolationKind.OUT_OF_BOARD:
        return (f"out of board: {nets} copper in the margin near "
                f"({x:g}, {y:g}); pull the layout inward")
    return f"seed conflict: {nets} near ({x:g}, {y:g}); parts are too close"


def serialize_report(report: DrcReport, net_names: dict[int, str] | None = None) -> str:
    """One violation per line: ``KIND x y nets... detail``."""
    lines = [f"pass {'true' if report.passed else 'false'}"]
    for v in report.violations:
        nets = ",".join(str(n) for n in v.net_ids)
        lines.append(f"{v.kind.value} {v.location[0]:.3f} {v.location[1]:.3f} "
                     f"{nets} {explain_violation(v, net_names)}")
    return "\n".join(lines) + "\n"
