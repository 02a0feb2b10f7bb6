"""Fabrication file emission: cut SVG, fine-tape template, raster preview.

Both workflows fabricate the same circuit: the fine-tape template's
tape-guide centerlines are exactly the vinyl-cut paths, and the tape
corridors are those paths stroked at the tape width.  Exports are pure
functions, so identical inputs give byte-identical documents.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np
from PIL import Image

from .errors import ModeMismatch, TapeWidthMismatch
from .partition import GAP, OUTSIDE, ZoneLayout, ZoneMap

CUT_STYLE = "fill:none;stroke:#000;stroke-width:0.1"
ZONE_FILL = "#f0c070"
PEELABLE_NOTE = ("fine-tape workflow: the top conductive layer must be easily "
                 "peelable (copper foil tape works; conductive fabric tape "
                 "does not)")


class ExportMode(Enum):
    VINYL_CUT = "cut"
    FINE_TAPE = "finetape"


@dataclass(frozen=True)
class ExportOptions:
    mode: ExportMode
    tape_width: float = 0.0  # FINE_TAPE only
    include_labels: bool = False
    include_registration_marks: bool = False

    def __post_init__(self):
        if self.mode is ExportMode.FINE_TAPE and self.tape_width <= 0:
            raise TapeWidthMismatch("fine-tape export needs a positive tape width")


def _f(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _path_d(points, closed: bool) -> str:
    d = "M " + " L ".join(f"{_f(x)} {_f(y)}" for x, y in points)
    return d + " Z" if closed else d


def _svg_open(board) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(board.width)}mm" '
        f'height="{_f(board.height)}mm" '
        f'viewBox="0 0 {_f(board.width)} {_f(board.height)}">',
    ]


def _registration_marks(board) -> list[str]:
    # three 5 mm L-marks for aligning print-then-cut workflows
    w, h, a = board.width, board.height, 5.0
    corners = [((0, 0), (a, 0), (0, a)), ((w, 0), (w - a, 0), (w, a)),
               ((0, h), (a, h), (0, h - a))]
    out = []
    for corner, ex, ey in corners:
        out.append(f'<path d="M {_f(ex[0])} {_f(ex[1])} L {_f(corner[0])} '
                   f'{_f(corner[1])} L {_f(ey[0])} {_f(ey[1])}" '
                   f'style="{CUT_STYLE}"/>')
    return out


def _sorted_cut_paths(layout: ZoneLayout):
    return sorted(layout.cut_paths,
                  key=lambda p: (min((y, x) for x, y in p.points), len(p.points)))


def export_cut_svg(layout: ZoneLayout, opts: ExportOptions) -> str:
    """Stroke-only cut paths plus the board outline, for cutter software."""
    if opts.mode is not ExportMode.VINYL_CUT:
        raise ModeMismatch("export_cut_svg requires VINYL_CUT options")
    b = layout.board
    lines = _svg_open(b)
    for path in _sorted_cut_paths(layout):
        lines.append(f'<path d="{_path_d(path.points, path.closed)}" '
                     f'style="{CUT_STYLE}"/>')
    if opts.include_registration_marks:
        lines.extend(_registration_marks(b))
    lines.append(f'<path d="{_path_d(((0, 0), (b.width, 0), (b.width, b.height), (0, b.height)), True)}" '
                 f'style="{CUT_STYLE}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def export_finetape_svg(z: ZoneMap, layout: ZoneLayout, opts: ExportOptions) -> str:
    """Printable template: zone fills, white tape corridors of the tape
    width, and dashed centerline guides identical to the cut paths."""
    if opts.mode is not ExportMode.FINE_TAPE:
        raise ModeMismatch("export_finetape_svg requires FINE_TAPE options")
    b = layout.board
    if abs(opts.tape_width - b.gap) > 1e-9:
        raise TapeWidthMismatch(
            f"tape width {opts.tape_width:g} mm differs from board gap "
            f"{b.gap:g} mm; regenerate the layout with gap = tape width")
    lines = _svg_open(b)
    lines.append(f"<!-- {PEELABLE_NOTE} -->")
    for net in sorted(layout.zones):
        for poly in layout.zones[net]:
            d = _path_d(poly.outer, True)
            for hole in poly.holes:
                d += " " + _path_d(hole, True)
            lines.append(f'<path d="{d}" fill-rule="evenodd" '
                         f'style="fill:{ZONE_FILL};stroke:none"/>')
    cut_paths = _sorted_cut_paths(layout)
    for path in cut_paths:  # corridors: unfilled white strokes at tape width
        lines.append(f'<path d="{_path_d(path.points, path.closed)}" '
                     f'style="fill:none;stroke:#fff;'
                     f'stroke-width:{_f(opts.tape_width)}"/>')
    for path in cut_paths:  # tape-laying guides on the corridor centerlines
        lines.append(f'<path d="{_path_d(path.points, path.closed)}" '
                     f'style="fill:none;stroke:#000;stroke-width:0.1;'
                     f'stroke-dasharray:2,1"/>')
    if opts.include_labels:
        for net in sorted(layout.zones):
            for poly in layout.zones[net]:
                cx = sum(p[0] for p in poly.outer) / len(poly.outer)
                cy = sum(p[1] for p in poly.outer) / len(poly.outer)
                lines.append(f'<text x="{_f(cx)}" y="{_f(cy)}" '
                             f'font-size="3" fill="#555">net {net}</text>')
    if opts.include_registration_marks:
        lines.extend(_registration_marks(b))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# Fixed palette; assignment is net id modulo the table, so colors are
# stable across runs and maps.
_PALETTE = [
    (230, 120, 30), (60, 140, 220), (70, 180, 90), (200, 70, 160),
    (240, 190, 40), (130, 90, 200), (90, 200, 200), (200, 100, 80),
    (120, 160, 60), (170, 120, 220),
]
_GAP_RGB = (255, 255, 255)
_OUTSIDE_RGB = (160, 160, 160)


def net_color(net_id: int) -> tuple[int, int, int]:
    return _PALETTE[net_id % len(_PALETTE)]


def export_zone_preview(z: ZoneMap) -> bytes:
    """PNG with one pixel per cell: net colors, GAP white, OUTSIDE gray."""
    rgb = np.zeros((z.ny, z.nx, 3), dtype=np.uint8)
    rgb[z.cells == GAP] = _GAP_RGB
    rgb[z.cells == OUTSIDE] = _OUTSIDE_RGB
    for net in (int(v) for v in np.unique(z.cells) if v >= 0):
        rgb[z.cells == net] = net_color(net)
    buf = io.BytesIO()
    Image.fromarray(rgb, "RGB").save(buf, format="PNG")
    return buf.getvalue()
