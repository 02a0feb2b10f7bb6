"""Component pad geometry, attachment styles and instantiation.

Built-in footprints cover the parts a staple-and-tape paper circuit
typically uses: axial resistors, 5 mm LEDs, a 4-pin RGB LED, DIP
sockets, a coin-cell tape clip and a slide switch.  Stapler-slot pads
are 1.0 x 4.0 mm rectangles, long axis perpendicular to the component
body, so a pin pierced through the paper contacts copper on both sides
of the piercing.  The RGB LED and the LEDs use a splayed 5.08 mm pin
pitch (legs are bent outward before stapling) so the carved channels
between neighbouring pins stay weedable at default rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import yaml

from .errors import (MissingPlacement, ParseError, UnknownFootprint,
                     ValidationError)


class PadKind(Enum):
    RECT = "rect"
    CIRCLE = "circle"


class Attach(Enum):
    STAPLER_SLOT = "STAPLER_SLOT"
    TAPE_PAD = "TAPE_PAD"
    SOLDER_PAD = "SOLDER_PAD"


@dataclass(frozen=True)
class PadShape:
    kind: PadKind
    w: float  # diameter for CIRCLE
    h: float = 0.0

    def __post_init__(self):
        if self.kind is PadKind.RECT and (self.w <= 0 or self.h <= 0):
            raise ValidationError(f"rect pad dimensions must be positive: {self}")
        if self.kind is PadKind.CIRCLE and self.w <= 0:
            raise ValidationError(f"circle pad diameter must be positive: {self}")

    @property
    def half_extent(self) -> tuple[float, float]:
        if self.kind is PadKind.CIRCLE:
            return (self.w / 2, self.w / 2)
        return (self.w / 2, self.h / 2)

    def rotated(self, rot: int) -> "PadShape":
        if self.kind is PadKind.RECT and rot in (90, 270):
            return PadShape(PadKind.RECT, self.h, self.w)
        return self


@dataclass(frozen=True)
class Footprint:
    key: str
    pads: tuple[tuple[float, float, PadShape], ...]  # (x, y, shape), pin order
    attach: Attach
    courtyard: tuple[float, float]  # (w, h), centered on origin

    def __post_init__(self):
        if not self.pads:
            raise ValidationError(f"footprint {self.key!r} has no pads")
        cw, ch = self.courtyard
        if cw <= 0 or ch <= 0:
            raise ValidationError(f"footprint {self.key!r} courtyard must be positive")
        for x, y, shape in self.pads:
            hx, hy = shape.half_extent
            if abs(x) + hx > cw / 2 + 1e-9 or abs(y) + hy > ch / 2 + 1e-9:
                raise ValidationError(
                    f"footprint {self.key!r}: pad at ({x}, {y}) outside courtyard")


class FootprintLibrary:
    def __init__(self, footprints: dict[str, Footprint]):
        self._by_key = dict(footprints)

    def get(self, key: str):
        return self._by_key.get(key)

    def __getitem__(self, key: str) -> Footprint:
        fp = self._by_key.get(key)
        if fp is None:
            raise UnknownFootprint(key)
        return fp

    def __contains__(self, key: str) -> bool:
        return key in self._by_key

    def keys(self):
        return self._by_key.keys()

    def merged_over(self, other: "FootprintLibrary") -> "FootprintLibrary":
        """New library with self's entries shadowing ``other``'s."""
        merged = dict(other._by_key)
        merged.update(self._by_key)
        return FootprintLibrary(merged)


def _slot() -> PadShape:
    # Stapler slot: spans both piercings of a pin stapled through paper.
    return PadShape(PadKind.RECT, 1.0, 4.0)


def _tape(side=6.0) -> PadShape:
    return PadShape(PadKind.RECT, side, side)


def _dip(key: str, pins: int) -> Footprint:
    per_row = pins // 2
    pitch, row_sep = 2.54, 7.62
    xs = [(k - (per_row - 1) / 2) * pitch for k in range(per_row)]
    pads = [(x, -row_sep / 2, _slot()) for x in xs]
    pads += [(x, row_sep / 2, _slot()) for x in reversed(xs)]
    w = per_row * pitch + 2.0
    return Footprint(key, tuple(pads), Attach.STAPLER_SLOT, (w, row_sep + 4 + 1.0))


def builtin_library() -> FootprintLibrary:
    fps = [
        Footprint("r_axial",
                  ((-5.08, 0.0, _slot()), (5.08, 0.0, _slot())),
                  Attach.STAPLER_SLOT, (14.0, 5.0)),
        Footprint("led_5mm",
                  ((-2.54, 0.0, _slot()), (2.54, 0.0, _slot())),
                  Attach.STAPLER_SLOT, (8.0, 5.0)),
        # Pin 1 is the common lead; legs splayed to 5.08 mm pitch.
        Footprint("rgb_led_5mm",
                  ((-7.62, 0.0, _slot()), (-2.54, 0.0, _slot()),
                   (2.54, 0.0, _slot()), (7.62, 0.0, _slot())),
                  Attach.STAPLER_SLOT, (18.0, 5.0)),
        _dip("dip8", 8),
        _dip("dip14", 14),
        _dip("dip16", 16),
        Footprint("cr2032_clip",
                  ((0.0, 7.0, _tape()), (0.0, -7.0, _tape())),
                  Attach.TAPE_PAD, (22.0, 22.0)),
        Footprint("sw_slide_spst",
                  ((-4.0, 0.0, _tape()), (4.0, 0.0, _tape())),
                  Attach.TAPE_PAD, (16.0, 8.0)),
    ]
    return FootprintLibrary({fp.key: fp for fp in fps})


def load_footprint_library(text: str) -> FootprintLibrary:
    """Parse a YAML footprint file, merged over the built-in defaults.

    User entries shadow built-ins by key.  An empty file yields the
    built-in library unchanged.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ParseError(f"invalid footprint file: {e}",
                         line=mark.line + 1 if mark else None,
                         column=mark.column + 1 if mark else None) from e
    if doc is None:
        return builtin_library()
    if not isinstance(doc, dict):
        raise ParseError("footprint file must be a mapping of footprint entries")
    entries = doc.get("footprint", doc)
    if not isinstance(entries, dict):
        raise ParseError("'footprint' section must map keys to definitions")

    user: dict[str, Footprint] = {}
    for key, spec in entries.items():
        if key in user:
            raise ValidationError(f"duplicate footprint key {key!r}")
        if not isinstance(spec, dict):
            raise ParseError(f"footprint {key!r} must be a mapping")
        try:
            attach = Attach(spec.get("attach", "SOLDER_PAD"))
        except ValueError as e:
            raise ParseError(f"footprint {key!r}: unknown attach style") from e
        cy = spec.get("courtyard") or {}
        pads = []
        for pad in spec.get("pads") or []:
            kind = PadKind(str(pad.get("shape", "rect")).lower())
            if kind is PadKind.CIRCLE:
                shape = PadShape(kind, float(pad.get("d", pad.get("w", 0))))
            else:
                shape = PadShape(kind, float(pad.get("w", 0)), float(pad.get("h", 0)))
            pads.append((float(pad.get("x", 0)), float(pad.get("y", 0)), shape))
        user[key] = Footprint(key, tuple(pads), attach,
                              (float(cy.get("w", 0)), float(cy.get("h", 0))))
    return FootprintLibrary(user).merged_over(builtin_library())


@dataclass(frozen=True)
class PadInstance:
    part_id: str
    pin: int
    net_id: int | None
    center: tuple[float, float]
    shape: PadShape  # already rotated into the board frame
    rotation: int


def rotate_point(x: float, y: float, rot: int) -> tuple[float, float]:
    if rot == 0:
        return (x, y)
    if rot == 90:
        return (-y, x)
    if rot == 180:
        return (-x, -y)
    if rot == 270:
        return (y, -x)
    raise ValidationError(f"rotation {rot} not in {{0, 90, 180, 270}}")


def instantiate_pads(n, lib: FootprintLibrary, pl) -> list[PadInstance]:
    """Transform every part's pads into board coordinates.

    Rotation applies before translation.  ``net_id`` comes from net
    membership and is None for pins in no net.  Output is ordered by
    (part_id, pin).
    """
    out: list[PadInstance] = []
    for part in sorted(n.parts, key=lambda p: p.id):
        fp = lib.get(part.footprint_key)
        if fp is None:
            raise UnknownFootprint(part.footprint_key)
        if part.id not in pl:
            raise MissingPlacement(part.id)
        px, py, rot = pl[part.id]
        for pin0, (lx, ly, shape) in enumerate(fp.pads):
            rx, ry = rotate_point(lx, ly, rot)
            out.append(PadInstance(
                part_id=part.id,
                pin=pin0 + 1,
                net_id=n.net_of_pin(part.id, pin0 + 1),
                center=(px + rx, py + ry),
                shape=shape.rotated(rot),
                rotation=rot,
            ))
    return out


def courtyard_rect(fp: Footprint, x: float, y: float, rot: int):
    """Axis-aligned courtyard rectangle (xmin, ymin, xmax, ymax) on the board."""
    w, h = fp.courtyard
    if rot in (90, 270):
        w, h = h, w
    return (x - w / 2, y - h / 2, x + w / 2, y + h / 2)
