"""Netlist XML and trace-layer SVG ingestion.

The accepted netlist schema follows the common schematic-tool XML export:
a ``<netlist>`` root with repeated ``<net name="...">`` children, each
holding ``<connector id="connectorK">`` elements whose ``<part>`` child
names the component.  The pin index is the trailing integer of the
connector id plus one (connector0 is pin 1).
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum

from .errors import ParseError, UnitError


@dataclass(frozen=True)
class Part:
    id: str
    footprint_key: str
    label: str = ""


@dataclass(frozen=True)
class PinRef:
    part_id: str
    pin: int  # 1-based


@dataclass(frozen=True)
class Net:
    id: int
    name: str
    pins: tuple[PinRef, ...]


@dataclass(frozen=True)
class Netlist:
    parts: tuple[Part, ...]
    nets: tuple[Net, ...]

    def part_by_id(self, part_id: str) -> Part:
        for p in self.parts:
            if p.id == part_id:
                return p
        raise KeyError(part_id)

    def net_of_pin(self, part_id: str, pin: int):
        """Net id carrying (part, pin), or None when unconnected."""
        for net in self.nets:
            for ref in net.pins:
                if ref.part_id == part_id and ref.pin == pin:
                    return net.id
        return None


class IssueKind(Enum):
    UNKNOWN_FOOTPRINT = "UNKNOWN_FOOTPRINT"
    PIN_OUT_OF_RANGE = "PIN_OUT_OF_RANGE"
    SINGLE_PIN_NET = "SINGLE_PIN_NET"
    UNCONNECTED_PART = "UNCONNECTED_PART"


# Kinds that block linking; the rest are warnings.
_BLOCKING = {IssueKind.UNKNOWN_FOOTPRINT, IssueKind.PIN_OUT_OF_RANGE}


@dataclass(frozen=True)
class Issue:
    kind: IssueKind
    subject: str
    message: str

    @property
    def blocking(self) -> bool:
        return self.kind in _BLOCKING


_CONNECTOR_ID = re.compile(r"(\d+)\s*$")


def _pin_from_connector_id(cid: str) -> int:
    m = _CONNECTOR_ID.search(cid or "")
    if not m:
        raise ParseError(f"connector id {cid!r} carries no pin index")
    return int(m.group(1)) + 1


def parse_netlist_xml(xml_text: str, strict: bool = False) -> Netlist:
    """Parse netlist XML into a Netlist.

    Nets get dense ids in document order.  Duplicate part declarations
    collapse to one Part; whitespace-only labels become empty.  In strict
    mode a connector whose part carries no footprint is an error; in
    lenient mode the part is kept with an empty footprint key and left
    for validate_netlist to flag.
    """
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as e:
        line, col = e.position if e.position else (None, None)
        raise ParseError(f"malformed XML: {e.msg if hasattr(e, 'msg') else e}",
                         line=line, column=col) from e
    if _localname(root.tag) != "netlist":
        raise ParseError(f"expected <netlist> root, got <{_localname(root.tag)}>")

    parts: dict[str, Part] = {}
    nets: list[Net] = []
    seen_pins: dict[tuple[str, int], str] = {}

    for net_el in root:
        if _localname(net_el.tag) != "net":
            continue
        name = (net_el.get("name") or f"net{len(nets)}").strip()
        pins: list[PinRef] = []
        for conn in net_el:
            if _localname(conn.tag) != "connector":
                continue
            pin = _pin_from_connector_id(conn.get("id", ""))
            part_el = conn.find("part")
            if part_el is None:
                for child in conn:
                    if _localname(child.tag) == "part":
                        part_el = child
                        break
            if part_el is None:
                raise ParseError(f"connector in net {name!r} has no <part> child")
            pid = (part_el.get("id") or "").strip()
            if not pid:
                raise ParseError(f"part without id in net {name!r}")
            fp = (part_el.get("footprint") or "").strip()
            label = (part_el.get("label") or "").strip()
            if pid in parts:
                prev = parts[pid]
                if fp and prev.footprint_key and fp != prev.footprint_key:
                    raise ParseError(
                        f"part {pid!r} declared with conflicting footprints "
                        f"{prev.footprint_key!r} and {fp!r}")
                if fp and not prev.footprint_key:
                    parts[pid] = Part(pid, fp, prev.label or label)
            else:
                if strict and not fp:
                    raise ParseError(f"part {pid!r} declares no footprint")
                parts[pid] = Part(pid, fp, label)
            key = (pid, pin)
            if key in seen_pins and seen_pins[key] != name:
                raise ParseError(
                    f"pin {pid}.{pin} appears in nets {seen_pins[key]!r} and {name!r}")
            seen_pins[key] = name
            pins.append(PinRef(pid, pin))
        if not pins:
            if strict:
                raise ParseError(f"net {name!r} has no connectors")
            continue
        nets.append(Net(id=len(nets), name=name, pins=tuple(pins)))

    return Netlist(parts=tuple(parts.values()), nets=tuple(nets))


def serialize_netlist(n: Netlist) -> str:
    """Canonical debug serialization in the same XML schema."""
    root = ET.Element("netlist")
    for net in n.nets:
        net_el = ET.SubElement(root, "net", name=net.name)
        for ref in net.pins:
            conn = ET.SubElement(net_el, "connector", id=f"connector{ref.pin - 1}")
            part = n.part_by_id(ref.part_id)
            attrs = {"id": part.id, "footprint": part.footprint_key}
            if part.label:
                attrs["label"] = part.label
            ET.SubElement(conn, "part", **attrs)
    return ET.tostring(root, encoding="unicode")


def validate_netlist(n: Netlist, lib) -> list[Issue]:
    """Cross-check a netlist against a footprint library.

    Returns issues rather than raising; an empty list means the netlist
    is fully linkable.
    """
    issues: list[Issue] = []
    for part in n.parts:
        fp = lib.get(part.footprint_key)
        if fp is None:
            issues.append(Issue(
                IssueKind.UNKNOWN_FOOTPRINT, part.id,
                f"part {part.id!r}: footprint {part.footprint_key!r} not in library"))
    for net in n.nets:
        for ref in net.pins:
            part = n.part_by_id(ref.part_id)
            fp = lib.get(part.footprint_key)
            if fp is not None and ref.pin > len(fp.pads):
                issues.append(Issue(
                    IssueKind.PIN_OUT_OF_RANGE, f"{ref.part_id}.{ref.pin}",
                    f"pin {ref.pin} of {ref.part_id!r} exceeds pad count "
                    f"{len(fp.pads)} of {part.footprint_key!r}"))
        if len(net.pins) == 1:
            issues.append(Issue(
                IssueKind.SINGLE_PIN_NET, net.name,
                f"net {net.name!r} connects a single pin"))
    connected = {ref.part_id for net in n.nets for ref in net.pins}
    for part in n.parts:
        if part.id not in connected:
            issues.append(Issue(
                IssueKind.UNCONNECTED_PART, part.id,
                f"part {part.id!r} belongs to no net"))
    return issues


# ---------------------------------------------------------------------------
# Trace-layer SVG ingestion


@dataclass(frozen=True)
class TraceGeometry:
    points: tuple[tuple[float, float], ...]
    width: float  # stroke width in mm; ignored for closed polygons
    closed: bool


@dataclass
class TraceLayer:
    nets: dict[str, list[TraceGeometry]] = field(default_factory=dict)
    unassigned: list[TraceGeometry] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


_LENGTH = re.compile(r"^\s*([0-9.+-eE]+)\s*(mm)?\s*$")


def _mm_length(value: str, what: str) -> float:
    m = _LENGTH.match(value or "")
    if not m:
        raise UnitError(f"cannot resolve {what} {value!r} to mm")
    return float(m.group(1))


_PATH_TOKEN = re.compile(r"([MmLlHhVvZz])|(-?\d*\.?\d+(?:[eE][+-]?\d+)?)")


def _parse_path_d(d: str):
    """Parse an SVG path of line segments into (points, closed) subpaths."""
    tokens = []
    pos = 0
    for m in _PATH_TOKEN.finditer(d):
        tokens.append(m.group(0))
    # reject commands we do not support before walking
    bad = re.sub(r"[MmLlHhVvZz0-9.,eE\s+-]", "", d)
    if bad:
        raise ParseError(f"unsupported path commands {sorted(set(bad))} in {d!r}")

    subpaths = []
    pts: list[tuple[float, float]] = []
    cmd = None
    cur = (0.0, 0.0)
    i = 0

    def flush(closed):
        nonlocal pts
        if len(pts) >= 2:
            subpaths.append((tuple(pts), closed))
        pts = []

    def num(k):
        return float(tokens[k])

    while i < len(tokens):
        t = tokens[i]
        if t.isalpha():
            cmd = t
            i += 1
            if cmd in "Zz":
                flush(True)
                if subpaths:
                    cur = subpaths[-1][0][0]
                cmd = None
            continue
        if cmd is None:
            raise ParseError(f"path data starts without a command: {d!r}")
        if cmd in "Mm":
            flush(False)
            x, y = num(i), num(i + 1)
            i += 2
            cur = (cur[0] + x, cur[1] + y) if cmd == "m" else (x, y)
            pts = [cur]
            cmd = "l" if cmd == "m" else "L"  # implicit lineto after moveto
        elif cmd in "Ll":
            x, y = num(i), num(i + 1)
            i += 2
            cur = (cur[0] + x, cur[1] + y) if cmd == "l" else (x, y)
            pts.append(cur)
        elif cmd in "Hh":
            x = num(i)
            i += 1
            cur = (cur[0] + x if cmd == "h" else x, cur[1])
            pts.append(cur)
        elif cmd in "Vv":
            y = num(i)
            i += 1
            cur = (cur[0], cur[1] + y if cmd == "v" else y)
            pts.append(cur)
        else:
            raise ParseError(f"unsupported path command {cmd!r}")
    flush(False)
    return subpaths


def _stroke_width(el) -> float:
    sw = el.get("stroke-width")
    if sw is None:
        style = el.get("style") or ""
        m = re.search(r"stroke-width\s*:\s*([0-9.]+)", style)
        sw = m.group(1) if m else None
    return float(sw) if sw is not None else 1.0


def _points_attr(el):
    raw = (el.get("points") or "").replace(",", " ").split()
    nums = [float(v) for v in raw]
    return tuple(zip(nums[0::2], nums[1::2]))


def parse_trace_layer(svg_text: str, net_attr: str = "data-net") -> TraceLayer:
    """Parse an mm-unit SVG trace layer into per-net geometry.

    Elements lacking the net attribute land in the ``unassigned`` bucket
    with a recorded warning.
    """
    try:
        root = ET.fromstring(svg_text)
    except ET.ParseError as e:
        line, col = e.position if e.position else (None, None)
        raise ParseError(f"invalid SVG: {e}", line=line, column=col) from e
    if _localname(root.tag) != "svg":
        raise ParseError(f"expected <svg> root, got <{_localname(root.tag)}>")
    width = root.get("width")
    height = root.get("height")
    if width is None or height is None or root.get("viewBox") is None:
        raise UnitError("SVG must declare viewBox plus width/height in mm")
    _mm_length(width, "width")
    _mm_length(height, "height")

    layer = TraceLayer()

    def add(el, geoms):
        net = el.get(net_attr)
        if net:
            layer.nets.setdefault(net, []).extend(geoms)
        else:
            layer.unassigned.extend(geoms)
            layer.warnings.append(
                f"<{_localname(el.tag)}> without {net_attr!r} attribute")

    for el in root.iter():
        tag = _localname(el.tag)
        w = _stroke_width(el)
        if tag == "path":
            geoms = [TraceGeometry(pts, w, closed)
                     for pts, closed in _parse_path_d(el.get("d") or "")]
            if geoms:
                add(el, geoms)
        elif tag == "polyline":
            pts = _points_attr(el)
            if len(pts) >= 2:
                add(el, [TraceGeometry(pts, w, False)])
        elif tag == "polygon":
            pts = _points_attr(el)
            if len(pts) >= 3:
                add(el, [TraceGeometry(pts, w, True)])
        elif tag == "line":
            pts = ((float(el.get("x1", 0)), float(el.get("y1", 0))),
                   (float(el.get("x2", 0)), float(el.get("y2", 0))))
            add(el, [TraceGeometry(pts, w, False)])
        elif tag == "rect":
            x, y = float(el.get("x", 0)), float(el.get("y", 0))
            rw, rh = float(el.get("width", 0)), float(el.get("height", 0))
            pts = ((x, y), (x + rw, y), (x + rw, y + rh), (x, y + rh))
            add(el, [TraceGeometry(pts, w, True)])
    return layer
