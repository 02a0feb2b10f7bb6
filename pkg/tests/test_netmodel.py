import pytest

from papercircuit.errors import ParseError, UnitError
from papercircuit.netmodel import (IssueKind, parse_netlist_xml,
                                   parse_trace_layer, serialize_netlist,
                                   validate_netlist)

SIMPLE = """
<netlist>
  <net name="A">
    <connector id="connector0"><part id="r1" footprint="r_axial"/></connector>
    <connector id="connector0"><part id="r2" footprint="r_axial" label="R2"/></connector>
  </net>
  <net name="B">
    <connector id="connector1"><part id="r1" footprint="r_axial"/></connector>
    <connector id="connector1"><part id="r2" footprint="r_axial"/></connector>
  </net>
</netlist>
"""


def test_parse_simple():
    n = parse_netlist_xml(SIMPLE)
    assert sorted(p.id for p in n.parts) == ["r1", "r2"]
    assert [net.name for net in n.nets] == ["A", "B"]
    assert n.nets[0].id == 0 and n.nets[1].id == 1
    # connector0 is pin 1
    assert n.nets[0].pins[0].pin == 1
    assert n.nets[1].pins[0].pin == 2
    assert n.part_by_id("r2").label == "R2"


def test_net_of_pin():
    n = parse_netlist_xml(SIMPLE)
    assert n.net_of_pin("r1", 1) == 0
    assert n.net_of_pin("r1", 2) == 1
    assert n.net_of_pin("r1", 3) is None


def test_malformed_xml_position():
    with pytest.raises(ParseError) as e:
        parse_netlist_xml("<netlist><net></netlist>")
    assert e.value.line is not None


def test_wrong_root():
    with pytest.raises(ParseError):
        parse_netlist_xml("<circuit/>")


def test_conflicting_footprints():
    bad = SIMPLE.replace('id="r2" footprint="r_axial" label="R2"',
                         'id="r2" footprint="led_5mm"', 1)
    with pytest.raises(ParseError, match="conflicting footprints"):
        parse_netlist_xml(bad)


def test_pin_in_two_nets_rejected():
    bad = """
    <netlist>
      <net name="A"><connector id="connector0"><part id="r1" footprint="r_axial"/></connector>
                    <connector id="connector0"><part id="r2" footprint="r_axial"/></connector></net>
      <net name="B"><connector id="connector0"><part id="r1" footprint="r_axial"/></connector>
                    <connector id="connector1"><part id="r2" footprint="r_axial"/></connector></net>
    </netlist>
    """
    with pytest.raises(ParseError, match="appears in nets"):
        parse_netlist_xml(bad)


def test_empty_net_dropped_lenient_rejected_strict():
    xml = SIMPLE.replace("</netlist>", '<net name="empty"/></netlist>')
    n = parse_netlist_xml(xml)
    assert [net.name for net in n.nets] == ["A", "B"]
    with pytest.raises(ParseError):
        parse_netlist_xml(xml, strict=True)


def test_missing_footprint_lenient_vs_strict():
    xml = SIMPLE.replace(' footprint="r_axial"', "", 1)
    n = parse_netlist_xml(xml)  # lenient keeps the part
    # the footprint arrives via the later declaration of the same part
    assert n.part_by_id("r1").footprint_key == "r_axial"
    solo = """
    <netlist><net name="A">
      <connector id="connector0"><part id="x1"/></connector>
      <connector id="connector0"><part id="r2" footprint="r_axial"/></connector>
    </net></netlist>
    """
    assert parse_netlist_xml(solo).part_by_id("x1").footprint_key == ""
    with pytest.raises(ParseError):
        parse_netlist_xml(solo, strict=True)


def test_serialize_round_trip():
    n = parse_netlist_xml(SIMPLE)
    again = parse_netlist_xml(serialize_netlist(n))
    assert again == n


def test_validate_flags(lib):
    xml = """
    <netlist>
      <net name="A">
        <connector id="connector0"><part id="u1" footprint="nope"/></connector>
        <connector id="connector2"><part id="r1" footprint="r_axial"/></connector>
      </net>
      <net name="solo">
        <connector id="connector0"><part id="r2" footprint="r_axial"/></connector>
      </net>
    </netlist>
    """
    n = parse_netlist_xml(xml)
    issues = validate_netlist(n, lib)
    kinds = {i.kind for i in issues}
    assert IssueKind.UNKNOWN_FOOTPRINT in kinds
    assert IssueKind.PIN_OUT_OF_RANGE in kinds  # r_axial has 2 pads, pin 3 used
    assert IssueKind.SINGLE_PIN_NET in kinds
    blocking = {i.kind for i in issues if i.blocking}
    assert blocking == {IssueKind.UNKNOWN_FOOTPRINT, IssueKind.PIN_OUT_OF_RANGE}


def test_validate_clean(rgb_netlist, lib):
    assert validate_netlist(rgb_netlist, lib) == []


# ---------------------------------------------------------------------------
# Trace-layer SVG

TRACE_SVG = """
<svg xmlns="http://www.w3.org/2000/svg" width="60mm" height="40mm"
     viewBox="0 0 60 40">
  <path d="M 10 10 L 30 10 L 30 20" stroke-width="2" data-net="vcc"/>
  <polyline points="10,30 40,30" stroke-width="1.5" data-net="gnd"/>
  <rect x="44" y="8" width="8" height="8" data-net="vcc"/>
  <line x1="5" y1="5" x2="9" y2="5" stroke-width="1"/>
</svg>
"""


def test_parse_trace_layer():
    t = parse_trace_layer(TRACE_SVG)
    assert sorted(t.nets) == ["gnd", "vcc"]
    assert len(t.nets["vcc"]) == 2
    path = t.nets["vcc"][0]
    assert path.points == ((10, 10), (30, 10), (30, 20))
    assert path.width == 2.0 and not path.closed
    assert t.nets["vcc"][1].closed  # the rect
    assert len(t.unassigned) == 1
    assert len(t.warnings) == 1 and "line" in t.warnings[0]


def test_trace_layer_requires_mm_units():
    with pytest.raises(UnitError):
        parse_trace_layer(TRACE_SVG.replace('width="60mm" height="40mm"',
                                            'width="60px" height="40px"'))
    with pytest.raises(UnitError):
        parse_trace_layer(TRACE_SVG.replace(' viewBox="0 0 60 40"', ""))


def test_trace_layer_custom_net_attr():
    svg = TRACE_SVG.replace("data-net", "inkscape:label").replace(
        "<svg ", '<svg xmlns:inkscape="http://x" ')
    t = parse_trace_layer(svg, net_attr="{http://x}label")
    assert sorted(t.nets) == ["gnd", "vcc"]


def test_path_parser_relative_and_hv():
    svg = """
    <svg xmlns="http://www.w3.org/2000/svg" width="60mm" height="40mm"
         viewBox="0 0 60 40">
      <path d="m 10 10 l 5 0 h 5 v 5 H 30 V 25 Z" stroke-width="1" data-net="n"/>
    </svg>
    """
    t = parse_trace_layer(svg)
    geom = t.nets["n"][0]
    assert geom.closed
    assert geom.points == ((10, 10), (15, 10), (20, 10), (20, 15),
                           (30, 15), (30, 25))


def test_path_parser_rejects_curves():
    svg = TRACE_SVG.replace("M 10 10 L 30 10 L 30 20",
                            "M 10 10 C 1 2 3 4 5 6")
    with pytest.raises(ParseError, match="unsupported path"):
        parse_trace_layer(svg)


def test_stroke_width_from_style():
    svg = TRACE_SVG.replace('stroke-width="2"', 'style="stroke-width:2.5"')
    t = parse_trace_layer(svg)
    assert t.nets["vcc"][0].width == 2.5
