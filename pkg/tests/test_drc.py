import numpy as np
import pytest

from papercircuit.board import Board
from papercircuit.drc import (ViolationKind, explain_violation, run_drc,
                              serialize_report)
from papercircuit.footprint import PadInstance, PadKind, PadShape
from papercircuit.partition import GAP, OUTSIDE, ZoneMap

from oracles import clearance_pairs_oracle


def board(nx=40, ny=30, margin=0.4):
    return Board(width=nx * 0.2, height=ny * 0.2, resolution=0.2,
                 margin=margin)


def empty_map(b):
    cells = np.full((b.ny, b.nx), GAP, dtype=np.int16)
    xs = (np.arange(b.nx) + 0.5) * b.resolution
    ys = (np.arange(b.ny) + 0.5) * b.resolution
    in_margin = ((xs < b.margin) | (xs > b.width - b.margin))[None, :] | \
                ((ys < b.margin) | (ys > b.height - b.margin))[:, None]
    cells[in_margin] = OUTSIDE
    return ZoneMap(b.nx, b.ny, cells, b)


def _pad(part, pin, net, x, y):
    return PadInstance(part, pin, net, (x, y),
                       PadShape(PadKind.RECT, 0.6, 0.6), 0)


def test_clean_map_passes(rgb_result, default_board):
    report = run_drc(rgb_result.zone_map, rgb_result.layout, rgb_result.pads,
                     default_board)
    assert report.passed
    assert report.violations == ()


def test_clearance_matches_pair_scan_oracle():
    b = board()
    z = empty_map(b)
    z.cells[10:20, 5:14] = 0
    z.cells[10:20, 15:24] = 1  # 0.4 mm apart: below gap - 2r = 0.6 mm
    report = run_drc(z, None, [], b)
    kinds = [v.kind for v in report.violations]
    assert ViolationKind.CLEARANCE in kinds
    min_cells = (b.gap - 2 * b.resolution) / b.resolution
    assert clearance_pairs_oracle(z.cells, min_cells) != []
    # widen the channel to exactly gap - 2r: both judgments flip together
    z2 = empty_map(b)
    z2.cells[10:20, 5:14] = 0
    z2.cells[10:20, 16:25] = 1
    report2 = run_drc(z2, None, [], b)
    assert ViolationKind.CLEARANCE not in [v.kind for v in report2.violations]
    assert clearance_pairs_oracle(z2.cells, min_cells) == []


def test_clearance_one_violation_per_blob():
    b = board(60, 30)
    z = empty_map(b)
    z.cells[5:10, 5:20] = 0
    z.cells[11:16, 5:20] = 1   # one long near-contact region
    z.cells[20:25, 5:20] = 0
    z.cells[26:29, 5:20] = 1   # a second, disjoint one
    report = run_drc(z, None, [], b)
    clearance = [v for v in report.violations
                 if v.kind is ViolationKind.CLEARANCE]
    assert len(clearance) == 2
    for v in clearance:
        assert v.net_ids == (0, 1)


def test_disconnected_net():
    b = board()
    z = empty_map(b)
    z.cells[5:15, 5:15] = 0
    z.cells[15:25, 25:35] = 0
    pads = [_pad("a", 1, 0, 1.6, 1.6), _pad("b", 1, 0, 6.0, 4.0)]
    report = run_drc(z, None, pads, b)
    assert [v.kind for v in report.violations] == [ViolationKind.DISCONNECTED_NET]
    assert report.violations[0].net_ids == (0,)


def test_thin_feature():
    b = board(60, 30)
    z = empty_map(b)
    z.cells[5:25, 5:15] = 0
    z.cells[14:17, 15:40] = 0  # 0.6 mm tongue
    report = run_drc(z, None, [], b)
    thin = [v for v in report.violations if v.kind is ViolationKind.THIN_FEATURE]
    assert len(thin) == 1
    assert "min_feature" in thin[0].detail or "2" in thin[0].detail


def test_pad_uncovered():
    b = board()
    z = empty_map(b)
    z.cells[10:20, 10:20] = 0
    pads = [_pad("a", 1, 0, 3.0, 3.0),        # inside the zone
            _pad("a", 2, 0, 6.5, 1.0)]        # in bare GAP
    report = run_drc(z, None, pads, b)
    uncovered = [v for v in report.violations
                 if v.kind is ViolationKind.PAD_UNCOVERED]
    assert len(uncovered) == 1
    assert uncovered[0].location == (6.5, 1.0)


def test_out_of_board():
    b = board()
    z = empty_map(b)
    z.cells[10:20, 10:20] = 0
    z.cells[5, 0] = 1  # copper in the left margin band
    report = run_drc(z, None, [], b)
    oob = [v for v in report.violations if v.kind is ViolationKind.OUT_OF_BOARD]
    assert len(oob) == 1
    assert oob[0].net_ids == (1,)


def test_drc_does_not_mutate():
    b = board()
    z = empty_map(b)
    z.cells[10:20, 5:14] = 0
    z.cells[10:20, 15:24] = 1
    before = z.cells.copy()
    run_drc(z, None, [], b)
    assert (z.cells == before).all()


def test_report_ordering_deterministic():
    b = board(60, 30)
    z = empty_map(b)
    z.cells[5:10, 5:20] = 0
    z.cells[11:16, 5:20] = 1
    z.cells[20:23, 30:55] = 2  # also too thin
    a = run_drc(z, None, [], b)
    b_ = run_drc(z, None, [], b)
    assert a == b_
    kinds = [v.kind for v in a.violations]
    assert kinds == sorted(kinds, key=list(ViolationKind).index)


def test_explain_violation_wording():
    b = board()
    z = empty_map(b)
    z.cells[10:20, 5:14] = 0
    z.cells[10:20, 15:24] = 1
    report = run_drc(z, None, [], b)
    v = next(v for v in report.violations
             if v.kind is ViolationKind.CLEARANCE)
    msg = explain_violation(v)
    assert "clearance" in msg and "net 0" in msg and "net 1" in msg
    named = explain_violation(v, {0: "VCC", 1: "GND"})
    assert "VCC" in named and "GND" in named


def test_serialize_report():
    b = board()
    z = empty_map(b)
    z.cells[10:20, 10:20] = 0
    clean = run_drc(z, None, [], b)
    assert serialize_report(clean) == "pass true\n"
    z.cells[10:20, 21:31] = 1
    bad = run_drc(z, None, [], b)
    text = serialize_report(bad)
    lines = text.splitlines()
    assert lines[0] == "pass false"
    assert lines[1].startswith("CLEARANCE ")
    assert "0,1" in lines[1]
