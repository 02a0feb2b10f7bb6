"""Local HTTP+JSON API for the interactive placement editor.

One project per server.  Mutations are serialized behind a lock and
bump a revision counter; the converted layout is cached per revision and
recomputed only on demand, because a full conversion can take seconds
at desk scale.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel

from .board import Board
from .drc import explain_violation, serialize_report
from .errors import PaperCircuitError, TapeWidthMismatch
from .export import (ExportMode, ExportOptions, export_cut_svg,
                     export_finetape_svg, export_zone_preview)
from .footprint import FootprintLibrary, courtyard_rect
from .netmodel import Netlist
from .pipeline import ConvertResult, convert_netlist
from .placement import CARDINALS, PlacementSet, snap_01


def _mm(v: float) -> float:
    return round(float(v), 3)


class ProjectSession:
    """Mutable editor state: placement plus cached conversion results."""

    def __init__(self, netlist: Netlist, lib: FootprintLibrary, board: Board,
                 placement: PlacementSet | None = None):
        self.netlist = netlist
        self.lib = lib
        self.board = board
        self.placement = PlacementSet(placement or {})
        self.revision = 0
        self._lock = threading.RLock()
        self._cached: ConvertResult | None = None
        self._cached_revision = -1

    def summary(self) -> dict:
        with self._lock:
            parts = []
            for p in self.netlist.parts:
                fp = self.lib.get(p.footprint_key)
                cw, ch = fp.courtyard if fp else (0.0, 0.0)
                parts.append({
                    "id": p.id, "footprint": p.footprint_key, "label": p.label,
                    "courtyard": {"w": _mm(cw), "h": _mm(ch)},
                })
            nets = [{"id": net.id, "name": net.name,
                     "pins": [{"part": r.part_id, "pin": r.pin}
                              for r in net.pins]}
                    for net in self.netlist.nets]
            b = self.board
            return {
                "parts": parts,
                "nets": nets,
                "board": {"width": _mm(b.width), "height": _mm(b.height),
                          "margin": _mm(b.margin),
                          "resolution": _mm(b.resolution),
                          "gap": _mm(b.gap), "min_feature": _mm(b.min_feature)},
                "placement": {pid: {"x": _mm(x), "y": _mm(y), "rot": rot}
                              for pid, (x, y, rot) in
                              sorted(self.placement.items())},
                "revision": self.revision,
            }

    def put_placement(self, part_id: str, x: float, y: float, rot: int):
        with self._lock:
            try:
                part = self.netlist.part_by_id(part_id)
            except KeyError:
                raise HTTPException(404, f"unknown part {part_id!r}")
            if rot not in CARDINALS:
                raise HTTPException(
                    422, f"rotation {rot} not in {list(CARDINALS)}")
            sx, sy = snap_01(x), snap_01(y)
            fp = self.lib.get(part.footprint_key)
            if fp is not None:
                x0, y0, x1, y1 = courtyard_rect(fp, sx, sy, rot)
                ux0, uy0, ux1, uy1 = self.board.usable_rect()
                if x0 < ux0 or y0 < uy0 or x1 > ux1 or y1 > uy1:
                    raise HTTPException(
                        422, f"courtyard of {part_id!r} at ({sx}, {sy}) "
                             f"leaves the board minus margin")
            self.placement[part_id] = (sx, sy, rot)
            self.revision += 1
            self._cached = None
            return {"part_id": part_id, "x": _mm(sx), "y": _mm(sy),
                    "rot": rot, "revision": self.revision}

    def recompute(self) -> tuple[ConvertResult, int]:
        with self._lock:
            if self._cached is not None and self._cached_revision == self.revision:
                return self._cached, self._cached_revision
            missing = [p.id for p in self.netlist.parts
                       if p.id not in self.placement]
            if missing:
                raise HTTPException(409, f"unplaced parts: {missing}")
            try:
                result = convert_netlist(self.netlist, self.lib, self.board,
                                         self.placement)
            except PaperCircuitError as e:
                raise HTTPException(422, str(e))
            self._cached = result
            self._cached_revision = self.revision
            return result, self.revision

    def fresh_result(self) -> tuple[ConvertResult, int]:
        with self._lock:
            if self._cached is None or self._cached_revision != self.revision:
                raise HTTPException(
                    409, "no up-to-date conversion; POST /api/recompute first")
            return self._cached, self._cached_revision


def _layout_payload(result: ConvertResult, revision: int,
                    net_names: dict[int, str]) -> dict:
    zones = {}
    for net, polys in sorted(result.layout.zones.items()):
        zones[str(net)] = [{
            "net": net,
            "name": net_names.get(net, f"net {net}"),
            "outer": [[_mm(x), _mm(y)] for x, y in poly.outer],
            "holes": [[[_mm(x), _mm(y)] for x, y in hole]
                      for hole in poly.holes],
        } for poly in polys]
    cut_paths = [{"points": [[_mm(x), _mm(y)] for x, y in p.points],
                  "closed": p.closed}
                 for p in result.layout.cut_paths]
    violations = [{
        "kind": v.kind.value,
        "location": [_mm(v.location[0]), _mm(v.location[1])],
        "nets": list(v.net_ids),
        "detail": v.detail,
        "message": explain_violation(v, net_names),
    } for v in result.report.violations]
    return {"zones": zones, "cut_paths": cut_paths,
            "violations": violations, "pass": result.report.passed,
            "revision": revision}


class PlacementBody(BaseModel):
    x: float
    y: float
    rot: int


def create_app(session: ProjectSession | None) -> FastAPI:
    app = FastAPI(title="papercircuit editor API")

    def need_session() -> ProjectSession:
        if session is None:
            raise HTTPException(404, "no project loaded")
        return session

    def net_names(s: ProjectSession):
        return {net.id: net.name for net in s.netlist.nets}

    @app.get("/api/project")
    def get_project():
        return need_session().summary()

    @app.put("/api/placement/{part_id}")
    def put_placement(part_id: str, body: PlacementBody):
        return need_session().put_placement(part_id, body.x, body.y, body.rot)

    @app.post("/api/recompute")
    def recompute():
        s = need_session()
        result, revision = s.recompute()
        return _layout_payload(result, revision, net_names(s))

    @app.get("/api/drc")
    def get_drc():
        s = need_session()
        result, revision = s.fresh_result()
        payload = _layout_payload(result, revision, net_names(s))
        return {"violations": payload["violations"], "pass": payload["pass"],
                "revision": revision,
                "report": serialize_report(result.report, net_names(s))}

    @app.get("/api/export")
    def export(mode: str, tape_width: float | None = None):
        s = need_session()
        result, _ = s.fresh_result()
        if not result.report.passed:
            raise HTTPException(409, "DRC failing; fix violations first")
        try:
            if mode == "cut":
                svg = export_cut_svg(result.layout,
                                     ExportOptions(ExportMode.VINYL_CUT))
                name = "cut.svg"
            elif mode == "finetape":
                tw = tape_width if tape_width is not None else s.board.gap
                svg = export_finetape_svg(
                    result.zone_map, result.layout,
                    ExportOptions(ExportMode.FINE_TAPE, tape_width=tw))
                name = "finetape.svg"
            else:
                raise HTTPException(422, f"unknown export mode {mode!r}")
        except TapeWidthMismatch as e:
            raise HTTPException(422, str(e))
        return Response(
            content=svg, media_type="image/svg+xml",
            headers={"Content-Disposition": f'attachment; filename="{name}"'})

    @app.get("/api/preview.png")
    def preview():
        s = need_session()
        result, _ = s.fresh_result()
        return Response(content=export_zone_preview(result.zone_map),
                        media_type="image/png")

    return app
