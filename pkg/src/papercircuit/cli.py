"""Command-line entry point: convert, trace-convert, place, check, serve.

Exit codes partition outcomes: 0 clean, 1 valid run with rule
violations, 2 could not run (parse or pipeline failure).
"""

from __future__ import annotations

import os
import sys
import tempfile
from pathlib import Path

import click
import yaml

from .board import Board
from .drc import run_drc, serialize_report
from .errors import PaperCircuitError
from .export import ExportMode, ExportOptions, export_cut_svg, export_finetape_svg
from .footprint import builtin_library, load_footprint_library
from .netmodel import parse_netlist_xml, parse_trace_layer, validate_netlist
from .partition import dump_zonemap, load_zonemap
from .pipeline import convert_netlist, convert_traces
from .placement import auto_place, load_placement, save_placement

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2


def atomic_write(path: Path, data) -> None:
    """Write via temp file + rename so interrupted runs never leave
    truncated outputs."""
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode) as f:
            f.write(data)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def board_options(f):
    f = click.option("--board", "board_size", default=None,
                     help="Board size WxH in mm, e.g. 100x70.")(f)
    f = click.option("--resolution", type=float, default=None)(f)
    f = click.option("--gap", type=float, default=None)(f)
    f = click.option("--min-feature", type=float, default=None)(f)
    f = click.option("--margin", type=float, default=None)(f)
    return f


def _load_config(config):
    if not config:
        return {}
    doc = yaml.safe_load(Path(config).read_text())
    return doc or {}


def make_board(cfg, board_size, resolution, gap, min_feature, margin) -> Board:
    """Defaults, then config file, then flags; flags win."""
    params = dict(cfg.get("board") or {})
    if board_size:
        w, _, h = board_size.lower().partition("x")
        params["width"], params["height"] = float(w), float(h)
    for key, val in (("resolution", resolution), ("gap", gap),
                     ("min_feature", min_feature), ("margin", margin)):
        if val is not None:
            params[key] = val
    return Board(**params)


def _load_library(lib_paths, cfg):
    paths = list(cfg.get("libraries") or []) + list(lib_paths)
    lib = builtin_library()
    for p in paths:
        lib = load_footprint_library(Path(p).read_text()).merged_over(lib)
    return lib


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _write_outputs(out: Path, result, mode, tape_width, debug,
                   net_names=None, placement_text=None):
    opts = ExportOptions(ExportMode.VINYL_CUT)
    atomic_write(out / "cut.svg", export_cut_svg(result.layout, opts))
    if mode == "finetape":
        ft = ExportOptions(ExportMode.FINE_TAPE, tape_width=tape_width)
        atomic_write(out / "finetape.svg",
                     export_finetape_svg(result.zone_map, result.layout, ft))
    atomic_write(out / "drc.txt", serialize_report(result.report, net_names))
    if placement_text is not None:
        atomic_write(out / "placement.txt", placement_text)
    if debug:
        atomic_write(out / "zonemap.pgm", dump_zonemap(result.zone_map))


def _finish(result, out):
    if result.report.passed:
        click.echo(f"DRC clean; outputs in {out}")
        sys.exit(EXIT_OK)
    for v in result.report.violations:
        click.echo(f"DRC: {v.kind.value} at {v.location} nets {v.net_ids}",
                   err=True)
    sys.exit(EXIT_VIOLATIONS)


@click.group()
def main():
    """Subtractive paper-circuit compiler."""


@main.command()
@click.option("--netlist", "-n", type=click.Path(), default=None)
@click.option("--placement", "-p", type=click.Path(), default=None)
@click.option("--lib", "lib_paths", multiple=True, type=click.Path())
@click.option("--config", type=click.Path(), default=None)
@board_options
@click.option("--mode", type=click.Choice(["cut", "finetape"]), default="cut")
@click.option("--tape-width", type=float, default=None)
@click.option("--seed", type=int, default=0,
              help="Auto-placement seed when no placement file is given.")
@click.option("--debug", is_flag=True, help="Also write the zone-map dump.")
@click.option("--strict", is_flag=True)
@click.option("--out", type=click.Path(), default="out")
def convert(netlist, placement, lib_paths, config, board_size, resolution,
            gap, min_feature, margin, mode, tape_width, seed, debug, strict,
            out):
    """Convert a netlist + placement into a paper-circuit layout."""
    try:
        cfg = _load_config(config)
        netlist = netlist or cfg.get("netlist")
        placement = placement or cfg.get("placement")
        if not netlist:
            _fail("no netlist given (--netlist or config)", EXIT_ERROR)
        if mode == "finetape":
            tape_width = tape_width if tape_width is not None else \
                cfg.get("tape_width", gap)
            if tape_width is not None and gap is None:
                gap = tape_width  # fine-tape mode couples gap to tape width
        b = make_board(cfg, board_size, resolution, gap, min_feature, margin)
        lib = _load_library(lib_paths, cfg)
        n = parse_netlist_xml(Path(netlist).read_text(), strict=strict)
        issues = validate_netlist(n, lib)
        if strict and issues:
            _fail("; ".join(i.message for i in issues), EXIT_ERROR)
        if placement:
            pl = load_placement(Path(placement).read_text(), n)
        else:
            pl = auto_place(n, lib, b, seed)
        result = convert_netlist(n, lib, b, pl)
    except PaperCircuitError as e:
        _fail(str(e), EXIT_ERROR)
    out = Path(out)
    names = {net.id: net.name for net in n.nets}
    _write_outputs(out, result, mode,
                   tape_width if tape_width is not None else b.gap, debug,
                   net_names=names, placement_text=save_placement(pl))
    _finish(result, out)


@main.command("trace-convert")
@click.argument("svg_in", type=click.Path())
@click.option("--net-attr", default="data-net")
@click.option("--config", type=click.Path(), default=None)
@board_options
@click.option("--mode", type=click.Choice(["cut", "finetape"]), default="cut")
@click.option("--tape-width", type=float, default=None)
@click.option("--debug", is_flag=True)
@click.option("--out", type=click.Path(), default="out")
def trace_convert(svg_in, net_attr, config, board_size, resolution, gap,
                  min_feature, margin, mode, tape_width, debug, out):
    """Convert a tagged trace-layer SVG into a paper-circuit layout."""
    try:
        cfg = _load_config(config)
        b = make_board(cfg, board_size, resolution, gap, min_feature, margin)
        t = parse_trace_layer(Path(svg_in).read_text(), net_attr)
        for w in t.warnings:
            click.echo(f"warning: {w}", err=True)
        result = convert_traces(t, b)
    except PaperCircuitError as e:
        _fail(str(e), EXIT_ERROR)
    out = Path(out)
    names = {i: name for name, i in result.net_index.items()}
    _write_outputs(out, result, mode,
                   tape_width if tape_width is not None else b.gap, debug,
                   net_names=names)
    broken = [names[i] for i, ok in result.connectivity.items() if not ok]
    if broken:
        click.echo(f"connectivity mismatch: nets {broken} split", err=True)
        sys.exit(EXIT_VIOLATIONS)
    _finish(result, out)


@main.command()
@click.option("--netlist", "-n", type=click.Path(), required=True)
@click.option("--lib", "lib_paths", multiple=True, type=click.Path())
@click.option("--config", type=click.Path(), default=None)
@board_options
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default="out")
def place(netlist, lib_paths, config, board_size, resolution, gap,
          min_feature, margin, seed, out):
    """Auto-place parts and write a placement file."""
    try:
        cfg = _load_config(config)
        b = make_board(cfg, board_size, resolution, gap, min_feature, margin)
        lib = _load_library(lib_paths, cfg)
        n = parse_netlist_xml(Path(netlist).read_text())
        pl = auto_place(n, lib, b, seed)
    except PaperCircuitError as e:
        _fail(str(e), EXIT_ERROR)
    atomic_write(Path(out) / "placement.txt", save_placement(pl))
    click.echo(f"placement written to {Path(out) / 'placement.txt'}")
    sys.exit(EXIT_OK)


@main.command()
@click.argument("zonemap", type=click.Path())
@board_options
def check(zonemap, board_size, resolution, gap, min_feature, margin):
    """Run DRC on an existing zone-map debug dump."""
    try:
        blob = Path(zonemap).read_bytes()
        z = load_zonemap(blob)
        params = {"width": z.board.width, "height": z.board.height,
                  "resolution": z.board.resolution}
        if board_size:
            w, _, h = board_size.lower().partition("x")
            params["width"], params["height"] = float(w), float(h)
        for key, val in (("resolution", resolution), ("gap", gap),
                         ("min_feature", min_feature), ("margin", margin)):
            if val is not None:
                params[key] = val
        b = Board(**params)
        z.board = b
        report = run_drc(z, None, [], b)
    except PaperCircuitError as e:
        _fail(str(e), EXIT_ERROR)
    click.echo(serialize_report(report), nl=False)
    sys.exit(EXIT_OK if report.passed else EXIT_VIOLATIONS)


@main.command()
@click.option("--netlist", "-n", type=click.Path(), required=True)
@click.option("--placement", "-p", type=click.Path(), default=None)
@click.option("--lib", "lib_paths", multiple=True, type=click.Path())
@click.option("--config", type=click.Path(), default=None)
@board_options
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8734)
def serve(netlist, placement, lib_paths, config, board_size, resolution, gap,
          min_feature, margin, host, port):
    """Serve the interactive-editor API on loopback until interrupted."""
    import socket

    import uvicorn

    from .service import ProjectSession, create_app

    try:
        cfg = _load_config(config)
        b = make_board(cfg, board_size, resolution, gap, min_feature, margin)
        lib = _load_library(lib_paths, cfg)
        n = parse_netlist_xml(Path(netlist).read_text())
        pl = load_placement(Path(placement).read_text(), n) if placement \
            else None
        session = ProjectSession(n, lib, b, pl)
    except PaperCircuitError as e:
        _fail(str(e), EXIT_ERROR)
    if port == 0:
        with socket.socket() as s:
            s.bind((host, 0))
            port = s.getsockname()[1]
    click.echo(f"serving on http://{host}:{port}")
    uvicorn.run(create_app(session), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
