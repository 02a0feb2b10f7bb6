import importlib.resources as resources

import pytest
from click.testing import CliRunner

from papercircuit.cli import main
from papercircuit.partition import dump_zonemap


def fixture_path(name: str) -> str:
    return str(resources.files("papercircuit") / "fixtures" / name)


@pytest.fixture()
def runner():
    return CliRunner()


def _convert_args(out, extra=()):
    return ["convert",
            "--netlist", fixture_path("rgb_led.xml"),
            "--placement", fixture_path("rgb_led_placement.txt"),
            "--out", str(out), *extra]


def test_convert_rgb_fixture(runner, tmp_path):
    result = runner.invoke(main, _convert_args(tmp_path))
    assert result.exit_code == 0, result.output
    assert (tmp_path / "cut.svg").exists()
    assert (tmp_path / "drc.txt").read_text().startswith("pass true")
    assert (tmp_path / "placement.txt").exists()
    assert not (tmp_path / "zonemap.pgm").exists()
    assert not (tmp_path / "finetape.svg").exists()


def test_convert_debug_writes_dump(runner, tmp_path):
    result = runner.invoke(main, _convert_args(tmp_path, ["--debug"]))
    assert result.exit_code == 0
    blob = (tmp_path / "zonemap.pgm").read_bytes()
    assert blob.startswith(b"500 350 0.2\n")


def test_convert_finetape_mode(runner, tmp_path):
    result = runner.invoke(main, _convert_args(
        tmp_path, ["--mode", "finetape", "--tape-width", "1.0"]))
    assert result.exit_code == 0, result.output
    tape = (tmp_path / "finetape.svg").read_text()
    assert "stroke-dasharray" in tape


def test_convert_finetape_couples_gap(runner, tmp_path):
    # tape width 1.2 with no explicit gap regenerates at gap = 1.2
    pl = tmp_path / "chain_placement.txt"
    pl.write_text("r1 20 35 0\nr2 40 35 0\nr3 60 35 0\nr4 80 35 0\n")
    result = runner.invoke(main, [
        "convert", "--netlist", fixture_path("chain.xml"),
        "--placement", str(pl), "--out", str(tmp_path / "out"),
        "--mode", "finetape", "--tape-width", "1.2"])
    assert result.exit_code == 0, result.output
    assert "stroke-width:1.200" in \
        (tmp_path / "out" / "finetape.svg").read_text()


def test_convert_deterministic_bytes(runner, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert runner.invoke(main, _convert_args(a, ["--debug"])).exit_code == 0
    assert runner.invoke(main, _convert_args(b, ["--debug"])).exit_code == 0
    for name in ("cut.svg", "drc.txt", "placement.txt", "zonemap.pgm"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_convert_missing_netlist(runner, tmp_path):
    result = runner.invoke(main, ["convert", "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_convert_bad_xml(runner, tmp_path):
    bad = tmp_path / "bad.xml"
    bad.write_text("<netlist><net></netlist>")
    result = runner.invoke(main, ["convert", "--netlist", str(bad),
                                  "--out", str(tmp_path / "out")])
    assert result.exit_code == 2


def test_convert_config_file(runner, tmp_path):
    cfg = tmp_path / "project.yaml"
    cfg.write_text(
        "netlist: {}\nplacement: {}\n".format(
            fixture_path("rgb_led.xml"),
            fixture_path("rgb_led_placement.txt")))
    result = runner.invoke(main, ["convert", "--config", str(cfg),
                                  "--out", str(tmp_path / "out")])
    assert result.exit_code == 0, result.output


def test_place_deterministic(runner, tmp_path):
    args = ["place", "--netlist", fixture_path("chain.xml"), "--seed", "7"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert runner.invoke(main, args + ["--out", str(a)]).exit_code == 0
    assert runner.invoke(main, args + ["--out", str(b)]).exit_code == 0
    text = (a / "placement.txt").read_text()
    assert text == (b / "placement.txt").read_text()
    assert sorted(line.split()[0] for line in text.splitlines()) == \
        ["r1", "r2", "r3", "r4"]


def test_convert_autoplace_seeded(runner, tmp_path):
    args = ["convert", "--netlist", fixture_path("chain.xml"), "--seed", "3"]
    a, b = tmp_path / "a", tmp_path / "b"
    ra = runner.invoke(main, args + ["--out", str(a)])
    rb = runner.invoke(main, args + ["--out", str(b)])
    assert ra.exit_code == rb.exit_code
    assert ra.exit_code in (0, 1)  # auto-placement may leave DRC findings
    assert (a / "cut.svg").read_bytes() == (b / "cut.svg").read_bytes()
    assert (a / "placement.txt").read_bytes() == \
        (b / "placement.txt").read_bytes()


def test_check_clean_dump(runner, tmp_path):
    assert runner.invoke(main, _convert_args(tmp_path, ["--debug"])) \
        .exit_code == 0
    result = runner.invoke(main, ["check", str(tmp_path / "zonemap.pgm")])
    assert result.exit_code == 0
    assert result.output.startswith("pass true")


def test_check_violating_dump(runner, tmp_path):
    import numpy as np

    from papercircuit.board import Board
    from papercircuit.partition import GAP, ZoneMap

    b = Board(width=40, height=30, margin=2)
    cells = np.full((b.ny, b.nx), GAP, dtype=np.int16)
    cells[60:110, 40:90] = 0
    cells[60:110, 91:141] = 1  # 0.4 mm channel: clearance violation
    dump = tmp_path / "bad.pgm"
    dump.write_bytes(dump_zonemap(ZoneMap(b.nx, b.ny, cells, b)))
    result = runner.invoke(main, ["check", str(dump)])
    assert result.exit_code == 1
    assert "pass false" in result.output
    assert "CLEARANCE" in result.output


def test_check_corrupt_dump(runner, tmp_path):
    dump = tmp_path / "weird.pgm"
    dump.write_bytes(b"10 10 0.2\n" + b"\x00" * 42)
    assert runner.invoke(main, ["check", str(dump)]).exit_code == 2


def test_board_flags(runner, tmp_path):
    result = runner.invoke(main, _convert_args(
        tmp_path, ["--board", "120x80", "--resolution", "0.4"]))
    assert result.exit_code == 0, result.output
    assert 'viewBox="0 0 120.000 80.000"' in (tmp_path / "cut.svg").read_text()


def test_serve_rejects_bad_netlist(runner, tmp_path):
    bad = tmp_path / "bad.xml"
    bad.write_text("not xml at all")
    result = runner.invoke(main, ["serve", "--netlist", str(bad)])
    assert result.exit_code == 2


def test_trace_convert(runner, tmp_path):
    svg = tmp_path / "traces.svg"
    svg.write_text("""
    <svg xmlns="http://www.w3.org/2000/svg" width="60mm" height="40mm"
         viewBox="0 0 60 40">
      <path d="M 10 12 L 50 12" stroke-width="3" data-net="vcc"/>
      <path d="M 10 28 L 50 28" stroke-width="3" data-net="gnd"/>
    </svg>
    """)
    out = tmp_path / "out"
    result = runner.invoke(main, ["trace-convert", str(svg),
                                  "--board", "60x40", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert (out / "cut.svg").exists()
    assert (out / "drc.txt").read_text().startswith("pass true")


def test_trace_convert_detects_split_net(runner, tmp_path):
    svg = tmp_path / "traces.svg"
    svg.write_text("""
    <svg xmlns="http://www.w3.org/2000/svg" width="60mm" height="40mm"
         viewBox="0 0 60 40">
      <path d="M 5 20 L 20 20" stroke-width="3" data-net="aa"/>
      <path d="M 40 20 L 55 20" stroke-width="3" data-net="aa"/>
      <path d="M 30 5 L 30 35" stroke-width="3" data-net="bb"/>
    </svg>
    """)
    out = tmp_path / "out"
    result = runner.invoke(main, ["trace-convert", str(svg),
                                  "--board", "60x40", "--out", str(out)])
    assert result.exit_code == 1
    assert "aa" in result.output


def test_trace_convert_warns_unassigned(runner, tmp_path):
    svg = tmp_path / "traces.svg"
    svg.write_text("""
    <svg xmlns="http://www.w3.org/2000/svg" width="60mm" height="40mm"
         viewBox="0 0 60 40">
      <path d="M 10 12 L 50 12" stroke-width="3" data-net="vcc"/>
      <path d="M 10 28 L 50 28" stroke-width="3"/>
    </svg>
    """)
    result = runner.invoke(
        main, ["trace-convert", str(svg), "--board", "60x40",
               "--out", str(tmp_path / "out")])
    assert "warning" in result.output
