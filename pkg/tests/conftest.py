import importlib.resources as resources

import pytest

from papercircuit.board import Board
from papercircuit.footprint import builtin_library
from papercircuit.netmodel import parse_netlist_xml
from papercircuit.placement import load_placement


def fixture_text(name: str) -> str:
    return (resources.files("papercircuit") / "fixtures" / name).read_text()


@pytest.fixture(scope="session")
def lib():
    return builtin_library()


@pytest.fixture(scope="session")
def rgb_netlist():
    return parse_netlist_xml(fixture_text("rgb_led.xml"))


@pytest.fixture(scope="session")
def rgb_placement(rgb_netlist):
    return load_placement(fixture_text("rgb_led_placement.txt"), rgb_netlist)


@pytest.fixture(scope="session")
def default_board():
    return Board()


@pytest.fixture(scope="session")
def rgb_result(rgb_netlist, lib, default_board, rgb_placement):
    from papercircuit.pipeline import convert_netlist

    return convert_netlist(rgb_netlist, lib, default_board, rgb_placement)
