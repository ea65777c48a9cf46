"""Bundled example graphs and shifts, shipped as JSON data files."""

from __future__ import annotations

import json
from importlib import resources

from .graphs import (WeightedGraph, complete_graph, cycle_graph,
                     graph_from_json_dict, kite_graph, multipartite_graph,
                     path_graph)
from .sft import ShiftOfFiniteType, proper_coloring_windows, sft_from_json_dict

__all__ = [
    "GRAPH_FIXTURES",
    "SFT_FIXTURES",
    "fixture_names",
    "fixture_text",
    "load_graph_fixture",
    "load_sft_fixture",
]

GRAPH_FIXTURES = {
    "k2": lambda: complete_graph(2),
    "k3": lambda: complete_graph(3),
    "k4": lambda: complete_graph(4),
    "k5": lambda: complete_graph(5),
    "k6": lambda: complete_graph(6),
    "k22": lambda: multipartite_graph(2, 2),
    "k222": lambda: multipartite_graph(3, 2),
    "k2222": lambda: multipartite_graph(4, 2),
    "kite": kite_graph,
    "path4": lambda: path_graph(4),
    "cycle5": lambda: cycle_graph(5),
}

SFT_FIXTURES = {
    "coloring3": lambda: proper_coloring_windows(3),
    "alternating2": lambda: proper_coloring_windows(2),
    "cyclic3": lambda: ShiftOfFiniteType.from_windows(
        3, [(0, 1), (1, 2), (2, 0)]),
}


def fixture_names() -> tuple[str, ...]:
    return tuple(sorted(GRAPH_FIXTURES)) + tuple(sorted(SFT_FIXTURES))


def fixture_text(name: str) -> str:
    """Raw JSON text of a bundled fixture file."""
    if name not in GRAPH_FIXTURES and name not in SFT_FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {fixture_names()}")
    return resources.files("insertproc").joinpath(f"data/{name}.json").read_text()


def load_graph_fixture(name: str) -> WeightedGraph:
    if name not in GRAPH_FIXTURES:
        raise KeyError(f"unknown graph fixture {name!r}")
    return graph_from_json_dict(json.loads(fixture_text(name)))


def load_sft_fixture(name: str) -> ShiftOfFiniteType:
    if name not in SFT_FIXTURES:
        raise KeyError(f"unknown shift fixture {name!r}")
    return sft_from_json_dict(json.loads(fixture_text(name)))
