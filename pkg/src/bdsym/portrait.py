"""State portraits: the graph of all asynchronous transitions of a function."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .core import TruthTable, bitstring


@dataclass(frozen=True)
class PortraitGraph:
    """Nodes are all 2^n states (with their excited masks); edges never loop."""

    n: int
    excited: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def successors(self, mu: int) -> list[int]:
        return [b for a, b in self.edges if a == mu]

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges)

    def to_json(self) -> dict:
        n = self.n
        return {
            "nodes": [
                {"state": bitstring(n, m), "excited": bitstring(n, e)}
                for m, e in enumerate(self.excited)
            ],
            "edges": [[bitstring(n, a), bitstring(n, b)] for a, b in self.edges],
        }


def _submasks(mask: int):
    """Nonzero submasks of ``mask`` in increasing order."""
    subs = []
    sub = mask
    while sub:
        subs.append(sub)
        sub = (sub - 1) & mask
    return sorted(subs)


def build_portrait(phi: TruthTable) -> PortraitGraph:
    """One edge mu -> Phi^nu(mu) per nonzero submask nu of the excited set of mu."""
    excited = tuple(phi.rows[m] ^ m for m in range(phi.size))
    edges = set()
    for m, exc in enumerate(excited):
        f = phi.rows[m]
        for nu in _submasks(exc):
            edges.add((m, (m & ~nu) | (f & nu)))
    return PortraitGraph(phi.n, excited, tuple(sorted(edges)))


def _marked(n: int, state: int, exc: int) -> str:
    return "".join(
        b + ("*" if (exc >> (n - 1 - i)) & 1 else "") for i, b in enumerate(bitstring(n, state))
    )


def _label(n: int, state: int, exc: int) -> str:
    return f"{_marked(n, state, exc)}\\nexc={bitstring(n, exc)}"


def render_dot(graph: PortraitGraph, name: str = "portrait") -> str:
    """Deterministic GraphViz text; an excited bit is followed by ``*`` in its node label."""
    n = graph.n
    out = [f"digraph {name} {{", "  node [shape=box, fontname=monospace];"]
    for m, exc in enumerate(graph.excited):
        out.append(f'  "{bitstring(n, m)}" [label="{_label(n, m, exc)}"];')
    for a, b in graph.edges:
        out.append(f'  "{bitstring(n, a)}" -> "{bitstring(n, b)}";')
    out.append("}")
    return "\n".join(out) + "\n"


def render_json(graph: PortraitGraph) -> str:
    return json.dumps(graph.to_json())


def render_text(graph: PortraitGraph) -> str:
    n = graph.n
    lines = []
    for m, exc in enumerate(graph.excited):
        targets = " ".join(bitstring(n, b) for b in graph.successors(m)) or "-"
        lines.append(f"{_marked(n, m, exc):<{2 * n}}  -> {targets}")
    return "\n".join(lines) + "\n"
