"""Chromatic graphs: ellipse classes joined by symbol-colored edges."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError
from .words import Alphabet


@dataclass(frozen=True)
class ChromaticGraph:
    """Vertices, ``(from, to, symbol)`` edges and single-letter anchors.

    The edge set is closed under the involution on construction: an
    ``a``-edge ``u -> v`` implies an ``a*``-edge ``v -> u``.  For graphs
    extracted from a self-adjoint language this adds nothing; for
    hand-written graphs it means only one member of each analytic pair
    needs to be listed.
    """

    alphabet: Alphabet
    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str, str]]
    q_anchors: dict[str, str] = field(default_factory=dict)
    #: word-length cutoff the graph was extracted at, when known
    depth: int | None = None

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ParseError("graph: duplicate vertex names")
        closed = set()
        for u, v, a in self.edges:
            if u not in vset or v not in vset:
                raise ParseError(f"graph: edge ({u}, {v}, {a}) uses an unknown vertex")
            i = self.alphabet.index(a)
            closed.add((u, v, a))
            closed.add((v, u, self.alphabet.symbols[self.alphabet.adjoint(i)].name))
        object.__setattr__(self, "edges", frozenset(closed))
        for a, v in self.q_anchors.items():
            self.alphabet.index(a)
            if v not in vset:
                raise ParseError(f"graph: anchor of {a} names unknown vertex {v}")

    def vertex_index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    def transfer_matrices(self) -> list[np.ndarray]:
        """Integer adjacency ``T[c][v, u] = 1`` per ``c``-edge ``u -> v``, for every symbol."""
        idx = self.vertex_index()
        n = len(self.vertices)
        mats = [np.zeros((n, n), dtype=np.int64) for _ in self.alphabet.symbols]
        for u, v, a in self.edges:
            mats[self.alphabet.index(a)][idx[v], idx[u]] = 1
        return mats

    def anchor_indices(self) -> list[int | None]:
        idx = self.vertex_index()
        return [idx[self.q_anchors[s.name]] if s.name in self.q_anchors else None
                for s in self.alphabet.symbols]

    def sorted_edges(self) -> list[tuple[str, str, str]]:
        idx = self.vertex_index()
        return sorted(self.edges, key=lambda e: (self.alphabet.index(e[2]), idx[e[0]], idx[e[1]]))

    def to_json(self) -> dict:
        return {
            "alphabet": self.alphabet.to_json(),
            "language": {
                "kind": "graph",
                "vertices": list(self.vertices),
                "edges": [{"from": u, "to": v, "symbol": a} for u, v, a in self.sorted_edges()],
                "q_anchors": {s.name: self.q_anchors[s.name]
                              for s in self.alphabet.symbols if s.name in self.q_anchors},
                **({} if self.depth is None else {"depth": self.depth}),
            },
        }

    @classmethod
    def from_json(cls, alphabet: Alphabet, data: dict) -> "ChromaticGraph":
        for key in ("vertices", "edges"):
            if key not in data:
                raise ParseError(f"language.{key}: missing")
        edges = []
        for k, e in enumerate(data["edges"]):
            try:
                edges.append((str(e["from"]), str(e["to"]), e["symbol"]))
            except (KeyError, TypeError):
                raise ParseError(f"language.edges[{k}]: expected keys from, to, symbol") from None
        anchors = {a: str(v) for a, v in data.get("q_anchors", {}).items()}
        return cls(alphabet, tuple(str(v) for v in data["vertices"]), frozenset(edges), anchors,
                   data.get("depth"))


def path_graph(depth: int, loops: bool = False) -> ChromaticGraph:
    """The truncated directed path (optionally with ``x`` self-loops) over ``[``, ``]``, ``x``.

    Vertex ``h`` stands for height ``h``; a ``]``-edge raises the height.
    """
    if loops:
        alphabet = Alphabet.from_pairs(("[", "]"), "x")
    else:
        alphabet = Alphabet.from_pairs(("[", "]"))
    vertices = tuple(str(h) for h in range(1, depth + 1))
    edges = {(str(h), str(h + 1), "]") for h in range(1, depth)}
    if loops:
        edges |= {(v, v, "x") for v in vertices}
    return ChromaticGraph(alphabet, vertices, frozenset(edges), {"]": "1"}, depth)


def loop_graph() -> ChromaticGraph:
    """One vertex with a ``d``-loop; ``b*`` anchors there (the Schur complement)."""
    alphabet = Alphabet.from_pairs(("b", "b*"), "d")
    return ChromaticGraph(alphabet, ("0",), frozenset({("0", "0", "d")}), {"b*": "0"}, 1)
