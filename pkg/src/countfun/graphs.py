"""De Bruijn and Martin-de Bruijn transition graphs and the coboundary test.

At level ``L`` the vertices are the reduced words of length ``L - 1`` and the
edges are the reduced words of length ``L``; edge ``w`` runs from
``w[:-1]`` to ``w[1:]``.  Loops and parallel edges are kept.

A pure sum of length ``L`` is bounded exactly when, read as a function on
edges, it is a coboundary ``c(suffix) - c(prefix)`` of some vertex
potential ``c``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .errors import Disconnected, LevelOutOfRange, NotPure
from .formal import FormalSum, b_relation
from .words import CyclicWord, Mode, Word, format_word, words_of_length


def prefix(e: Word) -> Word:
    return e[:-1]


def suffix(e: Word) -> Word:
    return e[1:]


@dataclass(frozen=True)
class TransitionGraph:
    mode: Mode
    level: int
    vertices: Tuple[Word, ...]
    edges: Tuple[Word, ...]

    def is_loop(self, e: Word) -> bool:
        return prefix(e) == suffix(e)

    @property
    def incidence(self) -> Dict[Word, List[Word]]:
        """Vertex -> incident edges (in and out, loops once), Hebrew order."""
        return _incidence(self)

    @property
    def out_edges(self) -> Dict[Word, List[Word]]:
        return _out_edges(self)

    @property
    def in_edges(self) -> Dict[Word, List[Word]]:
        return _in_edges(self)


@lru_cache(maxsize=None)
def _incidence(g: TransitionGraph):
    inc = {v: [] for v in g.vertices}
    for e in g.edges:
        inc[prefix(e)].append(e)
        if suffix(e) != prefix(e):
            inc[suffix(e)].append(e)
    return inc


@lru_cache(maxsize=None)
def _out_edges(g: TransitionGraph):
    out = {v: [] for v in g.vertices}
    for e in g.edges:
        out[prefix(e)].append(e)
    return out


@lru_cache(maxsize=None)
def _in_edges(g: TransitionGraph):
    inn = {v: [] for v in g.vertices}
    for e in g.edges:
        inn[suffix(e)].append(e)
    return inn


@lru_cache(maxsize=None)
def build_graph(mode: Mode, level: int) -> TransitionGraph:
    if level < 1:
        raise LevelOutOfRange(f"graph level must be >= 1, got {level}")
    return TransitionGraph(mode, level, tuple(words_of_length(mode, level - 1)),
                           tuple(words_of_length(mode, level)))


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph without loops or multiple edges."""

    vertices: Tuple
    edges: Tuple[Tuple, ...]  # pairs (u, v) with u before v in vertex order

    def neighbours(self):
        nb = {v: [] for v in self.vertices}
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return nb


def loop_erase(g) -> SimpleGraph:
    if isinstance(g, SimpleGraph):
        return g
    order = {v: i for i, v in enumerate(g.vertices)}
    pairs = set()
    for e in g.edges:
        u, v = prefix(e), suffix(e)
        if u == v:
            continue
        pairs.add((u, v) if order[u] < order[v] else (v, u))
    return SimpleGraph(g.vertices, tuple(sorted(pairs, key=lambda p: (order[p[0]], order[p[1]]))))


@lru_cache(maxsize=64)
def _bfs_forest(g):
    """Deterministic breadth-first spanning forest.

    Returns ``(tree_edges, parent, roots)`` where ``parent[v] = (u, edge)``.
    For a transition graph the tree edges are edge words; for a simple graph
    they are vertex pairs.
    """
    if isinstance(g, SimpleGraph):
        nb = g.neighbours()
        order = {v: i for i, v in enumerate(g.vertices)}
        inc = {v: sorted(((w, (v, w) if order[v] < order[w] else (w, v)) for w in nb[v]),
                         key=lambda t: order[t[0]]) for v in g.vertices}
    else:
        inc = {v: [(suffix(e) if prefix(e) == v else prefix(e), e) for e in es]
               for v, es in g.incidence.items()}
    parent = {}
    roots = []
    tree = []
    for root in g.vertices:
        if root in parent:
            continue
        roots.append(root)
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w, e in inc[u]:
                if w not in parent:
                    parent[w] = (u, e)
                    tree.append(e)
                    queue.append(w)
    return tree, parent, roots


def spanning_tree(g) -> list:
    """Edges of the breadth-first spanning forest from the Hebrew-least vertex."""
    return list(_bfs_forest(g)[0])


def components(g) -> int:
    return len(_bfs_forest(g)[2])


def is_connected(g) -> bool:
    return components(g) == 1


@dataclass(frozen=True)
class ExtensionMatrix:
    """Rows ``b_w`` for ``|w| = L - 1`` in the basis of length-``L`` words."""

    mode: Mode
    level: int
    rows: Tuple[Word, ...]
    columns: Tuple[Word, ...]
    entries: Dict[Tuple[Word, Word], int] = field(compare=False)

    def entry(self, row: Word, column: Word) -> int:
        return self.entries.get((tuple(row), tuple(column)), 0)

    def to_lists(self, rows=None, columns=None):
        rows = self.rows if rows is None else rows
        columns = self.columns if columns is None else columns
        return [[self.entry(r, c) for c in columns] for r in rows]

    def rank(self) -> int:
        """Rank read off the transition graph: vertices minus components."""
        g = build_graph(self.mode, self.level)
        return len(g.vertices) - components(g)


def extension_matrix(mode: Mode, level: int) -> ExtensionMatrix:
    if level < 2:
        raise LevelOutOfRange(f"extension matrices need level >= 2, got {level}")
    g = build_graph(mode, level)
    entries = {}
    for w in g.vertices:
        for v, c in b_relation(w, mode).terms.items():
            entries[(w, v)] = int(c)
    return ExtensionMatrix(mode, level, g.vertices, g.edges, entries)


@dataclass(frozen=True)
class CoboundaryResult:
    """Outcome of the coboundary test.

    ``potential`` is set when the sum is a coboundary; otherwise ``cycle``
    is a closed walk (as edge words) with nonzero edge sum, ``witness`` is
    the same walk read as a cyclic word and ``value`` is that sum.
    """

    is_coboundary: bool
    potential: Optional[Dict[Word, Fraction]] = None
    cycle: Optional[Tuple[Word, ...]] = None
    witness: Optional[CyclicWord] = None
    value: Optional[Fraction] = None

    def __bool__(self):
        return self.is_coboundary


def _walk_to_cyclic(edges, mode: Mode) -> CyclicWord:
    return CyclicWord.from_word(tuple(e[0] for e in edges), mode)


def _bfs_paths(g: TransitionGraph, root: Word, forward: bool):
    """Shortest directed paths from ``root`` (forward) or to ``root`` (backward)."""
    adj = g.out_edges if forward else g.in_edges
    via = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for e in adj[u]:
            w = suffix(e) if forward else prefix(e)
            if w not in via:
                via[w] = e
                queue.append(w)
    return via


def _path(via, v: Word, forward: bool) -> List[Word]:
    edges = []
    while via[v] is not None:
        e = via[v]
        edges.append(e)
        v = prefix(e) if forward else suffix(e)
    if forward:
        edges.reverse()
    return edges


def _split_simple_cycles(walk: List[Word]):
    """Split a closed walk into simple directed cycles."""
    cycles = []
    stack_vertices = [prefix(walk[0])]
    stack_edges: List[Word] = []
    for e in walk:
        stack_edges.append(e)
        v = suffix(e)
        if v in stack_vertices:
            i = stack_vertices.index(v)
            cycles.append(stack_edges[i:])
            del stack_edges[i:]
            del stack_vertices[i + 1:]
        else:
            stack_vertices.append(v)
    return cycles


def _directed_witness(g: TransitionGraph, f: FormalSum):
    """A simple directed cycle on which ``f`` sums to a nonzero value, if any."""
    def total(es):
        return sum((f[e] for e in es), Fraction(0))

    seen = set()
    for root in g.vertices:
        if root in seen:
            continue
        down = _bfs_paths(g, root, forward=True)
        up = _bfs_paths(g, root, forward=False)
        seen.update(down)
        pot = {v: total(_path(down, v, True)) for v in down}
        for e in g.edges:
            u, v = prefix(e), suffix(e)
            if u not in pot or v not in pot:
                continue
            if pot[u] + f[e] == pot[v]:
                continue
            back = _path(up, v, False)
            for walk in (_path(down, u, True) + [e] + back, _path(down, v, True) + back):
                if not walk:
                    continue
                if total(walk) == 0:
                    continue
                for cyc in _split_simple_cycles(walk):
                    s = total(cyc)
                    if s != 0:
                        return tuple(cyc), s
    return None


def coboundary_test(f: FormalSum, level: int) -> CoboundaryResult:
    """Decide whether the pure sum ``f`` of length ``level`` is a coboundary."""
    if not f.is_pure(level):
        raise NotPure(f"sum is not pure of length {level}")
    mode = f.mode
    if level == 1:
        # no relations among pure length-1 sums
        if not f:
            return CoboundaryResult(True, potential={(): Fraction(0)})
        s, c = f.items()[0]
        return CoboundaryResult(False, cycle=(s,), witness=CyclicWord.from_word(s, mode), value=c)
    potential, residual = solve_potential(f, level)
    if not residual:
        return CoboundaryResult(True, potential=potential)
    g = build_graph(mode, level)
    found = _directed_witness(g, f)
    if found is None:  # pragma: no cover - balanced digraphs are strongly connected
        raise RuntimeError("no directed witness cycle for a non-coboundary")
    cycle, value = found
    return CoboundaryResult(False, cycle=cycle, witness=_walk_to_cyclic(cycle, mode), value=value)


@lru_cache(maxsize=64)
def _tree_order(g):
    """Vertices ordered so that every parent precedes its children."""
    parent, vertices = _bfs_forest(g)[1], g.vertices
    children = {v: [] for v in vertices}
    roots = []
    for v in vertices:
        if parent[v] is None:
            roots.append(v)
        else:
            children[parent[v][0]].append(v)
    order = []
    queue = deque(roots)
    while queue:
        v = queue.popleft()
        order.append(v)
        queue.extend(children[v])
    return order


def solve_potential(f: FormalSum, level: int):
    """Potential ``c`` making ``f - sum c_v b_v`` vanish on the spanning tree.

    Returns ``(potential, residual)``.
    """
    g = build_graph(f.mode, level)
    potential: Dict[Word, Fraction] = {}
    parent = _bfs_forest(g)[1]
    for v in _tree_order(g):
        link = parent[v]
        if link is None:
            potential[v] = Fraction(0)
            continue
        u, e = link
        potential[v] = potential[u] + f[e] if suffix(e) == v else potential[u] - f[e]
    residual = {}
    for e in g.edges:
        r = f[e] - (potential[suffix(e)] - potential[prefix(e)])
        if r:
            residual[e] = r
    return potential, FormalSum(f.mode, residual, _trusted=True)


def spanning_tree_count(g, multi: bool = False) -> int:
    """Number of spanning trees by the matrix-tree theorem, exactly.

    With ``multi`` parallel edges of a transition graph count separately,
    so trees are sets of edge words; otherwise the loop-erased graph is used.
    """
    sg = loop_erase(g)
    if not is_connected(sg):
        raise Disconnected("spanning trees need a connected graph")
    n = len(sg.vertices)
    if n == 1:
        return 1
    if multi and isinstance(g, TransitionGraph):
        pairs = [(prefix(e), suffix(e)) for e in g.edges if not g.is_loop(e)]
    else:
        pairs = sg.edges
    index = {v: i for i, v in enumerate(sg.vertices)}
    lap = [[Fraction(0)] * n for _ in range(n)]
    for u, v in pairs:
        i, j = index[u], index[v]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    minor = [row[1:] for row in lap[1:]]
    return int(_determinant(minor))


def _determinant(m) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] / m[col][col]
            if factor:
                for k in range(col, n):
                    m[r][k] -= factor * m[col][k]
    return det


def to_dot(g, simple: bool = False) -> str:
    """DOT rendering with word labels; output order is deterministic."""
    lines = ["digraph G {" if not simple else "graph G {"]
    ids = {v: f"v{i}" for i, v in enumerate(g.vertices)}
    for v in g.vertices:
        lines.append(f'  {ids[v]} [label="{format_word(v)}"];')
    if simple:
        for u, v in loop_erase(g).edges:
            lines.append(f"  {ids[u]} -- {ids[v]};")
    else:
        for e in g.edges:
            lines.append(f'  {ids[prefix(e)]} -> {ids[suffix(e)]} [label="{format_word(e)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
