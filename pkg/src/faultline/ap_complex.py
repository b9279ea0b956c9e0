"""Anderson-Putnam complexes of 1-d substitutions.

Edges are collared letters: a core letter plus one letter of context on each
side that border forcing does not already determine.  Vertices are classes of
edge endpoints glued along legal two-letter transitions of the collared
substitution; the substitution induces a map on edges (whose abelianization
is the edge matrix) and a compatible map on vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import abelian
from .errors import FaultlineError, ValidationError
from .substitution import Substitution


def border_forcing(s, cap=8):
    """(right_forced_in, left_forced_in): the smallest power m <= cap at
    which all m-fold images share a first letter (forcing the border on the
    right) resp. a last letter (forcing on the left); None if no m works.
    This is the shared-prefix sufficient condition, not full border forcing."""
    right = left = None
    firsts = {a: (a,) for a in range(s.size)}
    lasts = {a: (a,) for a in range(s.size)}
    imgs = {a: (a,) for a in range(s.size)}
    for m in range(1, cap + 1):
        imgs = {a: s.apply(w) for a, w in imgs.items()}
        if right is None and len({w[0] for w in imgs.values()}) == 1:
            right = m
        if left is None and len({w[-1] for w in imgs.values()}) == 1:
            left = m
        if right is not None and left is not None:
            break
    return right, left


@dataclass(frozen=True, order=True)
class CollaredLetter:
    """Core letter with the collar context actually used on each side."""

    left: Optional[int]
    core: int
    right: Optional[int]

    def display(self, alphabet):
        parts = []
        if self.left is not None:
            parts.append(alphabet[self.left])
        parts.append(alphabet[self.core])
        if self.right is not None:
            parts.append(alphabet[self.right])
        return "|".join(parts)


@dataclass(frozen=True)
class APComplex:
    """Graph complex of a substitution: edges are collared letters, vertices
    glue edge endpoints along legal transitions."""

    base: Substitution
    substitution: Substitution          # induced substitution on collared letters
    edges: tuple                        # CollaredLetter per edge, index order
    edge_names: tuple
    edge_map: tuple                     # per edge: image as a tuple of edge ids
    edge_matrix: np.ndarray             # abelianization of edge_map
    vertices: tuple                     # per vertex: frozenset of (edge, 'start'|'end')
    vertex_map: tuple                   # per vertex: image vertex id
    transitions: tuple                  # legal 2-words of collared letters
    collared_left: bool
    collared_right: bool

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_vertices(self):
        return len(self.vertices)

    def vertex_of(self, slot):
        for i, cls in enumerate(self.vertices):
            if slot in cls:
                return i
        raise KeyError(slot)

    def vertex_pullback_matrix(self):
        """0-1 matrix of f -> f o vertex_map acting on 0-cochains."""
        n = self.n_vertices
        m = [[0] * n for _ in range(n)]
        for v, w in enumerate(self.vertex_map):
            m[v][w] = 1
        return abelian.mat(m)

    def junctions_at(self, vertex):
        """Legal transitions (e, f) whose junction end(e) ~ start(f) sits at
        the given vertex, sorted."""
        cls = self.vertices[vertex]
        return tuple(
            sorted((e, f) for e, f in self.transitions if (e, "end") in cls)
        )


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        self.parent[self.find(x)] = self.find(y)


def collar(s, cap=8):
    """Build the collared substitution and its Anderson-Putnam complex.

    Collars carry exactly one letter of context on each side that is not
    border-forced.  Vertex classes come from union-find over the legal
    two-letter transitions of the collared substitution, and the vertex map
    is checked for consistency (every endpoint slot of a class must land in
    one class)."""
    if not isinstance(s, Substitution):
        raise ValidationError("collar expects a Substitution")
    right_forced, left_forced = border_forcing(s, cap=cap)
    need_left = left_forced is None
    need_right = right_forced is None
    width = 1 + (1 if need_left else 0) + (1 if need_right else 0)
    core_pos = 1 if need_left else 0

    contexts = sorted(s.legal_words(width))
    seen = {}
    edges = []
    for w in contexts:
        c = CollaredLetter(
            left=w[core_pos - 1] if need_left else None,
            core=w[core_pos],
            right=w[core_pos + 1] if need_right else None,
        )
        if c not in seen:
            seen[c] = len(edges)
            edges.append(c)
    edges = tuple(sorted(edges))
    index = {c: i for i, c in enumerate(edges)}
    alphabet = s.alphabet

    def image_word(c):
        ctx = []
        if need_left:
            ctx.append(c.left)
        ctx.append(c.core)
        if need_right:
            ctx.append(c.right)
        img = s.apply(tuple(ctx))
        start = len(s.rule(c.left)) if need_left else 0
        block = s.rule(c.core)
        out = []
        for pos in range(start, start + len(block)):
            cc = CollaredLetter(
                left=img[pos - 1] if need_left else None,
                core=img[pos],
                right=img[pos + 1] if need_right else None,
            )
            if cc not in index:
                raise FaultlineError(
                    f"collared image letter {cc} is not legal; collaring is inconsistent"
                )
            out.append(index[cc])
        return tuple(out)

    edge_map = tuple(image_word(c) for c in edges)
    names = tuple(c.display(alphabet) for c in edges)
    collared = Substitution(names, {names[i]: edge_map[i] for i in range(len(edges))})
    edge_matrix = collared.matrix()

    transitions = tuple(sorted(collared.legal_words(2)))
    slots = [(e, side) for e in range(len(edges)) for side in ("start", "end")]
    uf = _UnionFind(slots)
    for e, f in transitions:
        uf.union((e, "end"), (f, "start"))
    classes = {}
    for slot in slots:
        classes.setdefault(uf.find(slot), []).append(slot)
    vertices = tuple(sorted((frozenset(v) for v in classes.values()), key=lambda c: sorted(c)))
    vertex_of = {slot: i for i, cls in enumerate(vertices) for slot in cls}

    vertex_map = []
    for cls in vertices:
        targets = set()
        for e, side in cls:
            if side == "end":
                targets.add(vertex_of[(edge_map[e][-1], "end")])
            else:
                targets.add(vertex_of[(edge_map[e][0], "start")])
        if len(targets) != 1:
            raise FaultlineError("vertex map is inconsistent; the complex is invalid")
        vertex_map.append(targets.pop())

    cx = APComplex(
        base=s,
        substitution=collared,
        edges=edges,
        edge_names=names,
        edge_map=edge_map,
        edge_matrix=edge_matrix,
        vertices=vertices,
        vertex_map=tuple(vertex_map),
        transitions=transitions,
        collared_left=need_left,
        collared_right=need_right,
    )
    # pullbacks on cochains must intertwine with the coboundary
    d = _coboundary(cx)
    assert (edge_matrix.T @ d == d @ cx.vertex_pullback_matrix()).all()
    return collared, cx


def _coboundary(cx):
    """Vertex-to-edge coboundary: (df)(e) = f(end e) - f(start e)."""
    vertex_of = {slot: i for i, cls in enumerate(cx.vertices) for slot in cls}
    d = [[0] * cx.n_vertices for _ in range(cx.n_edges)]
    for e in range(cx.n_edges):
        d[e][vertex_of[(e, "end")]] += 1
        d[e][vertex_of[(e, "start")]] -= 1
    return abelian.mat(d)


def _is_connected(cx):
    if cx.n_vertices == 0:
        return False
    uf = _UnionFind(range(cx.n_vertices))
    vertex_of = {slot: i for i, cls in enumerate(cx.vertices) for slot in cls}
    for e in range(cx.n_edges):
        uf.union(vertex_of[(e, "start")], vertex_of[(e, "end")])
    return len({uf.find(v) for v in range(cx.n_vertices)}) == 1


@dataclass(frozen=True)
class GradedGroupData:
    """H^1 of the complex as the cokernel of the coboundary, with the induced
    substitution action in a chosen basis."""

    h1_rank: int
    h1_basis: tuple      # edge coordinates of the basis, one column per generator
    induced_h1: tuple    # action of the edge-matrix transpose on the cokernel

    @property
    def induced_matrix(self):
        return abelian.mat(self.induced_h1) if self.h1_rank else np.zeros((0, 0), dtype=object)


def graph_h1(cx):
    """Cokernel of the coboundary (free of rank E - V + 1 for a connected
    complex) and the descended action of the edge-matrix transpose."""
    if not _is_connected(cx):
        raise ValidationError("AP complex is not connected")
    d = _coboundary(cx)
    snf = abelian.smith_normal_form(d)
    rank = snf.rank
    assert all(x == 1 for x in snf.diagonal[:rank]), "graph coboundary must have unit invariant factors"
    e = cx.n_edges
    proj = snf.u[rank:, :]
    sect = snf.u_inv[:, rank:]
    induced = proj @ cx.edge_matrix.T @ sect
    assert rank == cx.n_vertices - 1
    return GradedGroupData(
        h1_rank=e - rank,
        h1_basis=abelian.mat_tuple(sect),
        induced_h1=abelian.mat_tuple(induced),
    )
