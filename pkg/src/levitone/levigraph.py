"""Structured Levi graphs: Majors as points, Minors as lines.

Edges come from the transformation rule M_r -> m_r, m_{r+t}, m_{r-s}
(coloured P, L, R). Coinciding targets give parallel edges, so every graph
is 3-regular counting multiplicity. The shares-two-tones rule is checked
separately by :func:`verify_intersection_rule`.

Vertex indices: point M_r is r, line m_r is n + r.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import _kernels
from .harmony import COLORS, MAJOR, MINOR, HarmonicSystem, chord, neighbor_roots

DOT_COLORS = {"P": "red", "L": "blue", "R": "gold"}
_UNREACHABLE = 10_000


class Orientation(enum.Enum):
    PRESERVING = "preserving"
    REVERSING = "reversing"

    def __xor__(self, other: "Orientation") -> "Orientation":
        same = self is other
        return Orientation.PRESERVING if same else Orientation.REVERSING


PRESERVING = Orientation.PRESERVING
REVERSING = Orientation.REVERSING


@dataclass(frozen=True)
class StructuredLeviGraph:
    system: HarmonicSystem
    # (point root, line root, colour), three per point, in P/L/R order
    edges: tuple[tuple[int, int, str], ...]
    mu: dict = field(compare=False, hash=False, repr=False)

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def points(self) -> list[str]:
        return [f"M{r}" for r in range(self.n)]

    @property
    def lines(self) -> list[str]:
        return [f"m{r}" for r in range(self.n)]

    @property
    def vertices(self) -> list[str]:
        return self.points + self.lines

    @cached_property
    def biadjacency(self) -> np.ndarray:
        """Edge multiplicities, points on rows and lines on columns."""
        b = np.zeros((self.n, self.n), dtype=np.int64)
        for r, j, _ in self.edges:
            b[r, j] += 1
        return b

    @cached_property
    def adjacency(self) -> np.ndarray:
        n = self.n
        a = np.zeros((2 * n, 2 * n), dtype=np.int64)
        a[:n, n:] = self.biadjacency
        a[n:, :n] = self.biadjacency.T
        return a

    @cached_property
    def distances(self) -> np.ndarray:
        return _distance_matrix(self.adjacency)

    def degree(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)


def build_graph(sys: HarmonicSystem) -> StructuredLeviGraph:
    edges = []
    for r in range(sys.n):
        for color, j in zip(COLORS, neighbor_roots(sys, MAJOR, r)):
            edges.append((r, j, color))
    mu = {}
    for r in range(sys.n):
        mu[f"M{r}"] = chord(sys, MAJOR, r).triple
    for r in range(sys.n):
        mu[f"m{r}"] = chord(sys, MINOR, r).triple
    return StructuredLeviGraph(sys, tuple(edges), mu)


def _distance_matrix(adj: np.ndarray) -> np.ndarray:
    m = adj.shape[0]
    d = np.where(adj > 0, 1, _UNREACHABLE).astype(np.int64)
    np.fill_diagonal(d, 0)
    for k in range(m):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return np.minimum(d, _UNREACHABLE)


def components(adj: np.ndarray) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    m = adj.shape[0]
    seen = np.zeros(m, dtype=bool)
    out = []
    for v in range(m):
        if seen[v]:
            continue
        comp, stack = [], [v]
        seen[v] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in np.flatnonzero(adj[u]):
                if not seen[w]:
                    seen[w] = True
                    stack.append(int(w))
        out.append(sorted(comp))
    return out


# --------------------------------------------------------------------------
# the shares-two-tones rule


@dataclass(frozen=True)
class IntersectionReport:
    ok: bool
    mu_injective: bool
    # vertices whose triple repeats a pitch class
    short_triads: tuple[str, ...]
    # groups of vertices carrying the same pitch set
    collisions: tuple[tuple[str, ...], ...]
    # point/line pairs where the two rules disagree, with edge multiplicity
    # from the transformation rule and intersection size
    mismatches: tuple[tuple[str, str, int, int], ...]


def intersection_report(g: StructuredLeviGraph) -> IntersectionReport:
    n = g.n
    sets = {v: frozenset(tri) for v, tri in g.mu.items()}
    short = tuple(v for v in g.vertices if len(sets[v]) != 3)
    by_set: dict[frozenset, list[str]] = {}
    for v in g.vertices:
        by_set.setdefault(sets[v], []).append(v)
    collisions = tuple(tuple(vs) for vs in by_set.values() if len(vs) > 1)
    injective = not short and not collisions
    mismatches = []
    bi = g.biadjacency
    for r in range(n):
        for j in range(n):
            shared = len(sets[f"M{r}"] & sets[f"m{j}"])
            mult = int(bi[r, j])
            if (shared == 2) != (mult == 1) or mult > 1:
                mismatches.append((f"M{r}", f"m{j}", mult, shared))
    return IntersectionReport(
        ok=injective and not mismatches,
        mu_injective=injective,
        short_triads=short,
        collisions=collisions,
        mismatches=tuple(mismatches),
    )


def verify_intersection_rule(g: StructuredLeviGraph) -> bool:
    """True when the graph is a structured Levi graph in the strict sense:
    injective pitch-set decoration, simple edges, and edges exactly where a
    point and a line share two pitch classes."""
    return intersection_report(g).ok


# --------------------------------------------------------------------------
# abstract isomorphism


@dataclass(frozen=True)
class IsoWitnessAbstract:
    # vertex_bijection[i] is the image index of vertex i
    vertex_bijection: tuple[int, ...]
    orientation: Orientation

    def labelled(self, g1: StructuredLeviGraph, g2: StructuredLeviGraph) -> dict[str, str]:
        names1, names2 = g1.vertices, g2.vertices
        return {names1[i]: names2[j] for i, j in enumerate(self.vertex_bijection)}

    def inverse(self) -> "IsoWitnessAbstract":
        inv = [0] * len(self.vertex_bijection)
        for i, j in enumerate(self.vertex_bijection):
            inv[j] = i
        return IsoWitnessAbstract(tuple(inv), self.orientation)

    def then(self, other: "IsoWitnessAbstract") -> "IsoWitnessAbstract":
        """Apply self, then other."""
        return IsoWitnessAbstract(
            tuple(other.vertex_bijection[j] for j in self.vertex_bijection),
            self.orientation ^ other.orientation,
        )


def _vertex_profiles(g: StructuredLeviGraph) -> list[tuple]:
    d, a = g.distances, g.adjacency
    profiles = []
    for v in range(2 * g.n):
        hist = tuple(np.bincount(np.minimum(d[v], 2 * g.n + 1), minlength=2 * g.n + 2))
        mults = tuple(sorted(int(x) for x in a[v] if x))
        profiles.append((hist, mults))
    return profiles


def _initial_domain(g1, g2, orientation: Orientation) -> np.ndarray:
    n = g1.n
    p1, p2 = _vertex_profiles(g1), _vertex_profiles(g2)
    m = 2 * n
    dom = np.zeros((m, m), dtype=bool)
    for v in range(m):
        side_v = v >= n
        for c in range(m):
            side_c = c >= n
            if (side_v == side_c) != (orientation is PRESERVING):
                continue
            dom[v, c] = p1[v] == p2[c]
    return dom


def is_automorphism(g: StructuredLeviGraph, perm) -> bool:
    perm = np.asarray(perm)
    a = g.adjacency
    return bool((a[np.ix_(perm, perm)] == a).all())


def abstract_iso(
    g1: StructuredLeviGraph,
    g2: StructuredLeviGraph,
    orientation: Optional[Orientation] = None,
) -> Optional[IsoWitnessAbstract]:
    """Search for an adjacency-preserving bijection (with multiplicity).

    Returns the lexicographically first bijection under the vertex order
    M_0..M_{n-1}, m_0..m_{n-1}. A preserving bijection, when one exists, is
    lexicographically smaller than any reversing one, so it wins unless
    ``orientation`` restricts the search.
    """
    if g1.n != g2.n:
        return None
    if sorted(g1.degree()) != sorted(g2.degree()):
        return None
    wanted = [PRESERVING, REVERSING] if orientation is None else [orientation]
    a1, a2, d1, d2 = _kernels.as_kernel_arrays(g1.adjacency, g2.adjacency, g1.distances, g2.distances)
    for ori in wanted:
        dom = _initial_domain(g1, g2, ori)
        perm = _kernels.iso_search(a1, a2, d1, d2, dom)
        if perm.size and perm[0] >= 0:
            return IsoWitnessAbstract(tuple(int(x) for x in perm), ori)
    return None


# --------------------------------------------------------------------------
# canonical certificate


def _orbits(size: int, perms: list[np.ndarray]) -> np.ndarray:
    parent = list(range(size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i, j in enumerate(p):
            ri, rj = find(i), find(int(j))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    return np.array([find(i) for i in range(size)])


def _canonical_component(adj: np.ndarray, colors: np.ndarray, autos: list[np.ndarray]):
    """Minimum leaf of the individualisation-refinement tree.

    ``autos`` are known colour-preserving automorphisms; at the root only one
    vertex per orbit of the group they generate is individualised. Returns
    (size of colour-0 side, size of colour-1 side, P x L block bytes).
    """
    adj = np.ascontiguousarray(adj, dtype=np.int64)
    m = adj.shape[0]
    p = int((colors == 0).sum())
    orbit_of = _orbits(m, autos)
    best = [None]

    def leaf_bytes(col):
        pos = np.empty(m, dtype=np.int64)
        pos[np.argsort(col, kind="stable")] = np.arange(m)
        relabelled = np.zeros_like(adj)
        relabelled[np.ix_(pos, pos)] = adj
        return relabelled[:p, p:].astype(np.uint8).tobytes()

    def search(col, root):
        counts = np.bincount(col)
        if counts.max() == 1:
            form = leaf_bytes(col)
            if best[0] is None or form < best[0]:
                best[0] = form
            return
        cell = int(np.flatnonzero(counts > 1)[0])
        members = np.flatnonzero(col == cell)
        if root:
            seen, reps = set(), []
            for v in members:
                o = orbit_of[v]
                if o not in seen:
                    seen.add(o)
                    reps.append(v)
            members = reps
        for v in members:
            c2 = col * 2
            c2[v] -= 1
            search(_kernels.refine(adj, c2), False)

    search(_kernels.refine(adj, np.ascontiguousarray(colors, dtype=np.int64)), True)
    return (p, m - p, best[0])


def _translation(n: int, h: int) -> np.ndarray:
    r = np.arange(n)
    return np.concatenate([(r + h) % n, n + (r + h) % n])


def _side_form(g: StructuredLeviGraph, swap: bool, comps, translations):
    n = g.n
    adj = g.adjacency
    side = np.array([1 if v >= n else 0 for v in range(2 * n)])
    if swap:
        side = 1 - side
    forms = []
    for comp in comps:
        idx = np.array(comp)
        local = {v: i for i, v in enumerate(comp)}
        members = set(comp)
        autos = []
        for tr in translations:
            if {int(tr[v]) for v in comp} == members:
                autos.append(np.array([local[int(tr[v])] for v in comp]))
        forms.append(_canonical_component(adj[np.ix_(idx, idx)], side[idx], autos))
    return sorted(forms)


def canonical_certificate(g: StructuredLeviGraph) -> bytes:
    """Isomorphism-invariant byte string.

    Two graphs get equal certificates exactly when an abstract isomorphism
    exists between them in at least one orientation. Each connected component
    is canonically labelled with its point/line colouring, the component
    forms are sorted, and the smaller of the two side assignments wins.
    """
    n = g.n
    comps = components(g.adjacency)
    translations = [t for t in (_translation(n, h) for h in range(1, n)) if is_automorphism(g, t)]
    best = min(_side_form(g, False, comps, translations), _side_form(g, True, comps, translations))
    parts = [f"levi-cert/1;v={2 * n};".encode()]
    for p, l, block in best:
        parts.append(f"{p}x{l}:".encode() + block.hex().encode() + b";")
    return b"".join(parts)


# --------------------------------------------------------------------------
# export


def to_json_dict(g: StructuredLeviGraph) -> dict:
    sys = g.system
    vertices = []
    for r in range(g.n):
        vertices.append({"id": f"M{r}", "quality": "M", "root": r, "pitches": list(g.mu[f"M{r}"])})
    for r in range(g.n):
        vertices.append({"id": f"m{r}", "quality": "m", "root": r, "pitches": list(g.mu[f"m{r}"])})
    return {
        "n": g.n,
        "system": {"t": sys.t, "s": sys.s, "q": sys.q},
        "vertices": vertices,
        "edges": [{"from": f"M{r}", "to": f"m{j}", "color": c} for r, j, c in g.edges],
    }


def to_dot(g: StructuredLeviGraph) -> str:
    sys = g.system
    lines = [f'graph "levi_n{g.n}_t{sys.t}_s{sys.s}" {{']
    lines.append("  node [shape=circle];")
    for names in (g.points, g.lines):
        ids = "; ".join(f'"{v}"' for v in names)
        lines.append(f"  {{ rank=same; {ids}; }}")
    for v in g.vertices:
        pcs = ",".join(str(x) for x in g.mu[v])
        lines.append(f'  "{v}" [label="{v}\\n{{{pcs}}}"];')
    for r, j, c in g.edges:
        lines.append(f'  "M{r}" -- "m{j}" [color={DOT_COLORS[c]}, label="{c}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
