"""Simplicial triangulations of closed surfaces with labeled vertices.

A vertex is identified by an integer key equal to the minimum of its label,
where the label is the set of original vertex ids that have been merged into
it by edge contractions.  Keys of distinct vertices are therefore always
distinct.  Triangulation values are immutable; every operation returns a new
value, so instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .errors import (
    BadInterval,
    Disconnected,
    DuplicateTriangle,
    NotASurface,
    NotContractible,
    TooSmall,
    UnknownEdge,
    UnknownVertex,
)


class SurfaceClass(Enum):
    SPHERE = "sphere"
    TORUS = "torus"
    PROJECTIVE_PLANE = "projective_plane"
    KLEIN_BOTTLE = "klein_bottle"
    OTHER = "other"


SUPPORTED_SURFACES = (
    SurfaceClass.SPHERE,
    SurfaceClass.TORUS,
    SurfaceClass.PROJECTIVE_PLANE,
    SurfaceClass.KLEIN_BOTTLE,
)


@dataclass(frozen=True)
class TopologyReport:
    euler_characteristic: int
    orientable: bool
    surface_class: SurfaceClass


@dataclass(frozen=True)
class LinkCycle:
    vertex: int
    cycle: tuple[int, ...]

    def __len__(self):
        return len(self.cycle)


def classify_surface(chi, orientable):
    if chi == 2:
        return SurfaceClass.SPHERE
    if chi == 1:
        return SurfaceClass.PROJECTIVE_PLANE
    if chi == 0:
        return SurfaceClass.TORUS if orientable else SurfaceClass.KLEIN_BOTTLE
    return SurfaceClass.OTHER


def _link_cycle_of(vertex, faces_at_vertex):
    """Cyclic neighbor order of a vertex, or None if the link is not a
    single cycle covering every neighbor."""
    adj = {}
    for f in faces_at_vertex:
        a, b = sorted(f - {vertex})
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if not adj or any(len(nbrs) != 2 for nbrs in adj.values()):
        return None
    start = min(adj)
    second = min(adj[start])
    cycle = [start, second]
    while True:
        prev, cur = cycle[-2], cycle[-1]
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == start:
            break
        if nxt in cycle:
            return None
        cycle.append(nxt)
    if len(cycle) != len(adj) or len(cycle) < 3:
        return None
    return tuple(cycle)


class Triangulation:
    """A simplicial triangulation of a closed surface.

    Construct via :func:`validate` (raw triangle list, singleton labels) or
    internally via :meth:`_make`.  ``triangles`` is a frozenset of 3-element
    frozensets of vertex keys; ``labels`` maps each key to its label set.
    """

    __slots__ = ("_labels", "_triangles", "_links", "_edges", "_topology")

    def __init__(self, labels, triangles, _checked=False):
        if not _checked:
            raise TypeError("use validate() or the operation methods")
        self._labels = labels
        self._triangles = triangles
        self._links = None
        self._edges = None
        self._topology = None

    # -- construction -------------------------------------------------

    @classmethod
    def _make(cls, labels, triangles):
        """Build and fully check a triangulation from prepared parts."""
        labels = dict(labels)
        triangles = frozenset(frozenset(t) for t in triangles)
        _check_surface(set(labels), triangles)
        for key, label in labels.items():
            if key != min(label):
                raise ValueError(f"vertex key {key} is not min of its label")
        seen = set()
        for label in labels.values():
            if seen & label:
                raise ValueError("vertex labels are not pairwise disjoint")
            seen |= label
        return cls(labels, triangles, _checked=True)

    # -- basic accessors ------------------------------------------------

    @property
    def labels(self):
        return dict(self._labels)

    def label(self, v):
        try:
            return self._labels[v]
        except KeyError:
            raise UnknownVertex(f"no vertex {v}") from None

    @property
    def vertex_keys(self):
        return tuple(sorted(self._labels))

    @property
    def triangles(self):
        return self._triangles

    def sorted_triangles(self):
        return sorted(tuple(sorted(t)) for t in self._triangles)

    @property
    def edges(self):
        if self._edges is None:
            es = set()
            for t in self._triangles:
                for pair in combinations(t, 2):
                    es.add(frozenset(pair))
            self._edges = frozenset(es)
        return self._edges

    def has_edge(self, u, v):
        return frozenset((u, v)) in self.edges

    def num_vertices(self):
        return len(self._labels)

    def __eq__(self, other):
        return (isinstance(other, Triangulation)
                and self._labels == other._labels
                and self._triangles == other._triangles)

    def __hash__(self):
        return hash((frozenset(self._labels.items()), self._triangles))

    def __repr__(self):
        return (f"Triangulation(|V|={len(self._labels)}, "
                f"|F|={len(self._triangles)})")

    def fresh_key(self):
        """Next id of the monotone counter, disjoint from all label ids."""
        return max(max(lab) for lab in self._labels.values()) + 1

    # -- links ----------------------------------------------------------

    def _all_links(self):
        if self._links is None:
            at = {v: [] for v in self._labels}
            for t in self._triangles:
                for v in t:
                    at[v].append(t)
            links = {}
            for v, faces in at.items():
                cyc = _link_cycle_of(v, faces)
                assert cyc is not None, "constructed complex lost link condition"
                links[v] = cyc
            self._links = links
        return self._links

    def link(self, v):
        """Deterministic link cycle: lowest-key neighbor first, then its
        lower-key cycle neighbor."""
        if v not in self._labels:
            raise UnknownVertex(f"no vertex {v}")
        return LinkCycle(v, self._all_links()[v])

    def neighbors(self, v):
        return set(self._all_links()[v])

    def degree(self, v):
        return len(self._all_links()[v])

    def faces_at_edge(self, u, v):
        e = {u, v}
        return [t for t in self._triangles if e <= t]

    # -- topology ---------------------------------------------------------

    def topology(self):
        if self._topology is None:
            chi = (len(self._labels) - len(self.edges) + len(self._triangles))
            orientable = _is_orientable(self._triangles)
            self._topology = TopologyReport(chi, orientable,
                                            classify_surface(chi, orientable))
        return self._topology

    # -- empty triangles and contractibility ------------------------------

    def empty_triangles(self):
        """All vertex triples whose three edges are present but whose
        2-face is absent."""
        links = self._all_links()
        out = set()
        for v in self._labels:
            nbrs = links[v]
            for a, b in combinations(nbrs, 2):
                if v < a and v < b and self.has_edge(a, b):
                    t = frozenset((v, a, b))
                    if t not in self._triangles:
                        out.add(t)
        return out

    def is_contractible_edge(self, edge):
        """True iff the edge lies in no empty triangle and |V| > 4."""
        u, v = edge
        if frozenset((u, v)) not in self.edges:
            raise UnknownEdge(f"no edge {u}-{v}")
        if len(self._labels) <= 4:
            return False
        common = self.neighbors(u) & self.neighbors(v)
        # the two apexes of the faces at the edge are always common neighbors;
        # any further common neighbor spans an empty triangle
        return len(common) == 2

    def contractible_edges(self):
        """Contractible edges in lexicographic key order."""
        out = [tuple(sorted(e)) for e in self.edges if self.is_contractible_edge(tuple(e))]
        return sorted(out)

    # -- local moves -------------------------------------------------------

    def contract(self, edge):
        """Contract an edge, merging the two labels per the naming
        convention for merged vertices."""
        u, v = edge
        if not self.is_contractible_edge((u, v)):
            raise NotContractible(f"edge {u}-{v} is not contractible")
        merged_label = self._labels[u] | self._labels[v]
        m = min(u, v)
        labels = {k: lab for k, lab in self._labels.items() if k not in (u, v)}
        labels[m] = merged_label
        tris = set()
        for t in self._triangles:
            if u in t and v in t:
                continue
            if u in t or v in t:
                tris.add(frozenset((m if x in (u, v) else x) for x in t))
            else:
                tris.add(t)
        return Triangulation._make(labels, tris)

    def split(self, v, x1, xk):
        """Split vertex v along its link: v keeps the closed interval
        [x1..xk] of the deterministic link order, the new vertex receives
        the complementary closed interval [xk..x1].

        Returns (new triangulation, key of the new vertex).
        """
        if v not in self._labels:
            raise UnknownVertex(f"no vertex {v}")
        cyc = self._all_links()[v]
        if x1 == xk or x1 not in cyc or xk not in cyc:
            raise BadInterval(f"bad interval endpoints {x1},{xk} on link of {v}")
        i, j = cyc.index(x1), cyc.index(xk)
        kept = _arc(cyc, i, j)
        far = _arc(cyc, j, i)
        w = self.fresh_key()
        labels = dict(self._labels)
        labels[w] = frozenset((w,))
        tris = {t for t in self._triangles if v not in t}
        for a, b in zip(kept, kept[1:]):
            tris.add(frozenset((v, a, b)))
        for a, b in zip(far, far[1:]):
            tris.add(frozenset((w, a, b)))
        tris.add(frozenset((v, w, x1)))
        tris.add(frozenset((v, w, xk)))
        return Triangulation._make(labels, tris), w


def _arc(cycle, i, j):
    """Closed arc of a cyclic sequence from position i forward to j."""
    n = len(cycle)
    out = [cycle[i]]
    while i != j:
        i = (i + 1) % n
        out.append(cycle[i])
    return out


def _check_surface(vertex_keys, triangles):
    """Raise unless the face set triangulates a closed connected surface."""
    if any(len(t) != 3 for t in triangles):
        raise NotASurface("a face is not a vertex triple")
    covered = set()
    for t in triangles:
        covered |= t
    if covered - vertex_keys:
        raise NotASurface("face references unknown vertex")
    if vertex_keys - covered:
        raise NotASurface("isolated vertex")
    if len(vertex_keys) < 4:
        raise TooSmall(f"only {len(vertex_keys)} vertices")
    edge_count = {}
    for t in triangles:
        for pair in combinations(t, 2):
            e = frozenset(pair)
            edge_count[e] = edge_count.get(e, 0) + 1
    for e, c in edge_count.items():
        if c != 2:
            raise NotASurface(f"edge {sorted(e)} lies in {c} triangles")
    at = {v: [] for v in vertex_keys}
    for t in triangles:
        for v in t:
            at[v].append(t)
    for v in vertex_keys:
        if _link_cycle_of(v, at[v]) is None:
            raise NotASurface(f"link of vertex {v} is not a single cycle")
    # connectivity over the 1-skeleton
    start = next(iter(vertex_keys))
    seen = {start}
    stack = [start]
    adj = {v: set() for v in vertex_keys}
    for e in edge_count:
        a, b = e
        adj[a].add(b)
        adj[b].add(a)
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if seen != vertex_keys:
        raise Disconnected("complex is not connected")


def _is_orientable(triangles):
    """Decide orientability by propagating a consistent orientation across
    shared edges; succeeds iff no directed edge is traversed twice."""
    tris = [tuple(sorted(t)) for t in triangles]
    at_edge = {}
    for idx, t in enumerate(tris):
        for pair in combinations(t, 2):
            at_edge.setdefault(frozenset(pair), []).append(idx)
    orient = {0: tris[0]}
    stack = [0]
    while stack:
        idx = stack.pop()
        a, b, c = orient[idx]
        for x, y in ((a, b), (b, c), (c, a)):
            others = [o for o in at_edge[frozenset((x, y))] if o != idx]
            (o,) = others
            t = set(tris[o])
            (z,) = t - {x, y}
            want = (y, x, z)
            if o not in orient:
                orient[o] = want
                stack.append(o)
            else:
                have = orient[o]
                k = have.index(y) if y in have else None
                # directed edge (y, x) must appear in the stored orientation
                ok = any(have[i] == y and have[(i + 1) % 3] == x for i in range(3))
                if not ok:
                    return False
    return True


def validate(raw_triangles):
    """Validate a raw triangle list and return a Triangulation with
    singleton labels.

    Raises DuplicateTriangle, TooSmall, NotASurface or Disconnected.
    """
    tris = []
    seen = set()
    for t in raw_triangles:
        t = tuple(t)
        if len(t) != 3 or len(set(t)) != 3:
            raise NotASurface(f"not a vertex triple: {t}")
        if any((not isinstance(x, int)) or x < 0 for x in t):
            raise NotASurface(f"vertex ids must be nonnegative integers: {t}")
        f = frozenset(t)
        if f in seen:
            raise DuplicateTriangle(f"triangle {sorted(f)} occurs twice")
        seen.add(f)
        tris.append(f)
    verts = set()
    for t in tris:
        verts |= t
    labels = {v: frozenset((v,)) for v in verts}
    return Triangulation._make(labels, tris)
