"""Catalog of irreducible triangulations and certified seed subsurfaces.

The concrete triangle lists live as .tri data files under data/catalog/ and
are re-verified on load (irreducibility, topology, published counts), so the
data is self-certifying.  Seeds are found by deterministic backtracking
search, certified by the edge-from-every-triangle condition.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from pathlib import Path

from .complex import SurfaceClass, Triangulation, validate
from .errors import (
    CorruptEntry,
    MissedTriangle,
    NotInCatalog,
    SeedNotFound,
    WrongCount,
)
from .fileio import parse_tri
from .isomorphism import canonical_form, canonical_form_with_map, isomorphism_map


class SpanningClass(Enum):
    DISC = "disc"
    CYLINDER = "cylinder"
    PINCHED_DISC = "pinched_disc"
    DISC_SUM = "disc_sum"


@dataclass(frozen=True)
class SpanningComplex:
    """A vertex-spanning 2-complex inside a host triangulation.

    ``triangles`` are host faces; ``extra_edges`` are host edges contained
    in no selected triangle (only disc sums may have them).  For a pinched
    disc ``pinch_vertex`` is the singular vertex; for a disc sum ``cap`` is
    the shared empty triangle and ``parts`` the two disc halves.
    """

    triangles: frozenset
    extra_edges: frozenset = frozenset()
    topology_class: SpanningClass = SpanningClass.DISC
    pinch_vertex: int | None = None
    cap: tuple | None = None
    parts: tuple | None = None

    def edges(self):
        out = set(self.extra_edges)
        for t in self.triangles:
            for pair in combinations(t, 2):
                out.add(frozenset(pair))
        return out

    def vertices(self):
        out = set()
        for t in self.triangles:
            out |= t
        for e in self.extra_edges:
            out |= e
        return out


@dataclass(frozen=True)
class ExtendibilityCertificate:
    hit_map: dict

    def __post_init__(self):
        object.__setattr__(self, "hit_map", dict(self.hit_map))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    surface_class: SurfaceClass
    complex: Triangulation
    crosscap: bool = False
    abc: tuple | None = None


# ---------------------------------------------------------------------------
# structural verification of spanning complexes
# ---------------------------------------------------------------------------

def _link_fragments(vertex, faces):
    """Components of the opposite-edge graph of ``vertex`` inside ``faces``.

    Returns (kind, components) where kind is 'cycle', 'paths' or 'bad';
    components is the list of component vertex counts for paths.
    """
    adj = {}
    for f in faces:
        a, b = sorted(set(f) - {vertex})
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    if not adj:
        return ("empty", [])
    if any(len(n) > 2 for n in adj.values()):
        return ("bad", [])
    seen = set()
    comps = []
    for s in adj:
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        ends = [x for x in comp if len(adj[x]) == 1]
        comps.append(("cycle" if not ends else "path", comp))
    kinds = [k for k, _ in comps]
    if kinds == ["cycle"]:
        return ("cycle", comps)
    if all(k == "path" for k in kinds):
        return ("paths", comps)
    return ("bad", comps)


def _euler(triangles):
    verts = set()
    edges = set()
    for t in triangles:
        verts |= set(t)
        for pair in combinations(t, 2):
            edges.add(frozenset(pair))
    return len(verts) - len(edges) + len(triangles)


def _boundary_components(triangles):
    """Number of boundary cycles of a triangle set (edges in one face)."""
    cnt = {}
    for t in triangles:
        for pair in combinations(t, 2):
            e = frozenset(pair)
            cnt[e] = cnt.get(e, 0) + 1
    boundary = [e for e, c in cnt.items() if c == 1]
    adj = {}
    for e in boundary:
        a, b = e
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(len(v) != 2 for v in adj.values()):
        return None
    seen = set()
    comps = 0
    for s in adj:
        if s in seen:
            continue
        comps += 1
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return comps


def _connected_faces(triangles):
    tris = list(triangles)
    if not tris:
        return False
    at_edge = {}
    for i, t in enumerate(tris):
        for pair in combinations(t, 2):
            at_edge.setdefault(frozenset(pair), []).append(i)
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for pair in combinations(tris[i], 2):
            for j in at_edge[frozenset(pair)]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
    return len(seen) == len(tris)


def _surface_with_boundary_kind(triangles, pinch_vertex=None):
    """Classify a pure triangle set as disc / cylinder / pinched disc.

    Returns a SpanningClass or None.  A pinched disc has exactly one vertex
    whose link is two disjoint paths; all other vertices are regular.
    """
    verts = set()
    for t in triangles:
        verts |= set(t)
    singulars = []
    for v in verts:
        kind, comps = _link_fragments(v, [t for t in triangles if v in t])
        if kind == "cycle":
            continue
        if kind == "paths" and len(comps) == 1:
            continue
        if kind == "paths" and len(comps) == 2:
            singulars.append(v)
            continue
        return None
    if not _connected_faces(triangles):
        return None
    chi = _euler(triangles)
    bc = _boundary_components(triangles)
    if singulars == []:
        if chi == 1 and bc == 1:
            return SpanningClass.DISC
        if chi == 0 and bc == 2:
            return SpanningClass.CYLINDER
        return None
    if len(singulars) == 1 and (pinch_vertex is None or singulars[0] == pinch_vertex):
        # resolving the pinch must leave a disc: chi of the pinched disc is 0
        if chi == 0 and _resolves_to_disc(triangles, singulars[0]):
            return SpanningClass.PINCHED_DISC
    return None


def _resolves_to_disc(triangles, v):
    """Split the singular vertex into its two fans and test for a disc."""
    at_v = [t for t in triangles if v in t]
    kind, comps = _link_fragments(v, at_v)
    if kind != "paths" or len(comps) != 2:
        return False
    side0 = comps[0][1]
    hi = max(x for t in triangles for x in t) + 1
    resolved = []
    for t in triangles:
        if v not in t:
            resolved.append(tuple(t))
            continue
        rest = set(t) - {v}
        if rest <= side0:
            resolved.append(tuple(rest | {v}))
        else:
            resolved.append(tuple(rest | {hi}))
    return _surface_with_boundary_kind(frozenset(map(frozenset, resolved))) == SpanningClass.DISC


def verify_spanning_complex(host, span):
    """Check every declared invariant of a SpanningComplex against its host.

    Raises CorruptEntry with a reason on failure; returns None on success.
    """
    host_faces = host.triangles
    if not span.triangles <= host_faces:
        raise CorruptEntry("selected triangle is not a host face")
    covered_edges = set()
    for t in span.triangles:
        for pair in combinations(t, 2):
            covered_edges.add(frozenset(pair))
    for e in span.extra_edges:
        if e not in host.edges:
            raise CorruptEntry("extra edge is not a host edge")
        if e in covered_edges:
            raise CorruptEntry("extra edge lies in a selected triangle")
    if span.vertices() != set(host.vertex_keys):
        raise CorruptEntry("subcomplex is not vertex-spanning")
    cls = span.topology_class
    if cls in (SpanningClass.DISC, SpanningClass.CYLINDER, SpanningClass.PINCHED_DISC):
        if span.extra_edges:
            raise CorruptEntry(f"{cls.value} may not carry extra edges")
        got = _surface_with_boundary_kind(span.triangles, span.pinch_vertex)
        if got != cls:
            raise CorruptEntry(f"declared {cls.value}, verified {got}")
    elif cls is SpanningClass.DISC_SUM:
        if span.parts is None or span.cap is None:
            raise CorruptEntry("disc sum must carry parts and cap")
        left, right = span.parts
        if left & right:
            raise CorruptEntry("disc sum halves share a face")
        if left | right != span.triangles:
            raise CorruptEntry("disc sum halves do not cover the selection")
        cap = frozenset(span.cap)
        if cap in host_faces:
            raise CorruptEntry("cap is a host face, not an empty triangle")
        for pair in combinations(span.cap, 2):
            if frozenset(pair) not in host.edges:
                raise CorruptEntry("cap edge missing from host")
        vl = set().union(*left) if left else set()
        vr = set().union(*right) if right else set()
        if vl & vr != set(span.cap):
            raise CorruptEntry("halves must share exactly the cap vertices")
        for part in (left, right):
            if _surface_with_boundary_kind(part | {cap}) != SpanningClass.DISC:
                raise CorruptEntry("capped half is not a disc")
        if len(span.extra_edges) > 2:
            raise CorruptEntry("more than two extra edges on a disc sum")
        for e in span.extra_edges:
            if not e <= set(span.cap):
                raise CorruptEntry("extra edge not on the cap triangle")
    else:
        raise CorruptEntry(f"unknown class {cls}")


def check_extendible(host, span):
    """Certificate that every host triangle contains a subcomplex edge."""
    sedges = span.edges()
    hit = {}
    for t in host.triangles:
        best = None
        for pair in combinations(sorted(t), 2):
            if frozenset(pair) in sedges:
                best = pair
                break
        if best is None:
            raise MissedTriangle(t)
        hit[t] = best
    return ExtendibilityCertificate(hit)


# ---------------------------------------------------------------------------
# seed search
# ---------------------------------------------------------------------------

_UNDEC, _IN, _OUT = 0, 1, 2


def search_spanning_subsurface(host, target, required_faces=(), forbidden_faces=(),
                               forbidden_edges=(), pinch_vertex=None):
    """Deterministic backtracking search for a vertex-spanning subsurface.

    Faces are considered in lexicographic order, include branch first.  The
    search prunes on the edge-from-every-triangle condition (a chosen set
    must dominate the face adjacency graph) and on per-vertex link structure
    once a vertex's star is fully decided.  Returns a verified
    SpanningComplex or None.
    """
    faces = sorted(tuple(sorted(t)) for t in host.triangles)
    fs = [frozenset(t) for t in faces]
    nf = len(faces)
    findex = {f: i for i, f in enumerate(fs)}
    at_edge = {}
    for i, f in enumerate(fs):
        for pair in combinations(f, 2):
            at_edge.setdefault(frozenset(pair), []).append(i)
    nbrs = [sorted(set(j for pair in combinations(fs[i], 2)
                       for j in at_edge[frozenset(pair)] if j != i))
            for i in range(nf)]
    at_vertex = {}
    for i, f in enumerate(fs):
        for v in f:
            at_vertex.setdefault(v, []).append(i)

    status = [_UNDEC] * nf
    forbidden_edges = {frozenset(e) for e in forbidden_edges}
    forced_out = set()
    for t in forbidden_faces:
        forced_out.add(findex[frozenset(t)])
    for i, f in enumerate(fs):
        if any(frozenset(p) in forbidden_edges for p in combinations(f, 2)):
            forced_out.add(i)
    forced_in = {findex[frozenset(t)] for t in required_faces}
    if forced_in & forced_out:
        return None

    def vertex_ok(v, final):
        chosen = [fs[i] for i in at_vertex[v] if status[i] == _IN]
        undec = sum(1 for i in at_vertex[v] if status[i] == _UNDEC)
        if final and not chosen:
            return False  # spanning needs every vertex in a chosen face
        if not chosen:
            return True
        kind, comps = _link_fragments(v, chosen)
        allowed = 2 if v == pinch_vertex else 1
        if kind == "cycle":
            # a cycle can only be the full star
            return undec == 0 and len(chosen) == len(at_vertex[v]) and v != pinch_vertex
        if kind != "paths":
            return False
        if final:
            want = 2 if v == pinch_vertex else 1
            return len(comps) == want
        return len(comps) - allowed <= undec

    def hittable(i):
        if status[i] == _IN:
            return True
        if any(status[j] == _IN for j in nbrs[i]):
            return True
        if status[i] == _UNDEC:
            return True
        return any(status[j] == _UNDEC for j in nbrs[i])

    def set_status(i, st):
        status[i] = st
        touched = set(fs[i])
        if st == _OUT and not all(hittable(j) for j in [i] + nbrs[i]):
            return None
        for v in touched:
            final = all(status[j] != _UNDEC for j in at_vertex[v])
            if not vertex_ok(v, final):
                return None
        return True

    solution = []

    def finish():
        chosen = frozenset(fs[i] for i in range(nf) if status[i] == _IN)
        if not chosen:
            return False
        cls = _surface_with_boundary_kind(chosen, pinch_vertex)
        if cls != target:
            return False
        span = SpanningComplex(chosen, frozenset(), cls, pinch_vertex=pinch_vertex)
        try:
            verify_spanning_complex(host, span)
            check_extendible(host, span)
        except Exception:
            return False
        solution.append(span)
        return True

    def dfs(i):
        while i < nf and status[i] != _UNDEC:
            i += 1
        if i == nf:
            return finish()
        for st in (_IN, _OUT):
            status[i] = st
            ok = set_status(i, st)
            if ok and dfs(i + 1):
                return True
            status[i] = _UNDEC
        return False

    for i in forced_in:
        if set_status(i, _IN) is None:
            return None
    for i in forced_out:
        if status[i] == _UNDEC and set_status(i, _OUT) is None:
            return None
    if dfs(0):
        return solution[0]
    return None


_SEED_TARGET = {
    SurfaceClass.SPHERE: SpanningClass.DISC,
    SurfaceClass.PROJECTIVE_PLANE: SpanningClass.DISC,
    SurfaceClass.TORUS: SpanningClass.CYLINDER,
    SurfaceClass.KLEIN_BOTTLE: SpanningClass.CYLINDER,
}

_seed_cache = {}
_pinched_cache = {}


def find_seed(entry):
    """Certified spanning disc (sphere, RP^2) or cylinder (torus, Klein)
    on a non-cross-cap catalog entry."""
    if entry.crosscap:
        raise SeedNotFound(f"{entry.name}: cross-cap entries take pinched seeds")
    key = entry.name
    if key not in _seed_cache:
        span = search_spanning_subsurface(entry.complex, _SEED_TARGET[entry.surface_class])
        if span is None:
            raise SeedNotFound(f"no extendible spanning seed on {entry.name}")
        _seed_cache[key] = span
    return _seed_cache[key]


def pinched_constraints(host, abc, pivot):
    """Required / forbidden structure for a pinched disc at ``pivot``.

    The two cycle neighbors x, y of the pivot on abc pin the excluded star
    triangles (those at edges pivot-x, pivot-y) and the excluded link edges
    (the four link-cycle edges at x and y).
    """
    x, y = sorted(set(abc) - {pivot})
    cyc = host.link(pivot).cycle
    star = [t for t in host.triangles if pivot in t]
    excluded = [t for t in star if x in t or y in t]
    required = [t for t in star if t not in excluded]
    n = len(cyc)
    forbidden_edges = []
    for z in (x, y):
        i = cyc.index(z)
        forbidden_edges.append(frozenset((z, cyc[(i - 1) % n])))
        forbidden_edges.append(frozenset((z, cyc[(i + 1) % n])))
    return required, excluded, forbidden_edges


def find_pinched_seed(entry, pivot):
    """Certified spanning pinched disc at ``pivot`` on a cross-cap entry,
    satisfying the singularity-resolution hypotheses."""
    if not entry.crosscap or pivot not in entry.abc:
        raise SeedNotFound(f"{entry.name}: pivot {pivot} is not on abc")
    key = (entry.name, pivot)
    if key not in _pinched_cache:
        required, excluded, forbidden_edges = pinched_constraints(
            entry.complex, entry.abc, pivot)
        span = search_spanning_subsurface(
            entry.complex, SpanningClass.PINCHED_DISC,
            required_faces=required, forbidden_faces=excluded,
            forbidden_edges=forbidden_edges, pinch_vertex=pivot)
        if span is None:
            raise SeedNotFound(f"no pinched seed at {pivot} on {entry.name}")
        _pinched_cache[key] = span
    return _pinched_cache[key]


# ---------------------------------------------------------------------------
# cross-cap detection
# ---------------------------------------------------------------------------

def crosscap_abc(tri):
    """The distinguished missing triangle of a cross-cap Klein triangulation.

    Searches all empty triangles whose cut-and-cap halves are projective
    planes and returns the lexicographically least, or None if there is no
    such triangle (not a cross-cap triangulation).
    """
    if tri.topology().surface_class is not SurfaceClass.KLEIN_BOTTLE:
        return None
    found = []
    for t in sorted(tri.empty_triangles(), key=sorted):
        halves = split_along_cycle(tri, tuple(sorted(t)))
        if halves is None:
            continue
        ok = True
        for half in halves:
            try:
                rep = validate([tuple(f) for f in half]).topology()
            except Exception:
                ok = False
                break
            if rep.surface_class is not SurfaceClass.PROJECTIVE_PLANE:
                ok = False
                break
        if ok:
            found.append(tuple(sorted(t)))
    return min(found) if found else None


def split_along_cycle(tri, abc):
    """Partition the faces by cutting along the 3-cycle abc; each returned
    half includes the cap face.  None unless the cut separates into two."""
    cut_edges = {frozenset(p) for p in combinations(abc, 2)}
    faces = list(tri.triangles)
    at_edge = {}
    for i, f in enumerate(faces):
        for pair in combinations(f, 2):
            at_edge.setdefault(frozenset(pair), []).append(i)
    comp = [None] * len(faces)
    label = 0
    for s in range(len(faces)):
        if comp[s] is not None:
            continue
        comp[s] = label
        stack = [s]
        while stack:
            i = stack.pop()
            for pair in combinations(faces[i], 2):
                e = frozenset(pair)
                if e in cut_edges:
                    continue
                for j in at_edge[e]:
                    if comp[j] is None:
                        comp[j] = label
                        stack.append(j)
        label += 1
    if label != 2:
        return None
    cap = frozenset(abc)
    sides = [set(), set()]
    for i, f in enumerate(faces):
        sides[comp[i]].add(tuple(sorted(f)))
    for side in sides:
        side.add(tuple(sorted(cap)))
    return sides[0], sides[1]


# ---------------------------------------------------------------------------
# loading and classification
# ---------------------------------------------------------------------------

EXPECTED_COUNTS = {
    SurfaceClass.SPHERE: 1,
    SurfaceClass.PROJECTIVE_PLANE: 2,
    SurfaceClass.TORUS: 21,
    SurfaceClass.KLEIN_BOTTLE: 29,
}
EXPECTED_CROSSCAPS = 4

_DIRNAMES = {
    SurfaceClass.SPHERE: "sphere",
    SurfaceClass.PROJECTIVE_PLANE: "projective_plane",
    SurfaceClass.TORUS: "torus",
    SurfaceClass.KLEIN_BOTTLE: "klein_bottle",
}

_repo_cache = {}


def catalog_root():
    env = os.environ.get("LAMANSPAN_CATALOG")
    if env:
        return Path(env)
    return Path(__file__).parent / "data" / "catalog"


def load_catalog(surface_class, root=None):
    """Validated catalog entries for one surface class; counts enforced."""
    root = Path(root) if root is not None else catalog_root()
    cache_key = (str(root), surface_class)
    if cache_key in _repo_cache:
        return _repo_cache[cache_key]
    directory = root / _DIRNAMES[surface_class]
    entries = []
    for path in sorted(directory.glob("*.tri")):
        triangles, surface, abc_file = parse_tri(path.read_text())
        name = path.stem
        try:
            tri = validate(triangles)
        except Exception as exc:
            raise CorruptEntry(f"{name}: {exc}") from exc
        rep = tri.topology()
        if rep.surface_class is not surface_class:
            raise CorruptEntry(f"{name}: topology is {rep.surface_class}, "
                               f"expected {surface_class}")
        if tri.contractible_edges():
            raise CorruptEntry(f"{name}: has a contractible edge, not irreducible")
        abc = crosscap_abc(tri) if surface_class is SurfaceClass.KLEIN_BOTTLE else None
        if abc_file is not None and abc != tuple(sorted(abc_file)):
            raise CorruptEntry(f"{name}: stored abc {abc_file} disagrees with "
                               f"derived {abc}")
        entries.append(CatalogEntry(name, surface_class, tri,
                                    crosscap=abc is not None, abc=abc))
    if len(entries) != EXPECTED_COUNTS[surface_class]:
        raise WrongCount(f"{surface_class.value}: found {len(entries)} entries, "
                         f"expected {EXPECTED_COUNTS[surface_class]}")
    if surface_class is SurfaceClass.KLEIN_BOTTLE:
        ncc = sum(1 for e in entries if e.crosscap)
        if ncc != EXPECTED_CROSSCAPS:
            raise WrongCount(f"found {ncc} cross-cap entries, expected "
                             f"{EXPECTED_CROSSCAPS}")
    _repo_cache[cache_key] = entries
    return entries


def load_all(root=None):
    out = {}
    for sc in EXPECTED_COUNTS:
        out[sc] = load_catalog(sc, root=root)
    return out


_canon_index = {}


def _canon_key(tri):
    return canonical_form(tri.sorted_triangles())


def classify(tri, root=None):
    """The unique catalog entry isomorphic to ``tri`` plus the isomorphism
    (entry vertex -> tri vertex).  Raises NotInCatalog if absent."""
    rep = tri.topology()
    if rep.surface_class not in EXPECTED_COUNTS:
        raise NotInCatalog(f"unsupported surface {rep.surface_class}")
    if tri.contractible_edges():
        raise NotInCatalog("input is reducible")
    root_key = str(Path(root) if root is not None else catalog_root())
    if root_key not in _canon_index:
        index = {}
        for sc in EXPECTED_COUNTS:
            for entry in load_catalog(sc, root=root):
                index[_canon_key(entry.complex)] = entry
        _canon_index[root_key] = index
    index = _canon_index[root_key]
    key = _canon_key(tri)
    entry = index.get(key)
    if entry is None:
        raise NotInCatalog("irreducible triangulation matches no catalog entry")
    mapping = isomorphism_map(entry.complex.sorted_triangles(), tri.sorted_triangles())
    assert mapping is not None
    return entry, mapping
