#!/usr/bin/env python3
"""Regenerate the irreducible-triangulation catalog data files.

Enumerates, for each supported surface, all triangulations with minimum
degree >= 4 up to the published vertex bounds, filters the irreducible ones
(every edge must lie in an empty triangle, i.e. every edge's endpoints have
at least three common neighbors), deduplicates by canonical form and writes
one .tri file per isomorphism class.

The enumeration roots the search at a minimum-degree vertex whose link is
fixed as (1..d0) and labels further vertices in discovery order, which keeps
the number of labeled duplicates per class small.  Vertices of degree 3 are
never part of an irreducible triangulation on more than 4 vertices (the
three star edges are then contractible), so restricting to minimum degree 4
loses nothing.  Target counts are the published ones (1 sphere, 2 projective
planes, 21 tori, 29 Klein bottles of which 4 are cross-caps); the loader in
lamanspan.catalog re-verifies everything on every load.

Usage: python3 scripts/build_catalog.py [--out DIR] [--surface NAME] [--check]
"""

from __future__ import annotations

import argparse
import sys
import time
from itertools import combinations
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from lamanspan.complex import SurfaceClass, validate  # noqa: E402
from lamanspan.catalog import crosscap_abc  # noqa: E402
from lamanspan.fileio import format_tri  # noqa: E402
from lamanspan.isomorphism import canonical_form_with_map  # noqa: E402


class LinkState:
    """Partial link of one vertex: an adjacency map among its neighbors
    where every neighbor has link-degree <= 2; closed once a single cycle
    covering all neighbors is formed."""

    __slots__ = ("adj", "closed", "nedges")

    def __init__(self):
        self.adj = {}
        self.closed = False
        self.nedges = 0


class Enumerator:
    def __init__(self, n, chi, irreducible_only=True, min_degree=4):
        self.n = n
        self.chi = chi
        self.target_faces = 2 * (n - chi)
        self.irreducible_only = irreducible_only
        self.min_degree = min_degree
        self.results = {}

    # -- mutation with undo ------------------------------------------------

    def _can_add_link_edge(self, center, a, b):
        st = self.links[center]
        if st.closed:
            return False
        adj = st.adj
        if a in adj and (b in adj[a] or len(adj[a]) >= 2):
            return False
        if b in adj and len(adj[b]) >= 2:
            return False
        if a in adj and b in adj:
            # joining two existing link vertices: if they already lie in the
            # same fragment this closes a cycle, which is only legal when it
            # closes the entire link at once
            comp = {a}
            stack = [a]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            if b in comp and len(comp) != len(adj):
                return False
        return True

    def _add_face(self, p, q, r):
        """Try to add face {p,q,r}; returns an undo token or None.

        Checks are done before mutation; closure validity (single cycle,
        degree bound, common-neighbor bound for irreducibility) is checked
        after and rolled back on failure.
        """
        trip = ((p, q, r), (q, p, r), (r, p, q))
        for c, a, b in trip:
            if not self._can_add_link_edge(c, a, b):
                return None
        newly_closed = []
        for c, a, b in trip:
            st = self.links[c]
            st.adj.setdefault(a, []).append(b)
            st.adj.setdefault(b, []).append(a)
            st.nedges += 1
            if st.nedges == len(st.adj) and all(len(x) == 2 for x in st.adj.values()):
                # every neighbor has link-degree 2: candidate closure
                st.closed = True
                newly_closed.append(c)
        self.faces.append((p, q, r))
        token = (p, q, r, newly_closed)
        if not self._closure_ok(newly_closed):
            self._undo_face(token)
            return None
        return token

    def _closure_ok(self, newly_closed):
        for c in newly_closed:
            st = self.links[c]
            if len(st.adj) < self.d0 or len(st.adj) < self.min_degree:
                return False
            if not self._is_single_cycle(st.adj):
                return False
            if self.irreducible_only:
                for y in st.adj:
                    oy = self.links[y]
                    if oy.closed:
                        common = len(st.adj.keys() & oy.adj.keys())
                        if common < 3:
                            return False
        return True

    @staticmethod
    def _is_single_cycle(adj):
        start = next(iter(adj))
        prev, cur = None, start
        count = 0
        while True:
            n1, n2 = adj[cur]
            nxt = n1 if n1 != prev else n2
            prev, cur = cur, nxt
            count += 1
            if cur == start:
                break
        return count == len(adj)

    def _undo_face(self, token):
        p, q, r, newly_closed = token
        self.faces.pop()
        for c in newly_closed:
            self.links[c].closed = False
        for c, a, b in ((p, q, r), (q, p, r), (r, p, q)):
            st = self.links[c]
            st.adj[a].pop()
            st.adj[b].pop()
            if not st.adj[a]:
                del st.adj[a]
            if not st.adj[b]:
                del st.adj[b]
            st.nedges -= 1

    # -- search ------------------------------------------------------------

    def _budget_ok(self):
        remaining = self.target_faces - len(self.faces)
        if remaining < 0:
            return False
        need = 0
        for v in range(self.used):
            st = self.links[v]
            if st.closed:
                continue
            final_deg = max(self.d0, len(st.adj))
            need += final_deg - st.nedges
        need += (self.n - self.used) * self.d0
        return need <= 3 * remaining

    def _active_vertex(self):
        for v in range(self.used):
            if not self.links[v].closed:
                return v
        return None

    def _extension_end(self, v):
        """Deterministic open slot on v's partial link: the lexicographically
        smaller end of the fragment containing the smallest neighbor."""
        adj = self.links[v].adj
        start = min(adj)
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        ends = sorted(x for x in comp if len(adj[x]) == 1)
        return ends[0]

    def _dfs(self):
        v = self._active_vertex()
        if v is None:
            if self.used == self.n and len(self.faces) == self.target_faces:
                self._record()
            return
        if not self._budget_ok():
            return
        a = self._extension_end(v)
        candidates = list(range(self.used))
        if self.used < self.n:
            candidates.append(self.used)
        for x in candidates:
            if x == v or x == a:
                continue
            fresh = x == self.used
            if fresh:
                self.links.append(LinkState())
                self.used += 1
            token = self._add_face(v, a, x)
            if token is not None:
                self._dfs()
                self._undo_face(token)
            if fresh:
                self.used -= 1
                self.links.pop()

    def _record(self):
        faces = [tuple(sorted(f)) for f in self.faces]
        if self.irreducible_only and not self._final_irreducible(faces):
            return
        enc, mapping = canonical_form_with_map(faces)
        if enc in self.results:
            return
        canon_faces = sorted(tuple(sorted(mapping[x] for x in f)) for f in faces)
        self.results[enc] = canon_faces

    def _final_irreducible(self, faces):
        nbr = {}
        for f in faces:
            for x in f:
                nbr.setdefault(x, set()).update(set(f) - {x})
        for f in faces:
            for u, w in combinations(f, 2):
                if len(nbr[u] & nbr[w]) < 3:
                    return False
        return True

    def run(self):
        max_d0 = min(self.n - 1, (6 * (self.n - self.chi)) // self.n)
        for d0 in range(self.min_degree, max_d0 + 1):
            self.d0 = d0
            self.faces = []
            self.links = [LinkState() for _ in range(d0 + 1)]
            self.used = d0 + 1
            ok = True
            ring = list(range(1, d0 + 1))
            for i in range(d0):
                a, b = ring[i], ring[(i + 1) % d0]
                if self._add_face(0, a, b) is None:
                    ok = False
                    break
            if ok:
                self._dfs()
        return self.results


def enumerate_surface(n, chi, irreducible_only=True, min_degree=4):
    return Enumerator(n, chi, irreducible_only, min_degree).run()


def classify_results(face_lists):
    """Split canonical face lists by (surface class)."""
    out = {}
    for faces in face_lists:
        tri = validate(faces)
        rep = tri.topology()
        out.setdefault(rep.surface_class, []).append(faces)
    return out


SURFACE_PLANS = {
    # surface: (chi, vertex range)
    "projective_plane": (1, range(6, 9)),
    "torus": (0, range(7, 11)),
    "klein_bottle": (0, range(8, 12)),
}

EXPECTED = {"sphere": 1, "projective_plane": 2, "torus": 21, "klein_bottle": 29}


def build(out_root, only=None):
    out_root = Path(out_root)
    found = {"sphere": [[(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]],
             "projective_plane": [], "torus": [], "klein_bottle": []}
    plans = {}
    for name, (chi, rng) in SURFACE_PLANS.items():
        plans.setdefault((chi, tuple(rng)), []).append(name)
    done_runs = {}
    for name, (chi, rng) in SURFACE_PLANS.items():
        if only and name not in only:
            continue
        for n in rng:
            key = (chi, n)
            if key not in done_runs:
                t0 = time.time()
                res = enumerate_surface(n, chi)
                done_runs[key] = classify_results(res.values())
                counts = {k.value: len(v) for k, v in done_runs[key].items()}
                print(f"chi={chi} n={n}: irreducible classes {counts} "
                      f"({time.time() - t0:.1f}s)", flush=True)
            by_class = done_runs[key]
            sc = SurfaceClass(name)
            found[name].extend(by_class.get(sc, []))
    for name, face_lists in found.items():
        if only and name not in only:
            continue
        if name in EXPECTED and len(face_lists) != EXPECTED[name]:
            print(f"WARNING: {name}: found {len(face_lists)}, "
                  f"expected {EXPECTED[name]}")
        directory = out_root / name
        directory.mkdir(parents=True, exist_ok=True)
        for old in directory.glob("*.tri"):
            old.unlink()
        face_lists = sorted(face_lists, key=lambda fl: (max(max(f) for f in fl), fl))
        width = max(2, len(str(len(face_lists))))
        for i, faces in enumerate(face_lists, start=1):
            tri = validate(faces)
            abc = crosscap_abc(tri) if name == "klein_bottle" else None
            fname = directory / f"{name}_{i:0{width}d}.tri"
            fname.write_text(format_tri(
                tri, surface=name, abc=abc,
                comments=[f"irreducible triangulation {i} of the {name}",
                          "generated by scripts/build_catalog.py"]))
        print(f"{name}: wrote {len(face_lists)} entries")


def check_enumerator():
    """Sanity check against known triangulation counts (all min degrees)."""
    # all triangulations of S^2 with up to 8 vertices: 1, 1, 2, 5, 14
    for n, expect in ((4, 1), (5, 1), (6, 2), (7, 5), (8, 14)):
        res = enumerate_surface(n, 2, irreducible_only=False, min_degree=3)
        got = len(res)
        print(f"sphere n={n}: {got} triangulations (expected {expect})")
        assert got == expect, (n, got, expect)
    # all triangulations of the torus with 7, 8, 9 vertices: 1, 7, 112
    for n, expect in ((7, 1), (8, 7), (9, 112)):
        res = enumerate_surface(n, 0, irreducible_only=False, min_degree=3)
        by_class = classify_results(res.values())
        got = len(by_class.get(SurfaceClass.TORUS, []))
        print(f"torus n={n}: {got} triangulations (expected {expect})")
        assert got == expect, (n, got, expect)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1]
                                         / "src" / "lamanspan" / "data" / "catalog"))
    ap.add_argument("--surface", action="append",
                    help="restrict to one surface (repeatable)")
    ap.add_argument("--check", action="store_true",
                    help="run enumerator sanity checks instead of building")
    args = ap.parse_args()
    if args.check:
        check_enumerator()
        return
    build(args.out, only=args.surface)


if __name__ == "__main__":
    main()
