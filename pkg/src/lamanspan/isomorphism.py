"""Canonical forms and isomorphism of surface triangulations.

A triangulation is canonicalized by tracing its faces from a seeded oriented
triangle: vertices are labeled in discovery order, the face sequence in visit
order is the encoding, and the canonical form is the lexicographic minimum
over all admissible starts.  Starts are restricted to orientations whose
first vertex has minimum degree, which is isomorphism-invariant and keeps
the constant small.  Instances here are tiny (tens of vertices), so this
beats setting up a general refinement engine.
"""

from __future__ import annotations

from itertools import combinations


def _degrees(faces):
    deg = {}
    for t in faces:
        for v in t:
            deg[v] = deg.get(v, 0) + 1
    return deg


def _edge_map(faces):
    at = {}
    for t in faces:
        for pair in combinations(t, 2):
            at.setdefault(frozenset(pair), []).append(t)
    return at


def _trace(a, b, c, at_edge, nfaces):
    """Label vertices by BFS discovery from oriented face (a, b, c); returns
    (encoding, vertex -> label) or None if the traversal is non-surface."""
    labels = {a: 0, b: 1, c: 2}
    nxt = 3
    enc = []
    seen = {frozenset((a, b, c))}
    queue = [(a, b, c)]
    qi = 0
    while qi < len(queue):
        p, q, r = queue[qi]
        qi += 1
        enc.append((labels[p], labels[q], labels[r]))
        for x, y in ((p, q), (q, r), (r, p)):
            others = [t for t in at_edge[frozenset((x, y))] if t != frozenset((p, q, r))]
            if len(others) != 1:
                return None
            t = others[0]
            if t in seen:
                continue
            seen.add(t)
            (z,) = set(t) - {x, y}
            if z not in labels:
                labels[z] = nxt
                nxt += 1
            queue.append((y, x, z))
    if len(seen) != nfaces:
        return None  # disconnected
    return tuple(enc), labels


def canonical_form(faces):
    """Canonical encoding of a face set, or None if it is not a closed
    connected surface at every traversal step."""
    return canonical_form_with_map(faces)[0]


def canonical_form_with_map(faces):
    """Canonical encoding plus one vertex relabeling realizing it."""
    faces = [frozenset(t) for t in faces]
    at_edge = _edge_map(faces)
    deg = _degrees(faces)
    dmin = min(deg.values())
    best = None
    best_map = None
    for t in faces:
        tt = tuple(sorted(t))
        for a, b, c in _orientations(tt):
            if deg[a] != dmin:
                continue
            res = _trace(a, b, c, at_edge, len(faces))
            if res is None:
                return None, None
            enc, labels = res
            if best is None or enc < best:
                best = enc
                best_map = labels
    return best, best_map


def _orientations(t):
    a, b, c = t
    return ((a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a))


def are_isomorphic(faces_a, faces_b):
    if len(faces_a) != len(faces_b):
        return False
    return canonical_form(faces_a) == canonical_form(faces_b)


def isomorphism_map(faces_a, faces_b):
    """A vertex bijection mapping faces_a onto faces_b, or None."""
    enc_a, map_a = canonical_form_with_map(faces_a)
    enc_b, map_b = canonical_form_with_map(faces_b)
    if enc_a is None or enc_a != enc_b:
        return None
    inv_b = {lab: v for v, lab in map_b.items()}
    return {v: inv_b[lab] for v, lab in map_a.items()}
