"""Reduction of triangulations to irreducible bases with replayable traces.

A reduction greedily contracts the lexicographically smallest contractible
edge until none remains, then converts the contraction sequence into split
records stated in replay-side labels: replaying the records on the base
reproduces a complex isomorphic to the input, and the trace carries the
provenance bijection (replay vertex -> input vertex).

The module also hosts the combinatorial (unguarded) contraction machinery
used for commutativity arguments, survival tracking of the distinguished
3-cycle of cross-cap Klein bases, and the rearrangement that moves an
elongating split to the front of a trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .catalog import classify
from .complex import Triangulation, _arc
from .errors import (
    LabelMismatch,
    NoSuchMerge,
    NotElongating,
    NotOnCycle,
    StaleRecord,
    Unreachable,
)


@dataclass(frozen=True)
class SplitRecord:
    v: int
    x1: int
    xk: int
    new_vertex: int


@dataclass(frozen=True)
class ReductionTrace:
    base: Triangulation
    splits: tuple
    # provenance: replay-final vertex key -> input vertex key
    input_map: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class SurvivalReport:
    survived_all: bool
    first_elongating_index: int | None
    tracked_cycle: tuple


def apply_record(tri, rec):
    """Replay one split record; StaleRecord if it no longer applies."""
    if rec.v not in tri.labels:
        raise StaleRecord(f"no vertex {rec.v} at replay time")
    cyc = tri.link(rec.v).cycle
    if rec.x1 not in cyc or rec.xk not in cyc or rec.x1 == rec.xk:
        raise StaleRecord(f"{rec.x1},{rec.xk} not a split interval on link of {rec.v}")
    out, w = tri.split(rec.v, rec.x1, rec.xk)
    if w != rec.new_vertex:
        raise StaleRecord(f"expected new vertex {rec.new_vertex}, split produced {w}")
    return out


def replay(trace):
    """Apply all split records of a trace to its base."""
    cur = trace.base
    for rec in trace.splits:
        cur = apply_record(cur, rec)
    return cur


def greedy_contraction_sequence(tri):
    """Edges contracted by the deterministic greedy reduction, one pair of
    vertex keys per level, plus the irreducible final complex."""
    seq = []
    cur = tri
    while True:
        edges = cur.contractible_edges()
        if not edges:
            return seq, cur
        e = edges[0]
        seq.append(e)
        cur = cur.contract(e)


def trace_from_contractions(tri, contraction_edges):
    """Convert a valid contraction sequence into a replayable trace.

    The split records are built by re-simulating the sequence bottom-up on
    the base, so each record replays exactly (fresh labels included); the
    provenance map ties replay-final vertices back to input vertices.
    """
    levels = []
    cur = tri
    for e in contraction_edges:
        after = cur.contract(e)
        levels.append((cur, tuple(sorted(e)), after))
        cur = after
    base = cur
    psi = {k: k for k in base.vertex_keys}  # original-side key -> replay key
    replay_side = base
    records = []
    for before, (u, v), after in reversed(levels):
        m = u  # contract() merges onto min(u, v)
        w1, w2 = sorted(before.neighbors(u) & before.neighbors(v))
        u_side = {psi[y] for y in before.neighbors(u) - {v}}
        rv = psi[m]
        cyc = replay_side.link(rv).cycle
        p1, p2 = cyc.index(psi[w1]), cyc.index(psi[w2])
        arc_fwd = set(_arc(cyc, p1, p2))
        arc_bwd = set(_arc(cyc, p2, p1))
        if arc_fwd == u_side:
            x1r, xkr = psi[w1], psi[w2]
        elif arc_bwd == u_side:
            x1r, xkr = psi[w2], psi[w1]
        else:
            raise AssertionError("inverse split arcs do not match the merged link")
        replay_side, nk = replay_side.split(rv, x1r, xkr)
        records.append(SplitRecord(rv, x1r, xkr, nk))
        psi[u] = rv
        psi[v] = nk
    input_map = {rk: ok for ok, rk in psi.items()}
    return ReductionTrace(base, tuple(records), input_map)


def reduce_to_irreducible(tri):
    """Deterministic greedy reduction of a triangulation to an irreducible
    base, with the split sequence that reproduces the input."""
    seq, _ = greedy_contraction_sequence(tri)
    return trace_from_contractions(tri, seq)


# ---------------------------------------------------------------------------
# combinatorial contractions (topology-blind, for the commutativity results)
# ---------------------------------------------------------------------------

class LabeledComplex:
    """A simplicial complex under the merged-label naming convention.

    Faces are the images of the host triangles under contractions and may
    degenerate to edges or vertices; contraction here is combinatorial and
    never fails for an existing edge, regardless of topology.
    """

    __slots__ = ("labels", "faces")

    def __init__(self, labels, faces):
        self.labels = dict(labels)
        self.faces = frozenset(frozenset(f) for f in faces)

    @classmethod
    def from_triangulation(cls, tri):
        return cls(tri.labels, tri.triangles)

    def has_edge(self, u, v):
        need = {u, v}
        return any(need <= f for f in self.faces)

    def has_face(self, vertices):
        need = frozenset(vertices)
        return any(need <= f for f in self.faces)

    def contract(self, u, v):
        if not self.has_edge(u, v):
            raise NoSuchMerge(f"no edge {u}-{v} to contract")
        m = min(u, v)
        labels = {k: lab for k, lab in self.labels.items() if k not in (u, v)}
        labels[m] = self.labels[u] | self.labels[v]
        faces = {frozenset(m if x in (u, v) else x for x in f) for f in self.faces}
        return LabeledComplex(labels, faces)

    def maximal_faces(self):
        return {f for f in self.faces if not any(f < g for g in self.faces)}

    def as_triangulation(self):
        """Validate the maximal faces as a surface triangulation; raises the
        usual validation errors (used to expose topology-breaking orders)."""
        from .complex import validate
        from .errors import NotASurface
        maximal = self.maximal_faces()
        if any(len(f) != 3 for f in maximal):
            raise NotASurface("a maximal face is not a triangle")
        return validate([tuple(sorted(f)) for f in maximal])

    def __eq__(self, other):
        return (isinstance(other, LabeledComplex)
                and self.labels == other.labels
                and self.maximal_faces() == other.maximal_faces())

    def __hash__(self):
        return hash(frozenset(self.maximal_faces()))


def evaluate_contractions(tri, pairs):
    """Fold combinatorial contractions (pairs of current keys) over tri."""
    cur = LabeledComplex.from_triangulation(tri)
    for u, v in pairs:
        cur = cur.contract(u, v)
    return cur


def face_preimage_test(tri, contracted, vertex_set):
    """Representative-based face membership after contractions.

    True iff some choice of representatives, one from each vertex label of
    ``vertex_set`` in ``contracted``, forms a face of ``tri``.  This must
    agree with direct membership of ``vertex_set`` in ``contracted``.
    """
    id_to_key = {}
    for k, lab in tri.labels.items():
        for i in lab:
            id_to_key[i] = k
    slots = []
    for v in vertex_set:
        if v not in contracted.labels:
            raise LabelMismatch(f"no vertex {v} in the contracted complex")
        label = contracted.labels[v]
        keys = set()
        for i in label:
            if i not in id_to_key:
                raise LabelMismatch(f"id {i} does not occur in the host labels")
            keys.add(id_to_key[i])
        slots.append(sorted(keys))
    for choice in product(*slots):
        if len(set(choice)) != len(choice):
            continue
        if len(choice) == 3:
            if frozenset(choice) in tri.triangles:
                return True
        elif len(choice) == 2:
            if frozenset(choice) in tri.edges:
                return True
        elif len(choice) == 1:
            if choice[0] in tri.labels:
                return True
    return False


def reorder_last_contraction(tri, contractions, i, j):
    """Reorder a combinatorial contraction sequence so its final step merges
    the parts containing original ids i and j.

    The sequence is given (and returned) as pairs of current vertex keys.
    The reordered sequence produces identical vertex labels, hence the
    identical complex.
    """
    key_of_id = {}
    for k, lab in tri.labels.items():
        for x in lab:
            key_of_id[x] = k
    if i not in key_of_id or j not in key_of_id:
        raise NoSuchMerge(f"ids {i}, {j} are not vertices of the host")
    ki, kj = key_of_id[i], key_of_id[j]
    if not frozenset((ki, kj)) in tri.edges:
        raise NoSuchMerge(f"{i}-{j} is not an edge of the host")

    # evaluate, recording for every merge a witness host edge between blobs
    cur = LabeledComplex.from_triangulation(tri)
    blob = {k: k for k in tri.labels}      # host key -> current key
    members = {k: {k} for k in tri.labels}  # current key -> host keys
    steps = []                              # (witness host edge, merged key set)
    for u, v in contractions:
        A, B = members[u], members[v]
        witness = None
        for p in sorted(A):
            for q in sorted(B):
                if frozenset((p, q)) in tri.edges:
                    witness = (p, q)
                    break
            if witness:
                break
        if witness is None:
            raise NoSuchMerge(f"no host edge certifies contracting {u}-{v}")
        cur = cur.contract(u, v)
        m = min(u, v)
        members[m] = A | B
        for k in A | B:
            blob[k] = m
        steps.append((witness, frozenset(A | B)))
        if u != m:
            del members[u]
        if v != m:
            del members[v]

    target = blob[ki]
    if blob[kj] != target:
        raise NoSuchMerge(f"{i} and {j} end in different vertices")

    # merge forest: witness edges grouped by final blob
    groups = {}
    for witness, merged in steps:
        root = blob[witness[0]]
        groups.setdefault(root, []).append(witness)

    def linearize(tree_edges, last=None):
        """Contraction pairs (current keys) realizing a merge tree; the
        optional ``last`` tree edge is contracted at the end."""
        cur_key = {}
        for e in tree_edges:
            for x in e:
                cur_key.setdefault(x, x)
        order = [e for e in tree_edges if e != last] + ([last] if last else [])
        out = []
        for p, q in order:
            a, b = cur_key[p], cur_key[q]
            assert a != b
            out.append((a, b))
            m = min(a, b)
            for x, c in cur_key.items():
                if c in (a, b):
                    cur_key[x] = m
        return out

    new_seq = []
    for root, edges in groups.items():
        if root != target:
            new_seq.extend(linearize(edges))
    # target blob: spanning tree containing (ki, kj), with it contracted last
    t_edges = groups[target]
    direct = next((e for e in t_edges if set(e) == {ki, kj}), None)
    if direct is None:
        # swap (ki,kj) in for one edge on the tree path between them
        adj = {}
        for p, q in t_edges:
            adj.setdefault(p, []).append((q, (p, q)))
            adj.setdefault(q, []).append((p, (p, q)))
        path = _tree_path(adj, ki, kj)
        t_edges = [e for e in t_edges if e != path[0]] + [(ki, kj)]
        direct = (ki, kj)
    new_seq.extend(linearize(t_edges, last=direct))
    return new_seq


def _tree_path(adj, s, t):
    """Edges along the unique tree path from s to t."""
    stack = [(s, None, [])]
    seen = {s}
    while stack:
        x, _, path = stack.pop()
        if x == t:
            return path
        for y, e in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append((y, x, path + [e]))
    raise AssertionError("disconnected merge tree")


# ---------------------------------------------------------------------------
# survival of the distinguished 3-cycle
# ---------------------------------------------------------------------------

def track_survival(trace, abc):
    """Walk the split sequence applying the naming rule for the tracked
    cycle: the tracked vertex stays on the kept side when both other cycle
    vertices lie in the kept closed interval, moves to the new vertex when
    both lie in the complementary closed interval, and otherwise the cycle
    elongates to an induced 4-cycle (ties resolve to the kept side)."""
    base = trace.base
    a, b, c = abc
    if len({a, b, c}) != 3:
        raise NotOnCycle("tracked triple must have three distinct vertices")
    for pair in combinations((a, b, c), 2):
        if frozenset(pair) not in base.edges:
            raise NotOnCycle(f"{pair} is not an edge of the base")
    if frozenset((a, b, c)) in base.triangles:
        raise NotOnCycle("tracked triple bounds a face, not an empty triangle")
    tracked = [a, b, c]
    cur = base
    for idx, rec in enumerate(trace.splits):
        if rec.v in tracked:
            p, q = [t for t in tracked if t != rec.v]
            cyc = cur.link(rec.v).cycle
            i1, ik = cyc.index(rec.x1), cyc.index(rec.xk)
            kept = set(_arc(cyc, i1, ik))
            far = set(_arc(cyc, ik, i1))
            if p in kept and q in kept:
                pass  # kept side keeps the key
            elif p in far and q in far:
                tracked[tracked.index(rec.v)] = rec.new_vertex
            else:
                strict_kept = p if p in kept else q
                strict_far = q if strict_kept == p else p
                cycle4 = (rec.v, strict_kept, strict_far, rec.new_vertex)
                return SurvivalReport(False, idx, cycle4)
        cur = apply_record(cur, rec)
    return SurvivalReport(True, None, tuple(tracked))


# ---------------------------------------------------------------------------
# rearranging the elongating split to the front
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RearrangeResult:
    crosscap: bool
    trace: ReductionTrace

    @property
    def elongating(self):
        return self.trace.splits[0] if self.crosscap else None

    @property
    def remaining(self):
        return self.trace.splits[1:] if self.crosscap else self.trace.splits


def _reduction_state(tri, root=None):
    trace = reduce_to_irreducible(tri)
    entry, mapping = classify(trace.base, root=root)
    if not entry.crosscap:
        return trace, entry, None, None
    abc = tuple(sorted(mapping[x] for x in entry.abc))
    return trace, entry, abc, track_survival(trace, abc)


def rearrange_crosscap(tri, root=None):
    """Produce a trace whose first split elongates the distinguished cycle,
    or discover a reduction to a non-cross-cap base along the way.

    Qualifying contractions are searched in lexicographic order; survival is
    re-derived after each contraction, rejecting contractions that collapse
    the elongation (those would strand the 4-cycle).  Existence is backed by
    the rearrangement proposition; exhaustion raises Unreachable.
    """
    trace, entry, abc, surv = _reduction_state(tri, root=root)
    if not entry.crosscap:
        return RearrangeResult(False, trace)
    if surv.survived_all:
        raise NotElongating("cycle survives every split; nothing to rearrange")
    prefix = []
    cur = tri
    while True:
        if not entry.crosscap:
            seq, _ = greedy_contraction_sequence(cur)
            return RearrangeResult(False, trace_from_contractions(tri, prefix + seq))
        if surv.first_elongating_index == 0:
            seq, _ = greedy_contraction_sequence(cur)
            full = trace_from_contractions(tri, prefix + seq)
            return RearrangeResult(True, full)
        accepted = False
        for e in cur.contractible_edges():
            cur2 = cur.contract(e)
            trace2, entry2, abc2, surv2 = _reduction_state(cur2, root=root)
            if entry2.crosscap and surv2.survived_all:
                continue
            prefix.append(e)
            cur = cur2
            trace, entry, abc, surv = trace2, entry2, abc2, surv2
            accepted = True
            break
        if not accepted:
            raise Unreachable(
                "no qualifying contraction: every contractible edge of a "
                f"{cur.num_vertices()}-vertex complex above {entry.name} "
                "yields a surviving cross-cap reduction, contradicting the "
                "rearrangement proposition")
