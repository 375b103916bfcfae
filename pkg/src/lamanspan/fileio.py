"""Line-oriented text formats: .tri, .span, .laman, .trace."""

from __future__ import annotations

from .errors import ParseError


def parse_tri(text):
    """Parse a .tri file body.

    Returns (triangles, surface_name, abc) where triangles is a list of int
    triples, and surface_name / abc come from the optional header lines.
    """
    triangles = []
    surface = None
    abc = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "surface" and len(parts) == 2:
            surface = parts[1]
        elif parts[0] == "t" and len(parts) == 4:
            try:
                triangles.append(tuple(int(x) for x in parts[1:]))
            except ValueError:
                raise ParseError(f"line {lineno}: bad vertex id in {raw!r}")
            if any(x < 0 for x in triangles[-1]):
                raise ParseError(f"line {lineno}: negative vertex id")
        elif parts[0] == "abc" and len(parts) == 4:
            try:
                abc = tuple(int(x) for x in parts[1:])
            except ValueError:
                raise ParseError(f"line {lineno}: bad abc line {raw!r}")
        else:
            raise ParseError(f"line {lineno}: unrecognized line {raw!r}")
    return triangles, surface, abc


def format_tri(triangulation, surface=None, abc=None, comments=()):
    lines = [f"# {c}" for c in comments]
    if surface is not None:
        lines.append(f"surface {surface}")
    if abc is not None:
        lines.append("abc {} {} {}".format(*sorted(abc)))
    for t in triangulation.sorted_triangles():
        lines.append("t {} {} {}".format(*t))
    return "\n".join(lines) + "\n"


def format_span(span):
    lines = [f"class {span.topology_class.value}"]
    for t in sorted(tuple(sorted(x)) for x in span.triangles):
        lines.append("t {} {} {}".format(*t))
    for e in sorted(tuple(sorted(x)) for x in span.extra_edges):
        lines.append("e {} {}".format(*e))
    return "\n".join(lines) + "\n"


def parse_span(text):
    """Parse a .span body into (class_name, triangles, extra_edges)."""
    cls = None
    tris = []
    extras = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "class" and len(parts) == 2:
            cls = parts[1]
        elif parts[0] == "t" and len(parts) == 4:
            tris.append(tuple(int(x) for x in parts[1:]))
        elif parts[0] == "e" and len(parts) == 3:
            extras.append(tuple(int(x) for x in parts[1:]))
        else:
            raise ParseError(f"line {lineno}: unrecognized line {raw!r}")
    if cls is None:
        raise ParseError("missing class header")
    return cls, tris, extras


def format_laman(certificate):
    lines = [f"v {certificate.num_vertices}"]
    for a, b in sorted(tuple(sorted(e)) for e in certificate.laman_edges):
        lines.append(f"e {a} {b}")
    lines.append(
        f"cert rank={certificate.rank} modulus={certificate.field_modulus} "
        f"seed={certificate.seed}"
    )
    return "\n".join(lines) + "\n"


def format_trace(trace, base_filename):
    """Serialize a reduction trace; vertices are named by label minima."""
    lines = [f"base {base_filename}"]
    for rec in trace.splits:
        lines.append(f"s {rec.v} {rec.x1} {rec.xk} {rec.new_vertex}")
    return "\n".join(lines) + "\n"


def parse_trace(text):
    """Parse a .trace body into (base_filename, list of split tuples)."""
    base = None
    splits = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "base" and len(parts) == 2:
            base = parts[1]
        elif parts[0] == "s" and len(parts) == 5:
            splits.append(tuple(int(x) for x in parts[1:]))
        else:
            raise ParseError(f"line {lineno}: unrecognized line {raw!r}")
    if base is None:
        raise ParseError("missing base header")
    return base, splits
