"""Exception taxonomy for the lamanspan package."""


class LamanSpanError(Exception):
    """Base class for all package errors."""


class ParseError(LamanSpanError):
    """A text input (.tri, .trace, ...) could not be parsed."""


# -- triangulation validity ------------------------------------------------

class NotASurface(LamanSpanError):
    """The face list does not describe a closed simplicial surface."""


class DuplicateTriangle(NotASurface):
    """The same vertex triple occurs twice."""


class Disconnected(NotASurface):
    """The complex is not connected."""


class TooSmall(NotASurface):
    """Fewer than four vertices."""


# -- local moves -----------------------------------------------------------

class UnknownVertex(LamanSpanError):
    pass


class UnknownEdge(LamanSpanError):
    pass


class NotContractible(LamanSpanError):
    """Edge contraction would change the topology (or host is a tetrahedron)."""


class BadInterval(LamanSpanError):
    """Vertex split endpoints do not define two proper link intervals."""


# -- reduction / replay ----------------------------------------------------

class StaleRecord(LamanSpanError):
    """A split record no longer applies at replay time."""


class LabelMismatch(LamanSpanError):
    """Vertex labels of two complexes are not related by contractions."""


class NoSuchMerge(LamanSpanError):
    """Requested last-contraction pair is not merged by the sequence."""


class NotOnCycle(LamanSpanError):
    """The tracked triple is not an induced empty 3-cycle of the base."""


# -- catalog ---------------------------------------------------------------

class CorruptEntry(LamanSpanError):
    """A catalog file fails irreducibility or topology verification."""


class WrongCount(LamanSpanError):
    """Catalog does not contain the published number of entries."""


class NotInCatalog(LamanSpanError):
    """An irreducible triangulation matches no catalog entry (fatal)."""


class MissedTriangle(LamanSpanError):
    """A subcomplex misses all three edges of some host triangle."""

    def __init__(self, triangle):
        self.triangle = triangle
        super().__init__(f"no edge of {sorted(triangle)} is in the subcomplex")


class SeedNotFound(LamanSpanError):
    """Certified seed search failed on a catalog entry (fatal)."""


# -- extension -------------------------------------------------------------

class BadStructure(LamanSpanError):
    """Star intersection is not a fan plus a path."""


class NotExtendible(LamanSpanError):
    """The subcomplex misses a triangle, so it cannot be extended."""


class NotElongating(LamanSpanError):
    """The split does not induce a split on the tracked cycle."""


class HypothesesViolated(LamanSpanError):
    """Pinched subcomplex does not satisfy the resolution hypotheses."""


class NotSeparating(LamanSpanError):
    """Cutting along the triple does not disconnect the complex."""


class NotEmptyTriangle(LamanSpanError):
    """The triple is not an empty triangle (edges present, face absent)."""


class CapLost(LamanSpanError):
    """Cap-preserving disc extension failed and so did the search fallback."""


# -- rigidity --------------------------------------------------------------

class NotRigid(LamanSpanError):
    """Maximal (2,3)-sparse subgraph is smaller than 2|V| - 3."""


# -- pipeline --------------------------------------------------------------

class UnsupportedSurface(LamanSpanError):
    """Input surface is not one of sphere, torus, RP^2, Klein bottle."""


class Unreachable(LamanSpanError):
    """Internal state the underlying theorems rule out; includes diagnostics."""
