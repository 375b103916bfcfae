"""Vertex-spanning planar subcomplexes and Laman subgraphs of triangulations
of the sphere, torus, projective plane and Klein bottle."""

from .complex import (
    LinkCycle,
    SurfaceClass,
    SUPPORTED_SURFACES,
    TopologyReport,
    Triangulation,
    validate,
)

__all__ = [
    "LinkCycle",
    "SurfaceClass",
    "SUPPORTED_SURFACES",
    "TopologyReport",
    "Triangulation",
    "validate",
]

__version__ = "0.1.0"
