"""Graph isomorphism and clique-width tools for (H1, H2)-free graph classes."""

from .graph import Graph, GraphError, build, complement, disjoint_union, induced

__all__ = ["Graph", "GraphError", "build", "complement", "disjoint_union", "induced"]
