"""Willmore flow of closed surfaces in Riemannian ambient manifolds.

Discretizes immersions f: Sigma^2 -> (M^n, g) on structured chart grids,
evaluates the Willmore energies and their L^2 gradient, runs the explicit
gradient flow with diagnostics, and provides the concentration / blow-up
toolkit used to probe curvature accumulation at desk scale.
"""

from .ambient import AmbientManifold, BoundedGeometry
from .errors import WillmoreError

__all__ = ["AmbientManifold", "BoundedGeometry", "WillmoreError"]

__version__ = "0.1.0"
