"""Exact matrix groups over small commutative rings.

Construction and machine verification of elementary-matrix calculus,
Chevalley-type models, triangular group schemes, their presentations and
coset complexes, over exactly represented finite rings.
"""

__version__ = "0.1.0"
