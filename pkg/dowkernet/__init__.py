"""Dowkernet - topological centrality and impact hierarchies for directed networks"""

__version__ = "1.0.0"
