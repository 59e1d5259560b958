"""Disjoint-set forest with path compression and union by rank."""
from typing import Dict, Hashable, List


class UnionFind:
    """
    Maintains disjoint sets over arbitrary hashable items.

    >>> uf = UnionFind(range(4))
    >>> uf.union(0, 1)
    True
    >>> uf.union(1, 0)
    False
    >>> uf.find(1) == uf.find(0)
    True
    >>> uf.components
    3
    """

    def __init__(self, items=()):
        self.parent: Dict[Hashable, Hashable] = {}
        self.rank: Dict[Hashable, int] = {}
        self.components = 0
        for item in items:
            self.add(item)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.rank[x] = 0
            self.components += 1

    def find(self, x):
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        # path compression
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        """Merge the sets holding x and y; False when they were already joined."""
        px, py = self.find(x), self.find(y)
        if px == py:
            return False
        if self.rank[px] < self.rank[py]:
            px, py = py, px
        self.parent[py] = px
        if self.rank[px] == self.rank[py]:
            self.rank[px] += 1
        self.components -= 1
        return True

    def groups(self) -> List[List[Hashable]]:
        """Current sets, each in insertion order, ordered by first member."""
        by_root: Dict[Hashable, List[Hashable]] = {}
        for x in self.parent:
            by_root.setdefault(self.find(x), []).append(x)
        return list(by_root.values())
