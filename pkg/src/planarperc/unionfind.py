class DisjointSet:
    """Union by size with path halving."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def same(self, a, b):
        return self.find(a) == self.find(b)

    def groups(self, members=None):
        out = {}
        for x in range(len(self.parent)) if members is None else members:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())
