"""Set partitions of {1..n}: noncrossing, interval, irreducible, colored.

Partitions are immutable: blocks are tuples of increasing integers, sorted
by minimum.  Colorings are plain sequences of hashable labels, one per
point; a partition is compatible with a coloring when every block is
monochromatic.  Enumeration is guarded (Catalan growth) but the guard can
be raised per call.
"""

from __future__ import annotations

import itertools

from .errors import DomainError, LimitError

ENUMERATION_GUARD = 14


class SetPartition:
    """A partition of {1, ..., n} into disjoint nonempty blocks."""

    __slots__ = ("n", "blocks")

    def __init__(self, n, blocks):
        seen = set()
        normalized = []
        for block in blocks:
            block = tuple(sorted(block))
            if not block:
                raise DomainError("empty block")
            normalized.append(block)
            for p in block:
                if not isinstance(p, int) or not 1 <= p <= n:
                    raise DomainError("point %r outside 1..%d" % (p, n))
                if p in seen:
                    raise DomainError("point %d in two blocks" % p)
                seen.add(p)
        if len(seen) != n:
            raise DomainError("blocks do not cover 1..%d" % n)
        normalized.sort(key=lambda b: b[0])
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", tuple(normalized))

    def __setattr__(self, name, value):
        raise AttributeError("SetPartition is immutable")

    @classmethod
    def discrete(cls, n):
        return cls(n, [(i,) for i in range(1, n + 1)])

    @classmethod
    def full(cls, n):
        return cls(n, [tuple(range(1, n + 1))])

    def block_index(self):
        """Map point -> position of its block in self.blocks."""
        out = {}
        for k, block in enumerate(self.blocks):
            for p in block:
                out[p] = k
        return out

    def block_of(self, point):
        for block in self.blocks:
            if point in block:
                return block
        raise DomainError("point %d outside 1..%d" % (point, self.n))

    def same_block(self, p, q):
        return self.block_of(p) is self.block_of(q)

    def num_blocks(self):
        return len(self.blocks)

    def is_noncrossing(self):
        index = self.block_index()
        stack = []
        remaining = {k: len(b) for k, b in enumerate(self.blocks)}
        for p in range(1, self.n + 1):
            k = index[p]
            if remaining[k] == len(self.blocks[k]):
                stack.append(k)
            elif not stack or stack[-1] != k:
                return False
            remaining[k] -= 1
            if remaining[k] == 0:
                stack.pop()
        return True

    def is_interval(self):
        return all(b[-1] - b[0] + 1 == len(b) for b in self.blocks)

    def is_irreducible(self):
        return self.same_block(1, self.n)

    def leq(self, other):
        """Refinement: every block of self lies inside a block of other."""
        if self.n != other.n:
            raise DomainError("ground sets differ")
        index = other.block_index()
        return all(
            all(index[p] == index[block[0]] for p in block)
            for block in self.blocks
        )

    def __eq__(self, other):
        if not isinstance(other, SetPartition):
            return NotImplemented
        return self.n == other.n and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.n, self.blocks))

    def __str__(self):
        return "".join(
            "{%s}" % ",".join(map(str, b)) for b in self.blocks
        )

    def __repr__(self):
        return "SetPartition(%d, %s)" % (self.n, list(map(list, self.blocks)))


def _check_range(n, guard):
    limit = ENUMERATION_GUARD if guard is None else guard
    if n < 1 or n > limit:
        raise LimitError(
            "enumeration size %d outside 1..%d (raise guard to override)"
            % (n, limit)
        )


def _nc_blocks(points):
    """All noncrossing partitions of an increasing tuple, as block lists."""
    if not points:
        yield []
        return
    for block, regions in _first_block_splits(points):
        for parts in itertools.product(*map(_nc_list, regions)):
            out = [block]
            for part in parts:
                out.extend(part)
            yield out


def _first_block_splits(points):
    """Choices of the block containing points[0], with enclosed regions.

    The block is built left to right; each extension isolates the skipped
    points as a region, and closing the block frees the tail.
    """
    stack = [((points[0],), (), 1)]
    while stack:
        block, regions, start = stack.pop()
        yield block, regions + (points[start:],)
        for k in range(len(points) - 1, start - 1, -1):
            stack.append(
                (block + (points[k],), regions + (points[start:k],), k + 1)
            )


def _nc_list(points):
    return list(_nc_blocks(points))


def enumerate_nc(n, guard=None):
    """All noncrossing partitions of {1..n} in a fixed deterministic order."""
    _check_range(n, guard)
    points = tuple(range(1, n + 1))
    return [SetPartition(n, blocks) for blocks in _nc_blocks(points)]


def enumerate_interval(n, guard=None):
    """All interval partitions, ordered by the bitmask of cut positions."""
    _check_range(n, guard)
    out = []
    for mask in range(1 << (n - 1)):
        cuts = [k for k in range(1, n) if mask >> (k - 1) & 1]
        edges = [0] + cuts + [n]
        out.append(
            SetPartition(
                n,
                [
                    tuple(range(a + 1, b + 1))
                    for a, b in zip(edges, edges[1:])
                ],
            )
        )
    return out


def enumerate_irreducible(n, guard=None):
    """Noncrossing partitions with 1 and n in the same block."""
    return [p for p in enumerate_nc(n, guard) if p.is_irreducible()]


def kernel(colors):
    """The partition grouping equal labels; blocks ordered by first point."""
    groups = {}
    for pos, label in enumerate(colors, start=1):
        groups.setdefault(label, []).append(pos)
    return SetPartition(len(colors), list(groups.values()))


def is_compatible(p, colors):
    if p.n != len(colors):
        raise DomainError("coloring length differs from ground set")
    return all(len({colors[q - 1] for q in b}) == 1 for b in p.blocks)


def enumerate_nc_colored(colors, guard=None):
    """NC partitions compatible with the coloring (every block one colour)."""
    return [
        p for p in enumerate_nc(len(colors), guard) if is_compatible(p, colors)
    ]


def nesting_parents(p):
    """For noncrossing p: map block -> immediately enclosing block (or None).

    Block A encloses B when min A < min B and max B < max A; the enclosing
    blocks of B form a chain, and the parent is the innermost.
    """
    parents = {}
    for b in p.blocks:
        parent = None
        for a in p.blocks:
            if a[0] < b[0] and b[-1] < a[-1]:
                if parent is None or a[0] > parent[0]:
                    parent = a
        parents[b] = parent
    return parents


def outer_inner(p):
    """Split blocks into (outer, inner); inner blocks nest inside another."""
    parents = nesting_parents(p)
    outer = tuple(b for b in p.blocks if parents[b] is None)
    inner = tuple(b for b in p.blocks if parents[b] is not None)
    return outer, inner


def interval_closure(p):
    """Smallest interval partition above p: convex hulls of outer blocks."""
    outer, _ = outer_inner(p)
    return SetPartition(
        p.n, [tuple(range(b[0], b[-1] + 1)) for b in outer]
    )


def irreducible_components(p):
    """Restrictions of p to the hull blocks, relabeled to start at 1."""
    out = []
    for hull in interval_closure(p).blocks:
        offset = hull[0] - 1
        blocks = [
            tuple(q - offset for q in b)
            for b in p.blocks
            if hull[0] <= b[0] and b[-1] <= hull[-1]
        ]
        out.append((offset, SetPartition(len(hull), blocks)))
    return out


def concatenate(pieces):
    """Inverse of irreducible_components: shift and merge the pieces."""
    blocks = []
    total = 0
    for offset, part in pieces:
        blocks.extend(tuple(q + offset for q in b) for b in part.blocks)
        total = max(total, offset + part.n)
    return SetPartition(total, blocks)


def is_ll(p, rho):
    """The irreducible refinement order: p <= rho and every block of rho
    has its endpoints joined by p."""
    if not p.leq(rho):
        return False
    return all(p.same_block(b[0], b[-1]) for b in rho.blocks)


def _block_colors(p, colors):
    if not is_compatible(p, colors):
        raise DomainError("partition has a block with mixed colours")
    return {b: colors[b[0] - 1] for b in p.blocks}


def is_vnrp(rho, colors):
    """Every inner block is nested immediately inside a differently
    coloured block; such partitions are exactly the ll-maximal ones."""
    color = _block_colors(rho, colors)
    parents = nesting_parents(rho)
    return all(
        parents[b] is None or color[parents[b]] != color[b]
        for b in rho.blocks
    )


def vnrp_closure(sigma, colors):
    """The unique ll-maximal partition above sigma compatible with colors.

    Obtained by merging every block into its nesting parent while they
    share a colour; merged minima and maxima come from the parent, so
    noncrossingness and the ll relation survive each merge.
    """
    color = _block_colors(sigma, colors)
    parents = nesting_parents(sigma)
    index = {b: k for k, b in enumerate(sigma.blocks)}
    root = list(range(len(sigma.blocks)))

    def find(k):
        while root[k] != k:
            root[k] = root[root[k]]
            k = root[k]
        return k

    for b, parent in parents.items():
        if parent is not None and color[parent] == color[b]:
            root[find(index[b])] = find(index[parent])

    merged = {}
    for k, b in enumerate(sigma.blocks):
        merged.setdefault(find(k), []).extend(b)
    return SetPartition(sigma.n, list(merged.values()))


def closure_check(elements, leq, close, f, g):
    """Finite verification of the closure-lemma pattern.

    Checks the three closure axioms on (elements, leq), the partial-sum
    hypothesis F(x) = sum_{closed y <= x} g(y) at every closed x, and the
    conclusion g(y) = sum_{close(z) = y} f(z).  Exact equality throughout.
    """
    closed = [x for x in elements if close(x) == x]
    for x in elements:
        cx = close(x)
        if not leq(x, cx):
            return False
        if close(cx) != cx:
            return False
        for y in elements:
            if leq(x, y) and not leq(cx, close(y)):
                return False
    for x in closed:
        total = None
        for y in elements:
            if leq(y, x):
                total = f(y) if total is None else total + f(y)
        partial = None
        for y in closed:
            if leq(y, x):
                partial = g(y) if partial is None else partial + g(y)
        if total != partial:
            return False
    for y in closed:
        grouped = None
        for z in elements:
            if close(z) == y:
                grouped = f(z) if grouped is None else grouped + f(z)
        if grouped != g(y):
            return False
    return True
