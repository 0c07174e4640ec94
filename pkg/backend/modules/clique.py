"""
Exact maximum-clique search over Python-int bitsets

Branch and bound in the style of the classical coloring algorithms: the
candidate set is greedily colored, vertices are expanded in reverse color
order, and a branch is cut as soon as the clique plus the color bound cannot
beat the incumbent. The search is iterative (explicit stack) and counts one
node per expanded vertex so callers can impose a budget.
"""
from dataclasses import dataclass
import logging

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class CliqueResult:
    """Best clique found, whether the search proved it maximum, and nodes spent"""
    clique: tuple
    complete: bool
    nodes: int

    @property
    def size(self):
        return len(self.clique)


class _Frame:
    __slots__ = ('order', 'bounds', 'index', 'candidates')

    def __init__(self, order, bounds, candidates):
        self.order = order
        self.bounds = bounds
        self.index = len(order) - 1
        self.candidates = candidates


def adjacency_from_matrix(adjacent, offset=0):
    """
    Bitset rows from a block of a boolean adjacency matrix

    Args:
        adjacent (np.ndarray): rows offset..offset+len-1 of the full matrix;
            the diagonal entries are ignored
        offset (int): index of the block's first row

    Returns:
        list: one int per row, bit j set iff j is adjacent
    """
    rows = []
    for i, row in enumerate(adjacent):
        row = np.array(row, dtype=bool)
        row[offset + i] = False
        rows.append(int.from_bytes(np.packbits(row, bitorder='little').tobytes(), 'little'))
    return rows


def _lowest(bits):
    return (bits & -bits).bit_length() - 1


class MaxCliqueSearch:
    """Branch and bound with a greedy-coloring upper bound"""

    def __init__(self, adjacency, budget):
        self.adjacency = adjacency
        self.budget = budget
        self.nodes = 0
        self.best = ()

    def _color_sort(self, candidates):
        # color classes are independent sets; bound[i] = color of order[i]
        order, bounds = [], []
        uncolored = candidates
        color = 0
        while uncolored:
            color += 1
            available = uncolored
            while available:
                v = _lowest(available)
                available &= ~(1 << v) & ~self.adjacency[v]
                uncolored &= ~(1 << v)
                order.append(v)
                bounds.append(color)
        return _Frame(order, bounds, candidates)

    def run(self, root=(), candidates=None, stop_at=None):
        """
        Search for a maximum clique containing ``root``

        Args:
            root (tuple): vertices forced into the clique
            candidates (int): bitset of vertices adjacent to every root vertex;
                defaults to all vertices
            stop_at (int): known upper bound; reaching it ends the search

        Returns:
            CliqueResult: ``complete`` is False when the node budget ran out
        """
        if candidates is None:
            candidates = (1 << len(self.adjacency)) - 1
            for v in root:
                candidates &= self.adjacency[v]
        clique = list(root)
        self.best = tuple(clique)
        stack = [self._color_sort(candidates)]
        complete = True
        while stack:
            if stop_at is not None and len(self.best) >= stop_at:
                break
            frame = stack[-1]
            if frame.index < 0 or len(clique) + frame.bounds[frame.index] <= len(self.best):
                stack.pop()
                if stack:
                    clique.pop()
                continue
            self.nodes += 1
            if self.nodes > self.budget:
                complete = False
                break
            v = frame.order[frame.index]
            frame.index -= 1
            extension = frame.candidates & self.adjacency[v]
            frame.candidates &= ~(1 << v)
            clique.append(v)
            if extension:
                stack.append(self._color_sort(extension))
            else:
                if len(clique) > len(self.best):
                    self.best = tuple(clique)
                    logger.debug(f"clique of size {len(self.best)} after {self.nodes} nodes")
                clique.pop()
        return CliqueResult(clique=tuple(sorted(self.best)), complete=complete, nodes=self.nodes)


def max_clique(adjacency, budget, root=(), stop_at=None):
    """Convenience wrapper around MaxCliqueSearch.run"""
    return MaxCliqueSearch(adjacency, budget).run(root=root, stop_at=stop_at)
