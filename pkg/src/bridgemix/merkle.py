"""Fixed-height append-only merkle accumulator with root history.

Leaves are field elements; empty slots are zero-padded, so the root of an
empty subtree at level i is the precomputed Z_i (Z_0 = 0, Z_{i+1} =
hash2(Z_i, Z_i)).  Adds are O(h) via the filled-subtrees technique; paths for
arbitrary (leaf, history point) pairs are reconstructed on demand with a
cache of completed-subtree values.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .field_hash import DEFAULT_PARAMS, FieldElement, HashParams, P, hash2

MAX_HEIGHT = 32


class MerkleError(ValueError):
    pass


@functools.lru_cache(maxsize=None)
def zero_subtree_roots(height: int, params: HashParams) -> tuple:
    """Z_0..Z_height where Z_0 = 0 and Z_{i+1} = hash2(Z_i, Z_i)."""
    roots = [0]
    for _ in range(height):
        roots.append(hash2(roots[-1], roots[-1], params))
    return tuple(roots)


@dataclass(frozen=True)
class MerklePath:
    """Authentication path: sibling per level, direction bit per level
    (0 = the current node is a left child)."""

    leaf_index: int
    siblings: tuple
    directions: tuple

    def __post_init__(self):
        if len(self.siblings) != len(self.directions):
            raise MerkleError("siblings/directions length mismatch")
        if any(d not in (0, 1) for d in self.directions):
            raise MerkleError("directions must be bits")


@dataclass
class MerkleTree:
    height: int
    params: HashParams
    leaves: list = field(default_factory=list)
    zero_roots: tuple = ()
    filled_subtrees: list = field(default_factory=list)
    root_history: list = field(default_factory=list)  # (leaf index, root); (-1, Z_h) at setup
    # cache of completed-subtree node values, keyed (level, index); valid
    # forever because leaves are append-only
    _complete: dict = field(default_factory=dict)
    _mutating: bool = False

    @property
    def capacity(self) -> int:
        return 1 << self.height

    @property
    def root(self) -> FieldElement:
        return self.root_history[-1][1]


def mt_setup(h: int, params: HashParams | None = None) -> MerkleTree:
    """Empty tree of height h; root history starts at (-1, Z_h)."""
    if params is None:
        params = DEFAULT_PARAMS
    if not 1 <= h <= MAX_HEIGHT:
        raise MerkleError(f"height must be in [1, {MAX_HEIGHT}], got {h}")
    zeros = zero_subtree_roots(h, params)
    return MerkleTree(
        height=h,
        params=params,
        zero_roots=zeros,
        filled_subtrees=list(zeros[:h]),
        root_history=[(-1, zeros[h])],
    )


def mt_add(tree: MerkleTree, y: FieldElement) -> bool:
    """Append a leaf; returns a success bit (False when the tree is full)."""
    if not 0 <= y < P:
        raise MerkleError(f"leaf out of field range: {y}")
    index = len(tree.leaves)
    if index >= tree.capacity:
        return False
    assert not tree._mutating, "concurrent mutation of a single-writer tree"
    tree._mutating = True
    try:
        tree.leaves.append(y)
        node = y
        idx = index
        for level in range(tree.height):
            if idx % 2 == 0:
                tree.filled_subtrees[level] = node
                node = hash2(node, tree.zero_roots[level], tree.params)
            else:
                node = hash2(tree.filled_subtrees[level], node, tree.params)
            idx //= 2
        tree.root_history.append((index, node))
    finally:
        tree._mutating = False
    return True


def _node(tree: MerkleTree, level: int, index: int, leaf_count: int) -> FieldElement:
    """Value of the node covering leaves [index*2^level, (index+1)*2^level)
    when only the first leaf_count leaves are present."""
    start = index << level
    if start >= leaf_count:
        return tree.zero_roots[level]
    if level == 0:
        return tree.leaves[index]
    complete = start + (1 << level) <= leaf_count
    if complete:
        cached = tree._complete.get((level, index))
        if cached is not None:
            return cached
    value = hash2(
        _node(tree, level - 1, 2 * index, leaf_count),
        _node(tree, level - 1, 2 * index + 1, leaf_count),
        tree.params,
    )
    if complete:
        tree._complete[(level, index)] = value
    return value


def mt_path(tree: MerkleTree, leaf_index: int, leaf_count: int | None = None) -> MerklePath:
    """Path for a leaf against the root after `leaf_count` adds (default: now)."""
    if leaf_count is None:
        leaf_count = len(tree.leaves)
    if not 0 < leaf_count <= len(tree.leaves):
        raise MerkleError(f"leaf_count out of range: {leaf_count}")
    if not 0 <= leaf_index < leaf_count:
        raise MerkleError(f"leaf index {leaf_index} out of bounds (< {leaf_count})")
    siblings = []
    directions = []
    idx = leaf_index
    for level in range(tree.height):
        siblings.append(_node(tree, level, idx ^ 1, leaf_count))
        directions.append(idx & 1)
        idx //= 2
    return MerklePath(leaf_index, tuple(siblings), tuple(directions))


def mt_verify(
    y: FieldElement,
    path: MerklePath,
    root: FieldElement,
    params: HashParams | None = None,
) -> bool:
    """Fold y up through the path; True iff the recomputed root matches."""
    if params is None:
        params = DEFAULT_PARAMS
    node = y
    for sibling, direction in zip(path.siblings, path.directions):
        if direction == 0:
            node = hash2(node, sibling, params)
        else:
            node = hash2(sibling, node, params)
    return node == root
