"""Compact trie over the prev-encoded suffixes, as a node array.

The tree is derived from the sorted suffix order and the adjacent-LCP array
with the usual left-to-right stack construction: leaves arrive in sorted
order, and an LCP drop closes every node deeper than the new common depth.
Edge labels are never stored; an edge is a depth window of any suffix below
the node, resolved symbol-by-symbol through the O(1) window adjustment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alphabet import PText
from .encoding import prev_char_in_window
from .errors import ValidationError
from .suffixes import PsaIndex

NO_NODE = -1


@dataclass(eq=False)
class TrayTree:
    """Node-array tree. Node 0 is the root; all per-node data is parallel
    lists indexed by node id.

    ``lo``/``hi`` are 1-based suffix-array ranks delimiting the node's leaf
    block; ``depth`` is the string depth (encoded symbols from the root);
    ``leaf_pos`` is the 1-based suffix start for leaves, 0 for internal
    nodes; ``children`` lists child ids in lexicographic edge order.
    """

    parent: list[int] = field(default_factory=list)
    depth: list[int] = field(default_factory=list)
    lo: list[int] = field(default_factory=list)
    hi: list[int] = field(default_factory=list)
    leaf_pos: list[int] = field(default_factory=list)
    children: list[list[int]] = field(default_factory=list)

    root: int = 0

    def new_node(self, depth: int, leaf_pos: int = 0) -> int:
        self.parent.append(NO_NODE)
        self.depth.append(depth)
        self.lo.append(0)
        self.hi.append(0)
        self.leaf_pos.append(leaf_pos)
        self.children.append([])
        return len(self.parent) - 1

    @property
    def size(self) -> int:
        return len(self.parent)

    def is_leaf(self, v: int) -> bool:
        return self.leaf_pos[v] != 0

    def leaf_count(self, v: int) -> int:
        return self.hi[v] - self.lo[v] + 1

    def edge_length(self, v: int) -> int:
        return self.depth[v] - self.depth[self.parent[v]]


def build_tree(index: PsaIndex, text: PText) -> TrayTree:
    """Materialize the compact trie from the sorted suffixes in O(n)."""
    n = text.n
    tree = TrayTree()
    tree.new_node(0)
    plcp = index.plcp
    stack = [tree.root]
    depth = tree.depth

    def attach(child: int, parent: int) -> None:
        tree.parent[child] = parent
        tree.children[parent].append(child)

    for r in range(1, n + 1):
        start = index.suffix_at(r)
        l = int(plcp[r - 1])
        last = NO_NODE
        while depth[stack[-1]] > l:
            v = stack.pop()
            if last != NO_NODE:
                attach(last, v)
            last = v
        top = stack[-1]
        if depth[top] == l:
            if last != NO_NODE:
                attach(last, top)
        else:
            mid = tree.new_node(l)
            if last != NO_NODE:
                attach(last, mid)
            stack.append(mid)
        leaf = tree.new_node(n - start + 1, leaf_pos=start)
        tree.lo[leaf] = tree.hi[leaf] = r
        stack.append(leaf)

    last = NO_NODE
    while stack:
        v = stack.pop()
        if last != NO_NODE:
            attach(last, v)
        last = v

    _fill_ranges(tree)
    return tree


def _fill_ranges(tree: TrayTree) -> None:
    """Set lo/hi of internal nodes from their (ordered) children, bottom-up."""
    order: list[int] = []
    todo = [tree.root]
    while todo:
        v = todo.pop()
        order.append(v)
        todo.extend(tree.children[v])
    for v in reversed(order):
        kids = tree.children[v]
        if kids:
            tree.lo[v] = tree.lo[kids[0]]
            tree.hi[v] = tree.hi[kids[-1]]


def edge_symbol(tree: TrayTree, index: PsaIndex, node: int, offset: int) -> int:
    """Symbol ``offset`` (1-based) of the edge entering ``node``.

    Resolved through any leaf below the node; with the leftmost one the
    window start is ``psa[lo]``.
    """
    if not (1 <= offset <= tree.edge_length(node)):
        raise ValueError(f"edge offset {offset} out of range for node {node}")
    start = index.suffix_at(tree.lo[node])
    return prev_char_in_window(index.codes, start, tree.depth[tree.parent[node]] + offset)


def first_edge_symbol(tree: TrayTree, index: PsaIndex, node: int) -> int:
    return edge_symbol(tree, index, node, 1)


def node_label(tree: TrayTree, index: PsaIndex, node: int) -> tuple[int, ...]:
    """Full root-to-node label as encoded symbol codes (test/debug helper)."""
    start = index.suffix_at(tree.lo[node])
    return tuple(prev_char_in_window(index.codes, start, d)
                 for d in range(1, tree.depth[node] + 1))


def validate_tree(tree: TrayTree, index: PsaIndex, text: PText) -> None:
    """Structural invariants: ordered children partition the parent's leaf
    block, internal non-root nodes branch, node count is linear."""
    n = text.n
    if tree.size > max(2 * n - 1, 1):
        raise ValidationError("node count exceeds 2n-1")
    leaves_seen = 0
    for v in range(tree.size):
        kids = tree.children[v]
        if tree.is_leaf(v):
            leaves_seen += 1
            if kids:
                raise ValidationError(f"leaf {v} has children")
            if tree.depth[v] != n - tree.leaf_pos[v] + 1:
                raise ValidationError(f"leaf {v} depth mismatch")
            continue
        if v != tree.root and len(kids) < 2:
            raise ValidationError(f"internal node {v} has {len(kids)} child(ren)")
        expect = tree.lo[v]
        prev_sym = None
        for u in kids:
            if tree.lo[u] != expect:
                raise ValidationError(f"children of {v} do not partition its range")
            expect = tree.hi[u] + 1
            if tree.depth[u] <= tree.depth[v]:
                raise ValidationError(f"child {u} not deeper than parent {v}")
            sym = first_edge_symbol(tree, index, u)
            if prev_sym is not None and not prev_sym < sym:
                raise ValidationError(f"children of {v} not in symbol order")
            prev_sym = sym
        if kids and expect != tree.hi[v] + 1:
            raise ValidationError(f"children of {v} do not cover its range")
    if leaves_seen != n:
        raise ValidationError(f"expected {n} leaves, found {leaves_seen}")
