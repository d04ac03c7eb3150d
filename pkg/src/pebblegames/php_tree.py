"""php-trees: the canonical-play trees of strategies and the game reductions.

A php-tree has pigeon-labeled nodes and hole-labeled edges, no label
repeated along a root path, and level-``k`` branching at most ``n - k``.
The tree built from a strategy table encodes every play of a canonical
anti-strategy; it is complete exactly when no canonical anti-strategy wins.
The two reductions shrink a table to a smaller board while recording the
relabelings needed to lift wins back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from pebblegames.matching import GameSize
from pebblegames.simple_game import SimpleStrategy

# A node is addressed by its root path of edge labels (holes are unique
# along any root path, so the path of holes identifies the node).
HolePath = tuple[int, ...]


class LoosePair(NamedTuple):
    pigeon: int
    hole: int


@dataclass(frozen=True)
class PhpTree:
    """Rooted tree with node labels (pigeons) keyed by hole paths."""

    n: int
    nodes: dict[HolePath, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if () not in self.nodes:
            raise ValueError("php-tree needs a labeled root")

    def label(self, path: HolePath) -> int:
        return self.nodes[path]

    def children(self, path: HolePath) -> list[int]:
        """Outgoing edge labels at a node, sorted."""
        return sorted(
            p[-1] for p in self.nodes if len(p) == len(path) + 1 and p[: len(path)] == path
        )

    def paths(self) -> list[HolePath]:
        return sorted(self.nodes)

    @property
    def depth(self) -> int:
        return max(len(p) for p in self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)


def validate_php_tree(tree: PhpTree) -> bool:
    """The five defining conditions."""
    n = tree.n
    for path, label in tree.nodes.items():
        if not 0 <= label <= n:
            return False
        if any(not 0 <= h < n for h in path):
            return False
        # Edge labels along a root path are the path entries themselves.
        if len(set(path)) != len(path):
            return False
        if len(path) > 0 and path[:-1] not in tree.nodes:
            return False
        # Node labels along the root path must be distinct.
        labels = [tree.nodes[path[:k]] for k in range(len(path) + 1)]
        if len(set(labels)) != len(labels):
            return False
        if len(tree.children(path)) > n - len(path):
            return False
    return True


def is_complete(tree: PhpTree) -> bool:
    """Depth ``n`` with branching exactly ``n - k`` at every level-k node."""
    if tree.depth != tree.n:
        return False
    return all(
        len(tree.children(path)) == tree.n - len(path) for path in tree.nodes
    )


def is_symmetric(tree: PhpTree) -> bool:
    """Node label plus edge label determines the child label."""
    seen: dict[tuple[int, int], int] = {}
    for path, label in tree.nodes.items():
        if not path:
            continue
        parent_label = tree.nodes[path[:-1]]
        key = (parent_label, path[-1])
        if key in seen and seen[key] != label:
            return False
        seen[key] = label
    return True


def build_php_tree(strat: SimpleStrategy) -> PhpTree:
    """The canonical-play tree of a table.

    From a node with root path ``(v_0..v_i)``, a fresh hole ``h`` opens a
    child exactly when the table sends the node's pigeon to a pigeon not yet
    on the path; the child is labeled by that pigeon.  The result is
    symmetric by construction.
    """
    n = strat.size.n
    nodes: dict[HolePath, int] = {(): strat.init}

    def grow(path: HolePath, labels_on_path: tuple[int, ...]) -> None:
        current = labels_on_path[-1]
        for h in range(n):
            if h in path:
                continue
            nxt = strat.table[current][h]
            if nxt in labels_on_path:
                continue
            child = path + (h,)
            nodes[child] = nxt
            grow(child, labels_on_path + (nxt,))

    grow((), (strat.init,))
    return PhpTree(n, nodes)


def find_loose_pairs(tree: PhpTree, size: GameSize) -> frozenset[LoosePair]:
    """Pairs ``(p, h)`` never realized as node-label plus outgoing edge."""
    realized = set()
    for path in tree.nodes:
        for h in tree.children(path):
            realized.add((tree.nodes[path], h))
    return frozenset(
        LoosePair(p, h)
        for p in size.pigeons
        for h in size.holes
        if (p, h) not in realized
    )


# ---------------------------------------------------------------------------
# Reductions: commit-to-root and forbid-holes.


@dataclass(frozen=True)
class Reduction:
    """A reduced strategy plus the bookkeeping to lift plays back.

    ``pigeon_map``/``hole_map`` send old ids to new contiguous ids;
    ``escapes`` lists the removed-domain cells whose table value left the
    restricted range (the rule's guarantee fails when it is nonempty, and
    those cells were completed with the smallest legal pigeon).
    """

    reduced: SimpleStrategy
    pigeon_map: dict[int, int]
    hole_map: dict[int, int]
    escapes: tuple[tuple[int, int], ...]

    @property
    def closed(self) -> bool:
        return not self.escapes

    def lift_answers(self, answers: tuple[int, ...]) -> tuple[int, ...]:
        inv = {v: k for k, v in self.hole_map.items()}
        return tuple(inv[a] for a in answers)


def _restrict(
    strat: SimpleStrategy,
    drop_pigeons: frozenset[int],
    drop_holes: frozenset[int],
    new_s: int,
    new_init_old: int,
) -> Reduction:
    old_pigeons = [p for p in strat.size.pigeons if p not in drop_pigeons]
    old_holes = [h for h in strat.size.holes if h not in drop_holes]
    pigeon_map = {p: i for i, p in enumerate(old_pigeons)}
    hole_map = {h: i for i, h in enumerate(old_holes)}
    escapes = []
    new_n = len(old_holes)
    rows = []
    for p in old_pigeons:
        row = []
        for h in old_holes:
            v = strat.table[p][h]
            if v in drop_pigeons:
                escapes.append((p, h))
                v = min(q for q in old_pigeons)  # smallest legal pigeon
            row.append(pigeon_map[v])
        rows.append(tuple(row))
    if new_init_old in drop_pigeons:
        escapes.append((new_init_old, -1))
        new_init = 0
    else:
        new_init = pigeon_map[new_init_old]
    reduced = SimpleStrategy(GameSize(new_n), new_s, new_init, tuple(rows))
    return Reduction(reduced, pigeon_map, hole_map, tuple(escapes))


def commit_to_root(strat: SimpleStrategy, h: int) -> Reduction:
    """Answer ``h`` to the first question and never use either side again.

    Shrinks the board by one pigeon (the initial question) and one hole,
    with one round fewer; sound when no table value points back at the
    initial pigeon from the restricted domain.
    """
    if strat.size.pigeon_count is not None:
        raise ValueError("reductions apply to standard boards only")
    if h not in strat.size.holes:
        raise ValueError(f"hole {h} outside board")
    first = strat.init
    follow = strat.table[first][h]
    return _restrict(
        strat,
        drop_pigeons=frozenset({first}),
        drop_holes=frozenset({h}),
        new_s=strat.s - 1,
        new_init_old=follow,
    )


def forbid_holes(
    strat: SimpleStrategy, holes: frozenset[int], pigeons: frozenset[int]
) -> Reduction:
    """Never answer the given holes; sound when the paired pigeons are never
    asked.  Keeps the round count."""
    if strat.size.pigeon_count is not None:
        raise ValueError("reductions apply to standard boards only")
    if len(holes) != len(pigeons):
        raise ValueError("must drop as many pigeons as holes")
    if not holes <= frozenset(strat.size.holes):
        raise ValueError("holes outside board")
    if not pigeons <= frozenset(strat.size.pigeons):
        raise ValueError("pigeons outside board")
    return _restrict(
        strat,
        drop_pigeons=pigeons,
        drop_holes=holes,
        new_s=strat.s,
        new_init_old=strat.init,
    )


# ---------------------------------------------------------------------------
# Shortest qualifying path to a loop edge.


def shortest_loop_witness(strat: SimpleStrategy, loop_tail: int, loop_hole: int) -> Optional[int]:
    """Length of the shortest locally consistent walk from the initial node
    ending at the loop's tail, avoiding the loop hole everywhere and the
    tail pigeon internally.  ``None`` when unreachable, ``0`` when the
    initial node is the tail itself."""
    if strat.init == loop_tail:
        return 0
    n = strat.size.n
    # BFS over (current edge); edges carrying the loop hole or leaving the
    # loop tail are excluded, so surviving walks meet the path constraint.
    frontier: set[tuple[int, int]] = set()
    for h in range(n):
        if h == loop_hole or strat.init == loop_tail:
            continue
        frontier.add((strat.init, h))
    seen = set(frontier)
    dist = 1
    while frontier:
        hits = any(strat.table[p][h] == loop_tail for p, h in frontier)
        if hits:
            return dist
        nxt = set()
        for p, h in frontier:
            head = strat.table[p][h]
            if head == loop_tail:
                continue
            for h2 in range(n):
                if h2 == loop_hole:
                    continue
                e2 = (head, h2)
                # local consistency between consecutive edges
                if (head == p) != (h2 == h):
                    continue
                if e2 not in seen:
                    seen.add(e2)
                    nxt.add(e2)
        frontier = nxt
        dist += 1
    return None


# ---------------------------------------------------------------------------
# Text form.


def format_php_tree(tree: PhpTree) -> str:
    """Node lines with dot-paths of child indices plus edge lines with holes."""
    index_of: dict[HolePath, str] = {(): "-"}
    lines = []
    for path in tree.paths():
        if path:
            parent = path[:-1]
            siblings = tree.children(parent)
            idx = siblings.index(path[-1]) + 1
            parent_ix = index_of[parent]
            index_of[path] = f"{idx}" if parent_ix == "-" else f"{parent_ix}.{idx}"
        lines.append(f"{index_of[path]} label={tree.nodes[path]}")
    for path in tree.paths():
        if path:
            lines.append(f"edge {index_of[path]} {path[-1]}")
    return "\n".join(lines) + "\n"
