"""The backtracking pebble game on a bounded board tree.

Positions are partial labelings of the tree; every label carries a matching
and one auxiliary integer per level.  Prover either climbs above the
frontier (option 1), jumps to the next sibling of a vertex below it
(option 2), or backtracks, erasing the frontier subtree and growing the
rightmost surviving branch (option 3).  Each transition strictly increases
the position's domain in the tree order, which is what forces termination.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Union

from pebblegames.matching import (
    GameSize,
    LogPower,
    Matching,
    Query,
    matchings_consistent,
    minimal_covers,
)
from pebblegames.trees import (
    FiniteTree,
    Ordering,
    TreeOracle,
    Vertex,
    format_vertex,
    is_prefix,
    tree_compare,
)


@dataclass(frozen=True)
class PositionLabel:
    """A matching plus one auxiliary integer per level of the vertex."""

    matching: Matching
    aux: tuple[int, ...]


@dataclass(frozen=True)
class G2Position:
    """A downward-closed labeled subtree; the frontier is its largest vertex."""

    labels: dict[Vertex, PositionLabel]

    def __post_init__(self) -> None:
        dom = tuple(sorted(self.labels))
        if not dom:
            raise ValueError("positions are nonempty")
        have = set(dom)
        for v in dom:
            if v and v[:-1] not in have:
                raise ValueError(f"domain not downward closed at {v}")
            if len(self.labels[v].aux) != len(v):
                raise ValueError(f"aux length mismatch at {v}")
        for v in dom:
            for w in dom:
                if is_prefix(v, w) and v != w:
                    mv, mw = self.labels[v].matching, self.labels[w].matching
                    if not set(mv.entries) <= set(mw.entries):
                        raise ValueError(f"labels not monotone between {v} and {w}")
                    av, aw = self.labels[v].aux, self.labels[w].aux
                    if aw[: len(av)] != av:
                        raise ValueError(f"aux not monotone between {v} and {w}")
        object.__setattr__(self, "_dom", dom)

    @property
    def dom(self) -> tuple[Vertex, ...]:
        return self._dom  # type: ignore[attr-defined]

    @property
    def frontier(self) -> Vertex:
        return self.dom[-1]

    def domain_tree(self) -> FiniteTree:
        return FiniteTree(self.dom)

    def label(self, v: Vertex) -> PositionLabel:
        return self.labels[v]

    def snapshot(self) -> str:
        lines = []
        for v in self.dom:
            lab = self.labels[v]
            recs = " ".join(f"{r.pigeon},{r.hole}" for r in lab.matching.entries)
            aux = " ".join(str(a) for a in lab.aux)
            lines.append(f"{format_vertex(v)} | {recs} | {aux}")
        return "\n".join(lines) + "\n"


def initial_position() -> G2Position:
    return G2Position({(): PositionLabel(Matching(), ())})


@dataclass(frozen=True)
class ProverMove:
    """Option plus its argument: a child index for option 1, a proper prefix
    of the frontier otherwise, and the remembered integer ``B``."""

    option: int
    x: Union[int, Vertex]
    b: int


class G2Tag(Enum):
    ONGOING = "ongoing"
    PROVER_WINS = "prover-wins"
    PROVER_LOSES = "prover-loses"
    DELAYER_WINS = "delayer-wins"


@dataclass(frozen=True)
class G2StepResult:
    tag: G2Tag
    position: Optional[G2Position] = None
    erased: tuple[tuple[Vertex, PositionLabel], ...] = ()


class MalformedMove(ValueError):
    pass


class ContractViolation(AssertionError):
    """Raised when a play contradicts the monotonicity guarantee."""


def _validate_move(mv: ProverMove, frontier: Vertex, cfg: LogPower) -> None:
    if mv.option not in (1, 2, 3):
        raise MalformedMove(f"option {mv.option} not in 1..3")
    if not 1 <= mv.b <= cfg.cap:
        raise MalformedMove(f"B={mv.b} outside [1, {cfg.cap}]")
    if mv.option == 1:
        if not isinstance(mv.x, int) or not 1 <= mv.x <= cfg.cap:
            raise MalformedMove(f"option 1 needs a child index, got {mv.x!r}")
    else:
        x = mv.x
        if not isinstance(x, tuple) or x == frontier or not is_prefix(x, frontier):
            raise MalformedMove(f"option {mv.option} needs a proper prefix of {frontier}")


def g2_apply(
    pos: G2Position,
    answer: Matching,
    mv: ProverMove,
    cfg: LogPower,
    tree: TreeOracle,
) -> G2StepResult:
    """Apply one Prover move after Delayer's answer.

    Losing off-tree cases are decided before the contradiction check, which
    compares the answer against the matching carried to the landing vertex.
    """
    c = pos.frontier
    _validate_move(mv, c, cfg)
    lab = pos.labels[c]

    if mv.option == 1:
        target = c + (mv.x,)
        if target not in tree:
            return G2StepResult(G2Tag.PROVER_LOSES)
        if not matchings_consistent(lab.matching, answer):
            return G2StepResult(G2Tag.PROVER_WINS)
        new = dict(pos.labels)
        new[target] = PositionLabel(lab.matching.union(answer), lab.aux + (mv.b,))
        return G2StepResult(G2Tag.ONGOING, G2Position(new))

    x: Vertex = mv.x  # type: ignore[assignment]
    k = c[len(x)]

    if mv.option == 2:
        target = x + (k + 1,)
        if target not in tree:
            return G2StepResult(G2Tag.PROVER_LOSES)
        carried = pos.labels[x]
        if not matchings_consistent(carried.matching, answer):
            return G2StepResult(G2Tag.PROVER_WINS)
        new = dict(pos.labels)
        new[target] = PositionLabel(carried.matching.union(answer), carried.aux + (mv.b,))
        return G2StepResult(G2Tag.ONGOING, G2Position(new))

    # Option 3: backtrack below the frontier and regrow to the right.
    back = x + (k - 1,)
    if k - 1 < 1 or back not in pos.labels:
        return G2StepResult(G2Tag.PROVER_LOSES)
    ext = [v for v in pos.dom if is_prefix(back, v)]
    landing_base = ext[-1]
    if tree.is_leaf(landing_base):
        return G2StepResult(G2Tag.PROVER_LOSES)
    carried = pos.labels[landing_base]
    erased_prefix = x + (k,)
    erased = tuple(
        (v, pos.labels[v]) for v in pos.dom if is_prefix(erased_prefix, v)
    )
    if not matchings_consistent(carried.matching, answer):
        return G2StepResult(G2Tag.PROVER_WINS, erased=erased)
    new = {v: l for v, l in pos.labels.items() if not is_prefix(erased_prefix, v)}
    new[landing_base + (1,)] = PositionLabel(
        carried.matching.union(answer), carried.aux + (mv.b,)
    )
    return G2StepResult(G2Tag.ONGOING, G2Position(new), erased=erased)


# ---------------------------------------------------------------------------
# Strategies.


@dataclass(frozen=True)
class ObliviousStrategy:
    """Callbacks that only see the frontier vertex, its matching and aux.

    The engine enforces the restriction structurally: these callbacks are
    never handed the full position.
    """

    query: Callable[[Vertex, Matching, tuple[int, ...]], Query]
    move: Callable[[Vertex, Matching, tuple[int, ...], Matching], ProverMove]


@dataclass(frozen=True)
class PositionStrategy:
    """Unrestricted callbacks reading the whole position (the root-ramify
    construction needs to compare the frontier against other leaves)."""

    query: Callable[[G2Position], Query]
    move: Callable[[G2Position, Matching], ProverMove]


ProverStrategy = Union[ObliviousStrategy, PositionStrategy]
DelayerCallback = Callable[[G2Position, Query], Matching]


@dataclass
class G2Transcript:
    cfg: LogPower
    steps: list[dict] = field(default_factory=list)
    winner: Optional[str] = None

    def record(
        self,
        q: Query,
        answer: Matching,
        mv: ProverMove,
        result: G2StepResult,
    ) -> None:
        self.steps.append(
            {"query": q, "answer": answer, "move": mv, "result": result}
        )

    def format(self) -> str:
        lines = ["game g2", f"n {self.cfg.n}", f"C {self.cfg.C}"]
        for st in self.steps:
            mv: ProverMove = st["move"]
            x = format_vertex(mv.x) if isinstance(mv.x, tuple) else str(mv.x)
            lines.append(f"query: {st['query']}")
            answer = " ".join(f"{r.pigeon},{r.hole}" for r in st["answer"].entries)
            lines.append(f"answer: {answer}")
            lines.append(f"move: o={mv.option} x={x} B={mv.b}")
        if self.winner:
            lines.append(f"winner: {self.winner}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class G2PlayResult:
    outcome: G2Tag
    winner: str
    steps: int
    transcript: G2Transcript
    final: Optional[G2Position]


def g2_play(
    cfg: LogPower,
    tree: TreeOracle,
    prover: ProverStrategy,
    delayer: DelayerCallback,
    step_cap: int = 100_000,
) -> G2PlayResult:
    """Drive a full play, asserting strict tree-order growth at every step.

    A query with no minimal cover at all is a Prover win (Delayer cannot
    answer); answers are validated for shape but deliberately not for
    consistency, which only the landing check judges.
    """
    size = GameSize(cfg.n)
    pos = initial_position()
    transcript = G2Transcript(cfg)
    for step in range(1, step_cap + 1):
        v = pos.frontier
        lab = pos.labels[v]
        if isinstance(prover, ObliviousStrategy):
            q = prover.query(v, lab.matching, lab.aux)
        else:
            q = prover.query(pos)
        if len(q) > cfg.width:
            raise MalformedMove(f"query size {len(q)} exceeds width {cfg.width}")
        options = minimal_covers(q, None, size)
        if not options:
            transcript.winner = "prover"
            return G2PlayResult(G2Tag.PROVER_WINS, "prover", step, transcript, pos)
        answer = delayer(pos, q)
        if answer not in options:
            raise MalformedMove(f"{answer} is not a minimal cover of {q}")
        if isinstance(prover, ObliviousStrategy):
            mv = prover.move(v, lab.matching, lab.aux, answer)
        else:
            mv = prover.move(pos, answer)
        result = g2_apply(pos, answer, mv, cfg, tree)
        transcript.record(q, answer, mv, result)
        if result.tag is G2Tag.PROVER_WINS:
            transcript.winner = "prover"
            return G2PlayResult(result.tag, "prover", step, transcript, pos)
        if result.tag is G2Tag.PROVER_LOSES:
            transcript.winner = "delayer"
            return G2PlayResult(G2Tag.DELAYER_WINS, "delayer", step, transcript, pos)
        nxt = result.position
        assert nxt is not None
        if tree_compare(pos.domain_tree(), nxt.domain_tree()) is not Ordering.LESS:
            raise ContractViolation(
                f"domain failed to grow: {pos.dom} -> {nxt.dom}"
            )
        pos = nxt
    raise ContractViolation(f"play exceeded step cap {step_cap}")


# ---------------------------------------------------------------------------
# The unrestricted winning Prover for the root-ramified board.


def root_ramify_tree(n: int) -> FiniteTree:
    """Root with ``n + 1`` children, each with a single grandchild."""
    vs: list[Vertex] = [()]
    for i in range(1, n + 2):
        vs.append((i,))
        vs.append((i, 1))
    return FiniteTree(tuple(vs))


def _candidate_moves(
    pos: G2Position, tree: TreeOracle, cfg: LogPower
) -> list[tuple[ProverMove, Matching]]:
    """Shape-legal non-losing moves paired with the matching the answer
    will be checked against at the landing."""
    c = pos.frontier
    out: list[tuple[ProverMove, Matching]] = []
    if c + (1,) in tree:
        out.append((ProverMove(1, 1, 1), pos.labels[c].matching))
    for cut in range(len(c)):
        x = c[:cut]
        k = c[cut]
        if x + (k + 1,) in tree:
            out.append((ProverMove(2, x, 1), pos.labels[x].matching))
        back = x + (k - 1,)
        if k - 1 >= 1 and back in pos.labels:
            ext = [v for v in pos.dom if is_prefix(back, v)]
            landing = ext[-1]
            if not tree.is_leaf(landing):
                out.append((ProverMove(3, x, 1), pos.labels[landing].matching))
    return out


def _kill_query(
    pos: G2Position, tree: TreeOracle, cfg: LogPower, size: GameSize
) -> Optional[Query]:
    """A query every minimal cover of which is refuted by some move."""
    candidates = _candidate_moves(pos, tree, cfg)
    if not candidates:
        return None
    pigeons = list(size.pigeons)
    queries = [Query.of([p]) for p in pigeons]
    if cfg.width >= 2:
        queries += [Query.of(pair) for pair in itertools.combinations(pigeons, 2)]
    for q in queries:
        covers_q = minimal_covers(q, None, size)
        if covers_q and all(
            any(not matchings_consistent(store, m) for _, store in candidates)
            for m in covers_q
        ):
            return q
    return None


def prover_root_ramify(n: int, cfg: LogPower) -> tuple[FiniteTree, PositionStrategy]:
    """The winning Prover for the root-ramified board.

    Option 1 opens the first child, option 2 sweeps fresh pigeon questions
    along the root's children, and as soon as some query is guaranteed to
    clash with a reachable stored matching whatever the cover, that query is
    asked and the clash delivered by the refuting move.
    """
    if n < 2 or cfg.C < 2:
        raise ValueError("the construction needs n >= 2 and C >= 2")
    if cfg.cap <= n:
        raise ValueError(f"branching cap {cfg.cap} must exceed n={n}")
    if cfg.n != n:
        raise ValueError("cfg board size mismatch")
    size = GameSize(n)
    tree_explicit = root_ramify_tree(n)
    tree = TreeOracle.explicit(tree_explicit)

    def query(pos: G2Position) -> Query:
        c = pos.frontier
        if c == ():
            return Query.of([0])
        kill = _kill_query(pos, tree, cfg, size)
        if kill is not None:
            return kill
        if len(c) == 1 and c[0] <= n:
            return Query.of([c[0]])  # sweep: child (m) asks pigeon m
        return Query.of([0])

    def move(pos: G2Position, answer: Matching) -> ProverMove:
        candidates = _candidate_moves(pos, tree, cfg)
        for mv, store in candidates:
            if not matchings_consistent(store, answer):
                return mv
        c = pos.frontier
        if c == ():
            return ProverMove(1, 1, 1)
        if len(c) == 1 and c[0] <= n and c[:0] + (c[0] + 1,) in tree:
            return ProverMove(2, (), 1)
        if candidates:
            for mv, _ in candidates:
                if mv.option == 2:
                    return mv
            return candidates[0][0]
        return ProverMove(1, 1, 1)  # no non-losing move: concede

    return tree_explicit, PositionStrategy(query, move)


def exhaust_delayer(
    cfg: LogPower,
    tree: TreeOracle,
    prover: ProverStrategy,
    max_depth: int = 60,
) -> tuple[bool, int, int]:
    """Walk the full Delayer answer tree; returns (prover_always_wins,
    number of terminal branches, maximal depth seen)."""
    size = GameSize(cfg.n)
    branches = 0
    deepest = 0
    all_win = True

    def step(pos: G2Position, depth: int) -> None:
        nonlocal branches, deepest, all_win
        deepest = max(deepest, depth)
        if depth > max_depth:
            all_win = False
            branches += 1
            return
        v = pos.frontier
        lab = pos.labels[v]
        if isinstance(prover, ObliviousStrategy):
            q = prover.query(v, lab.matching, lab.aux)
        else:
            q = prover.query(pos)
        options = minimal_covers(q, None, size)
        if not options:
            branches += 1  # unanswerable query: Prover wins
            return
        for answer in sorted(options, key=lambda m: m.entries):
            if isinstance(prover, ObliviousStrategy):
                mv = prover.move(v, lab.matching, lab.aux, answer)
            else:
                mv = prover.move(pos, answer)
            result = g2_apply(pos, answer, mv, cfg, tree)
            if result.tag is G2Tag.PROVER_WINS:
                branches += 1
            elif result.tag is G2Tag.PROVER_LOSES:
                branches += 1
                all_win = False
            else:
                assert result.position is not None
                if tree_compare(pos.domain_tree(), result.position.domain_tree()) is not Ordering.LESS:
                    raise ContractViolation("domain failed to grow")
                step(result.position, depth + 1)

    step(initial_position(), 1)
    return all_win, branches, deepest


# ---------------------------------------------------------------------------
# Random playouts (fuzzing the monotonicity and determinacy claims).


def _hash_int(*parts: object) -> int:
    text = "|".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def random_nc_tree(n: int, C: int, branching: int, seed: int) -> FiniteTree:
    """A random left-sibling-closed tree of height <= C."""
    vs: list[Vertex] = [()]

    def grow(v: Vertex) -> None:
        if len(v) >= C:
            return
        width = _hash_int("w", seed, v) % (branching + 1)
        for i in range(1, width + 1):
            child = v + (i,)
            vs.append(child)
            grow(child)

    grow(())
    return FiniteTree(tuple(vs))


def random_playout(
    cfg: LogPower, tree: TreeOracle, seed: int, step_cap: int = 100_000
) -> G2PlayResult:
    """One play with hash-driven legal-ish Prover moves and Delayer answers."""
    size = GameSize(cfg.n)

    def query(pos: G2Position) -> Query:
        k = _hash_int("q", seed, pos.dom) % 3
        pigeons = sorted(size.pigeons)
        picks = [
            pigeons[_hash_int("qp", seed, pos.dom, i) % len(pigeons)] for i in range(k)
        ]
        return Query.of(picks)

    def move(pos: G2Position, answer: Matching) -> ProverMove:
        c = pos.frontier
        h = _hash_int("m", seed, pos.dom, answer.entries)
        # Mostly survivable moves so plays go deep; one raw move in the mix
        # keeps the losing branches of the rules exercised.
        choices = [mv for mv, _ in _candidate_moves(pos, tree, cfg)]
        raw: list[ProverMove] = [ProverMove(1, 1 + h % min(cfg.cap, 4), 1 + h % cfg.cap)]
        for cut in range(len(c)):
            raw.append(ProverMove(2, c[:cut], 1 + (h >> 3) % cfg.cap))
            raw.append(ProverMove(3, c[:cut], 1 + (h >> 5) % cfg.cap))
        pool = choices * 3 + raw
        return pool[h % len(pool)]

    def delayer(pos: G2Position, q: Query) -> Matching:
        options = sorted(minimal_covers(q, None, size), key=lambda m: m.entries)
        return options[_hash_int("d", seed, pos.dom, q) % len(options)]

    return g2_play(cfg, tree, PositionStrategy(query, move), delayer, step_cap)
