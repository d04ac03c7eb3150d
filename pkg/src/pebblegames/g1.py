"""The plain pebble game: positions are sequences of matchings.

Prover queries a small set of pigeons and holes; Delayer must answer a
minimal cover consistent with the last matching.  Delayer wins outright if
the play survives to the length cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from pebblegames.matching import (
    GameSize,
    LogPower,
    Matching,
    Query,
    Record,
    covers,
    matchings_consistent,
    minimal_covers,
)


@dataclass(frozen=True)
class G1Position:
    """The matchings played so far; starts with the empty matching."""

    history: tuple[Matching, ...] = (Matching(),)

    def __post_init__(self) -> None:
        if not self.history or len(self.history[0]) != 0:
            raise ValueError("positions start with the empty matching")

    @property
    def last(self) -> Matching:
        return self.history[-1]

    def __len__(self) -> int:
        return len(self.history)


class G1Tag(Enum):
    ONGOING = "ongoing"
    PROVER_WINS = "prover-wins"
    DELAYER_WINS_AT_CAP = "delayer-wins-at-cap"


@dataclass(frozen=True)
class G1Outcome:
    tag: G1Tag
    position: Optional[G1Position] = None


class MalformedAnswer(ValueError):
    pass


def is_minimal_cover(answer: Matching, q: Query) -> bool:
    """Covers the query and every record is needed for the coverage."""
    if not covers(answer, q):
        return False
    for drop in answer:
        rest = Matching(tuple(r for r in answer if r != drop))
        if covers(rest, q):
            return False
    return True


def g1_step(
    pos: G1Position,
    q: Query,
    answer: Optional[Matching],
    cfg: LogPower,
    size: Optional[GameSize] = None,
    cap: Optional[int] = None,
) -> G1Outcome:
    """One query/answer exchange.

    The cap may be lowered for tests; only its existence matters.  A
    malformed answer (not a minimal cover of the query) is rejected; a
    well-formed answer inconsistent with the last matching loses for
    Delayer, as does a query with no consistent cover at all.
    """
    size = size or GameSize(cfg.n)
    cap = cap if cap is not None else cfg.cap
    if len(pos) >= cap:
        return G1Outcome(G1Tag.DELAYER_WINS_AT_CAP)
    if len(q) > cfg.width:
        raise ValueError(f"query of size {len(q)} exceeds width {cfg.width}")
    if answer is None:
        # Delayer resigned; confirm she really had no consistent cover.
        if minimal_covers(q, pos.last, size):
            raise MalformedAnswer("resignation with consistent covers available")
        return G1Outcome(G1Tag.PROVER_WINS)
    if not is_minimal_cover(answer, q):
        raise MalformedAnswer(f"{answer} is not a minimal cover of {q}")
    if not matchings_consistent(answer, pos.last):
        return G1Outcome(G1Tag.PROVER_WINS)
    return G1Outcome(G1Tag.ONGOING, G1Position(pos.history + (answer,)))


def g1_delayer_canonical(pos: G1Position, q: Query, cfg: LogPower) -> Matching:
    """The survival answer from the winning-Delayer construction.

    Greedily extend the last matching to cover the query with the smallest
    unused hole or pigeon, then restrict to the records covering the query.
    Always succeeds when twice the width fits on the board.
    """
    size = GameSize(cfg.n)
    extended = list(pos.last.entries)

    def used_holes() -> set[int]:
        return {r.hole for r in extended}

    def used_pigeons() -> set[int]:
        return {r.pigeon for r in extended}

    for p in sorted(q.pigeons):
        if p not in used_pigeons():
            free = [h for h in size.holes if h not in used_holes()]
            if not free:
                raise RuntimeError(f"no free hole for pigeon {p}")
            extended.append(Record(p, free[0]))
    for h in sorted(q.holes):
        if h not in used_holes():
            free = [p for p in size.pigeons if p not in used_pigeons()]
            if not free:
                raise RuntimeError(f"no free pigeon for hole {h}")
            extended.append(Record(free[0], h))
    answer = Matching(
        tuple(r for r in extended if r.pigeon in q.pigeons or r.hole in q.holes)
    )
    assert covers(answer, q)
    return answer


@dataclass
class G1Transcript:
    cfg: LogPower
    moves: list[tuple[Query, Matching]]

    def format(self) -> str:
        lines = ["game g1", f"n {self.cfg.n}", f"C {self.cfg.C}"]
        for q, m in self.moves:
            lines.append(f"query: {q}")
            lines.append(
                "answer: " + " ".join(f"{r.pigeon},{r.hole}" for r in m.entries)
            )
        return "\n".join(lines) + "\n"


def g1_play(
    queries: Iterable[Query],
    cfg: LogPower,
    cap: Optional[int] = None,
) -> tuple[G1Outcome, G1Transcript]:
    """Drive the canonical Delayer against a fixed query sequence."""
    pos = G1Position()
    transcript = G1Transcript(cfg, [])
    outcome = G1Outcome(G1Tag.ONGOING, pos)
    for q in queries:
        answer = g1_delayer_canonical(pos, q, cfg)
        outcome = g1_step(pos, q, answer, cfg, cap=cap)
        transcript.moves.append((q, answer))
        if outcome.tag is not G1Tag.ONGOING:
            return outcome, transcript
        pos = outcome.position
    return outcome, transcript
