"""Balanced presentations and the moves that rewrite their relators.

A presentation of rank n holds exactly n relators (balanced by
construction).  The move set on rank-n presentations has size 3n²:

* ``invert_move(i)``        -- relator i is replaced by its inverse,
* ``multiply_move(i, j)``   -- relator i becomes r_i * r_j (i != j),
* ``conjugate_move(i, c)``  -- relator i becomes c * r_i * c^-1 for a
  signed generator letter c (2n choices of c).

Moves are plain tuples ``(kind, i, x)`` so that long sequences of them are
cheap to store, hash and mutate.  Relator indices always refer to positions
in the working presentation; nothing is re-sorted behind the caller's back.
``canonical_form`` is the equality/hashing normal form: each relator is
replaced by its canonical representative and the relators are then sorted
in shortlex order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from .words import (
    Word,
    canonical_rep,
    concat_reduce,
    conjugate_word,
    free_reduce,
    invert_word,
    shortlex_key,
)

INVERT = 0
MULTIPLY = 1
CONJUGATE = 2

AcMove = tuple[int, int, int]
MoveSequence = tuple[AcMove, ...]


class Presentation(NamedTuple):
    rank: int
    relators: tuple[Word, ...]


def make_presentation(rank: int, relators) -> Presentation:
    """Validated, freely reduced presentation from raw letter sequences."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    rels = tuple(free_reduce(r) for r in relators)
    if len(rels) != rank:
        raise ValueError(f"unbalanced: rank {rank} but {len(rels)} relators")
    for r in rels:
        for x in r:
            if not 1 <= abs(x) <= rank:
                raise ValueError(f"letter {x} out of range for rank {rank}")
    return Presentation(rank, rels)


def trivial_presentation(rank: int) -> Presentation:
    """<g1,...,gn | g1,...,gn>."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    return Presentation(rank, tuple((i,) for i in range(1, rank + 1)))


def total_length(p: Presentation) -> int:
    return sum(len(r) for r in p.relators)


def invert_move(i: int) -> AcMove:
    return (INVERT, i, 0)


def multiply_move(i: int, j: int) -> AcMove:
    if i == j:
        raise ValueError("multiply needs two distinct relators")
    return (MULTIPLY, i, j)


def conjugate_move(i: int, c: int) -> AcMove:
    if c == 0:
        raise ValueError("conjugator letter must be nonzero")
    return (CONJUGATE, i, c)


def check_move(m: AcMove, rank: int) -> None:
    """Raise ValueError unless m is a valid move for the given rank."""
    kind, i, x = m
    if not 0 <= i < rank:
        raise ValueError(f"relator index {i} out of range for rank {rank}")
    if kind == INVERT:
        return
    if kind == MULTIPLY:
        if not 0 <= x < rank:
            raise ValueError(f"relator index {x} out of range for rank {rank}")
        if x == i:
            raise ValueError("multiply needs two distinct relators")
        return
    if kind == CONJUGATE:
        if not 1 <= abs(x) <= rank:
            raise ValueError(f"conjugator {x} out of range for rank {rank}")
        return
    raise ValueError(f"unknown move kind {kind}")


def enumerate_moves(rank: int) -> list[AcMove]:
    """All 3n² moves of a rank-n presentation, in a fixed deterministic order."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    moves: list[AcMove] = [(INVERT, i, 0) for i in range(rank)]
    moves.extend((MULTIPLY, i, j) for i in range(rank) for j in range(rank) if i != j)
    moves.extend(
        (CONJUGATE, i, s * g)
        for i in range(rank)
        for g in range(1, rank + 1)
        for s in (1, -1)
    )
    return moves


@lru_cache(maxsize=None)
def move_table(rank: int) -> tuple[AcMove, ...]:
    """Cached tuple version of enumerate_moves for hot loops."""
    return tuple(enumerate_moves(rank))


def inverse_moves(m: AcMove) -> list[AcMove]:
    """Move sequence undoing m: AC1/AC3 are self-inverse (with the opposite
    conjugation orientation), AC2 is undone by the 3-move composite
    invert(j); multiply(i,j); invert(j)."""
    kind, i, x = m
    if kind == INVERT:
        return [m]
    if kind == CONJUGATE:
        return [(CONJUGATE, i, -x)]
    return [(INVERT, x, 0), (MULTIPLY, i, x), (INVERT, x, 0)]


def apply_move(p: Presentation, m: AcMove) -> Presentation:
    """Apply one move, replacing exactly one relator."""
    check_move(m, p.rank)
    kind, i, x = m
    rels = p.relators
    w = rels[i]
    if kind == INVERT:
        new = invert_word(w)
    elif kind == MULTIPLY:
        new = concat_reduce(w, rels[x])
    else:
        new = conjugate_word(w, x)
    return Presentation(p.rank, rels[:i] + (new,) + rels[i + 1 :])


@dataclass
class Trace:
    """Step-by-step record of a move sequence applied to a presentation."""

    start: Presentation
    steps: list[tuple[AcMove, Presentation]] = field(default_factory=list)
    truncated: bool = False
    truncated_reason: str | None = None

    @property
    def final(self) -> Presentation:
        return self.steps[-1][1] if self.steps else self.start

    def presentations(self):
        yield self.start
        for _, p in self.steps:
            yield p


def apply_sequence(p: Presentation, moves, max_total_length: int) -> Trace:
    """Apply moves one by one, recording every intermediate presentation.

    If any intermediate (including the start) has total relator length
    >= max_total_length, the trace is marked truncated at that point and
    no further moves are applied.
    """
    trace = Trace(start=p)
    length = total_length(p)
    if length >= max_total_length:
        trace.truncated = True
        trace.truncated_reason = (
            f"total relator length {length} >= {max_total_length} at step 0"
        )
        return trace
    current = p
    for step, m in enumerate(moves, start=1):
        current = apply_move(current, m)
        trace.steps.append((m, current))
        length = total_length(current)
        if length >= max_total_length:
            trace.truncated = True
            trace.truncated_reason = (
                f"total relator length {length} >= {max_total_length} at step {step}"
            )
            break
    return trace


def canonical_form(p: Presentation) -> Presentation:
    """C1/C2 normal form: canonical representative per relator, then sorted."""
    return Presentation(p.rank, canonical_relators(p.relators))


def canonical_relators(relators) -> tuple[Word, ...]:
    return tuple(sorted((canonical_rep(r) for r in relators), key=shortlex_key))
