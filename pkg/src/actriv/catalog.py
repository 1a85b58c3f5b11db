"""Embedded catalog of balanced rank-2 problem instances.

The T-series instances are potential counterexamples known to present the
trivial group; ``known_length`` is the published length of the shortest
trivializing move sequence found for them.  AK3 is the classic
Akbulut-Kirby presentation, still unresolved.  T83 is kept as an
auxiliary record (no trivialization known); it is not part of the main
catalog and exists for presentation-similarity comparisons against T81.
"""

from __future__ import annotations

from dataclasses import dataclass

from .notation import parse_presentation
from .presentations import (
    MoveSequence,
    Presentation,
    conjugate_move,
    invert_move,
    multiply_move,
)


@dataclass(frozen=True)
class InstanceRecord:
    id: str
    presentation: Presentation
    known_length: int | None


_TABLE = [
    ("T1", "<a,b|a^2bAB,b^2aBA>", 6),
    ("T5", "<a,b|a^2b^2AB^2,b^2a^2BA^2>", 10),
    ("T11", "<a,b|a^3b^2A^2B^2,b^3a^2B^2A^2>", 14),
    ("T13", "<a,b|a^2bAbAB,b^2aBaBA>", 7),
    ("T29", "<a,b|a^3b^3A^2B^3,b^3a^3B^2A^3>", 21),
    ("T31", "<a,b|a^3bAbAB^2,b^3aBaBA^2>", 10),
    ("T34", "<a,b|a^2b^2aBA^2B,b^2a^2bAB^2A>", 10),
    ("T35", "<a,b|a^2b^2AbAB^2,b^2a^2BaBA^2>", 24),
    ("T39", "<a,b|a^2bAb^2AB^2,b^2aBa^2BA^2>", 10),
    ("T56", "<a,b|a^4b^3A^3B^3,b^4a^3B^3A^3>", 25),
    ("T61", "<a,b|a^3b^2AbA^2B^2,b^3a^2BaB^2A^2>", 14),
    ("T63", "<a,b|a^3b^2AB^3Ab,b^3a^2BA^3Ba>", 24),
    ("T66", "<a,b|a^3bA^2b^2AB^2,b^3aB^2a^2BA^2>", 14),
    ("T67", "<a,b|a^3bAb^2AB^3,b^3aBa^2BA^3>", 22),
    ("T76", "<a,b|a^2babABAB,b^2abaBABA>", 10),
    ("T81", "<a,b|a^2bAbABaB,b^2aBaBAbA>", 19),
    ("T82", "<a,b|a^2bABabAB,b^2aBAbaBA>", 10),
    ("T84", "<a,b|a^2BabAbAB,b^2AbaBaBA>", 15),
    ("T85", "<a,b|ababA^2BaB,babaB^2AbA>", 24),
    ("AK3", "<a,b|a^3B^4,abaBAB>", None),
]

# Unsolved; first relator differs from T81's in exactly two letter signs.
_AUXILIARY = [
    ("T83", "<a,b|a^2bABaBaB,b^2aBAbAbA>", None),
]


def catalog() -> list[InstanceRecord]:
    """The 19 solved T-instances plus AK3."""
    return [
        InstanceRecord(name, parse_presentation(text), length)
        for name, text, length in _TABLE
    ]


def auxiliary_catalog() -> list[InstanceRecord]:
    return [
        InstanceRecord(name, parse_presentation(text), length)
        for name, text, length in _AUXILIARY
    ]


def get_instance(instance_id: str) -> InstanceRecord:
    for record in catalog() + auxiliary_catalog():
        if record.id == instance_id:
            return record
    raise KeyError(f"unknown instance {instance_id!r}")


def known_trivializations() -> dict[str, MoveSequence]:
    """Published trivializing sequences (relator indices are positional)."""
    t1 = (
        conjugate_move(1, 1),   # (b^2aBA)^A
        multiply_move(1, 0),    # ab^2aBA^2 *= a^2bAB
        conjugate_move(0, -2),  # (a^2bAB)^b
        conjugate_move(1, 1),   # (ab)^A
        invert_move(1),         # (a^2bA)^-1
        multiply_move(0, 1),    # Ba^2bA *= aBA^2
    )
    t13 = (
        conjugate_move(1, 1),   # (b^2aBaBA)^A
        multiply_move(1, 0),    # ab^2aBaBA^2 *= a^2bAbAB
        conjugate_move(1, 1),   # (ab)^A
        invert_move(1),         # (a^2bA)^-1
        conjugate_move(1, -2),  # (aBA^2)^b
        conjugate_move(0, -2),  # (a^2bAbAB)^b
        multiply_move(1, 0),    # BaBA^2b *= Ba^2bAbA
    )
    return {"T1": t1, "T13": t13}
