"""Text syntax for presentations, moves and move sequences.

Presentations are written ``<a,b|a^2bAB,b^2aBA>``: lowercase generators,
uppercase inverses, optional integer exponents, ``1`` for the empty
relator.  Generators may equally be declared in the ``x0,x1`` style
(``X0`` is then the inverse of ``x0``).  Formatting always uses the
``a,b,...`` alphabet, so ``parse(format(p)) == p``.

Moves are written ``inv:i``, ``mul:i:j`` and ``conj:i:c`` where ``c`` is
the conjugator letter (``conj:1:a`` maps relator 1 to ``a r A``).  A move
sequence is whitespace-separated move codes; the empty sequence is ``-``.
"""

from __future__ import annotations

from .presentations import (
    CONJUGATE,
    INVERT,
    MULTIPLY,
    AcMove,
    MoveSequence,
    Presentation,
    check_move,
    make_presentation,
)
from .words import Word, shortlex_key

_ASCII_GENS = "abcdefghijklmnopqrstuvwxyz"


class NotationError(ValueError):
    pass


def generator_name(index: int, rank: int) -> str:
    if rank <= len(_ASCII_GENS):
        return _ASCII_GENS[index]
    return f"x{index}"


def format_letter(letter: int, rank: int) -> str:
    name = generator_name(abs(letter) - 1, rank)
    return name if letter > 0 else name[0].upper() + name[1:]


def format_word(w: Word, rank: int) -> str:
    """Word with runs collapsed to exponents, e.g. (1,1,2,-1,-2) -> 'a^2bAB'."""
    if not w:
        return "1"
    parts = []
    run_letter, run_len = w[0], 1
    for x in w[1:]:
        if x == run_letter:
            run_len += 1
        else:
            parts.append((run_letter, run_len))
            run_letter, run_len = x, 1
    parts.append((run_letter, run_len))
    out = []
    for letter, count in parts:
        text = format_letter(letter, rank)
        out.append(text if count == 1 else f"{text}^{count}")
    return "".join(out)


def format_presentation(p: Presentation, sorted_relators: bool = False) -> str:
    """Textual form; with sorted_relators the relators are shown in shortlex
    (C1) order without touching the presentation itself."""
    gens = ",".join(generator_name(i, p.rank) for i in range(p.rank))
    relators = p.relators
    if sorted_relators:
        relators = tuple(sorted(relators, key=shortlex_key))
    rels = ",".join(format_word(r, p.rank) for r in relators)
    return f"<{gens}|{rels}>"


def _token_map(names: list[str]) -> dict[str, int]:
    tokens: dict[str, int] = {}
    for idx, name in enumerate(names):
        inverse = name[0].upper() + name[1:]
        if name in tokens or inverse in tokens or name == inverse:
            raise NotationError(f"ambiguous generator name {name!r}")
        tokens[name] = idx + 1
        tokens[inverse] = -(idx + 1)
    return tokens


def _parse_word(text: str, tokens: dict[str, int], max_len: int) -> list[int]:
    text = text.strip()
    if text == "1" or text == "":
        return []
    letters: list[int] = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        match = None
        for width in range(min(max_len, n - pos), 0, -1):
            candidate = text[pos : pos + width]
            if candidate in tokens:
                match = candidate
                break
        if match is None:
            raise NotationError(f"unknown generator symbol at {text[pos:]!r}")
        letter = tokens[match]
        pos += len(match)
        count = 1
        if pos < n and text[pos] == "^":
            pos += 1
            start = pos
            if pos < n and text[pos] == "-":
                pos += 1
            while pos < n and text[pos].isdigit():
                pos += 1
            if pos == start or text[start:pos] == "-":
                raise NotationError(f"malformed exponent in {text!r}")
            count = int(text[start:pos])
        if count < 0:
            letter, count = -letter, -count
        letters.extend([letter] * count)
    return letters


def parse_presentation(text: str) -> Presentation:
    """Parse `< g1,...,gn | w1,...,wn >` into a freely reduced Presentation."""
    body = text.strip()
    if body.startswith("<") and body.endswith(">"):
        body = body[1:-1]
    if "|" not in body:
        raise NotationError(f"missing '|' in presentation {text!r}")
    gen_part, rel_part = body.split("|", 1)
    names = [g.strip() for g in gen_part.split(",") if g.strip()]
    if not names:
        raise NotationError(f"no generators declared in {text!r}")
    tokens = _token_map(names)
    max_len = max(len(t) for t in tokens)
    relators = [
        _parse_word(chunk, tokens, max_len) for chunk in rel_part.split(",")
    ]
    try:
        return make_presentation(len(names), relators)
    except ValueError as exc:
        raise NotationError(str(exc)) from exc


def _parse_generator_letter(text: str, rank: int) -> int:
    if rank <= len(_ASCII_GENS) and len(text) == 1:
        low = text.lower()
        idx = _ASCII_GENS.find(low)
        if idx < 0 or idx >= rank:
            raise NotationError(f"unknown generator symbol {text!r}")
        return (idx + 1) if text.islower() else -(idx + 1)
    if text[:1] in ("x", "X") and text[1:].isdigit():
        idx = int(text[1:])
        if idx >= rank:
            raise NotationError(f"generator index {idx} out of range")
        return (idx + 1) if text[0] == "x" else -(idx + 1)
    raise NotationError(f"unknown generator symbol {text!r}")


def format_move(m: AcMove, rank: int) -> str:
    kind, i, x = m
    if kind == INVERT:
        return f"inv:{i}"
    if kind == MULTIPLY:
        return f"mul:{i}:{x}"
    return f"conj:{i}:{format_letter(x, rank)}"


def parse_move(code: str, rank: int) -> AcMove:
    parts = code.strip().split(":")
    try:
        if parts[0] == "inv" and len(parts) == 2:
            move = (INVERT, int(parts[1]), 0)
        elif parts[0] == "mul" and len(parts) == 3:
            move = (MULTIPLY, int(parts[1]), int(parts[2]))
        elif parts[0] == "conj" and len(parts) == 3:
            move = (CONJUGATE, int(parts[1]), _parse_generator_letter(parts[2], rank))
        else:
            raise NotationError(f"unknown move code {code!r}")
    except ValueError as exc:
        raise NotationError(f"bad move code {code!r}: {exc}") from exc
    try:
        check_move(move, rank)
    except ValueError as exc:
        raise NotationError(f"bad move code {code!r}: {exc}") from exc
    return move


def format_sequence(moves, rank: int) -> str:
    codes = [format_move(m, rank) for m in moves]
    return " ".join(codes) if codes else "-"


def parse_sequence(text: str, rank: int) -> MoveSequence:
    text = text.strip()
    if text == "-" or not text:
        return ()
    return tuple(parse_move(code, rank) for code in text.split())
