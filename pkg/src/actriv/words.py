"""Free-group words over a finite generating set.

A word is a tuple of nonzero ints: letter ``+k`` is the k-th generator
(1-based), ``-k`` its inverse.  All public functions keep words freely
reduced, i.e. with no adjacent ``x, -x`` pair.  The empty tuple is the
identity.

The total order used everywhere is shortlex: shorter words first, equal
lengths compared letter-wise with generator index ascending and the
positive letter before its inverse (a < A < b < B < ...).
"""

from __future__ import annotations

Letter = int
Word = tuple[int, ...]

EMPTY: Word = ()


def make_letter(gen_index: int, sign: int) -> Letter:
    """Letter for 0-based generator index and sign +1/-1."""
    if gen_index < 0:
        raise ValueError(f"generator index must be >= 0, got {gen_index}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return sign * (gen_index + 1)


def gen_index(letter: Letter) -> int:
    """0-based generator index of a letter."""
    return abs(letter) - 1


def letter_key(letter: Letter) -> int:
    # a -> 0, A -> 1, b -> 2, B -> 3, ...
    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


def free_reduce(raw) -> Word:
    """Freely reduce a letter sequence by cancelling adjacent inverse pairs.

    Total and idempotent; the result is independent of cancellation order.
    """
    out: list[int] = []
    for x in raw:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(w: Word) -> Word:
    """Group inverse: reversed order, every sign flipped."""
    return tuple(-x for x in reversed(w))


def concat_reduce(u: Word, v: Word) -> Word:
    """Freely reduced product u*v of two already-reduced words.

    Only the junction can cancel, so this runs in O(cancelled) plus one
    tuple concatenation.
    """
    k = 0
    lu, lv = len(u), len(v)
    m = lu if lu < lv else lv
    while k < m and u[lu - 1 - k] == -v[k]:
        k += 1
    if k == 0:
        return u + v
    return u[: lu - k] + v[k:]


def conjugate_word(w: Word, c: Letter) -> Word:
    """Freely reduced c * w * c^-1 for a single letter c and reduced w."""
    if w and w[0] == -c:
        u = w[1:]
    else:
        u = (c,) + w
    if u and u[-1] == c:
        return u[:-1]
    return u + (-c,)


def shortlex_key(w: Word) -> tuple:
    """Sort key realizing the shortlex order."""
    return (len(w), tuple(letter_key(x) for x in w))


def shortlex_cmp(u: Word, v: Word) -> int:
    """-1, 0 or +1 as u sorts before, equal to, or after v in shortlex."""
    ku, kv = shortlex_key(u), shortlex_key(v)
    if ku < kv:
        return -1
    if ku > kv:
        return 1
    return 0


def is_cyclically_reduced(w: Word) -> bool:
    return len(w) < 2 or w[0] != -w[-1]


def canonical_rep(w: Word) -> Word:
    """Shortlex-least freely reduced cyclic rotation of w or of its inverse.

    Rotations that are not freely reduced are excluded rather than reduced,
    so the result always has the same length as w.  For a word that is not
    cyclically reduced, every nontrivial rotation introduces a cancelling
    wrap-around pair, leaving only w and its inverse as candidates.
    """
    n = len(w)
    if n == 0:
        return w
    iw = invert_word(w)
    if not is_cyclically_reduced(w):
        return w if shortlex_cmp(w, iw) <= 0 else iw
    best = None
    best_key = None
    for cand in (w, iw):
        doubled = cand + cand
        for i in range(n):
            rot = doubled[i : i + n]
            key = tuple(letter_key(x) for x in rot)
            if best_key is None or key < best_key:
                best_key = key
                best = rot
    return best
