"""Elementary Andrews-Curtis moves on tuples of free-group words.

Moves act on k-tuples ``(u_1, ..., u_k)`` (indices are 1-based):

* ``R(i, j, e)``: ``u_i <- u_i u_j^e``
* ``L(i, j, e)``: ``u_i <- u_j^e u_i``
* ``I(i)``:       ``u_i <- u_i^-1``
* ``C(i, c)``:    ``u_i <- c^-1 u_i c`` for a single letter ``c``

A conjugation by an arbitrary word is a product of single-letter
conjugations, see :func:`expand_conjugation`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import words
from .words import MalformedInput, Word, WordTuple, inv, mul

KINDS = ("R", "L", "I", "C")


@dataclass(frozen=True, order=True)
class Move:
    kind: str
    i: int
    j: int = 0
    sign: int = 1
    c: int = 0  # conjugating letter (signed generator index)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedInput(f"unknown move kind {self.kind!r}")
        if self.i < 1:
            raise MalformedInput(f"move index must be >= 1, got {self.i}")
        if self.kind in ("R", "L"):
            if self.j < 1 or self.j == self.i:
                raise MalformedInput(f"{self.kind} needs distinct indices, got {self.i},{self.j}")
            if self.sign not in (1, -1):
                raise MalformedInput(f"sign must be +1 or -1, got {self.sign}")
        if self.kind == "C" and self.c == 0:
            raise MalformedInput("C move needs a conjugating letter")

    def check(self, k: int, rank: int | None = None) -> None:
        top = max(self.i, self.j)
        if top > k:
            raise MalformedInput(f"move {self} has index {top} beyond tuple size {k}")
        if self.kind == "C" and rank is not None and abs(self.c) > rank:
            raise MalformedInput(f"move {self} conjugates by a letter beyond rank {rank}")

    def __str__(self):
        return format_move(self)


def R(i: int, j: int, sign: int = 1) -> Move:
    return Move("R", i, j, sign)


def L(i: int, j: int, sign: int = 1) -> Move:
    return Move("L", i, j, sign)


def I(i: int) -> Move:  # noqa: E743
    return Move("I", i)


def C(i: int, c: int) -> Move:
    return Move("C", i, c=c)


def invert_move(m: Move) -> Move:
    if m.kind in ("R", "L"):
        return Move(m.kind, m.i, m.j, -m.sign)
    if m.kind == "C":
        return Move("C", m.i, c=-m.c)
    return m


def apply_raw(t: tuple, m: Move) -> tuple:
    """Apply ``m`` to a tuple of raw reduced words (no validation)."""
    i = m.i - 1
    u = t[i]
    if m.kind == "R":
        v = t[m.j - 1]
        new = mul(u, v if m.sign > 0 else inv(v))
    elif m.kind == "L":
        v = t[m.j - 1]
        new = mul(v if m.sign > 0 else inv(v), u)
    elif m.kind == "I":
        new = inv(u)
    else:
        new = mul(mul((-m.c,), u), (m.c,))
    return t[:i] + (new,) + t[i + 1:]


def apply_move(t: WordTuple, m: Move) -> WordTuple:
    m.check(t.size, t.rank)
    return WordTuple.from_raw(apply_raw(t.raw, m), t.rank)


def apply_sequence(t: WordTuple, seq: Iterable[Move]) -> WordTuple:
    seq = list(seq)
    for m in seq:
        m.check(t.size, t.rank)
    raw = t.raw
    for m in seq:
        raw = apply_raw(raw, m)
    return WordTuple.from_raw(raw, t.rank)


def invert_sequence(seq: Sequence[Move]) -> list:
    return [invert_move(m) for m in reversed(seq)]


def all_moves(k: int, rank: int | None = None) -> list:
    """The finite move alphabet for k-tuples over a free group of ``rank``.

    The order is fixed (R, L, I, C; indices ascending; ``+`` before ``-``;
    letters ``a, A, b, B, ...``) and defines the lexicographic order used to
    break ties between equally short search paths.
    """
    rank = k if rank is None else rank
    out = []
    for kind in ("R", "L"):
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                if i != j:
                    out.append(Move(kind, i, j, 1))
                    out.append(Move(kind, i, j, -1))
    out.extend(I(i) for i in range(1, k + 1))
    for i in range(1, k + 1):
        for g in range(1, rank + 1):
            out.append(C(i, g))
            out.append(C(i, -g))
    return out


def expand_conjugation(i: int, w: Word | tuple) -> list:
    """Single-letter moves whose composite is ``u_i <- w^-1 u_i w``."""
    letters = w.letters if isinstance(w, Word) else tuple(w)
    return [C(i, c) for c in letters]


def swap_moves(i: int, j: int) -> list:
    """Moves exchanging entries i and j: (u, v) -> (uv, v) -> (uv, u^-1) -> (v, u^-1) -> (v, u)."""
    return [R(i, j, 1), R(j, i, -1), L(i, j, 1), I(j)]


# --- formal words -------------------------------------------------------------

def extract_words(seq: Sequence[Move], k: int, rank: int | None = None) -> tuple:
    """Run ``seq`` on indeterminates and return the resulting words.

    The alphabet has the constants ``a_1..a_rank`` first (indices
    ``1..rank``) and the indeterminates ``x_1..x_k`` after them (indices
    ``rank+1..rank+k``).  Substituting ``x_i -> u_i`` into the result
    reproduces :func:`apply_sequence` on ``(u_1, ..., u_k)``.
    """
    rank = k if rank is None else rank
    for m in seq:
        m.check(k, rank)
    t = tuple((rank + i,) for i in range(1, k + 1))
    for m in seq:
        t = apply_raw(t, m)
    return tuple(Word(w, rank + k) for w in t)


def identity_check(seq: Sequence[Move], k: int, rank: int | None = None) -> bool:
    """True iff ``seq`` is the identity of the full AC group over a free group.

    Decided by comparing the formal words letter by letter against
    ``(x_1, ..., x_k)``.
    """
    rank = k if rank is None else rank
    ws = extract_words(seq, k, rank)
    return all(w.letters == (rank + i + 1,) for i, w in enumerate(ws))


def substitute_words(formal: Sequence[Word], t: WordTuple) -> WordTuple:
    """Evaluate formal words (as from :func:`extract_words`) at the tuple ``t``."""
    k, rank = t.size, t.rank
    images = {rank + i + 1: t.entries[i].letters for i in range(k)}
    return WordTuple.from_raw([words.substitute(w.letters, images) for w in formal], rank)


# --- text format ----------------------------------------------------------------

def format_move(m: Move) -> str:
    if m.kind in ("R", "L"):
        return f"{m.kind} {m.i} {m.j} {'+' if m.sign > 0 else '-'}"
    if m.kind == "I":
        return f"I {m.i}"
    return f"C {m.i} {words.format_raw((m.c,))}"


def parse_move_line(line: str) -> list:
    """Parse one move line; ``C i <word>`` expands to one move per letter."""
    parts = line.split()
    if not parts:
        raise MalformedInput("empty move line")
    kind = parts[0]
    try:
        if kind in ("R", "L") and len(parts) == 4 and parts[3] in "+-" and len(parts[3]) == 1:
            return [Move(kind, int(parts[1]), int(parts[2]), 1 if parts[3] == "+" else -1)]
        if kind == "I" and len(parts) == 2:
            return [I(int(parts[1]))]
        if kind == "C" and len(parts) == 3:
            w = words.parse_raw(parts[2])
            if not w:
                return []
            return expand_conjugation(int(parts[1]), w)
    except ValueError as exc:
        if isinstance(exc, MalformedInput):
            raise
        raise MalformedInput(f"bad move line {line!r}: {exc}") from None
    raise MalformedInput(f"bad move line {line!r}")


def parse_moves(text: str) -> list:
    seq = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            seq.extend(parse_move_line(s))
        except MalformedInput as exc:
            raise MalformedInput(f"line {lineno}: {exc}") from None
    return seq


def format_moves(seq: Iterable[Move]) -> str:
    return "".join(format_move(m) + "\n" for m in seq)
