"""Freely reduced words over a ranked alphabet.

A letter is a nonzero integer: ``+i`` is generator ``i`` and ``-i`` its
inverse (generators are numbered from 1).  Raw words are plain tuples of
letters; :class:`Word` wraps one together with the rank of the ambient free
group.  The raw tuple helpers (``mul``, ``inv``, ...) are what the search
code calls in its hot loops, so they assume already-reduced inputs.

Text format: the i-th lowercase Latin letter is generator i, uppercase is its
inverse.  ``"1"`` is accepted as an alias for the empty word in files.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

ALPHABET = "abcdefghijklmnopqrstuvwxyz"
MAX_TEXT_RANK = len(ALPHABET)


class MalformedInput(ValueError):
    """Raised for unparsable text or letters outside the declared rank."""


def letter(index: int, sign: int = 1) -> int:
    if index < 1:
        raise MalformedInput(f"generator index must be >= 1, got {index}")
    if sign not in (1, -1):
        raise MalformedInput(f"sign must be +1 or -1, got {sign}")
    return index * sign


# --- raw tuple arithmetic --------------------------------------------------

def free_reduce(letters: Iterable[int]) -> tuple:
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def mul(u: tuple, v: tuple) -> tuple:
    """Product of two reduced raw words; cancellation only at the seam."""
    n = min(len(u), len(v))
    i = 0
    lu = len(u)
    while i < n and u[lu - 1 - i] == -v[i]:
        i += 1
    if i == 0:
        return u + v
    return u[: lu - i] + v[i:]


def inv(u: tuple) -> tuple:
    return tuple(-x for x in reversed(u))


def conj(u: tuple, w: tuple) -> tuple:
    """``u^w = w^-1 u w``."""
    return mul(mul(inv(w), u), w)


def power(u: tuple, e: int) -> tuple:
    if e < 0:
        u, e = inv(u), -e
    out = ()
    base = u
    # square-and-multiply keeps the intermediate reductions short
    while e:
        if e & 1:
            out = mul(out, base)
        base = mul(base, base)
        e >>= 1
    return out


def cyclic_core(u: tuple) -> tuple[tuple, tuple]:
    """Split a reduced word as ``c^-1 core c`` with ``core`` cyclically reduced."""
    i, j = 0, len(u) - 1
    while i < j and u[i] == -u[j]:
        i += 1
        j -= 1
    core = u[i : j + 1]
    conjugator = u[j + 1 :]
    return core, conjugator


def primitive_root(u: tuple) -> tuple:
    """Shortest ``r`` with ``u = r^e``; ``u`` must be reduced and nonempty."""
    core, c = cyclic_core(u)
    n = len(core)
    for d in range(1, n + 1):
        if n % d == 0 and core[:d] * (n // d) == core:
            return conj(core[:d], c)
    raise AssertionError("unreachable")


def commute(u: tuple, v: tuple) -> bool:
    """Two elements of a free group commute iff they are powers of a common root."""
    if not u or not v:
        return True
    ru = primitive_root(u)
    rv = primitive_root(v)
    return ru == rv or ru == inv(rv)


def substitute(word: tuple, images: dict) -> tuple:
    """Apply the endomorphism sending generator ``i`` to ``images[i]``.

    Generators missing from ``images`` are fixed.
    """
    out = ()
    for x in word:
        img = images.get(abs(x))
        if img is None:
            piece = (x,)
        else:
            piece = img if x > 0 else inv(img)
        out = mul(out, piece)
    return out


def reduced_words(rank: int, length: int) -> Iterable[tuple]:
    """All reduced words of the given length, shortlex in the order a, A, b, B, ..."""
    letters = [s * g for g in range(1, rank + 1) for s in (1, -1)]

    def rec(prefix):
        if len(prefix) == length:
            yield prefix
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            yield from rec(prefix + (x,))

    return rec(())


# --- text format ------------------------------------------------------------

def parse_raw(text: str, rank: int | None = None, allow_alias: bool = False) -> tuple:
    text = text.strip()
    if allow_alias and text == "1":
        return ()
    letters = []
    for pos, ch in enumerate(text):
        lo = ch.lower()
        if not ch.isascii() or lo not in ALPHABET:
            raise MalformedInput(f"invalid character {ch!r} at position {pos}")
        idx = ALPHABET.index(lo) + 1
        if rank is not None and idx > rank:
            raise MalformedInput(
                f"letter {ch!r} at position {pos} exceeds rank {rank}")
        letters.append(idx if ch.islower() else -idx)
    return free_reduce(letters)


def format_raw(u: Sequence[int]) -> str:
    chars = []
    for x in u:
        if abs(x) > MAX_TEXT_RANK:
            raise MalformedInput(f"generator {abs(x)} has no single-letter name")
        c = ALPHABET[abs(x) - 1]
        chars.append(c if x > 0 else c.upper())
    return "".join(chars)


# --- value types --------------------------------------------------------------

@dataclass(frozen=True)
class Word:
    """An immutable freely reduced word in the free group of the given rank."""

    letters: tuple
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise MalformedInput(f"rank must be >= 1, got {self.rank}")
        for x in self.letters:
            if x == 0 or abs(x) > self.rank:
                raise MalformedInput(f"letter {x} outside rank {self.rank}")
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise MalformedInput("letters are not freely reduced; use reduce()")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_raw(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, e: int) -> "Word":
        return Word(power(self.letters, e), self.rank)

    def is_identity(self) -> bool:
        return not self.letters


def reduce(raw: Iterable[int], rank: int) -> Word:
    raw = list(raw)
    for x in raw:
        if x == 0 or abs(x) > rank:
            raise MalformedInput(f"letter {x} outside rank {rank}")
    return Word(free_reduce(raw), rank)


def _same_rank(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise MalformedInput(f"rank mismatch: {u.rank} vs {v.rank}")


def multiply(u: Word, v: Word) -> Word:
    _same_rank(u, v)
    return Word(mul(u.letters, v.letters), u.rank)


def invert(u: Word) -> Word:
    return Word(inv(u.letters), u.rank)


def conjugate(u: Word, w: Word) -> Word:
    """Return ``u^w = w^-1 u w``."""
    _same_rank(u, w)
    return Word(conj(u.letters, w.letters), u.rank)


def cyclic_reduce(u: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``u = conjugator^-1 core conjugator``."""
    core, c = cyclic_core(u.letters)
    return Word(core, u.rank), Word(c, u.rank)


def parse_word(text: str, rank: int, allow_alias: bool = False) -> Word:
    return Word(parse_raw(text, rank, allow_alias), rank)


def format_word(u: Word) -> str:
    return format_raw(u.letters)


@dataclass(frozen=True)
class WordTuple:
    """A point of ``G^k``: k words over one shared rank, k >= 2."""

    entries: tuple
    rank: int

    def __post_init__(self):
        if len(self.entries) < 2:
            raise MalformedInput(f"tuples need k >= 2 entries, got {len(self.entries)}")
        for w in self.entries:
            if not isinstance(w, Word):
                raise TypeError(f"entries must be Word, got {type(w).__name__}")
            if w.rank != self.rank:
                raise MalformedInput(f"entry rank {w.rank} differs from tuple rank {self.rank}")

    @classmethod
    def from_raw(cls, raw: Sequence[tuple], rank: int) -> "WordTuple":
        return cls(tuple(Word(tuple(w), rank) for w in raw), rank)

    @classmethod
    def from_strings(cls, words: Sequence[str], rank: int | None = None) -> "WordTuple":
        if rank is None:
            rank = max([len(words)] + [ALPHABET.index(c.lower()) + 1
                                       for w in words for c in w if c.lower() in ALPHABET])
        return cls(tuple(parse_word(w, rank) for w in words), rank)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def raw(self) -> tuple:
        return tuple(w.letters for w in self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return "(" + ", ".join(str(w) for w in self.entries) + ")"


def total_length(t: WordTuple) -> int:
    return sum(len(w) for w in t.entries)


def generator_tuple(k: int, rank: int | None = None) -> WordTuple:
    rank = k if rank is None else rank
    return WordTuple.from_raw([(i,) for i in range(1, k + 1)], rank)


# --- tuple files ----------------------------------------------------------------

def _content_lines(text: str):
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("#"):
            continue
        yield line


def parse_tuple_file(text: str) -> WordTuple:
    """Parse ``"rank k"`` followed by k word lines; ``#`` lines are comments.

    Blank lines after the header are words (the empty word) so that the
    identity can be written either as an empty line or as ``1``.
    """
    lines = list(_content_lines(text))
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        raise MalformedInput("empty tuple file")
    header = lines[0].split()
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise MalformedInput(f"expected header 'rank k', got {lines[0]!r}")
    rank, k = int(header[0]), int(header[1])
    body = lines[1:]
    while len(body) > k and not body[-1].strip():
        body.pop()
    if len(body) != k:
        raise MalformedInput(f"expected {k} word lines, got {len(body)}")
    return WordTuple(tuple(parse_word(line, rank, allow_alias=True) for line in body), rank)


def format_tuple_file(t: WordTuple) -> str:
    return "\n".join([f"{t.rank} {t.size}"] + [str(w) for w in t.entries]) + "\n"


def parse_tuple_inline(text: str, rank: int) -> WordTuple:
    """Parse the ``(u, v, ...)`` form used in certificate comments."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise MalformedInput(f"expected '(u, v, ...)', got {text!r}")
    parts = s[1:-1].split(",")
    return WordTuple(tuple(parse_word(p, rank, allow_alias=True) for p in parts), rank)
