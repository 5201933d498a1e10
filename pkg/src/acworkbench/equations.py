"""Equations over a free group G and their non-solution witnesses.

An equation in variables ``x_1..x_m`` over ``G = F(a_1..a_r)`` is a reduced
word of the free group of rank ``r + m``: letters ``1..r`` are constants and
``r+1..r+m`` are the variables.  In a free group of rank >= 2 an equation
that every assignment satisfies is already the empty word, and for any other
equation high powers of well-chosen elements give a non-solution.
:func:`find_nonsolution` builds such an assignment and checks it by
reduction.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Sequence

from . import words
from .moves import apply_sequence, extract_words, identity_check
from .words import ALPHABET, MalformedInput, Word, WordTuple, commute, conj, inv, mul, power

log = logging.getLogger(__name__)

DEFAULT_MAX_EXPONENT = 2**10


class ConstantEquation(ValueError):
    """The equation has no variables; it is a fixed element of G."""


class PreconditionError(ValueError):
    pass


class WitnessCeilingReached(RuntimeError):
    """No witness below the exponent ceiling.  For a free G this is a bug."""


@dataclass(frozen=True)
class Equation:
    r: int
    m: int
    body: Word
    normalized: bool = False

    def __post_init__(self):
        if self.r < 1 or self.m < 0:
            raise MalformedInput(f"bad equation shape r={self.r} m={self.m}")
        if self.body.rank != self.r + self.m:
            raise MalformedInput(f"body rank {self.body.rank} != r + m = {self.r + self.m}")

    @classmethod
    def from_raw(cls, r: int, m: int, letters) -> "Equation":
        return cls(r, m, words.reduce(letters, r + m))

    def is_variable(self, x: int) -> bool:
        return abs(x) > self.r

    def syllables(self) -> list:
        """``[(variable, exponent, constant_after), ...]`` of a normalized body."""
        if not self.normalized:
            raise PreconditionError("syllables are defined for normalized equations")
        out = []
        body = self.body.letters
        pos = 0
        while pos < len(body):
            x = body[pos]
            var = abs(x) - self.r
            exp = 0
            while pos < len(body) and abs(body[pos]) == abs(x):
                exp += 1 if body[pos] > 0 else -1
                pos += 1
            start = pos
            while pos < len(body) and not self.is_variable(body[pos]):
                pos += 1
            out.append((var, exp, body[start:pos]))
        return out

    def __str__(self):
        return format_equation(self)


@dataclass(frozen=True)
class Syllable:
    prefix: Word       # over the constants only
    variable: int      # 1-based
    exponent: int


@dataclass(frozen=True)
class ConjugatePowerForm:
    r: int
    m: int
    syllables: tuple

    def reassemble(self) -> Word:
        out = ()
        for s in self.syllables:
            p = s.prefix.letters
            x = power((self.r + s.variable,), s.exponent)
            out = mul(out, mul(mul(p, x), inv(p)))
        return Word(out, self.r + self.m)


def normalize(e: Equation) -> Equation:
    """Conjugate the body so it starts with a variable.

    Same-variable neighbours are already merged by free reduction, so the
    only work is moving the leading constant to the end.
    """
    body = e.body.letters
    first = next((p for p, x in enumerate(body) if e.is_variable(x)), None)
    if first is None:
        if body:
            raise ConstantEquation(
                f"constant-false equation {format_equation(e)!r}: no tuple is a solution")
        return Equation(e.r, e.m, e.body, True)
    lead = body[:first]
    return Equation(e.r, e.m, Word(conj(body, lead), e.body.rank), True)


def evaluate(e: Equation, g: Sequence) -> Word:
    """Substitute ``x_i -> g_i`` (words over the constants) and reduce."""
    if len(g) != e.m:
        raise ValueError(f"expected {e.m} values, got {len(g)}")
    images = {}
    for i, gi in enumerate(g):
        letters = gi.letters if isinstance(gi, Word) else tuple(gi)
        if any(abs(x) > e.r for x in letters):
            raise MalformedInput(f"value for x{i + 1} uses letters outside the constants")
        images[e.r + i + 1] = letters
    return Word(words.substitute(e.body.letters, images), e.r)


def is_trivial(e: Equation) -> bool:
    return e.body.is_identity()


def conjugate_power_form(e: Equation) -> ConjugatePowerForm:
    """Rewrite as a product of conjugates of variable powers.

    Requires the constants to multiply to 1, i.e. the trivial assignment to
    be a solution.
    """
    n = e if e.normalized else normalize(e)
    syl = n.syllables()
    prefix = ()
    out = []
    for var, exp, after in syl:
        out.append(Syllable(Word(prefix, e.r), var, exp))
        prefix = mul(prefix, after)
    if prefix:
        raise PreconditionError(
            f"constants multiply to {words.format_raw(prefix)}, not 1")
    return ConjugatePowerForm(e.r, e.m, tuple(out))


def _candidates(r: int, max_len: int = 3):
    for n in range(1, max_len + 1):
        yield from words.reduced_words(r, n)


def _consecutive_noncommuting(form: ConjugatePowerForm, g: Sequence[tuple]) -> bool:
    parts = []
    for s in form.syllables:
        p = s.prefix.letters
        parts.append(conj(power(g[s.variable - 1], s.exponent), inv(p)))
    return all(not commute(a, b) for a, b in zip(parts, parts[1:]))


def find_nonsolution(e: Equation, exponent_start: int = 2,
                     max_exponent: int = DEFAULT_MAX_EXPONENT) -> tuple | None:
    """Return values ``g_1..g_m`` that do not solve ``e``, or None if ``e`` is trivial.

    The trivial assignment is tried first.  When it solves the equation the
    body is a product of conjugated variable powers; bases are picked (short
    words first) so that neighbouring factors do not commute, and a common
    exponent is doubled from ``exponent_start`` until the product reduces to
    a nonempty word.
    """
    if is_trivial(e):
        return None
    if e.m == 0:
        raise ConstantEquation("equation has no variables")
    if e.r < 2:
        raise PreconditionError("constant group must be free of rank >= 2")
    if exponent_start < 1:
        raise ValueError("exponent_start must be >= 1")
    identity = tuple(Word((), e.r) for _ in range(e.m))
    if not evaluate(e, identity).is_identity():
        return identity
    form = conjugate_power_form(e)
    used = sorted({s.variable for s in form.syllables})
    cands = list(_candidates(e.r))
    tried = 0
    for combo in itertools.product(cands, repeat=len(used)):
        g = [()] * e.m
        for var, w in zip(used, combo):
            g[var - 1] = w
        if not _consecutive_noncommuting(form, g):
            continue
        tried += 1
        r = exponent_start
        while r <= max_exponent:
            vals = tuple(Word(power(w, r), e.r) for w in g)
            if not evaluate(e, vals).is_identity():
                return vals
            r *= 2
    raise WitnessCeilingReached(
        f"no witness for {format_equation(e)!r} with exponents <= {max_exponent} "
        f"over {tried} base assignments")


def faithfulness_witness(seq, u: WordTuple) -> tuple | None:
    """Conjugators ``h`` with ``seq`` moving ``(u_1^h_1, ..., u_k^h_k)``.

    Returns None exactly when ``seq`` is the identity transformation.
    """
    k, r = u.size, u.rank
    if any(w.is_identity() for w in u.entries):
        raise PreconditionError("tuple entries must all be nontrivial")
    seq = list(seq)
    if identity_check(seq, k, r):
        return None
    ones = tuple(Word((), r) for _ in range(k))
    if apply_sequence(u, seq) != u:
        return ones
    formal = extract_words(seq, k, r)
    conjugated = {r + j + 1: conj(u.entries[j].letters, (r + j + 1,)) for j in range(k)}
    for i in range(k):
        lhs = words.substitute(formal[i].letters, conjugated)
        body = mul(lhs, inv(conjugated[r + i + 1]))
        if not body:
            continue
        h = find_nonsolution(Equation(r, k, Word(body, r + k)))
        moved = WordTuple(tuple(words.conjugate(u.entries[j], h[j]) for j in range(k)), r)
        if apply_sequence(moved, seq) == moved:
            raise AssertionError("witness failed re-verification")
        return h
    raise AssertionError("sequence is not the identity but fixes every conjugate of u")


# --- text format -----------------------------------------------------------------

def parse_equation(text: str, r: int | None = None, m: int | None = None) -> Equation:
    """Parse e.g. ``"x1 a x1' A"``: constants are letters, ``xN`` variables, ``'`` inverts."""
    tokens = []  # (kind, index, sign)
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "x" and pos + 1 < n and text[pos + 1].isdigit():
            end = pos + 1
            while end < n and text[end].isdigit():
                end += 1
            idx = int(text[pos + 1:end])
            if idx < 1:
                raise MalformedInput(f"variable index must be >= 1 at position {pos}")
            sign = 1
            if end < n and text[end] == "'":
                sign = -1
                end += 1
            tokens.append(("x", idx, sign))
            pos = end
            continue
        if ch.isascii() and ch.lower() in ALPHABET:
            tokens.append(("a", ALPHABET.index(ch.lower()) + 1, 1 if ch.islower() else -1))
            pos += 1
            continue
        raise MalformedInput(f"invalid character {ch!r} at position {pos}")
    top_r = max([1] + [i for kind, i, _ in tokens if kind == "a"])
    top_m = max([0] + [i for kind, i, _ in tokens if kind == "x"])
    r = top_r if r is None else r
    m = top_m if m is None else m
    if top_r > r:
        raise MalformedInput(f"constant beyond rank {r}")
    if top_m > m:
        raise MalformedInput(f"variable x{top_m} beyond m={m}")
    letters = [(i if kind == "a" else r + i) * s for kind, i, s in tokens]
    return Equation.from_raw(r, m, letters)


def format_equation(e: Equation) -> str:
    out = []
    for x in e.body.letters:
        if abs(x) > e.r:
            out.append(f"x{abs(x) - e.r}" + ("" if x > 0 else "'"))
        else:
            out.append(words.format_raw((x,)))
    return " ".join(out)
