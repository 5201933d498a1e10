"""Deterministic Schreier-Sims for permutation groups on ``range(n)``.

Permutations are tuples of images.  ``mult(p, q)`` applies ``p`` first, then
``q`` (images compose left to right), matching the order in which moves are
applied to tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


def identity(n: int) -> tuple:
    return tuple(range(n))


def mult(p: tuple, q: tuple) -> tuple:
    """``p`` then ``q``."""
    return tuple(map(q.__getitem__, p))


def inverse(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_identity(p: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(p))


def check_perm(p: Sequence[int]) -> None:
    if sorted(p) != list(range(len(p))):
        raise ValueError("not a permutation")


@dataclass
class _Level:
    point: int
    gens: list                                   # strong generators fixing earlier base points
    transversal: dict = field(default_factory=dict)   # orbit point -> perm carrying base point there

    def rebuild(self, n: int) -> None:
        t = {self.point: identity(n)}
        queue = [self.point]
        for x in queue:
            ux = t[x]
            for g in self.gens:
                y = g[x]
                if y not in t:
                    t[y] = mult(ux, g)
                    queue.append(y)
        self.transversal = t

    def extend(self, g: tuple) -> None:
        """Grow the orbit after appending generator ``g``."""
        t = self.transversal
        queue = list(t)
        seen = set(queue)
        for x in queue:
            ux = t[x]
            for h in self.gens:
                y = h[x]
                if y not in t:
                    t[y] = mult(ux, h)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)


class StabilizerChain:
    """Base and strong generating set of the group generated by ``gens``.

    ``base_prefix`` fixes the first base points (redundant points are kept
    as levels with trivial orbits) so that pointwise stabilizers of that
    prefix can be read off the chain.  Further base points are the smallest
    points moved by the element that needs them.
    """

    def __init__(self, n: int, gens: Iterable[Sequence[int]], base_prefix: Sequence[int] = ()):
        self.n = n
        self.levels: list[_Level] = []
        self.gens = []
        for g in gens:
            g = tuple(g)
            if len(g) != n:
                raise ValueError(f"generator has degree {len(g)}, expected {n}")
            if not is_identity(g) and g not in self.gens:
                self.gens.append(g)
        for b in base_prefix:
            self.levels.append(_Level(b, []))
        for lvl in self.levels:
            lvl.rebuild(n)
        self._build()

    # --- construction ---

    def _sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        """Strip ``g`` through levels ``start..``; returns (residue, level reached)."""
        for depth in range(start, len(self.levels)):
            lvl = self.levels[depth]
            y = g[lvl.point]
            u = lvl.transversal.get(y)
            if u is None:
                return g, depth
            if y != lvl.point:
                g = mult(g, inverse(u))
        return g, len(self.levels)

    def _build(self) -> None:
        for g in self.gens:
            h, depth = self._sift(g)
            if not is_identity(h):
                self._add_gen(h, 0, depth)
        # Schreier generators, deepest level first.  Adding a strong generator
        # changes levels lowest..depth only, so resume from depth.
        d = len(self.levels) - 1
        while d >= 0:
            lvl = self.levels[d]
            added = False
            for x, ux in list(lvl.transversal.items()):
                for s in list(lvl.gens):
                    y = s[x]
                    uy = lvl.transversal[y]
                    sg = mult(mult(ux, s), inverse(uy))
                    if is_identity(sg):
                        continue
                    h, depth = self._sift(sg, d + 1)
                    if not is_identity(h):
                        self._add_gen(h, d + 1, depth)
                        added = depth
                        break
                if added is not False:
                    break
            if added is not False:
                d = min(added, len(self.levels) - 1)
            else:
                d -= 1

    def _add_gen(self, g: tuple, lowest: int, depth: int) -> None:
        """Add ``g`` to levels ``lowest..depth`` (it fixes earlier base points)."""
        if depth == len(self.levels):
            moved = next(i for i, x in enumerate(g) if x != i)
            self.levels.append(_Level(moved, []))
            self.levels[-1].rebuild(self.n)
        for d in range(lowest, depth + 1):
            lvl = self.levels[d]
            lvl.gens.append(g)
            lvl.extend(g)

    # --- queries ---

    @property
    def base(self) -> list:
        return [lvl.point for lvl in self.levels]

    @property
    def strong_generators(self) -> list:
        return list(self.levels[0].gens) if self.levels else []

    def orbit_sizes(self) -> list:
        return [len(lvl.transversal) for lvl in self.levels]

    def order(self) -> int:
        out = 1
        for lvl in self.levels:
            out *= len(lvl.transversal)
        return out

    def __contains__(self, g) -> bool:
        g = tuple(g)
        if len(g) != self.n:
            return False
        h, _ = self._sift(g)
        return is_identity(h)

    def stabilizer_generators(self, depth: int) -> list:
        """Strong generators of the pointwise stabilizer of the first ``depth`` base points."""
        if depth >= len(self.levels):
            return []
        return list(self.levels[depth].gens)

    def stabilizer_order(self, depth: int) -> int:
        out = 1
        for lvl in self.levels[depth:]:
            out *= len(lvl.transversal)
        return out


def closure(n: int, gens: Iterable[Sequence[int]], limit: int = 10**6) -> set:
    """All elements of the generated group by breadth-first closure."""
    gens = [tuple(g) for g in gens]
    e = identity(n)
    seen = {e}
    queue = [e]
    for x in queue:
        for g in gens:
            y = mult(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    raise RuntimeError(f"closure exceeds {limit} elements")
                queue.append(y)
    return seen
