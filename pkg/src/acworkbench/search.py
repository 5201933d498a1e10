"""Bounded search of the AC-graph of balanced presentations.

States are tuples of raw reduced words.  Every search prunes states whose
total length exceeds ``length_cap`` and stops after ``node_budget``
insertions into its dedup index.

Breadth-first search expands each level in move-alphabet order and keeps the
first parent that reaches a state, so the path it returns is the
lexicographically least among the shortest ones.  Frontier expansion can be
split over a thread pool; chunks are merged back in order, so the result
never depends on the thread count.
"""

from __future__ import annotations

import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from . import words
from .moves import Move, all_moves, apply_raw, apply_sequence, format_moves, I, \
    invert_move, parse_moves, swap_moves
from .words import MalformedInput, WordTuple, inv, mul


def conj_letter(u: tuple, c: int) -> tuple:
    """``c^-1 u c`` for a reduced word ``u`` and a single letter ``c``."""
    if not u:
        return u
    if u[0] == c:
        if u[-1] == -c:
            return u[1:-1]
        return u[1:] + (c,)
    if u[-1] == -c:
        return (-c,) + u[:-1]
    return (-c,) + u + (c,)

log = logging.getLogger(__name__)

STRATEGIES = ("bfs", "iddfs", "bidirectional")
DEDUP_MODES = ("exact", "orbit")

FOUND = "found"
EXHAUSTED = "exhausted"   # no path exists inside the cap
BUDGET = "budget"         # inconclusive


@dataclass(frozen=True)
class SearchConfig:
    length_cap: int
    node_budget: int = 10**6
    strategy: str = "bfs"
    dedup: str = "exact"
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if self.dedup not in DEDUP_MODES:
            raise ValueError(f"unknown dedup mode {self.dedup!r}; choose from {DEDUP_MODES}")
        if self.node_budget <= 0:
            raise ValueError("node_budget must be positive")
        if self.length_cap < 0:
            raise ValueError("length_cap must be nonnegative")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass(frozen=True)
class PathCertificate:
    start: WordTuple
    moves: tuple
    end: WordTuple
    strategy: str = "bfs"
    dedup: str = "exact"

    def __len__(self):
        return len(self.moves)


@dataclass
class SearchResult:
    status: str
    certificate: PathCertificate | None = None
    states: int = 0

    @property
    def found(self) -> bool:
        return self.status == FOUND


def ak(n: int) -> WordTuple:
    """Relators ``(a^n b^-(n+1), a b a B A B)`` of the Akbulut-Kirby presentation."""
    if n < 2:
        raise ValueError(f"AK(n) needs n >= 2, got {n}")
    u = (1,) * n + (-2,) * (n + 1)
    v = (1, 2, 1, -2, -1, -2)
    return WordTuple.from_raw([u, v], 2)


# --- state-space primitives ---------------------------------------------------

def _total(state: tuple) -> int:
    return sum(map(len, state))


def exact_key(state: tuple) -> tuple:
    return state


def orbit_key(state: tuple) -> tuple:
    """Quotient by inverting entries and permuting them."""
    return tuple(sorted(min(w, inv(w)) for w in state))


def _compile(m: Move) -> Callable:
    """Return ``f(state) -> (entry_index, new_entry)`` for move ``m``."""
    i = m.i - 1
    if m.kind == "R":
        j = m.j - 1
        if m.sign > 0:
            return lambda t: (i, mul(t[i], t[j]))
        return lambda t: (i, mul(t[i], inv(t[j])))
    if m.kind == "L":
        j = m.j - 1
        if m.sign > 0:
            return lambda t: (i, mul(t[j], t[i]))
        return lambda t: (i, mul(inv(t[j]), t[i]))
    if m.kind == "I":
        return lambda t: (i, inv(t[i]))
    c = m.c
    return lambda t: (i, conj_letter(t[i], c))


class _Graph:
    def __init__(self, k: int, rank: int, cap: int, threads: int = 1):
        self.moves = all_moves(k, rank)
        self.fns = [_compile(m) for m in self.moves]
        self.cap = cap
        self.threads = threads

    def neighbours(self, state: tuple) -> list:
        cap = self.cap
        base = _total(state)
        out = []
        for mi, f in enumerate(self.fns):
            i, new = f(state)
            if base - len(state[i]) + len(new) <= cap:
                out.append((mi, state[:i] + (new,) + state[i + 1:]))
        return out

    def expand(self, frontier: list) -> Iterator:
        """Yield ``(parent_pos, move_index, child)`` in frontier/move order."""
        if self.threads <= 1 or len(frontier) < 256:
            for pos, s in enumerate(frontier):
                for mi, child in self.neighbours(s):
                    yield pos, mi, child
            return
        size = -(-len(frontier) // self.threads)
        chunks = [(lo, frontier[lo:lo + size]) for lo in range(0, len(frontier), size)]

        def work(chunk):
            lo, states = chunk
            return [(lo + p, mi, c) for p, s in enumerate(states) for mi, c in self.neighbours(s)]

        with ThreadPoolExecutor(self.threads) as pool:
            for part in pool.map(work, chunks):
                yield from part


def _path(parents: dict, key) -> list:
    out = []
    while True:
        entry = parents[key]
        if entry[0] is None:
            break
        key, mi = entry[0], entry[1]
        out.append(mi)
    out.reverse()
    return out


def _fixup(cur: tuple, target: tuple) -> list:
    """Moves carrying ``cur`` to ``target`` when they agree up to orbit_key."""
    k = len(cur)
    out = []
    for p in range(k):
        want = target[p]
        q = next(q for q in range(p, k) if cur[q] == want or cur[q] == inv(want))
        if q != p:
            for m in swap_moves(p + 1, q + 1):
                cur = apply_raw(cur, m)
                out.append(m)
        if cur[p] != want:
            cur = apply_raw(cur, I(p + 1))
            out.append(I(p + 1))
    assert cur == target
    return out


# --- strategies ----------------------------------------------------------------

def _bfs(graph, start, goal, keyf, budget):
    goal_key = keyf(goal)
    k0 = keyf(start)
    parents = {k0: (None, None, start)}
    if k0 == goal_key:
        return FOUND, [], start, parents
    frontier = [start]
    while frontier:
        nxt = []
        for pos, mi, child in graph.expand(frontier):
            ck = keyf(child)
            if ck in parents:
                continue
            if len(parents) >= budget:
                return BUDGET, None, None, parents
            parents[ck] = (keyf(frontier[pos]), mi, child)
            if ck == goal_key:
                return FOUND, _path(parents, ck), child, parents
            nxt.append(child)
        frontier = nxt
    return EXHAUSTED, None, None, parents


def _iddfs(graph, start, goal, keyf, budget):
    goal_key = keyf(goal)
    if keyf(start) == goal_key:
        return FOUND, [], start, 1
    inserted = 0
    limit = 0
    while True:
        limit += 1
        best = {keyf(start): 0}
        inserted += 1
        cut = False
        # explicit stack of (state, neighbour iterator); depth is len(stack)
        stack = [(start, iter(graph.neighbours(start)))]
        path = []
        while stack:
            state, it = stack[-1]
            step = next(it, None)
            if step is None:
                stack.pop()
                if path:
                    path.pop()
                continue
            mi, child = step
            depth = len(stack)
            ck = keyf(child)
            seen = best.get(ck)
            if seen is not None and seen <= depth:
                continue
            if inserted >= budget:
                return BUDGET, None, None, inserted
            best[ck] = depth
            inserted += 1
            if ck == goal_key:
                return FOUND, path + [mi], child, inserted
            if depth < limit:
                path.append(mi)
                stack.append((child, iter(graph.neighbours(child))))
            else:
                cut = True
        if not cut:
            return EXHAUSTED, None, None, inserted


def _bidirectional(graph, start, goal, keyf, budget):
    fk, bk = keyf(start), keyf(goal)
    fwd = {fk: (None, None, start, 0)}
    bwd = {bk: (None, None, goal, 0)}
    if fk == bk:
        return FOUND, fk, fwd, bwd
    ffront, bfront = [start], [goal]
    while ffront and bfront:
        forward = len(ffront) <= len(bfront)
        mine, other = (fwd, bwd) if forward else (bwd, fwd)
        front = ffront if forward else bfront
        nxt = []
        meets = []
        for pos, mi, child in graph.expand(front):
            ck = keyf(child)
            if ck in mine:
                continue
            if len(fwd) + len(bwd) >= budget:
                return BUDGET, None, fwd, bwd
            pk = keyf(front[pos])
            mine[ck] = (pk, mi, child, mine[pk][3] + 1)
            nxt.append(child)
            if ck in other:
                meets.append((mine[ck][3] + other[ck][3], len(meets), ck))
        if meets:
            _, _, key = min(meets)
            return FOUND, key, fwd, bwd
        if forward:
            ffront = nxt
        else:
            bfront = nxt
    return EXHAUSTED, None, fwd, bwd


def _stitch(graph, fwd, bwd, key) -> tuple:
    """Assemble the move list through the meeting key; returns (moves, end)."""
    moves = graph.moves
    head = [moves[mi] for mi in _path(fwd, key)]
    meet_f, meet_b = fwd[key][2], bwd[key][2]
    bridge = _fixup(meet_f, meet_b) if meet_f != meet_b else []
    tail = [invert_move(moves[mi]) for mi in reversed(_path(bwd, key))]
    return head + bridge + tail


def trivialize(start: WordTuple, cfg: SearchConfig, target: WordTuple | None = None) -> SearchResult:
    """Search for AC-moves carrying ``start`` to the generator tuple.

    ``target`` defaults to ``(a_1, ..., a_k)``; any tuple of the same shape
    may be given instead.  Tuples whose abelianizations have determinants
    of different absolute value are reported unreachable without searching.
    """
    k, rank = start.size, start.rank
    if target is None:
        if rank != k:
            raise ValueError(f"presentation is not balanced: rank {rank}, {k} relators")
        target = words.generator_tuple(k)
    if (target.size, target.rank) != (k, rank):
        raise ValueError("start and target differ in shape")
    if words.total_length(start) > cfg.length_cap:
        raise ValueError(f"start length {words.total_length(start)} exceeds cap {cfg.length_cap}")
    if words.total_length(target) > cfg.length_cap:
        raise ValueError(f"target length {words.total_length(target)} exceeds cap {cfg.length_cap}")

    s, g = start.raw, target.raw
    if rank == k and abs(abelian_determinant(s, k)) != abs(abelian_determinant(g, k)):
        # |det| of the abelianized tuple is invariant under every move
        log.info("abelian determinants differ; target unreachable")
        return SearchResult(EXHAUSTED, None, 0)
    graph = _Graph(k, rank, cfg.length_cap, cfg.threads)
    keyf = orbit_key if cfg.dedup == "orbit" else exact_key

    if cfg.strategy == "bfs":
        status, path, reached, parents = _bfs(graph, s, g, keyf, cfg.node_budget)
        states = len(parents)
        seq = None if path is None else [graph.moves[mi] for mi in path]
    elif cfg.strategy == "iddfs":
        status, path, reached, states = _iddfs(graph, s, g, keyf, cfg.node_budget)
        seq = None if path is None else [graph.moves[mi] for mi in path]
    else:
        status, key, fwd, bwd = _bidirectional(graph, s, g, keyf, cfg.node_budget)
        states = len(fwd) + len(bwd)
        reached = g
        seq = None
        if status == FOUND:
            seq = _stitch(graph, fwd, bwd, key)
    if status != FOUND:
        log.info("search %s after %d states", status, states)
        return SearchResult(status, None, states)
    if cfg.strategy != "bidirectional" and reached != g:
        seq = seq + _fixup(reached, g)
    cert = PathCertificate(start, tuple(seq), apply_sequence(start, seq), cfg.strategy, cfg.dedup)
    if cert.end != target:
        raise AssertionError("search produced a path that does not reach the target")
    return SearchResult(FOUND, cert, states)


def verify(cert: PathCertificate) -> bool:
    """Replay the moves from the start; compare against the recorded end."""
    try:
        return apply_sequence(cert.start, cert.moves) == cert.end
    except MalformedInput:
        return False


def shortest_distances(target: WordTuple, cap: int, budget: int = 10**7) -> dict:
    """BFS distances from ``target`` to every state within ``cap`` (exact keys)."""
    graph = _Graph(target.size, target.rank, cap)
    dist = {target.raw: 0}
    frontier = [target.raw]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for _, _, child in graph.expand(frontier):
            if child not in dist:
                if len(dist) >= budget:
                    raise RuntimeError("budget exhausted")
                dist[child] = d
                nxt.append(child)
        frontier = nxt
    return dist


def random_scramble(rng: random.Random, k: int, n_moves: int, cap: int,
                    start: WordTuple | None = None) -> list:
    """Random moves from ``start`` whose intermediate states stay within ``cap``."""
    start = words.generator_tuple(k) if start is None else start
    moves = all_moves(k, start.rank)
    state = start.raw
    seq = []
    while len(seq) < n_moves:
        m = rng.choice(moves)
        nxt = apply_raw(state, m)
        if _total(nxt) <= cap:
            seq.append(m)
            state = nxt
    return seq


# --- certificate files --------------------------------------------------------

def format_certificate(cert: PathCertificate) -> str:
    lines = [
        "# ac-workbench path certificate",
        f"# rank {cert.start.rank} k {cert.start.size}",
        f"# strategy {cert.strategy} dedup {cert.dedup}",
        f"# start: {cert.start}",
    ]
    return "\n".join(lines) + "\n" + format_moves(cert.moves) + f"# end: {cert.end}\n"


def parse_certificate(text: str) -> PathCertificate:
    rank = k = None
    start = end = None
    strategy, dedup = "bfs", "exact"
    for line in text.splitlines():
        s = line.strip()
        if not s.startswith("#"):
            continue
        body = s[1:].strip()
        parts = body.split()
        if len(parts) == 4 and parts[0] == "rank" and parts[2] == "k":
            rank, k = int(parts[1]), int(parts[3])
        elif len(parts) == 4 and parts[0] == "strategy" and parts[2] == "dedup":
            strategy, dedup = parts[1], parts[3]
        elif body.startswith("start:"):
            start = body[len("start:"):]
        elif body.startswith("end:"):
            end = body[len("end:"):]
    if rank is None or start is None or end is None:
        raise MalformedInput("certificate needs '# rank r k k', '# start:' and '# end:' lines")
    st = words.parse_tuple_inline(start, rank)
    en = words.parse_tuple_inline(end, rank)
    if st.size != k or en.size != k:
        raise MalformedInput("certificate tuple sizes disagree with header")
    return PathCertificate(st, tuple(parse_moves(text)), en, strategy, dedup)


# --- classification sweep ------------------------------------------------------

def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_tuples(k: int, rank: int, max_total: int) -> Iterator[tuple]:
    """Every k-tuple of reduced words with total length <= max_total."""
    by_len = {n: list(words.reduced_words(rank, n)) for n in range(max_total + 1)}
    for total in range(max_total + 1):
        for lens in _compositions(total, k):
            yield from itertools.product(*(by_len[n] for n in lens))


def enumerate_order_key(state: tuple) -> tuple:
    """Sort key reproducing the order of :func:`enumerate_tuples`."""
    lens = tuple(map(len, state))
    letters = tuple(tuple((abs(x) - 1) * 2 + (x < 0) for x in w) for w in state)
    return sum(lens), lens, letters


def abelian_determinant(state: tuple, rank: int) -> int:
    rows = []
    for w in state:
        row = [0] * rank
        for x in w:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    n = len(rows)
    if n != rank:
        raise ValueError("abelianization matrix is not square")
    m = [[Fraction(v) for v in r] for r in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return int(det)


@dataclass
class Component:
    id: int
    size: int
    rep: WordTuple


@dataclass
class ClassifyReport:
    k: int
    enum_cap: int
    search_cap: int
    candidates: int
    components: list = field(default_factory=list)
    trivial_component_size: int = 0
    states: int = 0
    complete: bool = True
    membership: dict = field(default_factory=dict, repr=False)

    def component_of(self, t: WordTuple) -> int | None:
        return self.membership.get(t.raw)

    def format(self) -> str:
        lines = [f"# classify k={self.k} enum_cap={self.enum_cap} search_cap={self.search_cap} "
                 f"candidates={self.candidates} states={self.states} "
                 f"complete={'yes' if self.complete else 'no'}",
                 f"# components={len(self.components)} "
                 f"trivial_component_size={self.trivial_component_size}"]
        for c in self.components:
            reps = " ".join(str(w) for w in c.rep.entries)
            lines.append(f"component {c.id} size {c.size} rep {reps}")
        return "\n".join(lines) + "\n"


def classify(enum_cap: int, search_cap: int, budget: int = 10**7, k: int = 2,
             threads: int = 1) -> ClassifyReport:
    """Group unimodular k-tuples by connected component of the capped AC-graph.

    Candidates are all reduced k-tuples over rank k with total length at most
    ``enum_cap`` whose abelianization has determinant +-1.  Components are
    taken in the graph of all states of total length at most ``search_cap``.
    Component ids follow the enumeration order of their first candidate,
    which is also the representative; ``size`` counts candidates.  If the
    budget runs out the remaining candidates stay unassigned and the report
    is marked incomplete.
    """
    if enum_cap > search_cap:
        raise ValueError(f"enum_cap {enum_cap} exceeds search_cap {search_cap}")
    if k < 2:
        raise ValueError("k must be >= 2")
    cands = [t for t in enumerate_tuples(k, k, enum_cap) if abs(abelian_determinant(t, k)) == 1]
    cand_set = set(cands)
    graph = _Graph(k, k, search_cap, threads)
    report = ClassifyReport(k, enum_cap, search_cap, len(cands))
    membership = report.membership
    seen = set()
    for t in cands:
        if t in membership:
            continue
        if t in seen or len(seen) >= budget:
            report.complete = False
            break
        comp = Component(len(report.components), 0, WordTuple.from_raw(t, k))
        report.components.append(comp)
        seen.add(t)
        membership[t] = comp.id
        comp.size = 1
        frontier = [t]
        while frontier:
            nxt = []
            for _, _, child in graph.expand(frontier):
                if child in seen:
                    continue
                if len(seen) >= budget:
                    report.complete = False
                    break
                seen.add(child)
                if child in cand_set:
                    membership[child] = comp.id
                    comp.size += 1
                nxt.append(child)
            if not report.complete:
                break
            frontier = nxt
        if not report.complete:
            break
    report.states = len(seen)
    trivial = words.generator_tuple(k).raw
    if trivial in membership:
        report.trivial_component_size = report.components[membership[trivial]].size
    return report
