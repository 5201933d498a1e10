import itertools
import random

import networkx as nx
import pytest

from acworkbench import words


# --- string oracle ---------------------------------------------------------
# Deliberately independent of the package: words are Python strings and
# reduction is the textbook stack algorithm.

def s_inv_letter(c):
    return c.lower() if c.isupper() else c.upper()


def s_reduce(s):
    out = []
    for c in s:
        if out and out[-1] == s_inv_letter(c):
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def s_inv(s):
    return "".join(s_inv_letter(c) for c in reversed(s))


def s_moves(k, rank):
    letters = "abcdefghijklmnopqrstuvwxyz"[:rank]
    out = []
    for kind in "RL":
        for i in range(k):
            for j in range(k):
                if i != j:
                    for e in (1, -1):
                        out.append((kind, i, j, e))
    for i in range(k):
        out.append(("I", i))
    for i in range(k):
        for c in letters:
            out.append(("C", i, c))
            out.append(("C", i, c.upper()))
    return out


def s_apply(t, m):
    t = list(t)
    if m[0] in "RL":
        _, i, j, e = m
        v = t[j] if e > 0 else s_inv(t[j])
        t[i] = s_reduce(t[i] + v if m[0] == "R" else v + t[i])
    elif m[0] == "I":
        t[m[1]] = s_inv(t[m[1]])
    else:
        c = m[2]
        t[m[1]] = s_reduce(s_inv_letter(c) + t[m[1]] + c)
    return tuple(t)


def s_all_words(rank, max_len):
    letters = "abcdefghijklmnopqrstuvwxyz"[:rank]
    alpha = letters + letters.upper()
    out = {""}
    for n in range(1, max_len + 1):
        for p in itertools.product(alpha, repeat=n):
            w = "".join(p)
            if s_reduce(w) == w:
                out.add(w)
    return out


def s_state_graph(k, rank, cap):
    """Explicit AC-graph over all k-tuples with total length <= cap."""
    ws = s_all_words(rank, cap)
    g = nx.Graph()
    states = [t for t in itertools.product(sorted(ws), repeat=k) if sum(map(len, t)) <= cap]
    g.add_nodes_from(states)
    mv = s_moves(k, rank)
    for t in states:
        for m in mv:
            u = s_apply(t, m)
            if sum(map(len, u)) <= cap:
                g.add_edge(t, u)
    return g


@pytest.fixture(scope="session")
def graph6():
    return s_state_graph(2, 2, 6)


def to_strings(t):
    return tuple(str(w) for w in t.entries)


def random_word(rng, rank, max_len, min_len=0):
    n = rng.randint(min_len, max_len)
    out = []
    while len(out) < n:
        x = rng.choice([1, -1]) * rng.randint(1, rank)
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)


def random_tuple(rng, k, rank, max_len, min_len=0):
    return words.WordTuple.from_raw([random_word(rng, rank, max_len, min_len) for _ in range(k)], rank)


@pytest.fixture
def rng():
    return random.Random(20261016)


def s_evaluate_raw(body, r, values):
    """Substitute letter r+i -> values[i-1] as strings and stack-reduce."""
    def s(x):
        c = "abcdefghijklmnopqrstuvwxyz"[abs(x) - 1]
        return c if x > 0 else c.upper()
    out = []
    for x in body:
        if abs(x) <= r:
            out.append(s(x))
        else:
            v = "".join(s(y) for y in values[abs(x) - r - 1])
            out.append(v if x > 0 else s_inv(v))
    return s_reduce("".join(out))
