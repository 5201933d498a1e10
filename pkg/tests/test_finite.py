import itertools
import random

import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from acworkbench import finite, schreier
from acworkbench.finite import GroupError, from_table, kernel_of_lambda, load_group, orbits
from acworkbench.moves import I, Move, R

Z2_TABLE = "order 2\n0 1\n1 0\n"


# --- independent oracle ------------------------------------------------------

def o_move_perms(table, k=2):
    """Move permutations on pairs/tuples, built straight from the table."""
    n = len(table)
    inv = [next(b for b in range(n) if table[a][b] == 0) for a in range(n)]
    tuples = list(itertools.product(range(n), repeat=k))
    index = {t: p for p, t in enumerate(tuples)}

    def perm(f):
        return tuple(index[f(t)] for t in tuples)

    def put(t, i, x):
        return t[:i] + (x,) + t[i + 1:]

    out = []
    for i, j in itertools.permutations(range(k), 2):
        for s in (1, -1):
            out.append(perm(lambda t, i=i, j=j, s=s: put(t, i, table[t[i]][t[j] if s > 0 else inv[t[j]]])))
            out.append(perm(lambda t, i=i, j=j, s=s: put(t, i, table[t[j] if s > 0 else inv[t[j]]][t[i]])))
    for i in range(k):
        out.append(perm(lambda t, i=i: put(t, i, inv[t[i]])))
        for w in range(n):
            out.append(perm(lambda t, i=i, w=w: put(t, i, table[table[inv[w]][t[i]]][w])))
    return out


def o_closure(gens, limit=200_000):
    n = len(gens[0])
    e = tuple(range(n))
    seen = {e}
    queue = [e]
    for p in queue:
        for g in gens:
            q = tuple(g[x] for x in p)
            if q not in seen:
                seen.add(q)
                queue.append(q)
                assert len(seen) <= limit
    return seen


def o_normally_generates(table, elems):
    n = len(table)
    inv = [next(b for b in range(n) if table[a][b] == 0) for a in range(n)]
    sub = {0}
    frontier = [table[table[inv[w]][x]][w] for x in elems for w in range(n)]
    while frontier:
        x = frontier.pop()
        if x in sub:
            continue
        new = {table[a][x] for a in sub} | {x}
        for y in list(new):
            if y not in sub:
                sub.add(y)
                frontier.extend(table[a][y] for a in list(sub))
    return len(sub) == n


def perm_table(perms):
    """Cayley table of a list of permutations closed under composition, identity first."""
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(q[p[x]] for x in range(len(p)))] for q in perms] for p in perms]


def s3_oracle_table():
    perms = sorted(itertools.permutations(range(3)))
    return perm_table(perms)


# --- examples ----------------------------------------------------------------

def test_load_table_and_errors():
    g = load_group(Z2_TABLE)
    assert g.order == 2 and g.inv(1) == 1
    with pytest.raises(GroupError, match="associativity"):
        from_table([[0, 1, 2], [1, 0, 0], [2, 0, 0]])
    with pytest.raises(GroupError, match="associativity"):
        # identity and inverses hold, associativity does not
        load_group("order 5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n")
    with pytest.raises(GroupError, match="identity"):
        from_table([[1, 0], [0, 1]])
    with pytest.raises(GroupError, match="rows"):
        load_group("order 3\n0 1 2\n")


def test_load_permutation_generators():
    g = load_group("(0 1 2)\n")
    assert g.order == 3 and g.is_abelian()
    assert load_group("1 2 0\n").order == 3
    assert load_group("1 0 2\n1 2 0\n").order == 6
    with pytest.raises(GroupError):
        load_group("0 0 1\n")


def test_closure_ceiling():
    with pytest.raises(GroupError, match="ceiling"):
        load_group("1 2 3 4 5 6 7 0\n1 0 2 3 4 5 6 7\n")  # S8 has 40320 elements


def test_table_roundtrip():
    g = finite.symmetric(3)
    assert load_group(finite.format_table(g)).table == g.table


def test_encode_decode():
    assert finite.encode((0, 0), 3) == 0
    assert finite.encode((1, 2), 3) == 5
    for idx in range(27):
        assert finite.encode(finite.decode(idx, 3, 3), 3) == idx


def test_normal_closure_examples():
    z2 = finite.cyclic(2)
    assert finite.normal_closure(z2, [1]) == {0, 1}
    assert finite.normal_closure(z2, []) == {0}
    s3 = finite.symmetric(3)
    transposition = next(x for x in range(6) if x and s3.mul(x, x) == 0)
    assert len(finite.normal_closure(s3, [transposition])) == 6
    three_cycle = next(x for x in range(6) if x and s3.mul(x, x) != 0)
    assert len(finite.normal_closure(s3, [three_cycle])) == 3


def test_n_k_examples():
    assert finite.n_k_set(finite.cyclic(2), 2) == [1, 2, 3]
    assert len(finite.n_k_set(finite.cyclic(3), 2)) == 8
    assert finite.n_k_set(finite.cyclic(1), 2) == [0]


def test_n_k_matches_oracle():
    for g in [finite.symmetric(3), finite.dihedral(4), finite.quaternion(),
              finite.direct_product(finite.cyclic(2), finite.cyclic(2))]:
        t = [list(r) for r in g.table]
        expected = [idx for idx, pair in enumerate(itertools.product(range(g.order), repeat=2))
                    if o_normally_generates(t, pair)]
        assert finite.n_k_set(g, 2) == expected


def test_move_permutation_examples():
    z2 = finite.cyclic(2)
    p = finite.move_permutation(z2, 2, R(1, 2, 1))
    assert p == (0, 3, 2, 1)
    assert schreier.is_identity(finite.move_permutation(z2, 2, I(1)))
    z5 = finite.cyclic(5)
    for w in range(1, 5):
        assert schreier.is_identity(finite.move_permutation(z5, 2, Move("C", 1, c=w)))


def test_moves_fix_zero_and_invert():
    for g in [finite.symmetric(3), finite.quaternion(), finite.cyclic(4)]:
        for m in finite.finite_moves(g, 2):
            p = finite.move_permutation(g, 2, m)
            q = finite.move_permutation(g, 2, finite.invert_finite_move(g, m))
            assert p[0] == 0
            assert schreier.is_identity(schreier.mult(p, q))


def test_n_k_is_invariant():
    for g in [finite.symmetric(3), finite.dihedral(4), finite.cyclic(6)]:
        nk = set(finite.n_k_set(g, 2))
        for p in finite.move_permutations(g, 2):
            assert {p[x] for x in nk} == nk


def test_move_permutations_match_oracle():
    for g in [finite.cyclic(3), finite.symmetric(3)]:
        ours = set(finite.move_permutations(g, 2))
        theirs = {p for p in o_move_perms([list(r) for r in g.table]) if not schreier.is_identity(p)}
        assert ours == theirs


def test_fac_orders_small():
    assert finite.fac_group(finite.cyclic(2), 2).order() == len(o_closure(o_move_perms([[0, 1], [1, 0]])))
    z3 = [[(a + b) % 3 for b in range(3)] for a in range(3)]
    assert finite.fac_group(finite.cyclic(3), 2).order() == len(o_closure(o_move_perms(z3))) == 48
    assert finite.fac_group(finite.cyclic(1), 2).order() == 1


def test_kernel_examples():
    rep = kernel_of_lambda(finite.cyclic(2), 2)
    assert (rep.fac_order, rep.ac_order, rep.kernel_order) == (6, 6, 1)
    rep = kernel_of_lambda(finite.cyclic(3), 2)
    assert (rep.fac_order, rep.ac_order, rep.kernel_order) == (48, 48, 1)
    rep = kernel_of_lambda(finite.cyclic(1), 2)
    assert (rep.fac_order, rep.ac_order, rep.kernel_order) == (1, 1, 1)


def test_empty_n_k_is_reported():
    g = finite.direct_product(finite.cyclic(2), finite.quaternion())
    assert finite.n_k_set(g, 2) == []
    with pytest.raises(finite.EmptyNk):
        kernel_of_lambda(g, 2)
    orb = orbits(g, 2)
    assert not orb.transitive_on_n
    assert finite.format_report(None, orb).startswith("N_k=empty")


def test_orbit_examples():
    orb = orbits(finite.cyclic(2), 2)
    assert orb.orbits == [[0], [1, 2, 3]] and orb.transitive_on_n
    orb = orbits(finite.cyclic(3), 2)
    assert orb.sizes == [1, 8] and orb.transitive_on_n
    orb = orbits(finite.cyclic(3), 2, domain="N")
    assert orb.sizes == [8]


def test_report_format():
    g = finite.cyclic(2)
    line = finite.format_report(kernel_of_lambda(g, 2), orbits(g, 2))
    assert line == "fac_order=6 ac_order=6 kernel_order=1 transitive_on_N=yes orbit_sizes=1,3"


def test_kernel_is_consistent():
    for g in [finite.symmetric(3), finite.dihedral(4), finite.cyclic(4)]:
        rep = kernel_of_lambda(g, 2)
        assert rep.kernel_order * rep.ac_order == rep.fac_order
        nk = finite.n_k_set(g, 2)
        for p in rep.kernel_generators:
            assert not schreier.is_identity(p)
            assert all(p[x] == x for x in nk)
        # restriction to N_k gives the AC-group itself
        restricted = [tuple(nk.index(p[x]) for x in nk) for p in finite.move_permutations(g, 2)]
        ac = PermutationGroup([Permutation(list(r)) for r in restricted]).order()
        assert ac == rep.ac_order
        fac = PermutationGroup([Permutation(list(p)) for p in finite.move_permutations(g, 2)]).order()
        assert fac == rep.fac_order


def test_schreier_sims_against_closure_and_sympy():
    rng = random.Random(7)
    groups = finite.small_groups()
    for g in rng.sample(groups, 10) + [finite.symmetric(3), finite.quaternion()]:
        t = [list(r) for r in g.table]
        gens = [p for p in o_move_perms(t) if not schreier.is_identity(p)]
        chain = finite.fac_group(g, 2)
        expected = PermutationGroup([Permutation(list(p)) for p in gens]).order()
        assert chain.order() == expected
        if expected <= 10**4:
            assert len(o_closure(gens)) == expected


def test_chain_membership():
    g = finite.symmetric(3)
    chain = finite.fac_group(g, 2)
    gens = finite.move_permutations(g, 2)
    for p in gens:
        assert p in chain
    q = schreier.mult(gens[0], gens[3])
    assert q in chain
    # a transposition of two N_k points that fixes everything else is not a move
    nk = finite.n_k_set(g, 2)
    swap = list(range(36))
    swap[nk[0]], swap[nk[1]] = swap[nk[1]], swap[nk[0]]
    assert (tuple(swap) in chain) == (PermutationGroup(
        [Permutation(list(p)) for p in gens]).contains(Permutation(swap)))


def test_domain_ceiling():
    with pytest.raises(ValueError, match="ceiling"):
        finite.check_domain(finite.cyclic(16), 7)


def test_oracle_table_agrees_up_to_relabel():
    t = s3_oracle_table()
    assert len(t) == 6 and all(sorted(r) == list(range(6)) for r in t)
    g = from_table(t)
    assert kernel_of_lambda(g, 2).fac_order == kernel_of_lambda(finite.symmetric(3), 2).fac_order
