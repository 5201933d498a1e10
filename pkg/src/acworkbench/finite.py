"""AC-groups of small finite groups, computed exactly.

A finite group is stored as a multiplication table on ``0..n-1`` with 0 the
identity.  A k-tuple over it is encoded as the integer whose base-n digits
are the entries, first entry most significant, so index 0 is the trivial
tuple.  Every elementary move becomes a permutation of ``range(n**k)``; the
full AC-group is the permutation group they generate, and the AC-group
proper is its restriction to the tuples that normally generate G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import schreier
from .moves import Move, invert_move
from .schreier import StabilizerChain

MAX_POINTS = 2**24
MAX_ELEMENTS = 10**4
ASSOCIATIVITY_CHECK_LIMIT = 128


class GroupError(ValueError):
    pass


class EmptyNk(ValueError):
    """No k-tuple normally generates G, so the restriction map is undefined."""


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple                 # table[a][b] = a*b
    inverses: tuple
    generators: tuple = ()
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, a: int, w: int) -> int:
        """``a^w = w^-1 a w``."""
        t = self.table
        return t[t[self.inverses[w]][a]][w]

    def is_abelian(self) -> bool:
        t = self.table
        n = self.order
        return all(t[a][b] == t[b][a] for a in range(n) for b in range(a + 1, n))

    def __str__(self):
        return self.name or f"group of order {self.order}"


def from_table(rows: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Validate a Cayley table; the failed axiom is named in the error."""
    n = len(rows)
    if n == 0:
        raise GroupError("empty table")
    table = tuple(tuple(int(x) for x in r) for r in rows)
    for a, r in enumerate(table):
        if len(r) != n:
            raise GroupError(f"closure: row {a} has {len(r)} entries, expected {n}")
        if any(x < 0 or x >= n for x in r):
            raise GroupError(f"closure: row {a} has entries outside 0..{n - 1}")
    for a in range(n):
        if table[0][a] != a or table[a][0] != a:
            raise GroupError(f"identity: 0 is not a two-sided identity for element {a}")
    inverses = []
    for a in range(n):
        b = next((b for b in range(n) if table[a][b] == 0), None)
        if b is None or table[b][a] != 0:
            raise GroupError(f"inverses: element {a} has no two-sided inverse")
        inverses.append(b)
    if n <= ASSOCIATIVITY_CHECK_LIMIT:
        for a in range(n):
            ra = table[a]
            for b in range(n):
                ab = ra[b]
                rab, rb = table[ab], table[b]
                for c in range(n):
                    if rab[c] != ra[rb[c]]:
                        raise GroupError(f"associativity: ({a}*{b})*{c} != {a}*({b}*{c})")
    return FiniteGroup(table, tuple(inverses), (), name)


def from_permutations(gens: Iterable[Sequence[int]], name: str = "",
                      limit: int = MAX_ELEMENTS) -> FiniteGroup:
    """Enumerate the group generated by permutations (identity becomes element 0)."""
    gens = [tuple(g) for g in gens]
    if not gens:
        return FiniteGroup(((0,),), (0,), (), name or "trivial group")
    degree = max(len(g) for g in gens)
    gens = [g + tuple(range(len(g), degree)) for g in gens]
    for g in gens:
        schreier.check_perm(g)
    elems = sorted(schreier.closure(degree, gens, limit))
    e = schreier.identity(degree)
    elems.remove(e)
    elems.insert(0, e)
    index = {p: i for i, p in enumerate(elems)}
    table = tuple(tuple(index[schreier.mult(p, q)] for q in elems) for p in elems)
    inverses = tuple(index[schreier.inverse(p)] for p in elems)
    return FiniteGroup(table, inverses, tuple(index[g] for g in gens), name)


def cyclic(n: int) -> FiniteGroup:
    return from_table([[(a + b) % n for b in range(n)] for a in range(n)], f"Z/{n}")


def symmetric(d: int) -> FiniteGroup:
    if d < 2:
        return from_permutations([], "S1")
    gens = [(1, 0) + tuple(range(2, d)), tuple(range(1, d)) + (0,)]
    return from_permutations(gens, f"S{d}")


def dihedral(m: int) -> FiniteGroup:
    """Symmetries of the m-gon, order 2m."""
    rot = tuple((i + 1) % m for i in range(m))
    ref = tuple((-i) % m for i in range(m))
    return from_permutations([rot, ref], f"D{2 * m}")


def quaternion() -> FiniteGroup:
    # left regular representation of Q8 on {1,-1,i,-i,j,-j,k,-k}
    i = (2, 3, 1, 0, 7, 6, 4, 5)
    j = (4, 5, 6, 7, 1, 0, 3, 2)
    return from_permutations([i, j], "Q8")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    m = h.order
    n = g.order * m
    table = [[g.table[a // m][b // m] * m + h.table[a % m][b % m] for b in range(n)]
             for a in range(n)]
    return from_table(table, f"{g}x{h}")


# --- files -----------------------------------------------------------------------

def _content(text: str) -> list:
    return [s for s in (line.strip() for line in text.splitlines()) if s and not s.startswith("#")]


def parse_cycles(line: str, degree: int = 0) -> tuple:
    cycles = []
    for part in line.replace(")", ")\n").splitlines():
        part = part.strip().strip(",")
        if not part:
            continue
        if not (part.startswith("(") and part.endswith(")")):
            raise GroupError(f"bad cycle {part!r}")
        pts = [int(x) for x in part[1:-1].replace(",", " ").split()]
        cycles.append(pts)
    degree = max([degree] + [p + 1 for c in cycles for p in c])
    img = list(range(degree))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a] = b
    schreier.check_perm(img)
    return tuple(img)


def load_group(text: str, name: str = "") -> FiniteGroup:
    """Read a table file (``order n`` + n rows) or a permutation-generator file.

    Generator lines are image lists ``"0 2 1 ..."`` or cycle notation
    ``"(0 1 2)"`` on points numbered from 0.
    """
    lines = _content(text)
    if not lines:
        raise GroupError("empty group file")
    head = lines[0].split()
    if head[0] == "order":
        if len(head) != 2 or not head[1].isdigit():
            raise GroupError(f"bad header {lines[0]!r}")
        n = int(head[1])
        rows = [r.split() for r in lines[1:]]
        if len(rows) != n:
            raise GroupError(f"closure: expected {n} rows, got {len(rows)}")
        try:
            return from_table([[int(x) for x in r] for r in rows], name)
        except ValueError as exc:
            if isinstance(exc, GroupError):
                raise
            raise GroupError(f"non-integer table entry: {exc}") from None
    gens = []
    for line in lines:
        if "(" in line:
            gens.append(parse_cycles(line))
        else:
            try:
                g = tuple(int(x) for x in line.split())
            except ValueError:
                raise GroupError(f"bad permutation line {line!r}") from None
            try:
                schreier.check_perm(g)
            except ValueError:
                raise GroupError(f"not a permutation: {line!r}") from None
            gens.append(g)
    try:
        return from_permutations(gens, name)
    except RuntimeError as exc:
        raise GroupError(f"closure ceiling exceeded: {exc}") from None


def format_table(g: FiniteGroup) -> str:
    return f"order {g.order}\n" + "".join(" ".join(map(str, r)) + "\n" for r in g.table)


# --- tuple space ----------------------------------------------------------------

def check_domain(g: FiniteGroup, k: int) -> int:
    if k < 2:
        raise ValueError("k must be >= 2")
    size = g.order ** k
    if size > MAX_POINTS:
        raise ValueError(f"|G|^k = {g.order}^{k} = {size} exceeds the {MAX_POINTS}-point ceiling")
    return size


def encode(entries: Sequence[int], n: int) -> int:
    idx = 0
    for x in entries:
        idx = idx * n + x
    return idx


def decode(idx: int, n: int, k: int) -> tuple:
    out = [0] * k
    for p in range(k - 1, -1, -1):
        idx, out[p] = divmod(idx, n)
    return tuple(out)


def normal_closure(g: FiniteGroup, elements: Iterable[int]) -> frozenset:
    n = g.order
    gens = {g.conj(x, w) for x in set(elements) if x != 0 for w in range(n)}
    seen = {0}
    queue = [0]
    t = g.table
    for a in queue:
        row = t[a]
        for s in gens:
            b = row[s]
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return frozenset(seen)


def n_k_set(g: FiniteGroup, k: int) -> list:
    """Ascending indices of the k-tuples whose entries normally generate G."""
    size = check_domain(g, k)
    n = g.order
    cache = {}
    out = []
    for idx in range(size):
        key = frozenset(decode(idx, n, k))
        full = cache.get(key)
        if full is None:
            full = cache[key] = len(normal_closure(g, key)) == n
        if full:
            out.append(idx)
    return out


def finite_moves(g: FiniteGroup, k: int) -> list:
    """All elementary moves; conjugations range over every nonidentity element."""
    out = []
    for kind in ("R", "L"):
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                if i != j:
                    out.append(Move(kind, i, j, 1))
                    out.append(Move(kind, i, j, -1))
    out.extend(Move("I", i) for i in range(1, k + 1))
    for i in range(1, k + 1):
        for w in range(1, g.order):
            out.append(Move("C", i, c=w))
    return out


def invert_finite_move(g: FiniteGroup, m: Move) -> Move:
    if m.kind == "C":
        return Move("C", m.i, c=g.inv(m.c))
    return invert_move(m)


def apply_finite(g: FiniteGroup, entries: tuple, m: Move) -> tuple:
    i = m.i - 1
    u = entries[i]
    t = g.table
    if m.kind in ("R", "L"):
        v = entries[m.j - 1]
        if m.sign < 0:
            v = g.inverses[v]
        new = t[u][v] if m.kind == "R" else t[v][u]
    elif m.kind == "I":
        new = g.inverses[u]
    else:
        new = g.conj(u, m.c)
    return entries[:i] + (new,) + entries[i + 1:]


def move_permutation(g: FiniteGroup, k: int, m: Move) -> tuple:
    size = check_domain(g, k)
    m.check(k)
    if m.kind == "C" and not 0 <= m.c < g.order:
        raise ValueError(f"conjugator {m.c} is not an element of {g}")
    n = g.order
    return tuple(encode(apply_finite(g, decode(idx, n, k), m), n) for idx in range(size))


def move_permutations(g: FiniteGroup, k: int) -> list:
    """Distinct nonidentity permutations induced by the elementary moves."""
    seen = set()
    out = []
    for m in finite_moves(g, k):
        p = move_permutation(g, k, m)
        if p not in seen and not schreier.is_identity(p):
            seen.add(p)
            out.append(p)
    return out


def fac_group(g: FiniteGroup, k: int, base_prefix: Sequence[int] = ()) -> StabilizerChain:
    size = check_domain(g, k)
    return StabilizerChain(size, move_permutations(g, k), base_prefix)


@dataclass
class LambdaReport:
    fac_order: int
    ac_order: int
    kernel_order: int
    kernel_generators: list = field(repr=False)
    n_k_size: int = 0


def kernel_of_lambda(g: FiniteGroup, k: int) -> LambdaReport:
    """Orders of FAC_k(G), AC_k(G) and the kernel of the restriction map.

    The chain's base starts with every point of N_k(G), so the kernel (the
    pointwise stabilizer of N_k(G)) is the chain level right after them.
    """
    nk = n_k_set(g, k)
    if not nk:
        raise EmptyNk(f"N_{k}({g}) is empty")
    chain = fac_group(g, k, base_prefix=nk)
    depth = len(nk)
    kernel_order = chain.stabilizer_order(depth)
    kernel_gens = chain.stabilizer_generators(depth)
    for p in kernel_gens:
        if any(p[x] != x for x in nk) or schreier.is_identity(p):
            raise AssertionError("kernel generator fails verification")
    fac = chain.order()
    return LambdaReport(fac, fac // kernel_order, kernel_order, kernel_gens, len(nk))


@dataclass
class OrbitReport:
    orbits: list
    transitive_on_n: bool
    n_k: list = field(repr=False, default_factory=list)

    @property
    def sizes(self) -> list:
        return [len(o) for o in self.orbits]


def orbits(g: FiniteGroup, k: int, domain: str = "all") -> OrbitReport:
    """Orbits of the move group on G^k (or only on N_k(G)), ordered by least point."""
    if domain not in ("all", "N"):
        raise ValueError("domain must be 'all' or 'N'")
    size = check_domain(g, k)
    gens = move_permutations(g, k)
    nk = n_k_set(g, k)
    nk_set = set(nk)
    points = range(size) if domain == "all" else nk
    seen = set()
    out = []
    for p in points:
        if p in seen:
            continue
        orb = [p]
        seen.add(p)
        for x in orb:
            for s in gens:
                y = s[x]
                if y not in seen:
                    seen.add(y)
                    orb.append(y)
        out.append(sorted(orb))
    transitive = bool(nk) and any(set(o) == nk_set for o in out)
    return OrbitReport(out, transitive, nk)


def format_report(lam: LambdaReport | None, orb: OrbitReport) -> str:
    sizes = ",".join(map(str, orb.sizes))
    if lam is None:
        return f"N_k=empty transitive_on_N=no orbit_sizes={sizes}"
    return (f"fac_order={lam.fac_order} ac_order={lam.ac_order} "
            f"kernel_order={lam.kernel_order} "
            f"transitive_on_N={'yes' if orb.transitive_on_n else 'no'} orbit_sizes={sizes}")


def small_groups() -> list:
    """Groups of order <= 16 used for experiments and cross-checks."""
    out = [cyclic(n) for n in range(1, 17)]
    out += [symmetric(3), dihedral(4), quaternion(), dihedral(5), dihedral(6),
            dihedral(7), dihedral(8),
            direct_product(cyclic(2), cyclic(2)), direct_product(cyclic(2), cyclic(4)),
            direct_product(cyclic(2), symmetric(3)), direct_product(cyclic(2), quaternion()),
            direct_product(cyclic(2), dihedral(4))]
    return out
