"""Permutation groups on {0, ..., V-1}: closure, orbits, blocks, recognition.

A permutation is a tuple p with p[i] the image of i; composition
(p * q)[i] = p[q[i]].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, lcm

from .errors import CapExceeded

Perm = tuple[int, ...]

CLOSURE_CAP = 2 * factorial(8)


def identity(V: int) -> Perm:
    return tuple(range(V))


def compose(p: Perm, q: Perm) -> Perm:
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycles(p: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        c = []
        j = i
        while not seen[j]:
            seen[j] = True
            c.append(j)
            j = p[j]
        out.append(tuple(c))
    return out


def cycle_type(p: Perm) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def is_transposition(p: Perm) -> bool:
    ct = cycle_type(p)
    return ct[0] == 2 and all(c == 1 for c in ct[1:])


def order_of(p: Perm) -> int:
    return lcm(*(len(c) for c in cycles(p))) if p else 1


def is_even(p: Perm) -> bool:
    return sum(len(c) - 1 for c in cycles(p)) % 2 == 0


def from_cycles(V: int, cyc, one_based: bool = True) -> Perm:
    """Build a permutation from cycle notation, e.g. from_cycles(4, [(1, 2), (3, 4)])."""
    p = list(range(V))
    off = 1 if one_based else 0
    for c in cyc:
        for a, b in zip(c, c[1:] + c[:1]):
            p[a - off] = b - off
    return tuple(p)


def closure(gens: list[Perm], V: int, cap: int = CLOSURE_CAP) -> set[Perm] | None:
    """All products of the generators; None once the size passes ``cap``."""
    e = identity(V)
    elems = {e}
    frontier = [e]
    gens = [g for g in gens if g != e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        if len(elems) > cap:
            return None
        frontier = nxt
    return elems


def orbits(gens: list[Perm], V: int) -> list[tuple[int, ...]]:
    parent = list(range(V))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for i, j in enumerate(g):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(V):
        groups.setdefault(find(i), []).append(i)
    return sorted(tuple(v) for v in groups.values())


def pair_orbits(gens: list[Perm], V: int) -> list[set]:
    """Orbits on ordered pairs (i, j), i != j."""
    seen: set = set()
    out = []
    for a in range(V):
        for b in range(V):
            if a == b or (a, b) in seen:
                continue
            orb = {(a, b)}
            stack = [(a, b)]
            while stack:
                x, y = stack.pop()
                for g in gens:
                    z = (g[x], g[y])
                    if z not in orb:
                        orb.add(z)
                        stack.append(z)
            seen |= orb
            out.append(orb)
    return out


def minimal_block(gens: list[Perm], V: int, seed: list[int]) -> tuple[tuple[int, ...], ...]:
    """Finest block system in which all points of ``seed`` share a block."""
    parent = list(range(V))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    queue = []
    for x in seed[1:]:
        ra, rb = find(seed[0]), find(x)
        if ra != rb:
            parent[ra] = rb
            queue.append((seed[0], x))
    while queue:
        a, b = queue.pop()
        for g in gens:
            c, d = find(g[a]), find(g[b])
            if c != d:
                parent[c] = d
                queue.append((g[a], g[b]))
    blocks: dict[int, list[int]] = {}
    for i in range(V):
        blocks.setdefault(find(i), []).append(i)
    return tuple(sorted(tuple(b) for b in blocks.values()))


def block_systems(gens: list[Perm], V: int) -> list[tuple[tuple[int, ...], ...]]:
    """All nontrivial block systems of a transitive group."""
    found: set = set()
    todo = [minimal_block(gens, V, [0, b]) for b in range(1, V)]
    while todo:
        part = todo.pop()
        if part in found or len(part) == 1:
            continue
        found.add(part)
        b0 = next(b for b in part if 0 in b)
        for x in range(V):
            if x not in b0:
                todo.append(minimal_block(gens, V, list(b0) + [x]))
    return sorted(found, key=lambda p: (len(p[0]), p))


def preserves(p: Perm, partition) -> bool:
    block_of = {}
    for k, b in enumerate(partition):
        for x in b:
            block_of[x] = k
    for b in partition:
        if len({block_of[p[x]] for x in b}) != 1:
            return False
    return True


@dataclass
class PermutationGroup:
    V: int
    generators: list[Perm]
    order: int | None
    elements: set[Perm] | None = field(default=None, repr=False)
    orbits: list[tuple[int, ...]] = field(default_factory=list)
    block_systems: list = field(default_factory=list)
    transitive: bool = False
    doubly_transitive: bool = False
    primitive: bool = False
    contains_transposition: bool = False
    is_symmetric: bool = False
    is_alternating: bool = False
    is_cyclic: bool = False
    is_klein: bool = False
    is_dihedral: bool = False

    def name(self) -> str:
        V = self.V
        if self.is_symmetric:
            return f"S{V}"
        if self.is_cyclic:
            return f"C{self.order}"
        if self.is_alternating:
            return f"A{V}"
        if self.is_klein:
            return "V4"
        if self.is_dihedral:
            return f"D{self.order}"
        return f"order {self.order}" if self.order else "unknown"

    def has_blocks(self, count: int, size: int) -> bool:
        return any(len(p) == count and len(p[0]) == size for p in self.block_systems)

    def to_dict(self) -> dict:
        return {
            "V": self.V,
            "order": self.order,
            "name": self.name(),
            "generators": [list(g) for g in self.generators],
            "orbits": [list(o) for o in self.orbits],
            "block_systems": [[list(b) for b in p] for p in self.block_systems],
            "transitive": self.transitive,
            "doubly_transitive": self.doubly_transitive,
            "primitive": self.primitive,
            "contains_transposition": self.contains_transposition,
            "is_symmetric": self.is_symmetric,
            "is_alternating": self.is_alternating,
            "is_cyclic": self.is_cyclic,
            "is_klein": self.is_klein,
            "is_dihedral": self.is_dihedral,
        }


def _is_dihedral(elems: set[Perm], order: int, V: int) -> bool:
    if order < 6 or order % 2:
        return False
    m = order // 2
    e = identity(V)
    rots = [r for r in elems if order_of(r) == m]
    invs = [s for s in elems if s != e and order_of(s) == 2]
    for r in rots:
        sub = {e}
        x = r
        while x != e:
            sub.add(x)
            x = compose(r, x)
        rinv = inverse(r)
        for s in invs:
            if s not in sub and compose(compose(s, r), s) == rinv:
                return True
    return False


def analyze_group(perms, V: int, cap: int = CLOSURE_CAP) -> PermutationGroup:
    """Closure and structural flags of the group generated by ``perms``."""
    gens = [tuple(int(x) for x in p) for p in perms]
    for g in gens:
        if sorted(g) != list(range(V)):
            raise ValueError(f"{g} is not a permutation of {V} points")
    e = identity(V)
    gens = sorted({g for g in gens if g != e})
    orbs = orbits(gens, V)
    transitive = len(orbs) == 1
    doubly = V >= 2 and transitive and len(pair_orbits(gens, V)) == 1
    if V == 1:
        doubly = True
    blocks = block_systems(gens, V) if transitive else []
    primitive = transitive and not blocks
    elems = closure(gens, V, cap)
    if elems is None:
        has_t = any(is_transposition(g) for g in gens)
        partial = {"transitive": transitive, "doubly_transitive": doubly, "primitive": primitive, "transposition_in_generators": has_t}
        if primitive and has_t:
            # primitive + transposition forces the full symmetric group
            return PermutationGroup(
                V, gens, factorial(V), None, orbs, blocks, transitive, doubly, primitive,
                True, True, False, V <= 2, False, False,
            )
        raise CapExceeded("closure exceeds the cap and no certificate applies", partial)
    order = len(elems)
    has_transposition = any(is_transposition(g) for g in elems)
    is_sym = order == factorial(V)
    is_alt = V >= 3 and order == factorial(V) // 2 and all(is_even(g) for g in elems)
    is_cyc = any(order_of(g) == order for g in elems)
    is_klein = order == 4 and not is_cyc
    is_dih = _is_dihedral(elems, order, V)
    return PermutationGroup(
        V, gens, order, elems, orbs, blocks, transitive, doubly, primitive,
        has_transposition, is_sym, is_alt, is_cyc, is_klein, is_dih,
    )
