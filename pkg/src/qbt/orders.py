"""Monomial orders: lex, graded reverse lex, and block (elimination) orders.

An order exposes `key(mono) -> tuple`; monomials compare by their keys
(larger key = larger monomial).  Keys are plain tuples so comparisons run
at C speed.  Block orders split the variables at an index: the first block
dominates, and each block is compared by grevlex, which is exactly an
elimination order for the first block.
"""

from __future__ import annotations


class MonomialOrder:
    """`key` sorts ascending = smaller monomial first; `heap_key` sorts
    ascending = LARGER monomial first (for min-heaps popping the lead)."""

    name = "?"

    def key(self, m):
        raise NotImplementedError

    def heap_key(self, m):
        raise NotImplementedError

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and repr(self) == repr(other)

    def __hash__(self):
        return hash(repr(self))


class Lex(MonomialOrder):
    name = "lex"

    def key(self, m):
        return m

    def heap_key(self, m):
        return tuple(-e for e in m)


class Grevlex(MonomialOrder):
    name = "grevlex"

    def key(self, m):
        return (sum(m), tuple(-e for e in reversed(m)))

    def heap_key(self, m):
        return (-sum(m), tuple(reversed(m)))


class Block(MonomialOrder):
    """Elimination order: variables [0, split) dominate variables [split, n).

    Within each block the comparison is grevlex, so a Groebner basis under
    this order intersects down to the second block's variables.
    """

    def __init__(self, split: int):
        if split < 1:
            raise ValueError("block split must be >= 1")
        self.split = split
        self.name = f"block({split})"

    def key(self, m):
        a, b = m[: self.split], m[self.split :]
        return (sum(a), tuple(-e for e in reversed(a)), sum(b), tuple(-e for e in reversed(b)))

    def heap_key(self, m):
        a, b = m[: self.split], m[self.split :]
        return (-sum(a), tuple(reversed(a)), -sum(b), tuple(reversed(b)))


class EliminationOrder(MonomialOrder):
    """Eliminate an arbitrary index subset: the eliminated block dominates,
    grevlex within each block."""

    def __init__(self, elim, nvars: int):
        self.elim = tuple(sorted(elim))
        self.keep = tuple(i for i in range(nvars) if i not in set(self.elim))
        self.name = f"elim{self.elim}"

    def key(self, m):
        a = tuple(m[i] for i in self.elim)
        b = tuple(m[i] for i in self.keep)
        return (sum(a), tuple(-e for e in reversed(a)), sum(b), tuple(-e for e in reversed(b)))

    def heap_key(self, m):
        a = tuple(m[i] for i in self.elim)
        b = tuple(m[i] for i in self.keep)
        return (-sum(a), tuple(reversed(a)), -sum(b), tuple(reversed(b)))


class GrevlexPermuted(MonomialOrder):
    """Grevlex after permuting the variables; perm[i] = position of x_i in the
    reordered ring.  Used internally for saturation by a chosen variable
    (grevlex with that variable last)."""

    def __init__(self, perm):
        self.perm = tuple(perm)
        self.name = f"grevlex{self.perm}"

    def key(self, m):
        q = [0] * len(m)
        for i, pos in enumerate(self.perm):
            q[pos] = m[i]
        return (sum(m), tuple(-e for e in reversed(q)))

    def heap_key(self, m):
        q = [0] * len(m)
        for i, pos in enumerate(self.perm):
            q[pos] = m[i]
        return (-sum(m), tuple(reversed(q)))


LEX = Lex()
GREVLEX = Grevlex()


def order_from_spec(spec: str) -> MonomialOrder:
    s = spec.strip().lower()
    if s == "lex":
        return LEX
    if s == "grevlex":
        return GREVLEX
    if s.startswith("block:"):
        return Block(int(s[6:]))
    raise ValueError(f"unknown order spec {spec!r}")
