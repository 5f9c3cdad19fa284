"""Conditional structures of worlds.

``GroupWord`` is an element of the free abelian group on the generators
``a_i^+``/``a_i^-`` of a knowledge base, ``WorldWord`` an element of the
free abelian group generated by the worlds. Both are stored as exponent
maps; the group operation is written multiplicatively.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .linalg import hermite_rows, integer_kernel, lattice_coordinates
from .logic import (
    TOP,
    Atom,
    Conditional,
    KnowledgeBase,
    LogicError,
    Not,
    Or,
    Signature,
    World,
    conj,
    parse_world,
    render_world,
)

PLUS = "+"
MINUS = "-"


def _canonical(items: Iterable[tuple]) -> tuple:
    acc: dict = {}
    for key, e in items:
        acc[key] = acc.get(key, 0) + int(e)
    return tuple(sorted((k, e) for k, e in acc.items() if e != 0))


@dataclass(frozen=True)
class GroupWord:
    """Exponent map ``(i, sign) -> int`` with zero exponents omitted.

    ``i`` is 1-based to match the generator names ``a1+``, ``a1-``, ...
    """

    exponents: tuple[tuple[tuple[int, str], int], ...] = ()

    @classmethod
    def of(cls, items: Mapping[tuple[int, str], int] | Iterable = ()) -> "GroupWord":
        if isinstance(items, Mapping):
            items = items.items()
        return cls(_canonical(items))

    @classmethod
    def generator(cls, i: int, sign: str) -> "GroupWord":
        return cls((((i, sign), 1),))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(_canonical(self.exponents + other.exponents))

    def __truediv__(self, other: "GroupWord") -> "GroupWord":
        return self * other ** -1

    def __pow__(self, k: int) -> "GroupWord":
        return GroupWord(_canonical((g, e * k) for g, e in self.exponents))

    def __getitem__(self, gen: tuple[int, str]) -> int:
        return dict(self.exponents).get(gen, 0)

    def is_identity(self) -> bool:
        return not self.exponents

    def __str__(self) -> str:
        return render_group_word(self)


IDENTITY = GroupWord()


def render_group_word(g: GroupWord) -> str:
    if not g.exponents:
        return "1"
    parts = []
    for (i, sign), e in sorted(g.exponents, key=lambda t: (t[0][0], t[0][1] == MINUS)):
        parts.append(f"a{i}{sign}" + (f"^{e}" if e != 1 else ""))
    return " ".join(parts)


def parse_group_word(text: str) -> GroupWord:
    text = text.strip()
    if text == "1":
        return IDENTITY
    items = []
    for tok in text.split():
        base, _, exp = tok.partition("^")
        if len(base) < 3 or base[0] != "a" or base[-1] not in "+-":
            raise LogicError(f"bad generator {tok!r}")
        items.append(((int(base[1:-1]), base[-1]), int(exp) if exp else 1))
    return GroupWord.of(items)


@dataclass(frozen=True)
class WorldWord:
    """Formal product of worlds, stored as sorted ``(world index, exponent)``."""

    sig: Signature
    exponents: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, sig: Signature, items: Mapping | Iterable = ()) -> "WorldWord":
        if isinstance(items, Mapping):
            items = items.items()
        norm = []
        for w, e in items:
            if isinstance(w, str):
                w = parse_world(w, sig)
            norm.append((w.index if isinstance(w, World) else int(w), e))
        return cls(sig, _canonical(norm))

    @classmethod
    def quotient(cls, sig: Signature, numerator: Iterable, denominator: Iterable = ()) -> "WorldWord":
        """``w1 * w2 * ... / (v1 * v2 * ...)`` from world names or objects."""
        return cls.of(sig, [(w, 1) for w in numerator] + [(w, -1) for w in denominator])

    @classmethod
    def from_vector(cls, sig: Signature, vec: Iterable[int], worlds: Iterable[int] | None = None) -> "WorldWord":
        vec = list(vec)
        idx = list(worlds) if worlds is not None else range(len(vec))
        return cls(sig, _canonical(zip(idx, vec)))

    def vector(self, n: int | None = None) -> np.ndarray:
        out = np.zeros(n if n is not None else self.sig.n_worlds, dtype=np.int64)
        for w, e in self.exponents:
            out[w] = e
        return out

    def __mul__(self, other: "WorldWord") -> "WorldWord":
        return WorldWord(self.sig, _canonical(self.exponents + other.exponents))

    def __truediv__(self, other: "WorldWord") -> "WorldWord":
        return self * other ** -1

    def __pow__(self, k: int) -> "WorldWord":
        return WorldWord(self.sig, _canonical((w, e * k) for w, e in self.exponents))

    def total(self) -> int:
        return sum(e for _, e in self.exponents)

    def is_identity(self) -> bool:
        return not self.exponents

    def __str__(self) -> str:
        return render_world_word(self)


def render_world_word(ww: WorldWord) -> str:
    if not ww.exponents:
        return "1"
    return " ".join(
        render_world(w, ww.sig) + (f"^{e}" if e != 1 else "") for w, e in ww.exponents
    )


# ---------------------------------------------------------------------------
# the homomorphism sigma_R


def _check_index(kb: KnowledgeBase, i: int) -> None:
    if not 1 <= i <= len(kb):
        raise IndexError(f"conditional index {i} out of range 1..{len(kb)}")


def sigma_i(kb: KnowledgeBase, i: int, w: World) -> GroupWord:
    """Generator contributed by the ``i``-th conditional (1-based) at ``w``."""
    _check_index(kb, i)
    if kb.verify[w.index, i - 1]:
        return GroupWord.generator(i, PLUS)
    if kb.falsify[w.index, i - 1]:
        return GroupWord.generator(i, MINUS)
    return IDENTITY


def sigma(kb: KnowledgeBase, w: World) -> GroupWord:
    items = []
    for i in range(len(kb)):
        if kb.verify[w.index, i]:
            items.append(((i + 1, PLUS), 1))
        elif kb.falsify[w.index, i]:
            items.append(((i + 1, MINUS), 1))
    return GroupWord(tuple(sorted(items)))


def structure_matrix(kb: KnowledgeBase, include_top: bool = False) -> np.ndarray:
    """Integer matrix of sigma_R: rows ``a1+, a1-, ..., an+, an-`` (+ a row of ones)."""
    m = kb.signature.n_worlds
    rows = np.zeros((2 * len(kb) + (1 if include_top else 0), m), dtype=np.int64)
    rows[0:2 * len(kb):2] = kb.verify.T
    rows[1:2 * len(kb):2] = kb.falsify.T
    if include_top:
        rows[-1] = 1
    return rows


def group_word_from_vector(vec: Iterable[int]) -> GroupWord:
    items = []
    for r, e in enumerate(vec):
        if e:
            items.append(((r // 2 + 1, PLUS if r % 2 == 0 else MINUS), int(e)))
    return GroupWord(tuple(sorted(items)))


def sigma_hat(kb: KnowledgeBase, ww: WorldWord) -> GroupWord:
    """Extension of sigma_R to world words: exponents add up world by world."""
    acc = [0] * (2 * len(kb))
    for w, e in ww.exponents:
        for i in range(len(kb)):
            if kb.verify[w, i]:
                acc[2 * i] += e
            elif kb.falsify[w, i]:
                acc[2 * i + 1] += e
    return group_word_from_vector(acc)


def top_equivalent(w1: WorldWord, w2: WorldWord) -> bool:
    return w1.total() == w2.total()


def structure_equivalent(kb: KnowledgeBase, w1: WorldWord, w2: WorldWord) -> bool:
    return sigma_hat(kb, w1) == sigma_hat(kb, w2)


def kernel_basis(
    kb: KnowledgeBase, include_top: bool = False, worlds: Iterable[int] | None = None
) -> list[WorldWord]:
    """Hermite-normal lattice basis of ker sigma_R (intersected with ker sigma_top).

    ``worlds`` restricts the generators to a subset of world indices (used
    for the finite-rank subgroup of an OCF).
    """
    mat = structure_matrix(kb, include_top)
    cols = list(range(kb.signature.n_worlds)) if worlds is None else sorted(worlds)
    sub = mat[:, cols].tolist()
    basis = integer_kernel(sub, n_cols=len(cols))
    return [WorldWord.from_vector(kb.signature, row, cols) for row in basis]


def in_kernel_span(basis: list[WorldWord], ww: WorldWord) -> bool:
    """Exact membership of ``ww`` in the integer span of a kernel basis."""
    if not basis:
        return ww.is_identity()
    n = basis[0].sig.n_worlds
    rows = hermite_rows([b.vector(n).tolist() for b in basis])
    return lattice_coordinates(rows, ww.vector(n).tolist()) is not None


def structure_table(kb: KnowledgeBase) -> list[tuple[World, GroupWord]]:
    return [(w, sigma(kb, w)) for w in kb.signature.worlds()]


def render_structure_table(kb: KnowledgeBase) -> str:
    rows = [(str(w), str(g)) for w, g in structure_table(kb)]
    width = max((len(r[0]) for r in rows), default=0)
    return "\n".join(f"{w:<{width}}  {g}" for w, g in rows) + "\n"


def table_from_structures(sig: Signature, table: Mapping[int, GroupWord], n: int) -> KnowledgeBase:
    """Build a knowledge base realizing a structure table.

    Each column must carry at most one of ``a_i^+``/``a_i^-`` per ``i``,
    each with exponent 1. Conditional ``i`` becomes ``(B_i | A_i)`` with
    ``A_i`` the worlds carrying either generator and ``B_i`` those carrying
    ``a_i^+``.
    """
    def world_formula(idx: int):
        w = World(sig, idx)
        return conj(*(Atom(a) if w.truth(k) else Not(Atom(a)) for k, a in enumerate(sig.atoms)))

    conds = []
    for i in range(1, n + 1):
        plus, minus = [], []
        for idx, g in table.items():
            e_plus, e_minus = g[(i, PLUS)], g[(i, MINUS)]
            if (e_plus, e_minus) not in {(0, 0), (1, 0), (0, 1)}:
                raise LogicError(f"world {render_world(idx, sig)} violates the structure condition for a{i}")
            if e_plus:
                plus.append(idx)
            elif e_minus:
                minus.append(idx)
        if not plus and not minus:
            # never applicable: cannot be expressed with a satisfiable antecedent
            raise LogicError(f"generator a{i} unused")
        ante = Or(tuple(world_formula(j) for j in plus + minus))
        cons = Or(tuple(world_formula(j) for j in plus)) if plus else Not(TOP)
        conds.append(Conditional(cons, ante))
    return KnowledgeBase(sig, tuple(conds))
