"""Conditional indifference and the principle of conditional preservation.

An OCF is indifferent with respect to a knowledge base when its finite ranks
decompose additively as ``kappa0 + sum kappa_i^+ + sum kappa_i^-`` over the
verified / falsified conditionals. The decomposition is searched by exact
rational elimination; :func:`kernel_vanishing_check` gives an independent
answer through the kernel of the structure homomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .linalg import solve_rational
from .logic import KnowledgeBase, World
from .ranking import INF, OCF, RankingError, check_consistent, rank_formula
from .structures import WorldWord, kernel_basis, structure_matrix


class PresuppositionError(RankingError):
    """A conditional's antecedent has infinite rank under the posterior."""

    def __init__(self, message: str, labels: list[str]):
        super().__init__(message)
        self.labels = labels


@dataclass(frozen=True)
class ConstantVector:
    kappa0: Fraction
    plus: tuple[Fraction, ...]
    minus: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.plus) != len(self.minus):
            raise ValueError("plus and minus constants must have the same length")
        object.__setattr__(self, "kappa0", Fraction(self.kappa0))
        object.__setattr__(self, "plus", tuple(Fraction(x) for x in self.plus))
        object.__setattr__(self, "minus", tuple(Fraction(x) for x in self.minus))

    @classmethod
    def falsification(cls, minus, kappa0=0) -> "ConstantVector":
        minus = tuple(minus)
        return cls(kappa0, (0,) * len(minus), minus)

    @classmethod
    def zeros(cls, n: int) -> "ConstantVector":
        return cls(0, (0,) * n, (0,) * n)

    def __len__(self) -> int:
        return len(self.plus)

    def value(self, kb: KnowledgeBase, index: int) -> Fraction:
        """``kappa0 + sum plus (verified) + sum minus (falsified)`` at one world."""
        total = self.kappa0
        for i in range(len(self.plus)):
            if kb.verify[index, i]:
                total += self.plus[i]
            elif kb.falsify[index, i]:
                total += self.minus[i]
        return total

    def to_json(self) -> dict:
        def enc(x: Fraction):
            return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        return {
            "kappa0": enc(self.kappa0),
            "plus": [enc(x) for x in self.plus],
            "minus": [enc(x) for x in self.minus],
        }


def _decompose_values(kb: KnowledgeBase, values: np.ndarray, finite: np.ndarray) -> ConstantVector | None:
    n = len(kb)
    rows: list[list[int]] = []
    rhs: list[int] = []
    seen: dict[tuple, int] = {}
    for w in np.flatnonzero(finite):
        key = tuple(kb.verify[w]) + tuple(kb.falsify[w])
        v = int(values[w])
        if key in seen:
            if seen[key] != v:
                return None
            continue
        seen[key] = v
        row = [1]
        for i in range(n):
            row += [int(kb.verify[w, i]), int(kb.falsify[w, i])]
        rows.append(row)
        rhs.append(v)
    if not rows:
        return ConstantVector.zeros(n)
    x = solve_rational(rows, rhs)
    if x is None:
        return None
    return ConstantVector(x[0], tuple(x[1::2]), tuple(x[2::2]))


def _infinite_antecedents(k: OCF, kb: KnowledgeBase) -> list[str]:
    return [c.label for c in kb if rank_formula(k, c.antecedent) == INF]


def decompose(k: OCF, kb: KnowledgeBase) -> ConstantVector | None:
    """Additive decomposition of ``k`` over ``kb`` on its finite worlds, if one exists.

    Free variables of the elimination are set to 0, so the vector is one
    witness among possibly many.
    """
    if _infinite_antecedents(k, kb):
        return None
    return _decompose_values(kb, k.values, k.finite)


def infinity_condition(k: OCF, kb: KnowledgeBase, prior: OCF | None = None) -> bool:
    """Every infinitely ranked world is explained by one conditional.

    Some conditional must apply to the world, and every world in the same
    indicator class of that conditional must be infinite too. With a
    ``prior``, worlds the prior already rules out are exempt.
    """
    inf_worlds = np.flatnonzero(~k.finite)
    if prior is not None:
        inf_worlds = [w for w in inf_worlds if prior.finite[w]]
    for w in inf_worlds:
        explained = False
        for i in range(len(kb)):
            if kb.verify[w, i]:
                cls = kb.verify[:, i]
            elif kb.falsify[w, i]:
                cls = kb.falsify[:, i]
            else:
                continue
            if not (cls & k.finite).any():
                explained = True
                break
        if not explained:
            return False
    return True


def is_indifferent(k: OCF, kb: KnowledgeBase) -> bool:
    return (
        not _infinite_antecedents(k, kb)
        and infinity_condition(k, kb)
        and decompose(k, kb) is not None
    )


def kappa_hat(k: OCF, ww: WorldWord):
    """Homomorphic extension ``sum r_j * kappa(w_j)``; INF if a world has infinite rank."""
    total = 0
    for w, e in ww.exponents:
        if not k.finite[w]:
            return INF
        total += e * int(k.values[w])
    return total


@dataclass(frozen=True)
class KernelVerdict:
    vanishes: bool
    witness: WorldWord | None = None
    value: int | None = None

    def __bool__(self) -> bool:
        return self.vanishes


def _quotient_witness(kb: KnowledgeBase, values: np.ndarray, worlds: list[int]) -> WorldWord | None:
    # look for w1*w2 / (w3*w4) in the kernel with nonzero value; readable witnesses
    mat = structure_matrix(kb)
    cols = {w: tuple(mat[:, w]) for w in worlds}
    by_struct: dict[tuple, list[tuple[int, int]]] = {}
    for a, b in combinations(worlds, 2):
        key = tuple(x + y for x, y in zip(cols[a], cols[b]))
        by_struct.setdefault(key, []).append((a, b))
    for pairs in by_struct.values():
        for (a, b), (c, d) in combinations(pairs, 2):
            if len({a, b, c, d}) < 4:
                continue
            if values[a] + values[b] != values[c] + values[d]:
                return WorldWord.of(kb.signature, [(a, 1), (b, 1), (c, -1), (d, -1)])
    return None


def kernel_vanishing_check(k: OCF, kb: KnowledgeBase, values: np.ndarray | None = None) -> KernelVerdict:
    """Does the extension of ``k`` vanish on ker sigma_R intersected with ker sigma_top?

    Only worlds of finite rank take part. On failure a witness world word
    with nonzero value is attached; a four-world quotient is preferred when
    one exists, otherwise a lattice basis element is returned.
    """
    vals = k.values if values is None else values
    worlds = [int(w) for w in np.flatnonzero(k.finite)]
    basis = kernel_basis(kb, include_top=True, worlds=worlds)
    bad = None
    for b in basis:
        v = sum(e * int(vals[w]) for w, e in b.exponents)
        if v != 0:
            bad = (b, v)
            break
    if bad is None:
        return KernelVerdict(True)
    quotient = _quotient_witness(kb, vals, worlds) if len(worlds) <= 256 else None
    if quotient is not None:
        v = sum(e * int(vals[w]) for w, e in quotient.exponents)
        return KernelVerdict(False, quotient, v)
    return KernelVerdict(False, bad[0], bad[1])


def structure_rank_witness(k: OCF, kb: KnowledgeBase) -> tuple[World, World] | None:
    """Two worlds with equal structure but different ranks, if any."""
    seen: dict[tuple, int] = {}
    for w in range(kb.signature.n_worlds):
        key = tuple(kb.verify[w]) + tuple(kb.falsify[w])
        if key in seen and k[seen[key]] != k[w]:
            return World(kb.signature, seen[key]), World(kb.signature, w)
        seen.setdefault(key, w)
    return None


# ---------------------------------------------------------------------------
# revisions


def is_revision_indifferent(prior: OCF, posterior: OCF, kb: KnowledgeBase) -> bool:
    """Posterior minus prior is indifferent with respect to ``kb``."""
    try:
        check_consistent(prior, posterior)
    except RankingError:
        return False
    if _infinite_antecedents(posterior, kb):
        return False
    if not infinity_condition(posterior, kb, prior=prior):
        return False
    return revision_constants(prior, posterior, kb) is not None


def revision_constants(prior: OCF, posterior: OCF, kb: KnowledgeBase) -> ConstantVector | None:
    check_consistent(prior, posterior)
    fin = posterior.finite
    deltas = np.where(fin, posterior.values - prior.values, 0)
    return _decompose_values(kb, deltas, fin)


def satisfies_conditional_preservation(prior: OCF, posterior: OCF, kb: KnowledgeBase) -> bool:
    bad = _infinite_antecedents(posterior, kb)
    if bad:
        raise PresuppositionError(
            f"antecedents of {', '.join(bad)} have infinite rank under the posterior", bad
        )
    return is_revision_indifferent(prior, posterior, kb)


def verdict_json(k: OCF, kb: KnowledgeBase) -> dict:
    """``{"indifferent", "constants", "witness"}`` as exchanged by the CLI."""
    cv = decompose(k, kb)
    ok = cv is not None and infinity_condition(k, kb)
    witness = None
    if not ok and not _infinite_antecedents(k, kb):
        kv = kernel_vanishing_check(k, kb)
        if kv.witness is not None:
            witness = {"kernel_element": str(kv.witness), "value": kv.value}
        else:
            unexplained = [str(World(kb.signature, int(w))) for w in np.flatnonzero(~k.finite)]
            witness = {"infinite_worlds": unexplained}
    return {
        "indifferent": bool(ok),
        "constants": cv.to_json() if ok else None,
        "witness": witness,
    }
