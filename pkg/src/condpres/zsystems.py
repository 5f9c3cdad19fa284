"""System-Z, its summing variant, and system-Z*."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .logic import KnowledgeBase
from .ranking import OCF


class InconsistentKBError(ValueError):
    pass


@dataclass(frozen=True)
class TolerancePartition:
    layers: tuple[tuple[int, ...], ...]

    def z_ranks(self) -> list[int]:
        n = sum(len(layer) for layer in self.layers)
        z = [0] * n
        for rank, layer in enumerate(self.layers):
            for i in layer:
                z[i] = rank
        return z


def tolerated(kb: KnowledgeBase, i: int, among) -> bool:
    """Some world verifies conditional ``i`` and falsifies none of ``among``."""
    among = list(among)
    ok = kb.verify[:, i].copy()
    if among:
        ok &= ~kb.falsify[:, among].any(axis=1)
    return bool(ok.any())


def tolerance_partition(kb: KnowledgeBase) -> TolerancePartition | None:
    remaining = list(range(len(kb)))
    layers = []
    while remaining:
        layer = [i for i in remaining if tolerated(kb, i, remaining)]
        if not layer:
            return None
        layers.append(tuple(layer))
        remaining = [i for i in remaining if i not in layer]
    return TolerancePartition(tuple(layers))


def _require_partition(kb: KnowledgeBase) -> TolerancePartition:
    part = tolerance_partition(kb)
    if part is None:
        raise InconsistentKBError("knowledge base is inconsistent: no tolerance partition exists")
    return part


def z_ranks(kb: KnowledgeBase) -> list[int]:
    return _require_partition(kb).z_ranks()


def kappa_z(kb: KnowledgeBase) -> OCF:
    """0 on worlds falsifying nothing, else 1 + the largest Z-rank falsified."""
    z = np.array(z_ranks(kb), dtype=np.int64)
    ranks = np.zeros(kb.signature.n_worlds, dtype=np.int64)
    if len(kb):
        hit = np.where(kb.falsify, z[None, :] + 1, 0)
        ranks = hit.max(axis=1)
    return OCF(kb.signature, ranks, np.ones_like(ranks, dtype=bool))


def _sum_falsified(kb: KnowledgeBase, weights) -> OCF:
    w = np.asarray(weights, dtype=np.int64)
    ranks = kb.falsify.astype(np.int64) @ w if len(kb) else np.zeros(kb.signature.n_worlds, dtype=np.int64)
    return OCF(kb.signature, ranks, np.ones(kb.signature.n_worlds, dtype=bool))


def kappa_z_c(kb: KnowledgeBase) -> OCF:
    """Sum of ``Z(r_i) + 1`` over the falsified conditionals."""
    return _sum_falsified(kb, [z + 1 for z in z_ranks(kb)])


@dataclass(frozen=True)
class ZStarRanks:
    ranks: tuple[int, ...]

    def __iter__(self):
        return iter(self.ranks)

    def __len__(self):
        return len(self.ranks)


def z_star_residuals(kb: KnowledgeBase, ranks) -> list[int]:
    """Left minus right side of the Z* equation for every conditional."""
    z = np.array(list(ranks), dtype=np.int64)
    out = []
    pen = kb.falsify.astype(np.int64) @ z if len(kb) else np.zeros(kb.signature.n_worlds, dtype=np.int64)
    for i in range(len(kb)):
        own = kb.falsify[:, i] * z[i]
        rest = pen - own
        min_f = rest[kb.falsify[:, i]].min() if kb.falsify[:, i].any() else 0
        min_v = rest[kb.verify[:, i]].min() if kb.verify[:, i].any() else 0
        out.append(int(z[i] + min_f - (1 + min_v)))
    return out


def z_star(kb: KnowledgeBase, cap: int | None = None) -> ZStarRanks | None:
    """Positive integer ranks solving the Z* equations exactly, or None.

    Iterates ``Z*(r_i) <- 1 + min_V - min_F`` from all ones in KB order.
    A fixed point with a non-positive rank, or an exhausted cap, means the
    system has no usable solution.
    """
    part = _require_partition(kb)
    n = len(kb)
    if n == 0:
        return ZStarRanks(())
    if cap is None:
        cap = 10 * n * (len(part.layers) - 1 + 2)
    ones = np.ones(n, dtype=np.int64)
    k, status, _, _ = _kernels.fixed_point(kb.verify, kb.falsify, np.zeros(kb.signature.n_worlds), ones, ones, clamp=False, cap=cap)
    if status != _kernels.CONVERGED or (k < 1).any():
        return None
    if any(z_star_residuals(kb, k)):
        return None
    return ZStarRanks(tuple(int(x) for x in k))


def kappa_star(kb: KnowledgeBase, zs: ZStarRanks | None = None) -> OCF:
    zs = zs if zs is not None else z_star(kb)
    if zs is None:
        raise InconsistentKBError("Z* equations have no solution (not a minimal-core set)")
    return _sum_falsified(kb, list(zs))


def core_witness(kb: KnowledgeBase) -> int | None:
    """Index of a conditional refuted only by worlds that refute another rule."""
    for i in range(len(kb)):
        fal = kb.falsify[:, i]
        if not fal.any():
            continue
        others = np.delete(kb.falsify, i, axis=1).any(axis=1)
        if not (fal & ~others).any():
            return i
    return None


def is_minimal_core(kb: KnowledgeBase) -> bool:
    return z_star(kb) is not None
