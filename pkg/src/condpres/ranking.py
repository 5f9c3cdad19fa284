"""Ordinal conditional functions (ranking functions)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .logic import Conditional, Formula, Signature, World, parse_world, render_world

INF = math.inf


class RankingError(ValueError):
    pass


class InfiniteAntecedentError(RankingError):
    pass


class ConsistencyError(RankingError):
    def __init__(self, message: str, world: World | None = None):
        super().__init__(message)
        self.world = world


def _min_rank(values: np.ndarray, finite: np.ndarray, mask: np.ndarray):
    sel = mask & finite
    if not sel.any():
        return INF
    return int(values[sel].min())


@dataclass(frozen=True, eq=False)
class OCF:
    """Ranks of all worlds of a signature.

    ``values`` holds the finite ranks; ``finite`` marks which worlds have a
    finite rank. Construction normalizes so the least finite rank is 0.
    """

    signature: Signature
    values: np.ndarray
    finite: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.int64).copy()
        finite = np.asarray(self.finite, dtype=bool).copy()
        if values.shape != (self.signature.n_worlds,) or finite.shape != values.shape:
            raise RankingError("rank vector does not match the signature")
        if not finite.any():
            raise RankingError("an OCF needs at least one world of finite rank")
        values[~finite] = 0
        values[finite] -= values[finite].min()
        values.flags.writeable = False
        finite.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "finite", finite)

    @classmethod
    def from_ranks(cls, sig: Signature, ranks: Sequence) -> "OCF":
        ranks = list(ranks)
        if len(ranks) != sig.n_worlds:
            raise RankingError(f"expected {sig.n_worlds} ranks, got {len(ranks)}")
        finite = np.array([r != INF for r in ranks], dtype=bool)
        values = np.array([int(r) if r != INF else 0 for r in ranks], dtype=np.int64)
        if (values < 0).any():
            raise RankingError("ranks must be non-negative")
        return cls(sig, values, finite)

    @classmethod
    def from_mapping(cls, sig: Signature, ranks: Mapping, default=0) -> "OCF":
        out = [default] * sig.n_worlds
        for w, r in ranks.items():
            idx = parse_world(w, sig).index if isinstance(w, str) else (w.index if isinstance(w, World) else int(w))
            out[idx] = r
        return cls.from_ranks(sig, out)

    @classmethod
    def uniform(cls, sig: Signature) -> "OCF":
        n = sig.n_worlds
        return cls(sig, np.zeros(n, dtype=np.int64), np.ones(n, dtype=bool))

    def __getitem__(self, w) -> "int | float":
        idx = w.index if isinstance(w, World) else (parse_world(w, self.signature).index if isinstance(w, str) else int(w))
        return int(self.values[idx]) if self.finite[idx] else INF

    def ranks(self) -> list:
        return [int(v) if f else INF for v, f in zip(self.values, self.finite)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, OCF):
            return NotImplemented
        return (
            self.signature == other.signature
            and np.array_equal(self.finite, other.finite)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.signature, self.values.tobytes(), self.finite.tobytes()))

    def rank_of_set(self, mask: np.ndarray):
        return _min_rank(self.values, self.finite, mask)

    # -- interchange ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "signature": list(self.signature.atoms),
            "ranks": [
                {"world": render_world(i, self.signature), "rank": (int(v) if f else "inf")}
                for i, (v, f) in enumerate(zip(self.values, self.finite))
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict, sig: Signature | None = None) -> "OCF":
        file_sig = Signature(tuple(data["signature"]))
        if sig is not None and sig != file_sig:
            raise RankingError(f"OCF signature {file_sig.atoms} does not match {sig.atoms}")
        ranks: list = [None] * file_sig.n_worlds
        for entry in data["ranks"]:
            idx = parse_world(entry["world"], file_sig).index
            r = entry["rank"]
            ranks[idx] = INF if r == "inf" else int(r)
        if any(r is None for r in ranks):
            raise RankingError("OCF JSON does not list every world")
        return cls.from_ranks(file_sig, ranks)

    @classmethod
    def loads(cls, text: str, sig: Signature | None = None) -> "OCF":
        return cls.from_json(json.loads(text), sig)

    def render(self) -> str:
        width = max(len(render_world(i, self.signature)) for i in range(self.signature.n_worlds))
        lines = []
        for i, r in enumerate(self.ranks()):
            lines.append(f"{render_world(i, self.signature):<{width}}  {'inf' if r == INF else r}")
        return "\n".join(lines) + "\n"


def rank_formula(k: OCF, f: Formula):
    return k.rank_of_set(f.models(k.signature))


def rank_conditional(k: OCF, c: Conditional):
    ra = rank_formula(k, c.antecedent)
    if ra == INF:
        raise InfiniteAntecedentError(f"rank of antecedent of {c} is infinite")
    rab = k.rank_of_set(c.verification(k.signature))
    return rab - ra if rab != INF else INF


def accepts(k: OCF, c: Conditional) -> bool:
    """Ramsey test: the verifying worlds are strictly more plausible."""
    v = k.rank_of_set(c.verification(k.signature))
    f = k.rank_of_set(c.falsification(k.signature))
    return v < f


def accepts_all(k: OCF, conds: Iterable[Conditional]) -> bool:
    return all(accepts(k, c) for c in conds)


def believes(k: OCF, f: Formula) -> bool:
    return k.rank_of_set(~f.models(k.signature)) > 0


def beliefs(k: OCF) -> np.ndarray:
    return k.finite & (k.values == 0)


def conditionalize(k: OCF, f: Formula) -> OCF:
    """Shift the models of ``f`` down by their rank; everything else becomes infinite."""
    mask = f.models(k.signature)
    if rank_formula(k, f) == INF:
        raise InfiniteAntecedentError(f"cannot conditionalize on {f}: rank is infinite")
    return OCF(k.signature, k.values, k.finite & mask)


@dataclass(frozen=True, eq=False)
class RelativeChange:
    """``posterior - prior`` per world; infinite where the posterior is."""

    signature: Signature
    deltas: np.ndarray
    finite: np.ndarray

    def __getitem__(self, w):
        idx = w.index if isinstance(w, World) else int(w)
        return int(self.deltas[idx]) if self.finite[idx] else INF

    def values(self) -> list:
        return [int(d) if f else INF for d, f in zip(self.deltas, self.finite)]


def check_consistent(prior: OCF, posterior: OCF) -> None:
    if prior.signature != posterior.signature:
        raise RankingError("prior and posterior have different signatures")
    bad = np.flatnonzero(~prior.finite & posterior.finite)
    if bad.size:
        w = World(prior.signature, int(bad[0]))
        raise ConsistencyError(f"posterior gives finite rank to {w}, which the prior rules out", w)


def relative_change(prior: OCF, posterior: OCF) -> RelativeChange:
    check_consistent(prior, posterior)
    fin = posterior.finite.copy()
    deltas = np.where(fin, posterior.values - prior.values, 0)
    return RelativeChange(prior.signature, deltas, fin)
