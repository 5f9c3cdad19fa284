"""Construction of c-representations and c-revisions.

Only falsification constants are solved for (``kappa_i^+ = 0``). Strict
acceptance ``kappa(A_i B_i) < kappa(A_i !B_i)`` over integers becomes
``kappa_i^- >= 1 + min_V - min_F``, where the minima run over the
verifying / falsifying worlds of conditional ``i`` and add up the prior rank
and the constants of the other conditionals that world falsifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np

from . import _kernels
from .indifference import ConstantVector
from .logic import KnowledgeBase
from .ranking import OCF, RankingError, check_consistent
from .zsystems import InconsistentKBError, tolerance_partition

Mode = Literal["nonneg", "strictly_positive", "from_z_ranks"]
MODES = ("nonneg", "strictly_positive", "from_z_ranks")

BRUTE_FORCE_LIMIT = 10**7


class SolverError(RuntimeError):
    """No constants were found (which does not prove none exist)."""


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class SolverOptions:
    mode: Mode = "nonneg"
    iteration_cap: int | None = None
    prior: OCF | None = None
    brute_force_fallback: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.iteration_cap is not None and self.iteration_cap < 1:
            raise ValueError("iteration_cap must be positive")

    def cap_for(self, n: int) -> int:
        cap = self.iteration_cap if self.iteration_cap is not None else 10 * n * (n + 1)
        return max(cap, n)


@dataclass
class SolveReport:
    """Diagnostics of the last fixed-point run."""

    constants: ConstantVector | None
    converged: bool
    monotone: bool
    updates: int
    method: str = "fixed_point"
    lower: list[int] = field(default_factory=list)


def compose(prior: OCF, cv: ConstantVector, kb: KnowledgeBase) -> OCF:
    """``prior + kappa0 + sum kappa_i^+ + sum kappa_i^-``, renormalized.

    Infinite prior ranks stay infinite. ``kappa0`` is replaced by whatever
    constant makes the least finite rank 0.
    """
    if len(cv) != len(kb):
        raise CompositionError(f"{len(cv)} constants for {len(kb)} conditionals")
    if prior.signature != kb.signature:
        raise CompositionError("prior and knowledge base use different signatures")
    consts = list(cv.plus) + list(cv.minus)
    denom = math.lcm(*(c.denominator for c in consts)) if consts else 1
    plus = np.array([int(c * denom) for c in cv.plus], dtype=object)
    minus = np.array([int(c * denom) for c in cv.minus], dtype=object)
    fin = prior.finite
    total = prior.values.astype(object) * denom
    if len(kb):
        total = total + kb.verify.astype(object) @ plus + kb.falsify.astype(object) @ minus
    low = min(total[fin])
    shifted = total - low
    if any(x % denom for x in shifted[fin]):
        raise CompositionError("constants do not yield integer ranks")
    values = np.array([int(x // denom) if f else 0 for x, f in zip(shifted, fin)], dtype=np.int64)
    return OCF(prior.signature, values, fin)


def _world_sums(kb: KnowledgeBase, cv: ConstantVector, skip: int) -> list[Fraction]:
    out = []
    for w in range(kb.signature.n_worlds):
        s = Fraction(0)
        for j in range(len(kb)):
            if j == skip:
                continue
            if kb.verify[w, j]:
                s += cv.plus[j]
            elif kb.falsify[w, j]:
                s += cv.minus[j]
        out.append(s)
    return out


def acceptance_gap(kb: KnowledgeBase, cv: ConstantVector, prior: OCF | None, i: int) -> Fraction:
    """Slack of the acceptance inequality for conditional ``i`` (0-based).

    Equals ``kappa*(A_i !B_i) - kappa*(A_i B_i)`` for the composed OCF, so it
    is positive exactly when the composition accepts the conditional.
    """
    prior = prior or OCF.uniform(kb.signature)
    sums = _world_sums(kb, cv, i)
    fin = prior.finite
    ver = np.flatnonzero(kb.verify[:, i] & fin)
    fal = np.flatnonzero(kb.falsify[:, i] & fin)
    if ver.size == 0 or fal.size == 0:
        which = "verifying" if ver.size == 0 else "falsifying"
        raise RankingError(f"conditional {kb[i].label} has no {which} world of finite prior rank")
    min_v = min(int(prior.values[w]) + sums[w] for w in ver)
    min_f = min(int(prior.values[w]) + sums[w] for w in fal)
    return (cv.minus[i] - cv.plus[i]) - (min_v - min_f)


def _system(kb: KnowledgeBase, prior: OCF | None):
    prior = prior or OCF.uniform(kb.signature)
    if prior.signature != kb.signature:
        raise RankingError("prior and knowledge base use different signatures")
    fin = prior.finite
    return kb.verify[fin], kb.falsify[fin], prior.values[fin]


def _lower_bounds(kb: KnowledgeBase, opts: SolverOptions) -> np.ndarray:
    n = len(kb)
    if opts.mode == "nonneg":
        return np.zeros(n, dtype=np.int64)
    if opts.mode == "strictly_positive":
        return np.ones(n, dtype=np.int64)
    part = tolerance_partition(kb)
    if part is None:
        raise InconsistentKBError("knowledge base has no tolerance partition")
    return np.array([z + 1 for z in part.z_ranks()], dtype=np.int64)


def _precheck(kb: KnowledgeBase) -> None:
    if tolerance_partition(kb) is None:
        raise InconsistentKBError("knowledge base is inconsistent: no tolerance partition exists")


def solve(kb: KnowledgeBase, opts: SolverOptions = SolverOptions()) -> SolveReport:
    """Fixed-point search with diagnostics; see :func:`solve_constants`."""
    _precheck(kb)
    n = len(kb)
    lower = _lower_bounds(kb, opts)
    if n == 0:
        return SolveReport(ConstantVector.zeros(0), True, True, 0, lower=[])
    ver, fal, base = _system(kb, opts.prior)
    k, status, updates, mono = _kernels.fixed_point(
        ver, fal, base, lower, lower, clamp=True, cap=opts.cap_for(n)
    )
    if status == _kernels.CONVERGED:
        return SolveReport(ConstantVector.falsification(k.tolist()), True, mono, updates, lower=lower.tolist())
    if status == _kernels.CAP_EXHAUSTED and opts.brute_force_fallback:
        bound = _fallback_bound(lower, k)
        if bound is not None:
            found, ok = _kernels.brute_force(ver, fal, base, lower, bound)
            if ok:
                return SolveReport(ConstantVector.falsification(found.tolist()), False, mono,
                                   updates, "brute_force", lower.tolist())
    return SolveReport(None, False, mono, updates, lower=lower.tolist())


def _fallback_bound(lower: np.ndarray, last: np.ndarray) -> int | None:
    n = len(lower)
    bound = int(max(last.max(), lower.max())) + n + 1
    while bound >= lower.max() and _space(lower, bound) > BRUTE_FORCE_LIMIT:
        bound -= 1
    return bound if bound >= lower.max() else None


def _space(lower: np.ndarray, bound: int) -> int:
    return math.prod(int(bound - lo + 1) for lo in lower)


def solve_constants(kb: KnowledgeBase, opts: SolverOptions = SolverOptions()) -> ConstantVector | None:
    """Integer falsification constants making every conditional accepted.

    Ascending Gauss-Seidel iteration from the mode's lower bound, in KB
    order, until a full pass changes nothing. If the iteration cap runs out,
    an exhaustive search within a bounded box is tried; ``None`` means no
    solution was found.
    """
    return solve(kb, opts).constants


def c_representation(kb: KnowledgeBase, opts: SolverOptions = SolverOptions()) -> OCF:
    if opts.prior is not None:
        opts = SolverOptions(opts.mode, opts.iteration_cap, None, opts.brute_force_fallback)
    cv = solve_constants(kb, opts)
    if cv is None:
        raise SolverError("no constants found within the iteration cap")
    return compose(OCF.uniform(kb.signature), cv, kb)


def c_revision(prior: OCF, kb: KnowledgeBase, opts: SolverOptions = SolverOptions()) -> OCF:
    opts = SolverOptions(opts.mode, opts.iteration_cap, prior, opts.brute_force_fallback)
    cv = solve_constants(kb, opts)
    if cv is None:
        raise SolverError("no constants found within the iteration cap")
    post = compose(prior, cv, kb)
    check_consistent(prior, post)
    return post


def brute_force_constants(kb: KnowledgeBase, opts: SolverOptions = SolverOptions(), bound: int = 5) -> ConstantVector | None:
    """First vector in ``{lb..bound}^n`` (lexicographic) making every gap positive."""
    n = len(kb)
    lower = _lower_bounds(kb, opts)
    if n and _space(lower, bound) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"search space {_space(lower, bound)} exceeds {BRUTE_FORCE_LIMIT}")
    ver, fal, base = _system(kb, opts.prior)
    k, ok = _kernels.brute_force(ver, fal, base, lower, bound)
    return ConstantVector.falsification(k.tolist()) if ok else None
