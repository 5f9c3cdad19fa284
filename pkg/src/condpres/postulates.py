"""Qualitative conditional-preservation postulates CR5-CR8 for single revisions."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .logic import Conditional, Signature, conj, is_perpendicular, is_subconditional, literal
from .ranking import OCF, RankingError, accepts, check_consistent

POSTULATES = ("CR5", "CR6", "CR7", "CR8")


def _conjunctions(sig: Signature, max_literals: int):
    atoms = sig.atoms
    for size in range(1, max_literals + 1):
        for chosen in combinations(atoms, size):
            for signs in product((True, False), repeat=size):
                yield conj(*(literal(a, s) for a, s in zip(chosen, signs)))


def probe_set(sig: Signature, max_literals: int) -> list[Conditional]:
    """Non-trivial conditionals ``(D | C)`` with literal-conjunction ``C`` and ``D``.

    Both sides have between 1 and ``max_literals`` literals over distinct
    atoms; probes whose verification or falsification set is empty are
    dropped, as are probes semantically equal to an earlier one.
    """
    if max_literals > len(sig):
        raise ValueError(f"max_literals {max_literals} exceeds {len(sig)} atoms")
    forms = list(_conjunctions(sig, max_literals))
    out = []
    seen = set()
    for c in forms:
        cm = c.models(sig)
        for d in forms:
            dm = d.models(sig)
            ver, fal = cm & dm, cm & ~dm
            if not ver.any() or not fal.any():
                continue
            key = (ver.tobytes(), fal.tobytes())
            if key in seen:
                continue
            seen.add(key)
            out.append(Conditional(d, c))
    return out


@dataclass
class PostulateResult:
    holds: bool = True
    witnesses: list[Conditional] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"holds": self.holds, "witnesses": [str(c) for c in self.witnesses]}


@dataclass
class PostulateReport:
    results: dict[str, PostulateResult]

    def __getitem__(self, name: str) -> PostulateResult:
        return self.results[name]

    @property
    def preservation_holds(self) -> bool:
        """CR5-CR7; CR8 goes beyond conditional preservation and is kept apart."""
        return all(self.results[p].holds for p in ("CR5", "CR6", "CR7"))

    def to_json(self) -> dict:
        return {p: self.results[p].to_json() for p in POSTULATES}


def check_cr(prior: OCF, posterior: OCF, rev: Conditional, probes: list[Conditional]) -> PostulateReport:
    if prior.signature != posterior.signature:
        raise RankingError("prior and posterior have different signatures")
    sig = prior.signature
    neg = rev.negated()
    res = {p: PostulateResult() for p in POSTULATES}

    def fail(name: str, probe: Conditional):
        res[name].holds = False
        res[name].witnesses.append(probe)

    for probe in probes:
        before = accepts(prior, probe)
        after = accepts(posterior, probe)
        if is_perpendicular(probe, rev, sig) and before != after:
            fail("CR5", probe)
        sub = is_subconditional(probe, rev, sig)
        if sub and before and not after:
            fail("CR6", probe)
        if is_subconditional(probe, neg, sig) and after and not before:
            fail("CR7", probe)
        if sub and not accepts(prior, probe.negated()) and not after:
            fail("CR8", probe)
    return PostulateReport(res)


def single_conditional_indifference(prior: OCF, posterior: OCF, rev: Conditional) -> bool:
    """The relative change is constant on each indicator class of ``rev``."""
    check_consistent(prior, posterior)
    sig = prior.signature
    fin = posterior.finite
    delta = posterior.values - prior.values
    ante = rev.antecedent.models(sig)
    for cls in (rev.verification(sig), rev.falsification(sig), ~ante):
        vals = delta[cls & fin]
        if vals.size and (vals != vals[0]).any():
            return False
    return True
