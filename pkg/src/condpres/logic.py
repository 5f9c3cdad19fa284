"""Propositional language over a finite signature.

Worlds are enumerated explicitly. Position 0 is the world in which every
atom is true; positions then count down the bit pattern with atom 0 as the
most significant bit, so for atoms ``p, b`` the order is ``pb, p!b, !pb,
!p!b``. A set of worlds is a boolean numpy array indexed by position.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

MAX_ATOMS = 24

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")
_RESERVED = {"top", "bot"}


class LogicError(ValueError):
    """Raised for malformed formulas, knowledge bases and worlds."""


class ParseError(LogicError):
    def __init__(self, message: str, pos: int | None = None, line: int | None = None):
        self.msg = message
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"col {pos + 1}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


# ---------------------------------------------------------------------------
# signature and worlds


@dataclass(frozen=True)
class Signature:
    atoms: tuple[str, ...]
    max_atoms: int = field(default=MAX_ATOMS, compare=False, repr=False)

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise LogicError("signature needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise LogicError(f"duplicate atoms in signature {atoms}")
        for a in atoms:
            if not _ATOM_RE.fullmatch(a) or a in _RESERVED:
                raise LogicError(f"invalid atom name {a!r}")
        if len(atoms) > self.max_atoms:
            raise LogicError(
                f"{len(atoms)} atoms exceed the cap of {self.max_atoms}"
            )

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def n_worlds(self) -> int:
        return 1 << len(self.atoms)

    def index(self, atom: str) -> int:
        try:
            return self.atoms.index(atom)
        except ValueError:
            raise LogicError(f"unknown atom {atom!r}") from None

    @cached_property
    def _positions(self) -> np.ndarray:
        return np.arange(self.n_worlds, dtype=np.int64)

    def atom_column(self, k: int) -> np.ndarray:
        """Truth value of atom ``k`` in every world, in enumeration order."""
        shift = len(self.atoms) - 1 - k
        return ((self._positions >> shift) & 1) == 0

    @cached_property
    def truth_table(self) -> np.ndarray:
        cols = [self.atom_column(k) for k in range(len(self.atoms))]
        table = np.stack(cols, axis=1)
        table.flags.writeable = False
        return table

    def worlds(self) -> Iterator["World"]:
        for i in range(self.n_worlds):
            yield World(self, i)

    def world(self, text: str) -> "World":
        return parse_world(text, self)


@dataclass(frozen=True)
class World:
    sig: Signature
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.sig.n_worlds:
            raise LogicError(f"world index {self.index} out of range")

    def truth(self, k: int) -> bool:
        return not (self.index >> (len(self.sig) - 1 - k)) & 1

    def assignment(self) -> tuple[bool, ...]:
        return tuple(self.truth(k) for k in range(len(self.sig)))

    def __str__(self) -> str:
        return render_world(self.index, self.sig)

    def __lt__(self, other: "World") -> bool:
        return self.index < other.index


def render_world(index: int, sig: Signature) -> str:
    n = len(sig)
    parts = []
    for k, atom in enumerate(sig.atoms):
        parts.append(atom if not (index >> (n - 1 - k)) & 1 else "!" + atom)
    return "".join(parts)


def parse_world(text: str, sig: Signature) -> World:
    """Inverse of :func:`render_world`; atoms must appear in signature order."""
    pos = 0
    index = 0
    n = len(sig)
    s = text.strip()
    for k, atom in enumerate(sig.atoms):
        neg = s.startswith("!", pos)
        if neg:
            pos += 1
        if not s.startswith(atom, pos):
            raise ParseError(f"expected atom {atom!r} in world {text!r}", pos)
        pos += len(atom)
        if neg:
            index |= 1 << (n - 1 - k)
    if pos != len(s):
        raise ParseError(f"trailing characters in world {text!r}", pos)
    return World(sig, index)


def world_set(worlds, sig: Signature) -> np.ndarray:
    mask = np.zeros(sig.n_worlds, dtype=bool)
    for w in worlds:
        mask[w.index if isinstance(w, World) else parse_world(w, sig).index] = True
    return mask


def iter_set(mask: np.ndarray, sig: Signature) -> list[World]:
    return [World(sig, int(i)) for i in np.flatnonzero(mask)]


# ---------------------------------------------------------------------------
# formulas


class Formula:
    """Base class of the formula syntax tree."""

    def models(self, sig: Signature) -> np.ndarray:
        raise NotImplementedError

    def atoms(self) -> set[str]:
        raise NotImplementedError

    def eval(self, w: World) -> bool:
        return bool(self.models(w.sig)[w.index])

    def __and__(self, other: "Formula") -> "Formula":
        return And((self, other))

    def __or__(self, other: "Formula") -> "Formula":
        return Or((self, other))

    def __invert__(self) -> "Formula":
        return Not(self)

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True, eq=True)
class Top(Formula):
    def models(self, sig):
        return np.ones(sig.n_worlds, dtype=bool)

    def atoms(self):
        return set()


@dataclass(frozen=True, eq=True)
class Bottom(Formula):
    def models(self, sig):
        return np.zeros(sig.n_worlds, dtype=bool)

    def atoms(self):
        return set()


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    name: str

    def models(self, sig):
        return sig.atom_column(sig.index(self.name))

    def atoms(self):
        return {self.name}


@dataclass(frozen=True, eq=True)
class Not(Formula):
    arg: Formula

    def models(self, sig):
        return ~self.arg.models(sig)

    def atoms(self):
        return self.arg.atoms()


@dataclass(frozen=True, eq=True)
class And(Formula):
    args: tuple[Formula, ...]

    def models(self, sig):
        out = np.ones(sig.n_worlds, dtype=bool)
        for a in self.args:
            out &= a.models(sig)
        return out

    def atoms(self):
        return set().union(*(a.atoms() for a in self.args))


@dataclass(frozen=True, eq=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def models(self, sig):
        out = np.zeros(sig.n_worlds, dtype=bool)
        for a in self.args:
            out |= a.models(sig)
        return out

    def atoms(self):
        return set().union(*(a.atoms() for a in self.args))


TOP = Top()
BOT = Bottom()


def models(f: Formula, sig: Signature) -> np.ndarray:
    return f.models(sig)


def evaluate(f: Formula, w: World) -> bool:
    return f.eval(w)


def conj(*fs: Formula) -> Formula:
    if not fs:
        return TOP
    return fs[0] if len(fs) == 1 else And(tuple(fs))


def literal(atom: str, positive: bool = True) -> Formula:
    return Atom(atom) if positive else Not(Atom(atom))


def render_formula(f: Formula, _prec: int = 0) -> str:
    # precedence: ';' 1, ',' 2, '!' 3
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bottom):
        return "bot"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!" + render_formula(f.arg, 3)
    if isinstance(f, And):
        if not f.args:
            return "top"
        s = ", ".join(render_formula(a, 2) for a in f.args)
        return f"({s})" if _prec > 2 else s
    if isinstance(f, Or):
        if not f.args:
            return "bot"
        s = "; ".join(render_formula(a, 1) for a in f.args)
        return f"({s})" if _prec > 1 else s
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# parser

_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[!,;|()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        if m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), start))
        else:
            tokens.append(("op", m.group("op"), start))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.text = text
        self.sig = sig
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def end_pos(self):
        return len(self.text)

    def expect(self, op: str):
        tok = self.peek()
        if tok is None or tok[1] != op:
            pos = tok[2] if tok else self.end_pos()
            if op == ")":
                raise ParseError("unbalanced parentheses: expected ')'", pos)
            raise ParseError(f"expected {op!r}", pos)
        self.i += 1

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while (tok := self.peek()) is not None and tok[1] == ";":
            self.i += 1
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while (tok := self.peek()) is not None and tok[1] == ",":
            self.i += 1
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end_pos())
        kind, val, pos = tok
        if val == "!":
            self.i += 1
            return Not(self.unary())
        if val == "(":
            self.i += 1
            f = self.disjunction()
            self.expect(")")
            return f
        if kind == "ident":
            self.i += 1
            if val == "top":
                return TOP
            if val == "bot":
                return BOT
            if not _ATOM_RE.fullmatch(val):
                raise ParseError(f"invalid atom name {val!r}", pos)
            if self.sig is not None and val not in self.sig.atoms:
                raise ParseError(f"unknown atom {val!r}", pos)
            return Atom(val)
        if val == ")":
            raise ParseError("unbalanced parentheses: unexpected ')'", pos)
        raise ParseError(f"unexpected token {val!r}", pos)

    def finish(self):
        tok = self.peek()
        if tok is not None:
            if tok[1] == ")":
                raise ParseError("unbalanced parentheses: unexpected ')'", tok[2])
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    """Parse ``!`` (not), ``,`` (and), ``;`` (or), ``top``/``bot`` and parentheses."""
    p = _Parser(text, sig)
    f = p.disjunction()
    p.finish()
    return f


# ---------------------------------------------------------------------------
# conditionals


class Indicator(enum.Enum):
    VERIFIES = 1
    FALSIFIES = 0
    NOT_APPLICABLE = "u"


@dataclass(frozen=True)
class Conditional:
    consequent: Formula
    antecedent: Formula = TOP
    label: str | None = None

    def verification(self, sig: Signature) -> np.ndarray:
        return self.antecedent.models(sig) & self.consequent.models(sig)

    def falsification(self, sig: Signature) -> np.ndarray:
        return self.antecedent.models(sig) & ~self.consequent.models(sig)

    def negated(self) -> "Conditional":
        return Conditional(Not(self.consequent), self.antecedent)

    def __str__(self) -> str:
        return render_conditional(self)


def render_conditional(c: Conditional) -> str:
    return f"({render_formula(c.consequent)} | {render_formula(c.antecedent)})"


def parse_conditional(text: str, sig: Signature | None = None) -> Conditional:
    """Parse ``(B | A)``; a bare formula ``B`` is read as the fact ``(B | top)``."""
    p = _Parser(text, sig)
    tok = p.peek()
    if tok is None:
        raise ParseError("empty conditional", 0)
    bar = [t for t in p.tokens if t[1] == "|"]
    if not bar:
        return Conditional(parse_formula(text, sig), TOP)
    if len(bar) > 1:
        raise ParseError("more than one '|' in conditional", bar[1][2])
    p.expect("(")
    cons = p.disjunction()
    p.expect("|")
    ante = p.disjunction()
    p.expect(")")
    p.finish()
    return Conditional(cons, ante)


def indicator(c: Conditional, w: World) -> Indicator:
    if not c.antecedent.eval(w):
        return Indicator.NOT_APPLICABLE
    return Indicator.VERIFIES if c.consequent.eval(w) else Indicator.FALSIFIES


def is_subconditional(d: Conditional, c: Conditional, sig: Signature) -> bool:
    """``d`` is a subconditional of ``c``: CD entails AB and C!D entails A!B."""
    dv, df = d.verification(sig), d.falsification(sig)
    cv, cf = c.verification(sig), c.falsification(sig)
    return not (dv & ~cv).any() and not (df & ~cf).any()


def is_perpendicular(d: Conditional, c: Conditional, sig: Signature) -> bool:
    """The antecedent of ``d`` lies inside one indicator class of ``c``."""
    ante = d.antecedent.models(sig)
    c_ante = c.antecedent.models(sig)
    for cls in (c.verification(sig), c.falsification(sig), ~c_ante):
        if not (ante & ~cls).any():
            return True
    return False


# ---------------------------------------------------------------------------
# knowledge bases


@dataclass(frozen=True)
class KnowledgeBase:
    signature: Signature
    conditionals: tuple[Conditional, ...] = ()

    def __post_init__(self):
        conds = tuple(self.conditionals)
        labelled = []
        for k, c in enumerate(conds, start=1):
            missing = (c.antecedent.atoms() | c.consequent.atoms()) - set(
                self.signature.atoms
            )
            if missing:
                raise LogicError(f"conditional {c} uses unknown atoms {sorted(missing)}")
            if not c.antecedent.models(self.signature).any():
                raise LogicError(f"unsatisfiable antecedent in {c}")
            labelled.append(c if c.label else Conditional(c.consequent, c.antecedent, f"r{k}"))
        labels = [c.label for c in labelled]
        if len(set(labels)) != len(labels):
            raise LogicError(f"duplicate labels in {labels}")
        object.__setattr__(self, "conditionals", tuple(labelled))

    def __len__(self) -> int:
        return len(self.conditionals)

    def __iter__(self):
        return iter(self.conditionals)

    def __getitem__(self, i: int) -> Conditional:
        return self.conditionals[i]

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.conditionals]

    def label_index(self, label: str) -> int:
        return self.labels.index(label)

    @cached_property
    def verify(self) -> np.ndarray:
        """Boolean (worlds x conditionals) matrix of verifying worlds."""
        return self._matrix(Conditional.verification)

    @cached_property
    def falsify(self) -> np.ndarray:
        return self._matrix(Conditional.falsification)

    def _matrix(self, fn) -> np.ndarray:
        m = np.zeros((self.signature.n_worlds, len(self.conditionals)), dtype=bool)
        for i, c in enumerate(self.conditionals):
            m[:, i] = fn(c, self.signature)
        m.flags.writeable = False
        return m

    def subset(self, indices: Sequence[int]) -> "KnowledgeBase":
        return KnowledgeBase(self.signature, tuple(self.conditionals[i] for i in indices))


def parse_kb(text: str, max_atoms: int = MAX_ATOMS) -> KnowledgeBase:
    """Read the line-oriented ``.ckb`` format.

    ``signature: a, b, c`` comes first; each further line is a conditional
    ``label: (B | A)`` with an optional label.
    """
    sig = None
    conds: list[Conditional] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if sig is None:
            m = re.fullmatch(r"(signature|sig)\s*:\s*(.*)", line)
            if not m:
                raise ParseError("missing signature line", line=lineno)
            atoms = [a.strip() for a in m.group(2).split(",") if a.strip()]
            try:
                sig = Signature(tuple(atoms), max_atoms=max_atoms)
            except LogicError as exc:
                raise ParseError(str(exc), line=lineno) from None
            continue
        label = None
        m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)\s*:", line)
        if m:
            label = m.group(1)
            body = line[m.end():]
            offset = m.end()
        else:
            body = line
            offset = 0
        if label is None:
            label = f"r{len(conds) + 1}"
        if label in seen:
            raise ParseError(f"duplicate label {label!r}", line=lineno)
        seen.add(label)
        try:
            c = parse_conditional(body, sig)
        except ParseError as exc:
            pos = None if exc.pos is None else exc.pos + offset
            raise ParseError(exc.msg, pos, lineno) from None
        if not c.antecedent.models(sig).any():
            raise ParseError(f"unsatisfiable antecedent in {c}", line=lineno)
        conds.append(Conditional(c.consequent, c.antecedent, label))
    if sig is None:
        raise ParseError("missing signature line")
    return KnowledgeBase(sig, tuple(conds))


def render_kb(kb: KnowledgeBase) -> str:
    lines = ["signature: " + ", ".join(kb.signature.atoms)]
    for c in kb:
        lines.append(f"{c.label}: {render_conditional(c)}")
    return "\n".join(lines) + "\n"
