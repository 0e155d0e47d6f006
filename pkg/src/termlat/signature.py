"""Similarity signatures: a fuzzy relation on functor symbols.

Two functors may be declared similar to a degree in (0, 1]; when their
arities differ, an injective argument-position mapping says which argument
slot of the smaller functor corresponds to which slot of the larger one.
The relation is reflexive (every symbol is similar to itself at degree 1)
and symmetric by construction: one entry is stored per unordered symbol
pair, oriented from the lower arity to the higher, and lookups answer in
either direction.

Degrees are combined with a t-norm, min by default.  The relation lifts
from symbols to whole terms in two flavours: a strict one that requires
equal arities and compares arguments positionally, and a mapped one that
follows the declared position mappings and ignores the larger term's
unmapped arguments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .terms import Symbol, Term, Var

__all__ = [
    "TNorm",
    "SimMode",
    "SignatureError",
    "ArgMapping",
    "SimilarityEntry",
    "SimLookup",
    "SimilaritySignature",
    "EMPTY_SIGNATURE",
    "load_signature",
    "load_signature_file",
    "term_similarity",
]


class TNorm(Enum):
    MIN = "min"
    PRODUCT = "product"


class SimMode(Enum):
    """How term-level similarity treats arities and argument order."""

    EQUAL_ARITY = "equal-arity"  # positional; 0 on any arity mismatch
    MAPPED = "mapped"            # follows argument-position mappings


class SignatureError(ValueError):
    """Invalid signature text or entry; carries the source line when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class ArgMapping:
    """Injective map of 1-based argument positions, smaller side to larger.

    ``pairs`` is sorted by source position and must be total on the smaller
    functor's positions (validated by :class:`SimilarityEntry`).
    """

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def identity(cls, n: int) -> "ArgMapping":
        return cls(tuple((i, i) for i in range(1, n + 1)))

    @classmethod
    def of(cls, mapping: dict[int, int]) -> "ArgMapping":
        return cls(tuple(sorted(mapping.items())))

    def __getitem__(self, source: int) -> int:
        for i, j in self.pairs:
            if i == source:
                return j
        raise KeyError(source)

    @property
    def targets(self) -> frozenset[int]:
        return frozenset(j for _, j in self.pairs)

    def inverse(self) -> "ArgMapping":
        return ArgMapping(tuple(sorted((j, i) for i, j in self.pairs)))

    def is_identity(self) -> bool:
        return all(i == j for i, j in self.pairs)

    def __str__(self) -> str:
        return "[" + ", ".join(f"{i}->{j}" for i, j in self.pairs) + "]"


@dataclass(frozen=True)
class SimilarityEntry:
    """One declared similarity, oriented lower arity -> higher arity."""

    lo: Symbol
    hi: Symbol
    degree: float
    mapping: ArgMapping

    def __post_init__(self) -> None:
        if self.lo == self.hi:
            raise SignatureError(
                f"self-similarity on {self.lo} is implicit at degree 1"
            )
        if self.lo.arity > self.hi.arity:
            raise SignatureError(
                f"entry {self.lo} ~ {self.hi} maps from the higher arity "
                "to the lower; swap the symbols"
            )
        if not 0.0 < self.degree <= 1.0:
            raise SignatureError(
                f"degree {self.degree} for {self.lo} ~ {self.hi} "
                "is outside (0, 1]"
            )
        sources = [i for i, _ in self.mapping.pairs]
        targets = [j for _, j in self.mapping.pairs]
        if sources != list(range(1, self.lo.arity + 1)):
            raise SignatureError(
                f"mapping {self.mapping} for {self.lo} ~ {self.hi} must "
                f"cover positions 1..{self.lo.arity} exactly once each"
            )
        if len(set(targets)) != len(targets):
            raise SignatureError(
                f"mapping {self.mapping} for {self.lo} ~ {self.hi} "
                "is not injective"
            )
        if any(not 1 <= j <= self.hi.arity for j in targets):
            raise SignatureError(
                f"mapping {self.mapping} for {self.lo} ~ {self.hi} has a "
                f"target outside 1..{self.hi.arity}"
            )

    def __str__(self) -> str:
        s = f"sim {self.lo} {self.hi} : {self.degree:g}"
        if not self.mapping.is_identity() or self.lo.arity != self.hi.arity:
            s += f" {self.mapping}"
        return s


@dataclass(frozen=True)
class SimLookup:
    """Result of a symbol-pair lookup.

    ``mapping`` always goes from the lower-arity symbol's positions into
    the higher-arity symbol's; ``first_is_lower`` says whether the first
    queried symbol is that lower side (always true for equal arities).
    """

    degree: float
    mapping: ArgMapping
    first_is_lower: bool


class SimilaritySignature:
    """An immutable set of similarity entries plus the t-norm to fold with."""

    def __init__(
        self,
        entries: Iterable[SimilarityEntry] = (),
        tnorm: TNorm = TNorm.MIN,
    ) -> None:
        self._entries = tuple(entries)
        self._tnorm = tnorm
        self._index: dict[tuple[Symbol, Symbol], SimilarityEntry] = {}
        for e in self._entries:
            if (e.lo, e.hi) in self._index:
                raise SignatureError(f"duplicate entry for pair {e.lo} ~ {e.hi}")
            self._index[(e.lo, e.hi)] = e
            self._index[(e.hi, e.lo)] = e

    @property
    def entries(self) -> tuple[SimilarityEntry, ...]:
        return self._entries

    @property
    def tnorm(self) -> TNorm:
        return self._tnorm

    def __len__(self) -> int:
        return len(self._entries)

    def tnorm_and(self, x: float, y: float) -> float:
        if self._tnorm is TNorm.MIN:
            return x if x <= y else y
        return x * y

    def lookup(self, f: Symbol, g: Symbol) -> Optional[SimLookup]:
        """Similarity of an ordered symbol pair, or None when unrelated.

        Reflexive pairs answer degree 1 with the identity mapping.  For a
        stored pair of equal arities queried against its storage order the
        mapping is inverted, so the returned mapping is always usable as
        "first symbol's positions to second's" when ``first_is_lower``.
        """
        if f == g:
            return SimLookup(1.0, ArgMapping.identity(f.arity), True)
        entry = self._index.get((f, g))
        if entry is None:
            return None
        if f.arity == g.arity:
            mapping = entry.mapping if entry.lo == f else entry.mapping.inverse()
            return SimLookup(entry.degree, mapping, True)
        return SimLookup(entry.degree, entry.mapping, entry.lo == f)

    def symbols(self) -> list[Symbol]:
        out: dict[Symbol, None] = {}
        for e in self._entries:
            out.setdefault(e.lo, None)
            out.setdefault(e.hi, None)
        return list(out)

    def check_min_transitivity(self) -> list[tuple[Symbol, Symbol, Symbol, float]]:
        """Triples (f, g, h) where degree(f,h) < min(degree(f,g), degree(g,h)).

        The relation is not closed over such gaps; this is a lint, not an
        error, because composing position mappings along a chain can
        conflict.
        """
        syms = self.symbols()
        violations = []
        for g in syms:
            for f in syms:
                if f == g:
                    continue
                fg = self.lookup(f, g)
                if fg is None:
                    continue
                for h in syms:
                    if h == f or h == g:
                        continue
                    gh = self.lookup(g, h)
                    if gh is None:
                        continue
                    bound = min(fg.degree, gh.degree)
                    fh = self.lookup(f, h)
                    have = fh.degree if fh else 0.0
                    if have < bound:
                        violations.append((f, g, h, bound))
        return violations

    def __str__(self) -> str:
        lines = [f"tnorm {self._tnorm.value}"]
        lines += [str(e) for e in self._entries]
        return "\n".join(lines)


EMPTY_SIGNATURE = SimilaritySignature()


# ---------------------------------------------------------------------------
# Term-level similarity
# ---------------------------------------------------------------------------

def term_similarity(
    sig: SimilaritySignature,
    t1: Term,
    t2: Term,
    mode: SimMode = SimMode.MAPPED,
) -> float:
    """Degree to which two terms are similar under the signature.

    A variable is similar only to itself (degree 1); a variable and any
    other term are similar to degree 0.  Two applications are similar to
    the functor-pair degree combined with the similarities of their
    corresponding arguments: positionally in EQUAL_ARITY mode (0 on any
    arity mismatch), via the declared position mapping in MAPPED mode,
    where the larger term's unmapped arguments are ignored.
    """
    if isinstance(t1, Var) or isinstance(t2, Var):
        return 1.0 if t1 == t2 else 0.0
    look = sig.lookup(t1.fn, t2.fn)
    if look is None:
        return 0.0
    degree = look.degree
    if mode is SimMode.EQUAL_ARITY:
        if t1.fn.arity != t2.fn.arity:
            return 0.0
        for a, b in zip(t1.args, t2.args):
            if degree == 0.0:
                return 0.0
            degree = sig.tnorm_and(degree, term_similarity(sig, a, b, mode))
        return degree
    lo, hi = (t1, t2) if look.first_is_lower else (t2, t1)
    for i, j in look.mapping.pairs:
        if degree == 0.0:
            return 0.0
        degree = sig.tnorm_and(
            degree, term_similarity(sig, lo.args[i - 1], hi.args[j - 1], mode)
        )
    return degree


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------
#
#   # comment
#   tnorm min                          (optional, at most once)
#   sim NAME/ARITY NAME/ARITY : DEGREE [i->j, ...]
#
# The first symbol's arity must not exceed the second's.  The mapping is
# required when the arities differ; omitted it defaults to the identity,
# which is only legal for equal arities.

_SIM_RE = re.compile(
    r"sim\s+([a-z0-9][A-Za-z0-9_]*)/(\d+)\s+([a-z0-9][A-Za-z0-9_]*)/(\d+)"
    r"\s*:\s*([0-9.eE+-]+)\s*(\[[^\]]*\])?\s*\Z"
)
_TNORM_RE = re.compile(r"tnorm\s+(\w+)\s*\Z")
_MAP_ITEM_RE = re.compile(r"\s*(\d+)\s*->\s*(\d+)\s*\Z")


def _parse_mapping(text: str, line_no: int) -> ArgMapping:
    body = text.strip()[1:-1].strip()
    if not body:
        raise SignatureError("empty argument mapping []", line_no)
    mapping: dict[int, int] = {}
    for item in body.split(","):
        m = _MAP_ITEM_RE.match(item)
        if not m:
            raise SignatureError(f"bad mapping item {item.strip()!r}", line_no)
        i, j = int(m.group(1)), int(m.group(2))
        if i in mapping:
            raise SignatureError(f"position {i} mapped twice", line_no)
        mapping[i] = j
    return ArgMapping.of(mapping)


def load_signature(
    text: str, tnorm_override: TNorm | None = None
) -> SimilaritySignature:
    """Parse and validate a similarity signature from its file format."""
    entries: list[SimilarityEntry] = []
    tnorm: TNorm | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _TNORM_RE.match(line)
        if m:
            if tnorm is not None:
                raise SignatureError("tnorm declared twice", line_no)
            try:
                tnorm = TNorm(m.group(1))
            except ValueError:
                raise SignatureError(f"unknown tnorm {m.group(1)!r}", line_no)
            continue
        m = _SIM_RE.match(line)
        if not m:
            raise SignatureError(f"unrecognized line {line!r}", line_no)
        lo = Symbol(m.group(1), int(m.group(2)))
        hi = Symbol(m.group(3), int(m.group(4)))
        try:
            degree = float(m.group(5))
        except ValueError:
            raise SignatureError(f"bad degree {m.group(5)!r}", line_no)
        if m.group(6) is not None:
            mapping = _parse_mapping(m.group(6), line_no)
        elif lo.arity == hi.arity:
            mapping = ArgMapping.identity(lo.arity)
        else:
            raise SignatureError(
                f"entry {lo} ~ {hi} needs an argument mapping because the "
                "arities differ",
                line_no,
            )
        try:
            entries.append(SimilarityEntry(lo, hi, degree, mapping))
        except SignatureError as e:
            raise SignatureError(str(e), line_no) from None
    return SimilaritySignature(entries, tnorm_override or tnorm or TNorm.MIN)


def load_signature_file(
    path: str, tnorm_override: TNorm | None = None
) -> SimilaritySignature:
    with open(path, "r", encoding="utf-8") as fh:
        return load_signature(fh.read(), tnorm_override)
