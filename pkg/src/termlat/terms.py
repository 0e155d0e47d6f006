"""First-order terms: syntax, substitutions, matching, renaming.

A term is either a variable or the application of a ranked functor symbol
to exactly as many argument terms as the symbol's arity.  Values are
immutable and all operations here are pure functions, so terms and
substitutions can be shared freely.

Concrete syntax is Prolog-like: functor names start with a lowercase
letter or a digit, variable names with an uppercase letter or underscore:

    f(X, g(a))      application of f/2 to a variable and a nested term
    mother_of       a constant (arity-0 functor), printed without parens
    _G7             a machine-generated variable
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

__all__ = [
    "Symbol",
    "Var",
    "App",
    "Term",
    "TermSyntaxError",
    "app",
    "parse_term",
    "print_term",
    "vars_of",
    "occurs_in",
    "is_ground",
    "term_size",
    "term_depth",
    "Subst",
    "FreshVars",
    "rename_apart",
    "subsumes",
    "variant_equal",
]

_NAME_RE = re.compile(r"[a-z0-9][A-Za-z0-9_]*\Z")
_VAR_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*\Z")
_FRESH_RE = re.compile(r"_G(\d+)\Z")


@dataclass(frozen=True)
class Symbol:
    """A ranked functor symbol.  f/2 and f/3 are distinct symbols."""

    name: str
    arity: int

    def __post_init__(self) -> None:
        if not _NAME_RE.match(self.name):
            raise ValueError(f"bad functor name {self.name!r}")
        if self.arity < 0:
            raise ValueError(f"negative arity for functor {self.name!r}")

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class Var:
    """A term variable."""

    name: str

    def __post_init__(self) -> None:
        if not _VAR_RE.match(self.name):
            raise ValueError(f"bad variable name {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    """Application of a functor symbol to exactly ``fn.arity`` subterms."""

    fn: Symbol
    args: tuple["Term", ...] = ()

    def __post_init__(self) -> None:
        if len(self.args) != self.fn.arity:
            raise ValueError(
                f"functor {self.fn} applied to {len(self.args)} argument(s)"
            )

    def __str__(self) -> str:
        return print_term(self)


Term = Union[Var, App]


def app(name: str, *args: Term) -> App:
    """Build ``name(*args)`` with the arity inferred from the arguments."""
    return App(Symbol(name, len(args)), tuple(args))


# ---------------------------------------------------------------------------
# Structural queries
# ---------------------------------------------------------------------------

def vars_of(t: Term) -> list[Var]:
    """Variables of ``t`` in left-to-right first-occurrence order."""
    seen: dict[Var, None] = {}

    def walk(u: Term) -> None:
        if isinstance(u, Var):
            seen.setdefault(u, None)
        else:
            for a in u.args:
                walk(a)

    walk(t)
    return list(seen)


def occurs_in(v: Var, t: Term) -> bool:
    if isinstance(t, Var):
        return t == v
    return any(occurs_in(v, a) for a in t.args)


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


def term_size(t: Term) -> int:
    """Number of nodes (variables and applications)."""
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def term_depth(t: Term) -> int:
    """Nesting depth; variables and constants have depth 1."""
    if isinstance(t, Var) or not t.args:
        return 1
    return 1 + max(term_depth(a) for a in t.args)


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------

class Subst(Mapping):
    """A finite map from variables to terms.

    Bindings of a variable to itself are dropped at construction, so the
    empty substitution is falsy.  Application is single-pass and
    simultaneous: images are not re-substituted, which is exactly what a
    solved-form (idempotent) substitution needs and what equation rewriting
    expects from intermediate ones.

    Iteration order is insertion order; equality ignores order.
    """

    __slots__ = ("_m",)

    def __init__(
        self,
        bindings: Mapping[Var, Term] | Iterable[tuple[Var, Term]] = (),
    ) -> None:
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        m: dict[Var, Term] = {}
        for v, t in items:
            if not isinstance(v, Var):
                raise TypeError(f"substitution domain must be variables, got {v!r}")
            if t != v:
                m[v] = t
        self._m = m

    def __getitem__(self, v: Var) -> Term:
        return self._m[v]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._m)

    def __len__(self) -> int:
        return len(self._m)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Subst):
            return self._m == other._m
        if isinstance(other, Mapping):
            return self._m == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"Subst({self._m!r})"

    def __str__(self) -> str:
        inner = ", ".join(f"{v} -> {print_term(t)}" for v, t in self._m.items())
        return "{" + inner + "}"

    def apply(self, t: Term) -> Term:
        """Replace every free occurrence of a domain variable, simultaneously."""
        if not self._m:
            return t
        if isinstance(t, Var):
            return self._m.get(t, t)
        if not t.args:
            return t
        return App(t.fn, tuple(self.apply(a) for a in t.args))

    def compose(self, other: "Subst") -> "Subst":
        """The substitution doing ``self`` first, then ``other``.

        Satisfies ``self.compose(other).apply(t) == other.apply(self.apply(t))``.
        """
        out: list[tuple[Var, Term]] = []
        for v, t in self._m.items():
            out.append((v, other.apply(t)))
        for v, t in other._m.items():
            if v not in self._m:
                out.append((v, t))
        return Subst(out)

    def bind(self, v: Var, t: Term) -> "Subst":
        """A copy with ``v -> t`` appended (last in insertion order)."""
        new = Subst()
        new._m = dict(self._m)
        if t != v:
            new._m[v] = t
        return new

    def restrict(self, keep: Iterable[Var]) -> "Subst":
        wanted = set(keep)
        return Subst((v, t) for v, t in self._m.items() if v in wanted)

    def is_idempotent(self) -> bool:
        """True if no domain variable occurs in any image."""
        return not any(
            occurs_in(v, t) for v in self._m for t in self._m.values()
        )


# ---------------------------------------------------------------------------
# Fresh variables and renaming
# ---------------------------------------------------------------------------

class FreshVars:
    """A monotone supply of machine variables _G0, _G1, ...

    User variables are expected not to use the ``_G<digits>`` form;
    :meth:`for_terms` additionally seeds the counter past any such names
    already present in the given terms, so generated names never collide
    even with terms produced by earlier sessions.

    The supply is the only mutable state in this package: share one
    per session, not across threads.
    """

    def __init__(self, start: int = 0) -> None:
        self._next = start

    @classmethod
    def for_terms(cls, *terms: Term) -> "FreshVars":
        start = 0
        for t in terms:
            for v in vars_of(t):
                m = _FRESH_RE.match(v.name)
                if m:
                    start = max(start, int(m.group(1)) + 1)
        return cls(start)

    def fresh(self) -> Var:
        v = Var(f"_G{self._next}")
        self._next += 1
        return v


def rename_apart(
    t1: Term, t2: Term, fresh: FreshVars | None = None
) -> tuple[Term, Term, Subst, Subst]:
    """Make the variable sets of ``t1`` and ``t2`` disjoint.

    Only the variables of ``t2`` that also occur in ``t1`` are renamed (to
    fresh ones), so already-disjoint inputs come back unchanged.  Returns
    the two terms plus the renaming applied to each side; the first
    renaming is always empty under this scheme.
    """
    shared = [v for v in vars_of(t2) if occurs_in(v, t1)]
    if not shared:
        return t1, t2, Subst(), Subst()
    if fresh is None:
        fresh = FreshVars.for_terms(t1, t2)
    r2 = Subst((v, fresh.fresh()) for v in shared)
    return t1, r2.apply(t2), Subst(), r2


# ---------------------------------------------------------------------------
# Matching, subsumption, variance
# ---------------------------------------------------------------------------

def subsumes(general: Term, specific: Term) -> Optional[Subst]:
    """One-sided match: a substitution taking ``general`` onto ``specific``.

    Variables of ``specific`` are treated as constants.  Returns None when
    no matcher exists.
    """
    binding: dict[Var, Term] = {}

    def match(g: Term, s: Term) -> bool:
        if isinstance(g, Var):
            prev = binding.get(g)
            if prev is None:
                binding[g] = s
                return True
            return prev == s
        if isinstance(s, Var) or g.fn != s.fn:
            return False
        return all(match(a, b) for a, b in zip(g.args, s.args))

    if not match(general, specific):
        return None
    return Subst(binding)


def variant_equal(t1: Term, t2: Term) -> bool:
    """True when the terms are equal up to a bijective variable renaming."""
    fwd: dict[Var, Var] = {}
    bwd: dict[Var, Var] = {}

    def walk(a: Term, b: Term) -> bool:
        if isinstance(a, Var) and isinstance(b, Var):
            return fwd.setdefault(a, b) == b and bwd.setdefault(b, a) == a
        if isinstance(a, Var) or isinstance(b, Var):
            return False
        if a.fn != b.fn:
            return False
        return all(walk(x, y) for x, y in zip(a.args, b.args))

    return walk(t1, t2)


# ---------------------------------------------------------------------------
# Concrete syntax
# ---------------------------------------------------------------------------

class TermSyntaxError(ValueError):
    """Malformed term text; carries the 0-based offset plus line/column."""

    def __init__(self, message: str, text: str, offset: int) -> None:
        self.offset = offset
        self.line = text.count("\n", 0, offset) + 1
        self.column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(
            f"syntax error at offset {offset} "
            f"(line {self.line}, column {self.column}): {message}"
        )


def parse_term(text: str) -> Term:
    """Parse one complete term.

    Grammar: ``TERM := VAR | NAME | NAME '(' TERM (',' TERM)* ')'`` with
    ``NAME := [a-z0-9][a-zA-Z0-9_]*`` and ``VAR := [A-Z_][a-zA-Z0-9_]*``.
    Whitespace is insignificant outside names.  Arities are inferred from
    argument counts.
    """
    n = len(text)
    pos = 0
    lower = "abcdefghijklmnopqrstuvwxyz"
    upper = lower.upper()
    digits = "0123456789"
    name_chars = lower + upper + digits + "_"

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def read_name() -> str:
        nonlocal pos
        start = pos
        while pos < n and text[pos] in name_chars:
            pos += 1
        return text[start:pos]

    def term() -> Term:
        nonlocal pos
        skip_ws()
        if pos >= n:
            raise TermSyntaxError("expected a term, found end of input", text, pos)
        c = text[pos]
        if c in upper or c == "_":
            return Var(read_name())
        if c not in lower and c not in digits:
            raise TermSyntaxError(f"unexpected character {c!r}", text, pos)
        name = read_name()
        skip_ws()
        if pos < n and text[pos] == "(":
            pos += 1
            args = [term()]
            skip_ws()
            while pos < n and text[pos] == ",":
                pos += 1
                args.append(term())
                skip_ws()
            if pos >= n or text[pos] != ")":
                raise TermSyntaxError("expected ',' or ')'", text, pos)
            pos += 1
            return App(Symbol(name, len(args)), tuple(args))
        return App(Symbol(name, 0))

    t = term()
    skip_ws()
    if pos != n:
        raise TermSyntaxError(f"unexpected trailing input {text[pos]!r}", text, pos)
    return t


def print_term(t: Term) -> str:
    """Render a term; round-trips through :func:`parse_term`."""
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.fn.name
    return f"{t.fn.name}({','.join(print_term(a) for a in t.args)})"
