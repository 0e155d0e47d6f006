"""Brute-force reference procedures for checking the engines.

Everything here is deliberately naive recursion and exhaustive
enumeration: no rule machinery, no sharing with the engines, so the two
can be played against each other in tests and behind the CLI's --verify
flag.  Spaces whose enumeration would exceed a million candidates are
refused rather than truncated, since a truncated search could not back a
"least" or "most general" claim.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .signature import SimilaritySignature, SimMode
from .terms import App, Subst, Symbol, Term, Var, term_depth, vars_of

__all__ = [
    "SpaceTooLarge",
    "TermSpace",
    "enumerate_terms",
    "oracle_unifiers",
    "oracle_generalizers",
    "oracle_similarity",
    "MAX_ENUMERATION",
]

MAX_ENUMERATION = 1_000_000


class SpaceTooLarge(ValueError):
    def __init__(self, what: str, cardinality: int) -> None:
        self.cardinality = cardinality
        super().__init__(
            f"{what} has {cardinality} candidates, over the "
            f"{MAX_ENUMERATION} bound"
        )


@dataclass(frozen=True)
class TermSpace:
    """A finite term universe: all terms over the symbols and variables
    up to the depth bound (variables and constants have depth 1)."""

    symbols: tuple[Symbol, ...]
    max_depth: int
    variables: tuple[Var, ...] = ()

    def size(self) -> int:
        count = 0
        for _ in range(self.max_depth):
            count = len(self.variables) + sum(
                count ** s.arity for s in self.symbols
            )
        return count


def enumerate_terms(space: TermSpace) -> Iterator[Term]:
    """Yield every term of the space exactly once.

    Order: shallower terms first; within a depth, variables, then symbols
    in their given order, then argument tuples lexicographically by the
    enumeration order of the shallower layers.
    """
    total = space.size()
    if total > MAX_ENUMERATION:
        raise SpaceTooLarge("term space", total)

    shallower: list[Term] = []
    for depth in range(1, space.max_depth + 1):
        layer: list[Term] = []
        if depth == 1:
            layer.extend(space.variables)
            layer.extend(App(s) for s in space.symbols if s.arity == 0)
        else:
            for s in space.symbols:
                if s.arity == 0:
                    continue
                for combo in itertools.product(shallower, repeat=s.arity):
                    if max(term_depth(a) for a in combo) == depth - 1:
                        layer.append(App(s, combo))
        yield from layer
        shallower.extend(layer)


def _apply(binding: dict[Var, Term], t: Term) -> Term:
    if isinstance(t, Var):
        return binding.get(t, t)
    if not t.args:
        return t
    return App(t.fn, tuple(_apply(binding, a) for a in t.args))


def oracle_unifiers(t1: Term, t2: Term, space: TermSpace) -> list[Subst]:
    """All substitutions over the two terms' variables, with images drawn
    from the space, that make the instantiated terms equal."""
    variables = vars_of(t1)
    variables += [v for v in vars_of(t2) if v not in variables]
    candidates = list(enumerate_terms(space))
    total = len(candidates) ** len(variables)
    if total > MAX_ENUMERATION:
        raise SpaceTooLarge("unifier search", total)
    found = []
    for images in itertools.product(candidates, repeat=len(variables)):
        binding = dict(zip(variables, images))
        if _apply(binding, t1) == _apply(binding, t2):
            found.append(Subst(binding.items()))
    return found


def _match(pattern: Term, target: Term) -> Optional[Subst]:
    binding: dict[Var, Term] = {}

    def walk(p: Term, t: Term) -> bool:
        if isinstance(p, Var):
            if p in binding:
                return binding[p] == t
            binding[p] = t
            return True
        if isinstance(t, Var) or p.fn != t.fn:
            return False
        return all(walk(a, b) for a, b in zip(p.args, t.args))

    return Subst(binding.items()) if walk(pattern, target) else None


def oracle_generalizers(
    t1: Term, t2: Term, space: TermSpace
) -> list[tuple[Term, Subst, Subst]]:
    """All space terms that have both inputs as instances, with witnesses."""
    found = []
    for u in enumerate_terms(space):
        d1 = _match(u, t1)
        if d1 is None:
            continue
        d2 = _match(u, t2)
        if d2 is not None:
            found.append((u, d1, d2))
    return found


def oracle_similarity(
    sig: SimilaritySignature,
    t1: Term,
    t2: Term,
    mode: SimMode = SimMode.MAPPED,
) -> float:
    """Term similarity by direct recursion, folding all collected degrees
    at the end instead of along the way."""
    degrees: list[float] = []

    def walk(a: Term, b: Term) -> bool:
        if isinstance(a, Var) or isinstance(b, Var):
            return a == b
        look = sig.lookup(a.fn, b.fn)
        if look is None:
            return False
        if mode is SimMode.EQUAL_ARITY:
            if a.fn.arity != b.fn.arity:
                return False
            degrees.append(look.degree)
            return all(walk(x, y) for x, y in zip(a.args, b.args))
        degrees.append(look.degree)
        lo, hi = (a, b) if look.first_is_lower else (b, a)
        return all(
            walk(lo.args[i - 1], hi.args[j - 1]) for i, j in look.mapping.pairs
        )

    if not walk(t1, t2):
        return 0.0
    result = 1.0
    for d in degrees:
        result = sig.tnorm_and(result, d)
    return result
