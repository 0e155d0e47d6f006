"""Shared fixtures: reference signatures and random-corpus generators."""

from __future__ import annotations

import random

import pytest

from termlat import (
    App,
    ArgMapping,
    SimilarityEntry,
    SimilaritySignature,
    Subst,
    Symbol,
    TNorm,
    Term,
    Var,
    load_signature,
    vars_of,
)

# The four-entry signature used by the worked unification examples:
# two similar constant pairs, a swapped-argument pair at arity 2, and a
# cross-arity pair from l/2 into h/3.
SIG_EX2_TEXT = """
# unification example signature
sim a/0 b/0 : 0.7
sim c/0 d/0 : 0.6
sim f/2 g/2 : 0.9 [1->2, 2->1]
sim l/2 h/3 : 0.8 [1->2, 2->3]
"""

# The same relation under gift-shop vocabulary.
SIG_GIFT_TEXT = """
sim violet/0 lilac/0 : 0.7
sim chocolate/0 candy/0 : 0.6
sim pair/2 couple/2 : 0.9 [1->2, 2->1]
sim smallgiftbag/2 smallgiftbox/3 : 0.8 [1->2, 2->3]
"""

# Equal-arity signature used by the worked generalization example.
SIG_FG_TEXT = "sim f/2 g/2 : 0.9"


@pytest.fixture(scope="session")
def sig_ex2() -> SimilaritySignature:
    return load_signature(SIG_EX2_TEXT)


@pytest.fixture(scope="session")
def sig_gift() -> SimilaritySignature:
    return load_signature(SIG_GIFT_TEXT)


@pytest.fixture(scope="session")
def sig_fg() -> SimilaritySignature:
    return load_signature(SIG_FG_TEXT)


# ---------------------------------------------------------------------------
# Random corpus generation
# ---------------------------------------------------------------------------

CORPUS_SYMBOLS = (
    Symbol("a", 0),
    Symbol("b", 0),
    Symbol("c", 0),
    Symbol("f", 1),
    Symbol("g", 2),
    Symbol("h", 3),
)

LEFT_VARS = tuple(Var(n) for n in ("X1", "X2", "X3"))
RIGHT_VARS = tuple(Var(n) for n in ("Y1", "Y2", "Y3"))
SHARED_VARS = tuple(Var(n) for n in ("X", "Y", "Z"))


def random_term(
    rng: random.Random,
    max_depth: int = 4,
    variables: tuple[Var, ...] = SHARED_VARS,
    symbols: tuple[Symbol, ...] = CORPUS_SYMBOLS,
    var_bias: float = 0.25,
) -> Term:
    if variables and rng.random() < var_bias:
        return rng.choice(variables)
    if max_depth <= 1:
        leaves = [s for s in symbols if s.arity == 0]
        return App(rng.choice(leaves))
    s = rng.choice(symbols)
    return App(
        s,
        tuple(
            random_term(rng, max_depth - 1, variables, symbols, var_bias)
            for _ in range(s.arity)
        ),
    )


def random_ground_subst(
    rng: random.Random, t: Term, max_depth: int = 2
) -> Subst:
    return Subst(
        (v, random_term(rng, max_depth, variables=(), var_bias=0.0))
        for v in vars_of(t)
        if rng.random() < 0.8
    )


def random_signature(
    rng: random.Random,
    symbols: tuple[Symbol, ...] = CORPUS_SYMBOLS,
    equal_arity_only: bool = False,
    identity_only: bool = False,
    keep_probability: float = 0.5,
) -> SimilaritySignature:
    """A random valid signature over the corpus symbols.

    ``identity_only`` implies equal arities with identity mappings (the
    shape under which the positional and mapped rule sets must agree).
    """
    entries = []
    syms = list(symbols)
    for i, s1 in enumerate(syms):
        for s2 in syms[i + 1:]:
            lo, hi = (s1, s2) if s1.arity <= s2.arity else (s2, s1)
            if (equal_arity_only or identity_only) and lo.arity != hi.arity:
                continue
            if rng.random() >= keep_probability:
                continue
            degree = round(rng.uniform(0.05, 1.0), 3)
            if identity_only:
                mapping = ArgMapping.identity(lo.arity)
            else:
                targets = rng.sample(range(1, hi.arity + 1), lo.arity)
                mapping = ArgMapping.of(
                    {i0 + 1: t for i0, t in enumerate(targets)}
                )
            entries.append(SimilarityEntry(lo, hi, degree, mapping))
    return SimilaritySignature(entries, TNorm.MIN)


def mutate_similar(
    rng: random.Random, t: Term, sig: SimilaritySignature, rate: float = 0.4
) -> Term:
    """Randomly replace functors by similar ones, realigning arguments
    through the entry's position mapping (new positions get fresh ground
    leaves).  The result stays unifiable with t at some positive degree."""
    if isinstance(t, Var):
        return t
    args = tuple(mutate_similar(rng, a, sig, rate) for a in t.args)
    if rng.random() >= rate:
        return App(t.fn, args)
    partners = []
    for e in sig.entries:
        if e.lo == t.fn:
            partners.append((e.hi, e.mapping, True))
        elif e.hi == t.fn:
            partners.append((e.lo, e.mapping, False))
    if not partners:
        return App(t.fn, args)
    other, mapping, up = rng.choice(partners)
    leaves = [s for s in CORPUS_SYMBOLS if s.arity == 0]
    if up:
        # t.fn is the lower side: position i of t goes to mapping[i].
        new_args: list[Term] = [
            App(rng.choice(leaves)) for _ in range(other.arity)
        ]
        for i, j in mapping.pairs:
            new_args[j - 1] = args[i - 1]
    else:
        # t.fn is the higher side: keep only the mapped positions.
        new_args = [args[j - 1] for _, j in mapping.pairs]
    return App(other, tuple(new_args))


def random_pair(
    rng: random.Random,
    sig: SimilaritySignature | None = None,
    max_depth: int = 4,
    variables: tuple[Var, ...] = SHARED_VARS,
) -> tuple[Term, Term]:
    """A term pair, biased toward (fuzzily) unifiable cases."""
    roll = rng.random()
    if roll < 0.4:
        return (
            random_term(rng, max_depth, variables),
            random_term(rng, max_depth, variables),
        )
    base = random_term(rng, max_depth, variables)
    t1 = random_ground_subst(rng, base).apply(base)
    t2 = random_ground_subst(rng, base).apply(base)
    if sig is not None and roll < 0.8:
        t2 = mutate_similar(rng, t2, sig)
    return t1, t2


def randomized_unify(rng: random.Random, t1: Term, t2: Term, cfg):
    """Drive the unification rules with random move choices to normal form."""
    from termlat import EquationSystem, applicable_moves, apply_move, finish

    system = EquationSystem.initial(t1, t2)
    trace = []
    while True:
        moves = applicable_moves(system, cfg)
        if not moves:
            return finish(system, cfg, tuple(trace))
        system, ts = apply_move(system, rng.choice(moves), cfg)
        trace.append(ts)


def similar_variant(sig: SimilaritySignature, t1: Term, t2: Term) -> bool:
    """Equality up to bijective variable renaming and exchange of similar
    equal-arity functors.  Fuzzy solutions and generalizers are canonical
    only up to this relation, not up to renaming alone."""
    fwd: dict[Var, Var] = {}
    bwd: dict[Var, Var] = {}

    def walk(a: Term, b: Term) -> bool:
        if isinstance(a, Var) and isinstance(b, Var):
            return fwd.setdefault(a, b) == b and bwd.setdefault(b, a) == a
        if isinstance(a, Var) or isinstance(b, Var):
            return False
        if a.fn.arity != b.fn.arity or sig.lookup(a.fn, b.fn) is None:
            return False
        return all(walk(x, y) for x, y in zip(a.args, b.args))

    return walk(t1, t2)


def random_disjoint_pair(
    rng: random.Random, max_depth: int = 4
) -> tuple[Term, Term]:
    """A variable-disjoint pair, biased toward structural overlap."""
    if rng.random() < 0.5:
        return (
            random_term(rng, max_depth, LEFT_VARS),
            random_term(rng, max_depth, RIGHT_VARS),
        )
    base = random_term(rng, max_depth, LEFT_VARS)
    swap = Subst((v, rng.choice(RIGHT_VARS)) for v in vars_of(base))
    t2 = random_ground_subst(rng, swap.apply(base)).apply(swap.apply(base))
    return base, t2
