"""Generalization (anti-unification) engines, crisp and fuzzy.

Given two terms with no variables in common, compute the most specific
term that has both as instances, together with the two witnessing
substitutions and, in the fuzzy modes, a truth degree:

* CRISP        -- classic least general generalization; disagreeing
  subterm pairs become variables, with the same pair reusing the same
  variable.
* FUNCTOR_WEAK -- functors declared similar at equal arity generalize to
  the left functor instead of collapsing to a variable, lowering the
  degree; argument pairing stays positional.
* FULL         -- additionally tolerates arity and argument-order
  mismatch: the generalizer keeps the lower-arity functor and pairs
  arguments through the declared position mapping, dropping the larger
  side's unmapped arguments (recorded on the trace step).

The computation threads the pair of substitutions left to right through
the argument positions.  Before generalizing an argument pair it tries to
"unapply" the substitutions: if an already-introduced variable is bound on
each side to that pair (exactly in crisp mode, up to the current degree in
fuzzy modes), the pair is replaced by that variable.  This is what makes
repeated disagreements map to one shared variable.

Generalization is total: in the worst case the result is a single fresh
variable binding the whole of each input.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .signature import EMPTY_SIGNATURE, SimilaritySignature, SimMode, term_similarity
from .terms import (
    App,
    FreshVars,
    Subst,
    Term,
    Var,
    rename_apart,
    vars_of,
)

__all__ = [
    "GenMode",
    "GenConfig",
    "GenStep",
    "GenResult",
    "GEN_EQUAL_VARS",
    "GEN_VAR_TERM",
    "GEN_UNEQUAL_FUNCTORS",
    "GEN_EQUAL_FUNCTORS",
    "FGEN_EQUAL_VARS",
    "FGEN_VAR_TERM",
    "FGEN_DISSIMILAR",
    "FGEN_SIMILAR",
    "FGEN_LEFT",
    "FGEN_RIGHT",
    "generalize",
    "unapply",
    "fuzzy_unapply",
]


class GenMode(Enum):
    CRISP = "crisp"
    FUNCTOR_WEAK = "weak"
    FULL = "full"


GEN_EQUAL_VARS = "Equal Variables"
GEN_VAR_TERM = "Variable-Term"
GEN_UNEQUAL_FUNCTORS = "Unequal Functors"
GEN_EQUAL_FUNCTORS = "Equal Functors"
FGEN_EQUAL_VARS = "Fuzzy Equal Variables"
FGEN_VAR_TERM = "Fuzzy Variable-Term"
FGEN_DISSIMILAR = "Dissimilar Functors"
FGEN_SIMILAR = "Similar Functors"
FGEN_LEFT = "Functor/Arity Similarity Left"
FGEN_RIGHT = "Functor/Arity Similarity Right"

# Epsilon absorbing float noise in degree comparisons (product t-norm only;
# min never computes new values).
_EPS = 1e-12


@dataclass
class GenConfig:
    mode: GenMode = GenMode.CRISP
    signature: SimilaritySignature | None = None  # ignored in CRISP mode
    auto_rename: bool = True

    def sig(self) -> SimilaritySignature:
        return self.signature if self.signature is not None else EMPTY_SIGNATURE

    def sim_mode(self) -> SimMode:
        return (
            SimMode.MAPPED if self.mode is GenMode.FULL else SimMode.EQUAL_ARITY
        )

    def validate(self) -> None:
        if self.mode is GenMode.FUNCTOR_WEAK:
            for e in self.sig().entries:
                if e.lo.arity != e.hi.arity:
                    raise ValueError(
                        "FUNCTOR_WEAK mode requires equal-arity entries, "
                        f"got {e.lo} ~ {e.hi}"
                    )


@dataclass(frozen=True)
class GenStep:
    """One axiom or rule firing: the pair it consumed, what it produced,
    and the degree across it.  Rules with antecedents are recorded after
    their sub-derivations, so the trace reads innermost-first."""

    rule: str
    left: Term
    right: Term
    generalizer: Term
    degree_before: float
    degree_after: float
    dropped: tuple[tuple[int, Term], ...] = ()


@dataclass(frozen=True)
class GenResult:
    """Generalizer ``t`` with substitutions taking it onto each input.

    In CRISP mode ``sigma_i.apply(generalizer)`` equals input ``i``
    exactly; in the fuzzy modes under the min t-norm it is similar to it
    to at least ``degree``.  When the inputs shared variables and
    auto-renaming was on, ``renaming1``/``renaming2`` record how the
    inputs were made disjoint, and the substitutions target the renamed
    inputs.
    """

    generalizer: Term
    sigma1: Subst
    sigma2: Subst
    degree: float
    trace: tuple[GenStep, ...] = ()
    renaming1: Subst = Subst()
    renaming2: Subst = Subst()


# ---------------------------------------------------------------------------
# Unapply
# ---------------------------------------------------------------------------

def unapply(
    t1: Term, t2: Term, sigma1: Subst, sigma2: Subst
) -> tuple[Term, Term]:
    """Replace the pair by an existing variable whose bindings witness it.

    Scans the shared domain in insertion order and returns ``(X, X)`` for
    the first X with ``sigma1[X] == t1`` and ``sigma2[X] == t2``; the pair
    itself when no such variable exists.
    """
    for x, image1 in sigma1.items():
        if image1 == t1 and x in sigma2 and sigma2[x] == t2:
            return x, x
    return t1, t2


def fuzzy_unapply(
    t1: Term,
    t2: Term,
    sigma1: Subst,
    sigma2: Subst,
    alpha: float,
    sig: SimilaritySignature,
    mode: SimMode = SimMode.MAPPED,
) -> tuple[Term, Term]:
    """Like :func:`unapply`, but a binding witnesses its side of the pair
    when it is similar to it to degree at least ``alpha``."""
    for x, image1 in sigma1.items():
        if x not in sigma2:
            continue
        if (
            term_similarity(sig, t1, image1, mode) + _EPS >= alpha
            and term_similarity(sig, t2, sigma2[x], mode) + _EPS >= alpha
        ):
            return x, x
    return t1, t2


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------

def _var_axioms(mode: GenMode) -> tuple[str, str]:
    if mode is GenMode.CRISP:
        return GEN_EQUAL_VARS, GEN_VAR_TERM
    return FGEN_EQUAL_VARS, FGEN_VAR_TERM


def _gen(
    t1: Term,
    t2: Term,
    s1: Subst,
    s2: Subst,
    alpha: float,
    cfg: GenConfig,
    fresh: FreshVars,
    trace: list[GenStep],
) -> tuple[Term, Subst, Subst, float]:
    equal_vars, var_term = _var_axioms(cfg.mode)

    if isinstance(t1, Var) and t1 == t2:
        trace.append(GenStep(equal_vars, t1, t2, t1, alpha, alpha))
        return t1, s1, s2, alpha

    if isinstance(t1, Var) or isinstance(t2, Var):
        x = fresh.fresh()
        trace.append(GenStep(var_term, t1, t2, x, alpha, alpha))
        return x, s1.bind(x, t1), s2.bind(x, t2), alpha

    f, g = t1.fn, t2.fn
    sig = cfg.sig()
    dropped: tuple[tuple[int, Term], ...] = ()

    if cfg.mode is GenMode.CRISP:
        if f != g:
            x = fresh.fresh()
            trace.append(GenStep(GEN_UNEQUAL_FUNCTORS, t1, t2, x, alpha, alpha))
            return x, s1.bind(x, t1), s2.bind(x, t2), alpha
        rule, root, beta = GEN_EQUAL_FUNCTORS, f, 1.0
        pairs = list(zip(t1.args, t2.args))
    else:
        look = sig.lookup(f, g)
        if look is None:
            x = fresh.fresh()
            trace.append(GenStep(FGEN_DISSIMILAR, t1, t2, x, alpha, alpha))
            return x, s1.bind(x, t1), s2.bind(x, t2), alpha
        beta = look.degree
        if cfg.mode is GenMode.FUNCTOR_WEAK:
            rule, root = FGEN_SIMILAR, f
            pairs = list(zip(t1.args, t2.args))
        elif f.arity <= g.arity:
            # Keep the left (lower or equal arity) functor; pair argument i
            # of the left term with its mapped position on the right.
            rule, root = FGEN_LEFT, f
            pairs = [
                (t1.args[i - 1], t2.args[j - 1]) for i, j in look.mapping.pairs
            ]
            dropped = tuple(
                (j, t2.args[j - 1])
                for j in range(1, g.arity + 1)
                if j not in look.mapping.targets
            )
        else:
            # Right side has the lower arity; its mapping goes into the left.
            look = sig.lookup(g, f)
            assert look is not None and look.first_is_lower
            rule, root = FGEN_RIGHT, g
            pairs = [
                (t1.args[j - 1], t2.args[i - 1]) for i, j in look.mapping.pairs
            ]
            dropped = tuple(
                (j, t1.args[j - 1])
                for j in range(1, f.arity + 1)
                if j not in look.mapping.targets
            )

    degree = alpha if cfg.mode is GenMode.CRISP else sig.tnorm_and(alpha, beta)
    cur1, cur2 = s1, s2
    parts: list[Term] = []
    for a, b in pairs:
        if cfg.mode is GenMode.CRISP:
            a, b = unapply(a, b, cur1, cur2)
        else:
            a, b = fuzzy_unapply(a, b, cur1, cur2, degree, sig, cfg.sim_mode())
        u, cur1, cur2, degree = _gen(a, b, cur1, cur2, degree, cfg, fresh, trace)
        parts.append(u)

    result = App(root, tuple(parts))
    trace.append(GenStep(rule, t1, t2, result, alpha, degree, dropped))
    return result, cur1, cur2, degree


def generalize(
    t1: Term,
    t2: Term,
    cfg: GenConfig | None = None,
    fresh: FreshVars | None = None,
) -> GenResult:
    """Most specific common generalizer of two terms.

    The inputs must not share variables; with ``auto_rename`` (the
    default) shared variables on the second input are renamed apart first
    and the renamings reported on the result.
    """
    if cfg is None:
        cfg = GenConfig()
    cfg.validate()
    if isinstance(t1, Var) and t1 == t2:
        # The equal-variables axiom covers this pair as-is; renaming apart
        # would only replace the shared variable with a fresh one.
        rule = _var_axioms(cfg.mode)[0]
        trace_step = GenStep(rule, t1, t2, t1, 1.0, 1.0)
        return GenResult(t1, Subst(), Subst(), 1.0, (trace_step,))
    if fresh is None:
        fresh = FreshVars.for_terms(t1, t2)
    shared = set(vars_of(t1)) & set(vars_of(t2))
    r1 = r2 = Subst()
    if shared:
        if not cfg.auto_rename:
            raise ValueError(
                "input terms share variables "
                f"({', '.join(sorted(v.name for v in shared))}); "
                "enable auto_rename or rename them apart first"
            )
        t1, t2, r1, r2 = rename_apart(t1, t2, fresh)
    trace: list[GenStep] = []
    u, s1, s2, degree = _gen(t1, t2, Subst(), Subst(), 1.0, cfg, fresh, trace)
    return GenResult(u, s1, s2, degree, tuple(trace), r1, r2)
