"""Equation normalization engines for crisp and fuzzy unification.

The engine rewrites a list of term equations, tagged with a running truth
degree, until no rule applies.  Three rule sets are available:

* CRISP -- classic syntactic unification to solved form; decomposition
  requires identical functors and the degree stays 1.
* WEAK  -- decomposition also accepts distinct functors declared similar
  at equal arity, combining the entry's degree into the running one;
  argument pairing stays positional.
* FULL  -- additionally tolerates arity and argument-order mismatch.
  Equations between applications are first reoriented so the lower-arity
  side is on the left, then decomposed along the entry's argument-position
  mapping; the higher-arity side's unmapped arguments are dropped and
  recorded on the trace step.

A normal form in which every equation reads ``X = t`` with each such X
occurring nowhere else is a solved form and yields an idempotent
substitution.  Anything else is a failure: a stuck equation between
unrelated applications (CLASH in crisp mode, DEGREE_ZERO in the fuzzy
modes, since an unrelated pair would drive the degree to 0), or a cyclic
binding caught by the occurs check.

Rule selection is deterministic (leftmost equation, fixed rule priority)
so traces are reproducible, but any selection order reaches an equivalent
normal form; :func:`applicable_moves` / :func:`apply_move` let tests drive
randomized strategies to confirm that.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .signature import EMPTY_SIGNATURE, SimilaritySignature
from .terms import App, Subst, Term, Var, occurs_in, print_term, term_size

__all__ = [
    "UnifyMode",
    "UnifyStatus",
    "Equation",
    "EquationSystem",
    "TraceStep",
    "UnifyConfig",
    "UnifyOutcome",
    "RULE_DECOMPOSE",
    "RULE_ERASE",
    "RULE_ELIMINATE",
    "RULE_ORIENT",
    "RULE_WEAK_DECOMPOSE",
    "RULE_FULL_DECOMPOSE",
    "RULE_REORIENT",
    "unify",
    "step",
    "applicable_moves",
    "apply_move",
    "finish",
    "reorient_check",
    "format_trace",
    "format_degree",
]


class UnifyMode(Enum):
    CRISP = "crisp"
    WEAK = "weak"
    FULL = "full"


class UnifyStatus(Enum):
    SOLVED = "SOLVED"
    CLASH = "CLASH"
    OCCURS_FAIL = "OCCURS_FAIL"
    DEGREE_ZERO = "DEGREE_ZERO"


RULE_DECOMPOSE = "Term Decomposition"
RULE_ERASE = "Variable Erasure"
RULE_ELIMINATE = "Variable Elimination"
RULE_ORIENT = "Equation Orientation"
RULE_WEAK_DECOMPOSE = "Fuzzy Term Decomposition"
RULE_FULL_DECOMPOSE = "Generic Weak Term Decomposition"
RULE_REORIENT = "Fuzzy Equation Reorientation"

# Priority used to pick among rules applicable to the same equation.
_RULE_ORDER = {
    RULE_ERASE: 0,
    RULE_ORIENT: 1,
    RULE_ELIMINATE: 2,
    RULE_REORIENT: 3,
    RULE_DECOMPOSE: 4,
    RULE_WEAK_DECOMPOSE: 4,
    RULE_FULL_DECOMPOSE: 4,
}


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def flipped(self) -> "Equation":
        return Equation(self.rhs, self.lhs)

    def __str__(self) -> str:
        return f"{print_term(self.lhs)} = {print_term(self.rhs)}"


@dataclass(frozen=True)
class EquationSystem:
    """An ordered multiset of equations plus the accumulated truth degree."""

    equations: tuple[Equation, ...]
    degree: float = 1.0

    @classmethod
    def initial(cls, t1: Term, t2: Term) -> "EquationSystem":
        return cls((Equation(t1, t2),), 1.0)

    def __str__(self) -> str:
        inner = ", ".join(str(e) for e in self.equations)
        return "{" + inner + "}_" + format_degree(self.degree)


@dataclass(frozen=True)
class TraceStep:
    """One rule application: what fired, on what, and the degree change.

    ``dropped`` lists (position, argument) pairs of the higher-arity term
    that a FULL-mode decomposition ignored because the position mapping has
    no counterpart for them.
    """

    rule: str
    consumed: Equation
    produced: tuple[Equation, ...]
    degree_before: float
    degree_after: float
    dropped: tuple[tuple[int, Term], ...] = ()


@dataclass
class UnifyConfig:
    mode: UnifyMode = UnifyMode.CRISP
    occurs_check: bool = True
    signature: SimilaritySignature | None = None  # ignored in CRISP mode

    def sig(self) -> SimilaritySignature:
        return self.signature if self.signature is not None else EMPTY_SIGNATURE

    def validate(self) -> None:
        if self.mode is UnifyMode.WEAK:
            for e in self.sig().entries:
                if e.lo.arity != e.hi.arity:
                    raise ValueError(
                        f"WEAK mode requires equal-arity entries, got {e.lo} ~ {e.hi}"
                    )


@dataclass(frozen=True)
class UnifyOutcome:
    """Result of normalizing one unification problem.

    ``substitution`` is present only for SOLVED; it is idempotent unless
    the occurs check was disabled, in which case cyclic bindings come back
    as a triangular substitution.  ``offending`` carries the stuck equation
    for CLASH and DEGREE_ZERO; ``occurs_var``/``occurs_term`` the culprit
    for OCCURS_FAIL.
    """

    status: UnifyStatus
    substitution: Optional[Subst]
    degree: float
    trace: tuple[TraceStep, ...] = ()
    offending: Optional[Equation] = None
    occurs_var: Optional[Var] = None
    occurs_term: Optional[Term] = None

    @property
    def ok(self) -> bool:
        return self.status is UnifyStatus.SOLVED


Move = tuple[int, str]


# ---------------------------------------------------------------------------
# Rule applicability
# ---------------------------------------------------------------------------

def _decompose_rule(eq: Equation, cfg: UnifyConfig) -> Optional[str]:
    """Which decomposition rule (if any) applies to an App = App equation."""
    lhs, rhs = eq.lhs, eq.rhs
    assert isinstance(lhs, App) and isinstance(rhs, App)
    if cfg.mode is UnifyMode.CRISP:
        return RULE_DECOMPOSE if lhs.fn == rhs.fn else None
    if cfg.mode is UnifyMode.WEAK:
        if lhs.fn.arity != rhs.fn.arity:
            return None
        return RULE_WEAK_DECOMPOSE if cfg.sig().lookup(lhs.fn, rhs.fn) else None
    if lhs.fn.arity > rhs.fn.arity:
        return None  # reorientation must flip it first
    return RULE_FULL_DECOMPOSE if cfg.sig().lookup(lhs.fn, rhs.fn) else None


def _rules_for(system: EquationSystem, i: int, cfg: UnifyConfig) -> list[str]:
    """Rules applicable to equation ``i``, in priority order."""
    eq = system.equations[i]
    lhs, rhs = eq.lhs, eq.rhs
    if isinstance(lhs, Var):
        if lhs == rhs:
            return [RULE_ERASE]
        # Elimination substitutes into the rest only; it fires when the
        # variable occurs elsewhere and would not loop on its own image.
        if not occurs_in(lhs, rhs) and any(
            occurs_in(lhs, other.lhs) or occurs_in(lhs, other.rhs)
            for j, other in enumerate(system.equations)
            if j != i
        ):
            return [RULE_ELIMINATE]
        return []
    if isinstance(rhs, Var):
        return [RULE_ORIENT]
    rules = []
    if (
        cfg.mode is UnifyMode.FULL
        and lhs.fn.arity > rhs.fn.arity
    ):
        rules.append(RULE_REORIENT)
    rule = _decompose_rule(eq, cfg)
    if rule:
        rules.append(rule)
    return rules


def applicable_moves(system: EquationSystem, cfg: UnifyConfig) -> list[Move]:
    """Every applicable (equation index, rule name), best-first.

    The deterministic strategy takes the first move; randomized strategies
    may take any, and reach an equivalent normal form.
    """
    moves: list[Move] = []
    for i in range(len(system.equations)):
        for rule in _rules_for(system, i, cfg):
            moves.append((i, rule))
    moves.sort(key=lambda m: (m[0], _RULE_ORDER[m[1]]))
    return moves


def reorient_check(eq: Equation) -> Optional[Equation]:
    """Flip an equation between applications when the left arity exceeds
    the right; None otherwise.  Both sides must be applications."""
    if not isinstance(eq.lhs, App) or not isinstance(eq.rhs, App):
        raise ValueError("reorient_check needs applications on both sides")
    if eq.lhs.fn.arity > eq.rhs.fn.arity:
        return eq.flipped()
    return None


# ---------------------------------------------------------------------------
# Rule application
# ---------------------------------------------------------------------------

def apply_move(
    system: EquationSystem, move: Move, cfg: UnifyConfig
) -> tuple[EquationSystem, TraceStep]:
    """Apply one rule instance and return the new system plus its trace step."""
    i, rule = move
    eqs = list(system.equations)
    eq = eqs[i]
    alpha = system.degree
    new_degree = alpha
    dropped: tuple[tuple[int, Term], ...] = ()

    if rule == RULE_ERASE:
        del eqs[i]
        produced: tuple[Equation, ...] = ()
    elif rule in (RULE_ORIENT, RULE_REORIENT):
        eqs[i] = eq.flipped()
        produced = (eqs[i],)
    elif rule == RULE_ELIMINATE:
        binding = Subst(((eq.lhs, eq.rhs),))
        for j, other in enumerate(eqs):
            if j != i:
                eqs[j] = Equation(binding.apply(other.lhs), binding.apply(other.rhs))
        produced = (eq,)
    else:
        lhs, rhs = eq.lhs, eq.rhs
        assert isinstance(lhs, App) and isinstance(rhs, App)
        if rule == RULE_DECOMPOSE:
            pairs = list(zip(lhs.args, rhs.args))
        else:
            look = cfg.sig().lookup(lhs.fn, rhs.fn)
            assert look is not None
            new_degree = cfg.sig().tnorm_and(alpha, look.degree)
            if rule == RULE_WEAK_DECOMPOSE:
                pairs = list(zip(lhs.args, rhs.args))
            else:
                assert look.first_is_lower  # guaranteed after reorientation
                pairs = [
                    (lhs.args[i0 - 1], rhs.args[j0 - 1])
                    for i0, j0 in look.mapping.pairs
                ]
                dropped = tuple(
                    (j0, rhs.args[j0 - 1])
                    for j0 in range(1, rhs.fn.arity + 1)
                    if j0 not in look.mapping.targets
                )
        produced = tuple(Equation(a, b) for a, b in pairs)
        eqs[i : i + 1] = list(produced)

    new_system = EquationSystem(tuple(eqs), new_degree)
    return new_system, TraceStep(rule, eq, produced, alpha, new_degree, dropped)


def step(
    system: EquationSystem, cfg: UnifyConfig
) -> Optional[tuple[EquationSystem, TraceStep]]:
    """One deterministic step; None when the system is in normal form."""
    moves = applicable_moves(system, cfg)
    if not moves:
        return None
    return apply_move(system, moves[0], cfg)


# ---------------------------------------------------------------------------
# Normal-form classification
# ---------------------------------------------------------------------------

def _classify(
    system: EquationSystem, cfg: UnifyConfig, trace: tuple[TraceStep, ...]
) -> UnifyOutcome:
    eqs = system.equations

    # A stuck equation between applications means the functor pair is not
    # related: a clash in crisp mode, an unrelated (degree-0) pair in the
    # fuzzy modes.  This takes priority so the verdict does not depend on
    # the rule-selection order.
    for eq in eqs:
        if isinstance(eq.lhs, App) and isinstance(eq.rhs, App):
            status = (
                UnifyStatus.CLASH
                if cfg.mode is UnifyMode.CRISP
                else UnifyStatus.DEGREE_ZERO
            )
            return UnifyOutcome(status, None, 0.0, trace, offending=eq)

    if cfg.occurs_check:
        for eq in eqs:
            if isinstance(eq.lhs, Var) and occurs_in(eq.lhs, eq.rhs):
                return UnifyOutcome(
                    UnifyStatus.OCCURS_FAIL,
                    None,
                    0.0,
                    trace,
                    occurs_var=eq.lhs,
                    occurs_term=eq.rhs,
                )
    else:
        # Without the occurs check a variable may cycle through its own
        # image (triangular solved form), but two bindings for one variable
        # are still unsolvable and only arise from entangled cycles.
        seen: set[Var] = set()
        for eq in eqs:
            assert isinstance(eq.lhs, Var)
            if eq.lhs in seen:
                return UnifyOutcome(
                    UnifyStatus.OCCURS_FAIL,
                    None,
                    0.0,
                    trace,
                    occurs_var=eq.lhs,
                    occurs_term=eq.rhs,
                )
            seen.add(eq.lhs)

    sigma = Subst((eq.lhs, eq.rhs) for eq in eqs)
    return UnifyOutcome(UnifyStatus.SOLVED, sigma, system.degree, trace)


def finish(
    system: EquationSystem,
    cfg: UnifyConfig,
    trace: tuple[TraceStep, ...] = (),
) -> UnifyOutcome:
    """Classify a system that is already in normal form."""
    if applicable_moves(system, cfg):
        raise ValueError("system is not in normal form")
    return _classify(system, cfg, trace)


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def unify(t1: Term, t2: Term, cfg: UnifyConfig | None = None) -> UnifyOutcome:
    """Normalize ``{t1 = t2}`` starting at degree 1.

    On SOLVED the substitution satisfies, for the configured mode: crisp,
    equal instantiated terms; weak/full under the min t-norm, instantiated
    terms similar to exactly the reported degree (at least the reported
    degree under product).
    """
    if cfg is None:
        cfg = UnifyConfig()
    cfg.validate()
    system = EquationSystem.initial(t1, t2)
    trace: list[TraceStep] = []
    # Normalization terminates; the cap is a defensive guard only.
    cap = 10 * (term_size(t1) + term_size(t2)) ** 2 + 256
    while True:
        nxt = step(system, cfg)
        if nxt is None:
            break
        system, ts = nxt
        trace.append(ts)
        if len(trace) > cap:
            raise RuntimeError("derivation exceeded the defensive step bound")
    return _classify(system, cfg, tuple(trace))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def format_degree(d: float) -> str:
    """Up to six decimals, trailing zeros trimmed."""
    s = f"{d:.6f}".rstrip("0").rstrip(".")
    return s if s else "0"


def format_trace(trace: tuple[TraceStep, ...] | list[TraceStep]) -> str:
    lines = []
    for k, ts in enumerate(trace, start=1):
        produced = ", ".join(str(e) for e in ts.produced) or "(none)"
        line = (
            f"{k}. {ts.rule}: {ts.consumed} ==> {produced} "
            f"[{format_degree(ts.degree_before)} -> {format_degree(ts.degree_after)}]"
        )
        if ts.dropped:
            drops = ", ".join(f"{print_term(t)} at {p}" for p, t in ts.dropped)
            line += f"  (dropped: {drops})"
        lines.append(line)
    return "\n".join(lines)
