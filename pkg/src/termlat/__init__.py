"""Lattice operations on first-order terms over similar signatures.

Terms are quasi-ordered by subsumption; unification computes greatest
lower bounds, generalization least upper bounds.  Both come in a crisp
flavour and in similarity-tolerant flavours where distinct functors may
be declared similar to a degree, including across arities via
argument-position mappings.  A brute-force oracle for desk-scale
verification and a CLI round out the package.
"""

from .terms import (
    App,
    FreshVars,
    Subst,
    Symbol,
    Term,
    TermSyntaxError,
    Var,
    app,
    is_ground,
    occurs_in,
    parse_term,
    print_term,
    rename_apart,
    subsumes,
    term_depth,
    term_size,
    variant_equal,
    vars_of,
)
from .signature import (
    EMPTY_SIGNATURE,
    ArgMapping,
    SignatureError,
    SimilarityEntry,
    SimilaritySignature,
    SimLookup,
    SimMode,
    TNorm,
    load_signature,
    load_signature_file,
    term_similarity,
)
from .unify import (
    Equation,
    EquationSystem,
    TraceStep,
    UnifyConfig,
    UnifyMode,
    UnifyOutcome,
    UnifyStatus,
    applicable_moves,
    apply_move,
    finish,
    format_degree,
    format_trace,
    reorient_check,
    step,
    unify,
)
from .generalize import (
    GenConfig,
    GenMode,
    GenResult,
    GenStep,
    fuzzy_unapply,
    generalize,
    unapply,
)
from .oracle import (
    MAX_ENUMERATION,
    SpaceTooLarge,
    TermSpace,
    enumerate_terms,
    oracle_generalizers,
    oracle_similarity,
    oracle_unifiers,
)

__version__ = "0.1.0"

__all__ = [
    "App", "FreshVars", "Subst", "Symbol", "Term", "TermSyntaxError", "Var",
    "app", "is_ground", "occurs_in", "parse_term", "print_term",
    "rename_apart", "subsumes", "term_depth", "term_size", "variant_equal",
    "vars_of",
    "EMPTY_SIGNATURE", "ArgMapping", "SignatureError", "SimilarityEntry",
    "SimilaritySignature", "SimLookup", "SimMode", "TNorm", "load_signature",
    "load_signature_file", "term_similarity",
    "Equation", "EquationSystem", "TraceStep", "UnifyConfig", "UnifyMode",
    "UnifyOutcome", "UnifyStatus", "applicable_moves", "apply_move", "finish",
    "format_degree", "format_trace", "reorient_check", "step", "unify",
    "GenConfig", "GenMode", "GenResult", "GenStep", "fuzzy_unapply",
    "generalize", "unapply",
    "MAX_ENUMERATION", "SpaceTooLarge", "TermSpace", "enumerate_terms",
    "oracle_generalizers", "oracle_similarity", "oracle_unifiers",
    "__version__",
]
