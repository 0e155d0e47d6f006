"""Command-line front end.

Subcommands:

    unify TERM1 TERM2        normalize the equation between two terms
    generalize TERM1 TERM2   most specific common generalizer
    similarity TERM1 TERM2   term-level similarity degree
    subsumes GENERAL SPECIFIC one-sided matching
    check-sig FILE           validate a similarity signature file

Exit codes: 0 positive result, 1 negative result (clash, zero degree,
occurs failure, no subsumption, similarity 0), 2 usage/parse/signature
errors, 3 a --verify re-check disagreed with the engine.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Optional

from .generalize import GenConfig, GenMode, generalize
from .oracle import oracle_similarity
from .signature import (
    EMPTY_SIGNATURE,
    SignatureError,
    SimilaritySignature,
    SimMode,
    TNorm,
    load_signature_file,
    term_similarity,
)
from .terms import App, Subst, Term, TermSyntaxError, parse_term, print_term, subsumes
from .unify import (
    TraceStep,
    UnifyConfig,
    UnifyMode,
    format_degree,
    unify,
)

SIG_ENV_VAR = "TERMLAT_SIG"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2
EXIT_VERIFY = 3

_VERIFY_TOL = 1e-9


class CliError(Exception):
    """Usage, parse, or signature problem; maps to exit code 2."""


class VerifyFailure(Exception):
    """An oracle re-check disagreed with the engine; maps to exit code 3."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="termlat",
        description="Crisp and similarity-tolerant unification and "
        "generalization on first-order terms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, two_terms: bool = True) -> None:
        if two_terms:
            p.add_argument("term1", nargs="?", help="first term")
            p.add_argument("term2", nargs="?", help="second term")
        p.add_argument("--sig", metavar="FILE", default=None,
                       help=f"similarity signature file (default: ${SIG_ENV_VAR})")
        p.add_argument("--mode", choices=["crisp", "weak", "full"], default=None,
                       help="rule set; default crisp without a signature, full with one")
        p.add_argument("--tnorm", choices=["min", "product"], default=None,
                       help="override the signature's t-norm")
        p.add_argument("--no-occurs-check", action="store_true",
                       help="allow cyclic bindings (triangular solved forms)")
        p.add_argument("--trace", action="store_true", help="print the derivation")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--verify", action="store_true",
                       help="re-check the result against the naive oracle")
        p.add_argument("--strict-arity", action="store_true",
                       help="reject a functor name used at two arities in one problem")
        p.add_argument("--batch", metavar="FILE", default=None,
                       help="run tab-separated COMMAND/TERM1/TERM2 lines from FILE")

    add_common(sub.add_parser("unify", help="unify two terms"))
    add_common(sub.add_parser("generalize", help="generalize two terms"))
    add_common(sub.add_parser("similarity", help="similarity degree of two terms"))
    add_common(sub.add_parser("subsumes", help="does the first term subsume the second"))

    sig_p = sub.add_parser("check-sig", help="validate a signature file")
    sig_p.add_argument("sigfile", help="signature file to validate")
    sig_p.add_argument("--check-transitive", action="store_true",
                       help="warn about min-transitivity gaps")
    return parser


# ---------------------------------------------------------------------------
# Option plumbing
# ---------------------------------------------------------------------------

def _load_signature(
    args: argparse.Namespace,
) -> tuple[Optional[SimilaritySignature], bool]:
    """The configured signature plus whether one was explicitly given."""
    path = args.sig or os.environ.get(SIG_ENV_VAR)
    override = TNorm(args.tnorm) if args.tnorm else None
    if path is None:
        if override:
            return SimilaritySignature((), override), False
        return None, False
    try:
        return load_signature_file(path, override), True
    except OSError as e:
        raise CliError(f"cannot read signature file: {e}")
    except SignatureError as e:
        raise CliError(f"{path}: {e}")


def _pick_mode(args: argparse.Namespace, sig_given: bool) -> str:
    if args.mode:
        return args.mode
    return "full" if sig_given else "crisp"


def _parse_problem_term(text: Optional[str], which: str) -> Term:
    if text is None:
        raise CliError(f"missing {which} term")
    try:
        return parse_term(text)
    except TermSyntaxError as e:
        raise CliError(f"{which} term: {e}")


def _check_strict_arity(*terms: Term) -> None:
    arities: dict[str, set[int]] = {}

    def walk(t: Term) -> None:
        if isinstance(t, App):
            arities.setdefault(t.fn.name, set()).add(t.fn.arity)
            for a in t.args:
                walk(a)

    for t in terms:
        walk(t)
    for name, seen in sorted(arities.items()):
        if len(seen) > 1:
            raise CliError(
                f"functor {name!r} used at arities "
                f"{sorted(seen)} in one problem (--strict-arity)"
            )


def _subst_json(s: Optional[Subst]) -> Optional[dict[str, str]]:
    if s is None:
        return None
    return {v.name: print_term(t) for v, t in s.items()}


def _trace_json(trace: tuple[TraceStep, ...]) -> list[dict[str, Any]]:
    out = []
    for k, ts in enumerate(trace, start=1):
        out.append({
            "step": k,
            "rule": ts.rule,
            "consumed": str(ts.consumed),
            "produced": [str(e) for e in ts.produced],
            "degree_before": ts.degree_before,
            "degree_after": ts.degree_after,
            "dropped": [
                {"position": p, "term": print_term(t)} for p, t in ts.dropped
            ],
        })
    return out


def _dropped_json(steps) -> list[dict[str, Any]]:
    out = []
    for ts in steps:
        for p, t in ts.dropped:
            out.append({"position": p, "term": print_term(t)})
    return out


# ---------------------------------------------------------------------------
# Command implementations.  Each returns (exit_code, human_lines, json_obj).
# ---------------------------------------------------------------------------

def _run_unify(t1: Term, t2: Term, cfg: UnifyConfig, do_verify: bool,
               ) -> tuple[int, list[str], dict[str, Any]]:
    outcome = unify(t1, t2, cfg)
    code = EXIT_OK if outcome.ok else EXIT_NEGATIVE
    lines = [f"status: {outcome.status.value}",
             f"degree: {format_degree(outcome.degree)}"]
    if outcome.ok:
        lines.append(f"substitution: {outcome.substitution}")
    elif outcome.offending is not None:
        lines.append(f"offending: {outcome.offending}")
    elif outcome.occurs_var is not None:
        lines.append(
            f"occurs: {outcome.occurs_var} in {print_term(outcome.occurs_term)}"
        )
    body = {
        "status": outcome.status.value,
        "degree": outcome.degree,
        "substitution": _subst_json(outcome.substitution),
        "trace": _trace_json(outcome.trace),
        "dropped_args": _dropped_json(outcome.trace),
    }
    if do_verify and outcome.ok:
        sigma = outcome.substitution
        inst1, inst2 = sigma.apply(t1), sigma.apply(t2)
        if cfg.mode is UnifyMode.CRISP:
            good = inst1 == inst2
        else:
            mode = SimMode.EQUAL_ARITY if cfg.mode is UnifyMode.WEAK else SimMode.MAPPED
            sim = oracle_similarity(cfg.sig(), inst1, inst2, mode)
            if cfg.sig().tnorm is TNorm.MIN:
                good = abs(sim - outcome.degree) <= _VERIFY_TOL
            else:
                good = sim + _VERIFY_TOL >= outcome.degree
        if cfg.occurs_check and not sigma.is_idempotent():
            good = False
        if not good:
            raise VerifyFailure("unification result failed the oracle re-check")
    return code, lines, body


def _run_generalize(t1: Term, t2: Term, cfg: GenConfig, do_verify: bool,
                    ) -> tuple[int, list[str], dict[str, Any]]:
    result = generalize(t1, t2, cfg)
    lines = [
        "status: GENERALIZED",
        f"degree: {format_degree(result.degree)}",
        f"generalizer: {print_term(result.generalizer)}",
        f"sigma1: {result.sigma1}",
        f"sigma2: {result.sigma2}",
    ]
    if result.renaming2:
        lines.append(f"renamed apart: {result.renaming2}")
    body = {
        "status": "GENERALIZED",
        "degree": result.degree,
        "substitution": None,
        "generalizer": print_term(result.generalizer),
        "sigma1": _subst_json(result.sigma1),
        "sigma2": _subst_json(result.sigma2),
        "trace": [
            {
                "step": k,
                "rule": st.rule,
                "left": print_term(st.left),
                "right": print_term(st.right),
                "generalizer": print_term(st.generalizer),
                "degree_before": st.degree_before,
                "degree_after": st.degree_after,
                "dropped": [
                    {"position": p, "term": print_term(t)} for p, t in st.dropped
                ],
            }
            for k, st in enumerate(result.trace, start=1)
        ],
        "dropped_args": _dropped_json(result.trace),
    }
    if do_verify:
        targets = (result.renaming1.apply(t1), result.renaming2.apply(t2))
        for sigma, target in zip((result.sigma1, result.sigma2), targets):
            inst = sigma.apply(result.generalizer)
            if cfg.mode is GenMode.CRISP:
                good = inst == target
            else:
                sim = oracle_similarity(cfg.sig(), inst, target, cfg.sim_mode())
                good = sim + _VERIFY_TOL >= result.degree
            if not good:
                raise VerifyFailure("generalization result failed the oracle re-check")
    return EXIT_OK, lines, body


def _run_similarity(t1: Term, t2: Term, sig: SimilaritySignature, mode: str,
                    do_verify: bool) -> tuple[int, list[str], dict[str, Any]]:
    # crisp mode ignores the signature, like the crisp engines do
    if mode == "crisp":
        sig = EMPTY_SIGNATURE
    sim_mode = SimMode.EQUAL_ARITY if mode == "weak" else SimMode.MAPPED
    degree = term_similarity(sig, t1, t2, sim_mode)
    lines = [f"degree: {format_degree(degree)}"]
    body = {
        "status": "OK",
        "degree": degree,
        "substitution": None,
        "trace": [],
        "dropped_args": [],
    }
    if do_verify:
        check = oracle_similarity(sig, t1, t2, sim_mode)
        if abs(check - degree) > _VERIFY_TOL:
            raise VerifyFailure("similarity degree failed the oracle re-check")
    return (EXIT_OK if degree > 0.0 else EXIT_NEGATIVE), lines, body


def _run_subsumes(general: Term, specific: Term, do_verify: bool,
                  ) -> tuple[int, list[str], dict[str, Any]]:
    matcher = subsumes(general, specific)
    if matcher is None:
        lines = ["status: NO_MATCH"]
        body = {"status": "NO_MATCH", "degree": 0.0, "substitution": None,
                "trace": [], "dropped_args": []}
        return EXIT_NEGATIVE, lines, body
    lines = ["status: SUBSUMES", f"matcher: {matcher}"]
    body = {"status": "SUBSUMES", "degree": 1.0,
            "substitution": _subst_json(matcher), "trace": [], "dropped_args": []}
    if do_verify and matcher.apply(general) != specific:
        raise VerifyFailure("subsumption matcher failed the re-check")
    return EXIT_OK, lines, body

# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

def _run_problem(
    command: str,
    text1: Optional[str],
    text2: Optional[str],
    args: argparse.Namespace,
    sig: Optional[SimilaritySignature],
    mode: str,
) -> tuple[int, list[str], dict[str, Any]]:
    """Run one problem; returns (exit code, human lines, json body)."""
    t1 = _parse_problem_term(text1, "first")
    t2 = _parse_problem_term(text2, "second")
    if args.strict_arity:
        _check_strict_arity(t1, t2)
    effective_sig = sig if sig is not None else EMPTY_SIGNATURE

    if command == "unify":
        cfg = UnifyConfig(
            mode=UnifyMode(mode),
            occurs_check=not args.no_occurs_check,
            signature=effective_sig,
        )
        try:
            cfg.validate()
        except ValueError as e:
            raise CliError(str(e))
        return _run_unify(t1, t2, cfg, args.verify)
    if command == "generalize":
        gmode = {"crisp": GenMode.CRISP, "weak": GenMode.FUNCTOR_WEAK,
                 "full": GenMode.FULL}[mode]
        cfg = GenConfig(mode=gmode, signature=effective_sig)
        try:
            cfg.validate()
        except ValueError as e:
            raise CliError(str(e))
        return _run_generalize(t1, t2, cfg, args.verify)
    if command == "similarity":
        return _run_similarity(t1, t2, effective_sig, mode, args.verify)
    if command == "subsumes":
        return _run_subsumes(t1, t2, args.verify)
    raise CliError(f"unknown command {command!r}")


def _emit(args: argparse.Namespace, code: int, lines: list[str],
          body: dict[str, Any]) -> int:
    if args.json:
        print(json.dumps(body, indent=2))
    else:
        if args.trace and body.get("trace"):
            for record in body["trace"]:
                if "consumed" in record:
                    produced = ", ".join(record["produced"]) or "(none)"
                    what = f"{record['consumed']} ==> {produced}"
                else:
                    what = (f"{record['left']} / {record['right']} ==> "
                            f"{record['generalizer']}")
                line = (f"{record['step']}. {record['rule']}: {what} "
                        f"[{format_degree(record['degree_before'])} -> "
                        f"{format_degree(record['degree_after'])}]")
                if record.get("dropped"):
                    drops = ", ".join(
                        f"{d['term']} at {d['position']}" for d in record["dropped"]
                    )
                    line += f"  (dropped: {drops})"
                print(line)
        for line in lines:
            print(line)
    return code


def _summarize_for_batch(command: str, code: int, body: dict[str, Any]) -> str:
    status = body["status"]
    degree = format_degree(body["degree"])
    if command == "unify" and body["substitution"] is not None:
        extra = " {" + ", ".join(
            f"{v} -> {t}" for v, t in body["substitution"].items()) + "}"
    elif command == "generalize":
        extra = f" t={body['generalizer']}"
    else:
        extra = ""
    return f"{status} degree={degree}{extra}"


def _run_batch(args: argparse.Namespace, sig, mode: str) -> int:
    try:
        with open(args.batch, "r", encoding="utf-8") as fh:
            batch_lines = fh.read().splitlines()
    except OSError as e:
        raise CliError(f"cannot read batch file: {e}")
    ok = fail = err = 0
    for line_no, raw in enumerate(batch_lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3 or parts[0] not in (
            "unify", "generalize", "similarity", "subsumes"
        ):
            err += 1
            print(f"{line_no}: ERROR malformed line (want COMMAND<TAB>TERM1<TAB>TERM2)")
            continue
        command, text1, text2 = parts
        try:
            code, _, body = _run_problem(command, text1, text2, args, sig, mode)
        except CliError as e:
            err += 1
            print(f"{line_no}: ERROR {e}")
            continue
        except VerifyFailure as e:
            err += 1
            print(f"{line_no}: ERROR verify: {e}")
            continue
        if code == EXIT_OK:
            ok += 1
        else:
            fail += 1
        print(f"{line_no}: {_summarize_for_batch(command, code, body)}")
    print(f"ok={ok} fail={fail} err={err}")
    return EXIT_OK if err == 0 else EXIT_NEGATIVE


def _run_check_sig(args: argparse.Namespace) -> int:
    try:
        sig = load_signature_file(args.sigfile)
    except OSError as e:
        print(f"error: cannot read signature file: {e}", file=sys.stderr)
        return EXIT_ERROR
    except SignatureError as e:
        print(f"error: {args.sigfile}: {e}", file=sys.stderr)
        return EXIT_ERROR
    print(f"ok: {len(sig)} entries, tnorm {sig.tnorm.value}")
    if args.check_transitive:
        for f, g, h, bound in sig.check_min_transitivity():
            have = sig.lookup(f, h)
            have_d = have.degree if have else 0.0
            print(
                f"warning: similarity({f}, {h}) = {format_degree(have_d)} "
                f"< {format_degree(bound)} reachable via {g}",
                file=sys.stderr,
            )
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check-sig":
        return _run_check_sig(args)
    try:
        sig, sig_given = _load_signature(args)
        mode = _pick_mode(args, sig_given)
        if args.batch:
            return _run_batch(args, sig, mode)
        code, lines, body = _run_problem(
            args.command, args.term1, args.term2, args, sig, mode
        )
        return _emit(args, code, lines, body)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except VerifyFailure as e:
        print(f"verify failed: {e}", file=sys.stderr)
        return EXIT_VERIFY


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
