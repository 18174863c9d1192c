"""Command-line front end: analyze, project, construct, search, feasible.

Exit status is 0 on success, 1 when a requested check fails and 2 for usage
errors (bad flags, unreadable or malformed code files, invalid parameters).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .analysis import Code, IntersectionMatrix, check_crc, opposite_code
from .codefile import (
    SCHEMA_VERSION,
    exact,
    format_code,
    read_code,
    report_dict,
    report_text,
    spectrum_entries,
    write_code,
)
from .constructions import FAMILIES
from .errors import (
    BudgetExhausted,
    CodeFileError,
    DegenerateInput,
    InconsistentProfile,
    LloydViolation,
    MissingMinEigenvalue,
    NonIntegralSizes,
    ParameterError,
    ProfileMismatch,
)
from .feasibility import enumerate_arrays, feasible_rho2_matrices, make_target
from .johnson import JohnsonParams, theta, theta_index
from .projection import project, projection_profile
from .search import SearchOptions, search_crc

KNOWN_ROWS = {15: (30, 24, 3, 10), 17: (36, 24, 3, 14), 18: (36, 32, 6, 8)}


class Failure(Exception):
    """A requested verification did not hold (exit status 1)."""


def _index_set(text: str) -> frozenset[int]:
    try:
        return frozenset(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated eigenvalue indices, got {text!r}")


def _emit(args, data: dict, text: str):
    if args.json:
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _expectations(args, rep) -> list[str]:
    problems = []
    if args.expect_rho is not None and rep.rho != args.expect_rho:
        problems.append(f"expected rho = {args.expect_rho}, got {rep.rho}")
    if args.expect_spectrum is not None:
        got = frozenset(rep.spectrum_indices) if rep.is_crc else None
        if got != args.expect_spectrum:
            want = sorted(args.expect_spectrum)
            problems.append(f"expected spectrum indices {want}, got {sorted(got) if got else 'none'}")
    if args.expect_strength is not None and rep.strength != args.expect_strength:
        problems.append(f"expected strength {args.expect_strength}, got {rep.strength}")
    if (args.expect_rho is not None or args.expect_spectrum is not None) and not rep.is_crc:
        problems.append("code is not completely regular")
    return problems


def _finish(problems):
    for p in problems:
        sys.stderr.write(f"check failed: {p}\n")
    if problems:
        raise Failure(problems[0])


def cmd_analyze(args) -> int:
    code = read_code(args.path)
    if args.opposite:
        code = opposite_code(code)
    rep = check_crc(code)
    _emit(args, report_dict(rep, {"opposite": bool(args.opposite)}), report_text(rep))
    if args.output:
        write_code(code, args.output)
    _finish(_expectations(args, rep))
    return 0


def _projection_checks(code: Code, rep, prime, prime_rep):
    problems = []
    if not prime_rep.is_crc:
        problems.append("the projected code is not completely regular")
        return problems
    if prime_rep.rho != rep.rho - 1:
        problems.append(f"projected covering radius {prime_rep.rho}, expected {rep.rho - 1}")
    shift = code.n - 2 * code.w + 1
    want = sorted((t - shift for t in rep.spectrum if t != -code.w), reverse=True)
    if prime_rep.spectrum != want:
        problems.append(f"projected spectrum {prime_rep.spectrum}, expected {want}")
    if prime_rep.strength != rep.strength:
        problems.append(f"projected strength {prime_rep.strength}, expected {rep.strength}")
    return problems


def cmd_project(args) -> int:
    code = read_code(args.path)
    rep = check_crc(code)
    if not rep.is_crc:
        sys.stdout.write(report_text(rep))
        raise Failure("the input code is not completely regular")
    prof = projection_profile(code)
    prime = project(code)
    prime_rep = check_crc(prime)
    problems = _projection_checks(code, rep, prime, prime_rep)
    if not problems and prof.clique_matrix != prime_rep.matrix:
        problems.append(
            f"clique code matrix {prime_rep.matrix.array_str()} differs from the predicted "
            f"{prof.clique_matrix.array_str()}"
        )
    n, w = code.n, code.w
    data = report_dict(
        prime_rep,
        {
            "source": report_dict(rep),
            "profile": {
                "a": [exact(x) for x in prof.a],
                "b": list(prof.b),
                "spectrum_map": [
                    {"from": spectrum_entries(n, w, [s])[0], "to": spectrum_entries(n, w - 1, [t])[0]}
                    for s, t in prof.spectrum_map
                ],
                "predicted_array": prof.clique_matrix.array_str(),
            },
            "verified": not problems,
        },
    )
    text = (
        "source code:\n" + report_text(rep)
        + f"clique constants a = {[int(x) for x in prof.a]}, b = {list(prof.b)}\n"
        + "".join(
            f"θ{theta_index_safe(n, w, s)} = {s} -> θ{theta_index_safe(n, w - 1, t)} = {t}\n"
            for s, t in prof.spectrum_map
        )
        + "projected code:\n" + report_text(prime_rep)
        + ("projection checks: ok\n" if not problems else "")
    )
    _emit(args, data, text)
    if args.output:
        write_code(prime, args.output)
    _finish(problems + _expectations(args, prime_rep))
    return 0


def theta_index_safe(n, w, value):
    i = theta_index(n, w, value)
    return "?" if i is None else i


def cmd_construct(args) -> int:
    if args.family not in FAMILIES:
        raise ParameterError(f"unknown family {args.family!r}; choose from {', '.join(FAMILIES)}")
    fn = FAMILIES[args.family]
    if args.family == "antipodal":
        con = fn(args.params)
    else:
        try:
            con = fn(*args.params)
        except TypeError:
            raise ParameterError(f"wrong number of parameters for {args.family}: {args.params}") from None
    rep = check_crc(con.code)
    exp = con.expected
    extra = {"family": con.name, "expected_rho": exp.rho}
    if exp.spectrum is not None:
        extra["expected_spectrum"] = sorted(exp.spectrum)
    if args.output:
        write_code(con.code, args.output)
    elif not args.json:
        sys.stdout.write(format_code(con.code))
    _emit(args, report_dict(rep, extra), f"# {con.name}\n" + report_text(rep))
    problems = _expectations(args, rep)
    if exp.rho is not None and rep.rho != exp.rho:
        problems.append(f"{con.name}: expected rho {exp.rho}, got {rep.rho}")
    if exp.spectrum is not None and frozenset(rep.spectrum_indices) != exp.spectrum:
        problems.append(f"{con.name}: expected spectrum {sorted(exp.spectrum)}, got {rep.spectrum_indices}")
    _finish(problems)
    return 0


def _parse_array(text: str, k: int) -> IntersectionMatrix:
    try:
        left, right = text.strip("{} ").split(";")
        beta = [int(x) for x in left.split(",") if x.strip()]
        gamma = [int(x) for x in right.split(",") if x.strip()]
    except ValueError:
        raise ParameterError(f"array must look like '{{b0,b1;g1,g2}}', got {text!r}") from None
    return IntersectionMatrix.from_array(beta, gamma, k)


def cmd_search(args) -> int:
    params = JohnsonParams(args.n, args.w)
    if args.array:
        targets = [make_target(args.n, args.w, _parse_array(args.array, params.valency))]
    elif args.spectrum is not None:
        rho = len(args.spectrum) - 1
        targets = enumerate_arrays(args.n, args.w, rho, args.spectrum, require_design=args.require_design)
    else:
        raise ParameterError("give --array or --spectrum")
    opts = SearchOptions(
        isomorph_rejection=args.isomorph_reject,
        fix_first_vertex=not args.no_fix_first,
        workers=args.workers,
        budget=args.budget,
        split_depth=args.split_depth,
        checkpoint=args.checkpoint,
    )
    summary = []
    lines = []
    exhausted = False
    for t in targets:
        entry = {"array": t.matrix.array_str(), "sizes": list(t.sizes)}
        try:
            res = search_crc(params, t, opts)
            codes, stats = res.codes, res.stats
        except BudgetExhausted as e:
            exhausted = True
            codes, stats = e.partial, e.stats
            entry["budget_exhausted"] = True
        entry.update(
            codes=len(codes),
            labelled=stats.labelled_solutions,
            nodes=stats.nodes,
        )
        summary.append(entry)
        lines.append(
            f"{t.matrix.array_str()} sizes {list(t.sizes)}: {len(codes)} "
            f"{'orbit(s)' if opts.isomorph_rejection else 'code(s)'}, "
            f"{stats.labelled_solutions} labelled, {stats.nodes} nodes"
            + (" [budget exhausted]" if "budget_exhausted" in entry else "")
            + "\n"
        )
        if args.outdir:
            os.makedirs(args.outdir, exist_ok=True)
            tag = t.matrix.array_str().strip("{}").replace(";", "_").replace(",", "-")
            for i, c in enumerate(codes):
                write_code(c, os.path.join(args.outdir, f"J{args.n}_{args.w}_{tag}_{i:03d}.code"))
    data = {
        "schema": SCHEMA_VERSION,
        "graph": {"n": args.n, "w": args.w},
        "isomorph_rejection": opts.isomorph_rejection,
        "targets": summary,
    }
    _emit(args, data, "".join(lines) or "no feasible targets\n")
    if exhausted:
        raise Failure("node budget exhausted")
    return 0


def cmd_feasible(args) -> int:
    rows = feasible_rho2_matrices(args.n)
    table = [
        {
            "beta0": r.beta0,
            "gamma2": r.gamma2,
            "gamma1": r.gamma1,
            "beta1": r.beta1,
            "sizes": [exact(s) for s in r.sizes],
        }
        for r in rows
    ]
    k = 4 * args.n - 16
    text = f"J({args.n},4), k = {k}: beta0 gamma2 gamma1 beta1 | sizes\n" + "".join(
        f"{r.beta0} {r.gamma2} {r.gamma1} {r.beta1} | {' '.join(map(str, r.sizes))}\n" for r in rows
    )
    if not rows:
        text += "(none)\n"
    spec = [theta(args.n, 4, i) for i in (0, 2, 3)]
    _emit(
        args,
        {"schema": SCHEMA_VERSION, "n": args.n, "spectrum": spectrum_entries(args.n, 4, spec), "rows": table},
        text,
    )
    if args.known_check:
        want = KNOWN_ROWS.get(args.n)
        if want is None:
            raise ParameterError(f"--known-check knows rows for n in {sorted(KNOWN_ROWS)} only")
        if want not in {r.row() for r in rows}:
            raise Failure(f"row {want} missing for n = {args.n}")
        if not args.json:
            sys.stdout.write(f"known row {want}: present\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jcrc", description="Completely regular codes in Johnson graphs")
    p.add_argument("-v", "--verbose", action="store_true", help="log search progress")
    sub = p.add_subparsers(dest="command", required=True)

    def expect_flags(sp):
        sp.add_argument("--expect-rho", type=int)
        sp.add_argument("--expect-spectrum", type=_index_set, help="eigenvalue indices, e.g. 0,2,3")
        sp.add_argument("--expect-strength", type=int)
        sp.add_argument("--json", action="store_true")

    a = sub.add_parser("analyze", help="check complete regularity, spectrum and strength")
    a.add_argument("path")
    a.add_argument("--opposite", action="store_true", help="analyze the opposite code instead")
    a.add_argument("-o", "--output", help="write the analyzed code here")
    expect_flags(a)
    a.set_defaults(func=cmd_analyze)

    pr = sub.add_parser("project", help="clique code in J(n, w-1) and its profile")
    pr.add_argument("path")
    pr.add_argument("-o", "--output", help="write the projected code here")
    expect_flags(pr)
    pr.set_defaults(func=cmd_project)

    c = sub.add_parser("construct", help="build a known family")
    c.add_argument("family", choices=sorted(FAMILIES))
    c.add_argument("params", type=int, nargs="*")
    c.add_argument("-o", "--output")
    expect_flags(c)
    c.set_defaults(func=cmd_construct)

    s = sub.add_parser("search", help="exhaustive search for a target array or spectrum")
    s.add_argument("n", type=int)
    s.add_argument("w", type=int)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--array", help="intersection array, e.g. '{9;9}'")
    g.add_argument("--spectrum", type=_index_set, help="eigenvalue indices, e.g. 0,2")
    s.add_argument("--require-design", action="store_true", help="drop sizes that cannot be t-designs")
    s.add_argument(
        "--isomorph-reject", action=argparse.BooleanOptionalAction, default=True,
        help="one code per S_n orbit (default on)",
    )
    s.add_argument("--no-fix-first", action="store_true", help="do not put {1..w} into the code")
    s.add_argument("--budget", type=int, default=10**9)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--split-depth", type=int, default=0)
    s.add_argument("--checkpoint")
    s.add_argument("--outdir", help="write every code found to this directory")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_search)

    f = sub.add_parser("feasible", help="two-parameter family of matrices in J(n,4)")
    f.add_argument("n", type=int)
    f.add_argument("--known-check", action="store_true", help="require the published row for this n")
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_feasible)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        return args.func(args)
    except Failure:
        return 1
    except (InconsistentProfile, MissingMinEigenvalue, ProfileMismatch, LloydViolation, NonIntegralSizes) as e:
        sys.stderr.write(f"check failed: {e}\n")
        return 1
    except (CodeFileError, ParameterError, DegenerateInput, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
