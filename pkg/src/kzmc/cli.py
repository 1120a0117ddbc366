"""Command-line surface tying the modules together.

Subcommands: counts, families, check, spectra, mc, verify-mc, blowup,
render, gen.  JSON is the canonical machine format; ascii and tex are
presentation formats.  Exit codes: 0 ok, 1 usage, 2 parse, 3 contract
violation, 4 theorem violation.  Output is deterministic for fixed
arguments and seed, independent of --jobs.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from fractions import Fraction

from ._version import __version__
from .blowup import blowup_chart
from .errors import (
    ContractError,
    ParseError,
    TheoremViolationError,
    UsageError,
    describe_violation,
)
from .exact_linalg import joint_spectrum, restriction
from .generate import generate
from .kz_system import (
    check_integrability,
    permute,
    spectra,
    system_from_json,
    system_to_json,
)
from .midconv import (
    convolve,
    kernels,
    middle_convolution,
    predicted_joint_spectrum,
    predicted_restriction,
    tilde_A,
    triangularize,
)
from .tournament_core import (
    INFINITY,
    canonical_loser_map,
    canonical_order,
    count_sequences,
    enumerate_families,
    parse_family,
    render_family,
    serialize_family,
    serialize_member,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CONTRACT = 3
EXIT_THEOREM = 4

_EPILOG = """\
exit codes:
  0  success
  1  usage error (bad flags or arguments)
  2  parse error (malformed system JSON or family text)
  3  contract violation (integrability failure, invalid input data)
  4  theorem violation (a verified identity failed on the input)
"""

_COUNT_ROWS = ("patterns", "win-types", "types", "tournaments")


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _read_input(value):
    """Input as a path, inline JSON (leading brace), or '-' for stdin."""
    if value is None:
        raise UsageError("--input is required for this command")
    if value == "-":
        return sys.stdin.read()
    if value.lstrip().startswith("{"):
        return value
    try:
        with open(value, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read input file {value!r}: {exc}")


def _load_system(value):
    return system_from_json(_read_input(value))


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def _require_format(fmt, allowed, command):
    if fmt not in allowed:
        raise UsageError(
            f"--format {fmt} is not supported by {command} "
            f"(choose from {', '.join(allowed)})"
        )


def _tex_table(header, rows):
    lines = ["\\begin{tabular}{" + "l" * len(header) + "}"]
    lines.append(" & ".join(header) + " \\\\")
    lines.append("\\hline")
    for row in rows:
        lines.append(" & ".join(row) + " \\\\")
    lines.append("\\end{tabular}")
    return "\n".join(lines) + "\n"


def _tex_escape(text):
    return text.replace("{", "\\{").replace("}", "\\}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_counts(args):
    _require_format(args.format, ("ascii", "json", "tex"), "counts")
    rows = count_sequences(args.n_max)
    ns = [r[0] for r in rows]
    table = {
        "patterns": [r[1] for r in rows],
        "win-types": [r[2] for r in rows],
        "types": [r[3] for r in rows],
        "tournaments": [r[4] for r in rows],
    }
    if args.format == "json":
        obj = {"n": ns}
        for name in _COUNT_ROWS:
            obj[name.replace("-", "_")] = table[name]
        sys.stdout.write(_dump(obj))
        return EXIT_OK
    if args.format == "tex":
        header = ["$n$"] + [str(n) for n in ns]
        body = [[name] + [str(v) for v in table[name]] for name in _COUNT_ROWS]
        sys.stdout.write(_tex_table(header, body))
        return EXIT_OK
    label_width = max(len("n"), max(len(name) for name in _COUNT_ROWS))
    widths = [
        max(len(str(ns[c])), max(len(str(table[name][c])) for name in _COUNT_ROWS))
        for c in range(len(ns))
    ]

    def line(label, values):
        cells = [str(v).rjust(widths[c]) for c, v in enumerate(values)]
        return label.ljust(label_width) + "  " + "  ".join(cells)

    sys.stdout.write(line("n", ns) + "\n")
    for name in _COUNT_ROWS:
        sys.stdout.write(line(name, table[name]) + "\n")
    return EXIT_OK


def cmd_families(args):
    _require_format(args.format, ("ascii", "json", "tex"), "families")
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    families = enumerate_families(range(args.n))
    texts = [serialize_family(f, shortened=args.shortened) for f in families]
    if args.format == "json":
        sys.stdout.write(_dump(texts))
    elif args.format == "tex":
        sys.stdout.write(
            _tex_table(["family"], [[_tex_escape(t)] for t in texts])
        )
    else:
        for text in texts:
            sys.stdout.write(text + "\n")
    return EXIT_OK


def cmd_check(args):
    _require_format(args.format, ("ascii", "json"), "check")
    system = system_from_json(_read_input(args.input), check=False)
    violations = [describe_violation(v) for v in check_integrability(system)]
    if args.format == "json":
        sys.stdout.write(_dump({"ok": not violations, "violations": violations}))
    else:
        if violations:
            for text in violations:
                sys.stdout.write(text + "\n")
        else:
            sys.stdout.write("ok\n")
    return EXIT_CONTRACT if violations else EXIT_OK


def _spectrum_text(spectrum):
    return " + ".join(
        "[" + ",".join(str(v) for v in tup) + "]x" + str(mult)
        for tup, mult in spectrum.items()
    )


def cmd_spectra(args):
    _require_format(args.format, ("json", "ascii", "tex"), "spectra")
    system = _load_system(args.input)
    report = spectra(system, shortened=args.shortened)
    if args.format == "json":
        sys.stdout.write(_dump(report.to_json_obj()))
        return EXIT_OK
    rows = []
    for fam, _, spectrum in report.entries:
        rows.append(
            (serialize_family(fam, shortened=report.shortened), spectrum)
        )
    if args.format == "tex":
        body = [
            [_tex_escape(text), "$" + _spectrum_text(sp) + "$"]
            for text, sp in rows
        ]
        sys.stdout.write(_tex_table(["family", "spectrum"], body))
    else:
        for text, sp in rows:
            sys.stdout.write(f"{text}: {_spectrum_text(sp)}\n")
    return EXIT_OK


def cmd_mc(args):
    _require_format(args.format, ("json",), "mc")
    system = _load_system(args.input)
    if args.mu is None:
        raise UsageError("mc requires --mu")
    var = args.var
    if var == 0:
        result = middle_convolution(system, args.mu)
    else:
        if not 0 < var < system.n:
            raise UsageError(f"--var must be in 0..{system.n - 1}")
        swap = {k: k for k in range(system.n)}
        swap[0], swap[var] = var, 0
        result = permute(
            middle_convolution(permute(system, swap), args.mu), swap
        )
    sys.stdout.write(system_to_json(result))
    return EXIT_OK


def _verify_one_family(system, conv, kd, quotient_report, family):
    mu = conv.mu
    ordered = canonical_order(family)
    triangularize(conv, family)
    lifted = [tilde_A(conv, member) for member in ordered.order]
    direct = joint_spectrum(lifted, ambient=conv.size)
    predicted = predicted_joint_spectrum(system, family, mu)
    if direct != predicted:
        raise TheoremViolationError("lift joint spectrum deviates from prediction")
    remaining = predicted
    pieces = [(j, kd.slot_kernel(j)) for j in range(1, system.n)]
    pieces.append((INFINITY, kd.k_infinity))
    for which, space in pieces:
        name = "infinity" if which is INFINITY else str(which)
        piece = predicted_restriction(system, family, mu, which)
        if space.dim == 0:
            if piece.total != 0:
                raise TheoremViolationError(
                    f"kernel piece {name}: prediction on a zero space"
                )
            continue
        direct_piece = joint_spectrum(
            [restriction(mat, space) for mat in lifted], ambient=space.dim
        )
        if direct_piece != piece:
            raise TheoremViolationError(
                f"kernel piece {name}: restriction spectrum deviates"
            )
        try:
            remaining = remaining.subtract(piece)
        except ValueError:
            raise TheoremViolationError(
                f"kernel piece {name}: not contained in the lift spectrum"
            )
    if remaining != quotient_report.get(family):
        raise TheoremViolationError("quotient spectrum deviates from prediction")


def cmd_verify_mc(args):
    _require_format(args.format, ("json",), "verify-mc")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    system = _load_system(args.input)
    if args.mu is None:
        raise UsageError("verify-mc requires --mu")
    mu = args.mu
    conv = convolve(system, mu)
    kd = kernels(conv)
    quotient_report = spectra(middle_convolution(system, mu))

    def run_one(family):
        try:
            _verify_one_family(system, conv, kd, quotient_report, family)
            return "ok", ""
        except TheoremViolationError as exc:
            return "violation", str(exc)

    families = enumerate_families(range(system.n))
    if args.jobs == 1:
        outcomes = [run_one(family) for family in families]
    else:
        with concurrent.futures.ThreadPoolExecutor(args.jobs) as pool:
            outcomes = list(pool.map(run_one, families))
    rows = [
        {"family": serialize_family(family), "status": status, "details": details}
        for family, (status, details) in zip(families, outcomes)
    ]
    failed = any(status != "ok" for status, _ in outcomes)
    sys.stdout.write(_dump(rows))
    return EXIT_THEOREM if failed else EXIT_OK


def cmd_blowup(args):
    _require_format(args.format, ("json", "ascii", "tex"), "blowup")
    if args.family is None:
        raise UsageError("blowup requires --family")
    if args.input is not None:
        n = _load_system(args.input).n
    elif args.n is not None:
        n = args.n
    else:
        raise UsageError("blowup requires --n or --input to fix the label count")
    family = parse_family(args.family, n)
    chart = blowup_chart(family, canonical_loser_map(family, 0))
    pair_rows = [
        {
            "i": i,
            "j": j,
            "monomial": list(data.monomial),
            "poly": data.poly.to_str(),
        }
        for (i, j), data in chart.pairs
    ]
    residues = {
        f"X{v + 1}": "A_" + serialize_member(member)
        for v, member in enumerate(chart.variables)
    }
    if args.format == "json":
        sys.stdout.write(_dump({"pairs": pair_rows, "residues": residues}))
        return EXIT_OK
    if args.format == "tex":
        pair_body = [
            [
                f"$x_{{{row['i']}}}-x_{{{row['j']}}}$",
                "$" + "".join(f"X_{{{v}}}" for v in row["monomial"]) + "$"
                if row["monomial"]
                else "$1$",
                "$" + row["poly"].replace("*", " ") + "$",
            ]
            for row in pair_rows
        ]
        residue_body = [
            [f"$X_{{{name[1:]}}}$", "$" + _tex_escape(value) + "$"]
            for name, value in residues.items()
        ]
        sys.stdout.write(_tex_table(["difference", "monomial", "unit"], pair_body))
        sys.stdout.write("\n")
        sys.stdout.write(_tex_table(["variable", "residue"], residue_body))
        return EXIT_OK
    for row in pair_rows:
        monomial = "*".join(f"X{v}" for v in row["monomial"]) or "1"
        sys.stdout.write(
            f"x{row['i']}-x{row['j']} = {monomial} * ({row['poly']})\n"
        )
    for name, value in residues.items():
        sys.stdout.write(f"{name} -> {value}\n")
    return EXIT_OK


def cmd_render(args):
    _require_format(args.format, ("ascii", "tex"), "render")
    if args.family is None:
        raise UsageError("render requires --family")
    family = parse_family(args.family, args.n)
    text = render_family(family, winner=args.winner, format=args.format)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


def cmd_gen(args):
    _require_format(args.format, ("json",), "gen")
    if args.n is None:
        raise UsageError("gen requires --n")
    result = generate(args.kind, args.n, args.seed, steps=args.steps)
    sys.stdout.write(system_to_json(result.system, meta=result.meta()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="kzmc",
        description=__doc__.splitlines()[0],
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"kzmc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, fmt_default, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument(
            "--format",
            default=fmt_default,
            choices=("json", "tex", "ascii"),
            help=f"output format (default: {fmt_default})",
        )
        return p

    p = add("counts", cmd_counts, "ascii", "tournament count table up to n")
    p.add_argument("--n-max", type=int, default=9, help="largest team count")

    p = add("families", cmd_families, "ascii", "enumerate families on 0..n-1")
    p.add_argument("--n", type=int, required=True, help="number of teams")
    p.add_argument(
        "--shortened", action="store_true", help="omit the full label set"
    )

    p = add("check", cmd_check, "ascii", "integrability check of a system")
    p.add_argument("--input", help="path, inline JSON, or - for stdin")

    p = add("spectra", cmd_spectra, "json", "joint spectra over all families")
    p.add_argument("--input", help="path, inline JSON, or - for stdin")
    p.add_argument(
        "--shortened", action="store_true", help="drop the full-set component"
    )

    p = add("mc", cmd_mc, "json", "middle convolution of a system")
    p.add_argument("--input", help="path, inline JSON, or - for stdin")
    p.add_argument("--mu", type=_rational, help="convolution parameter p/q")
    p.add_argument(
        "--var", type=int, default=0, help="distinguished variable (default 0)"
    )

    p = add("verify-mc", cmd_verify_mc, "json", "verify the spectra identities")
    p.add_argument("--input", help="path, inline JSON, or - for stdin")
    p.add_argument("--mu", type=_rational, help="convolution parameter p/q")
    p.add_argument(
        "--jobs", type=int, default=1, help="parallelism degree (output identical)"
    )

    p = add("blowup", cmd_blowup, "json", "chart factorization for a family")
    p.add_argument("--n", type=int, help="number of teams")
    p.add_argument("--input", help="system JSON fixing the label count")
    p.add_argument("--family", help='family text, e.g. "{0,1};{0,1,2}"')

    p = add("render", cmd_render, "ascii", "draw a family as a bracket")
    p.add_argument("--family", help='family text, e.g. "{0,1};{0,1,2}"')
    p.add_argument("--n", type=int, help="number of teams (optional)")
    p.add_argument("--winner", type=int, help="mark this team as the winner")

    p = add("gen", cmd_gen, "json", "generate a seeded integrable system")
    p.add_argument(
        "--kind", default="rank1", choices=("rank1", "mc-tower"),
        help="construction to use",
    )
    p.add_argument("--n", type=int, help="number of variables")
    p.add_argument("--seed", type=int, default=0, help="generation seed")
    p.add_argument(
        "--steps", type=int, default=1, help="tower height for mc-tower"
    )
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"kzmc: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"kzmc: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TheoremViolationError as exc:
        print(f"kzmc: theorem violation: {exc}", file=sys.stderr)
        return EXIT_THEOREM
    except ContractError as exc:
        print(f"kzmc: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
