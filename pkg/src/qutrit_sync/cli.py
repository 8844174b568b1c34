"""Command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import dfa as dfa_mod
from .channels import standard_alphabet
from .linalg import ValidationError, basis
from .prep import (
    DEFAULT_FAMILY_CAP,
    DEFAULT_PROBES,
    PrepFamily,
    compile_target,
    covering_radius,
    family_states,
)
from .qsync import ScanGrid, scan_overlap, sync_report

EXIT_USAGE = 2
EXIT_IO = 3
NORMALIZE_SLACK = 1e-3


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def num(x: float) -> float:
    """Round to the printed precision so JSON and CSV agree."""
    return float(fmt(x))


def parse_amplitude(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` into a complex number."""
    s = text.strip().replace(" ", "")
    if not s:
        raise UsageError("empty amplitude")
    try:
        if s.endswith("i"):
            body = s[:-1]
            if body in ("", "+", "-"):
                body += "1"
            return complex(body + "j")
        return complex(float(s))
    except ValueError:
        raise UsageError(f"cannot parse amplitude {text!r}; use a, bi or a+bi") from None


def parse_target(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"target needs 3 comma-separated amplitudes, got {len(parts)}")
    v = np.array([parse_amplitude(p) for p in parts], dtype=complex)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-12:
        if abs(norm - 1.0) >= NORMALIZE_SLACK:
            raise UsageError(f"target norm is {norm:.6g}; amplitudes must be normalized")
        print(f"warning: target norm {norm:.12g} renormalized to 1", file=sys.stderr)
        v = v / norm
    return v


# --- subcommands ---------------------------------------------------------

def _angles(args, *names):
    scale = math.pi if args.pi_units else 1.0
    out = []
    for name in names:
        value = getattr(args, name)
        if value is None:
            out.append(None)
            continue
        if not math.isfinite(value):
            raise UsageError(f"--{name.replace('_', '-')} must be finite")
        out.append(value * scale)
    return out


def _phases(args):
    alpha, beta = _angles(args, "alpha", "beta")
    if (alpha is None) != (beta is None):
        raise UsageError("--alpha and --beta must be given together")
    return alpha, beta


def cmd_sync_check(args) -> str:
    if not args.word:
        raise UsageError("--word must be a non-empty word over A, B, C")
    if set(args.word) - set("ABC"):
        raise UsageError(f"--word {args.word!r} may only use the letters A, B, C")
    theta, phi = _angles(args, "theta", "phi")
    alpha, beta = _phases(args)
    if "C" in args.word and alpha is None:
        raise UsageError("word uses the C gate; give --alpha and --beta")
    word = standard_alphabet(theta, phi, alpha, beta).word(args.word)
    report = sync_report(word, basis(2))
    return json.dumps({
        "word": args.word,
        "theta": num(theta),
        "phi": num(phi),
        "worst_case_fidelity": num(report.worst_case_fidelity),
        "mixed_state_fidelity": num(report.fidelity_from_maximally_mixed),
    }) + "\n"


def cmd_scan(args) -> str:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    t0, t1, p0, p1 = _angles(args, "theta_min", "theta_max", "phi_min", "phi_max")
    grid = ScanGrid.linspace((t0, t1), (p0, p1), args.steps, word=args.word,
                             initial_state=args.initial)
    values = scan_overlap(grid, basis(2), workers=args.workers)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["theta", "phi", "overlap"])
    for i, theta in enumerate(grid.theta_values):
        for j, phi in enumerate(grid.phi_values):
            writer.writerow([fmt(theta), fmt(phi), fmt(values[i, j])])
    return buf.getvalue()


def _word_payload(word: str | None) -> dict:
    if word is None:
        return {"word": None}
    return {"word": word, "word_length": len(word)}


def cmd_dfa(args) -> str:
    if args.cerny is not None:
        if args.cerny < 2:
            raise UsageError("--cerny needs n >= 2")
        word = dfa_mod.shortest_sync_word(dfa_mod.make_cerny_automaton(args.cerny))
        return json.dumps({"n": args.cerny, **_word_payload(word)}) + "\n"
    if args.dfa_file is None:
        raise UsageError("a DFA file is required unless --cerny is given")
    try:
        automaton = dfa_mod.load_dfa(args.dfa_file)
    except OSError as exc:
        raise UsageError(f"cannot read {args.dfa_file}: {exc.strerror}") from None
    if args.check is not None:
        ok, state = dfa_mod.is_synchronizing(automaton, args.check)
        return json.dumps({"synchronizing": ok, "state": state}) + "\n"
    if args.greedy:
        return json.dumps(_word_payload(dfa_mod.greedy_sync_word(automaton))) + "\n"
    return json.dumps(_word_payload(dfa_mod.shortest_sync_word(automaton))) + "\n"


def _family(args) -> PrepFamily:
    theta, phi = _angles(args, "theta", "phi")
    alpha, beta = _phases(args)
    if args.n < 1:
        raise UsageError("--n must be positive")
    return PrepFamily(theta, phi, args.n, alpha, beta)


def cmd_states(args) -> str:
    family = _family(args)
    states = family_states(family, cap=args.cap)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if family.is_complex:
        writer.writerow(["l", "k", "j", "re1", "im1", "re2", "im2", "re3", "im3"])
        for idx, v in zip(family.indices(), states):
            writer.writerow([*idx, *(fmt(x) for a in v for x in (a.real, a.imag))])
    else:
        writer.writerow(["k", "j", "x", "y", "z"])
        for idx, v in zip(family.indices(), states):
            writer.writerow([idx.k, idx.j, *(fmt(a.real) for a in v)])
    return buf.getvalue()


def cmd_prepare(args) -> str:
    target = parse_target(args.target)
    family = _family(args)
    try:
        result = compile_target(family, target, cap=args.cap)
    except ValidationError as exc:
        if not family.is_complex and "C gate" in str(exc):
            raise UsageError(f"{exc}; pass --alpha and --beta to enable the C gate") from None
        raise
    payload = result.to_dict()
    payload["predicted_fidelity"] = num(payload["predicted_fidelity"])
    return json.dumps(payload) + "\n"


def cmd_coverage(args) -> str:
    family = _family(args)
    report = covering_radius(family, args.probes, seed=args.seed, cap=args.cap)
    return json.dumps({
        "covering_radius": num(report.covering_radius),
        "num_states": report.num_states,
        "probes": args.probes,
        "seed": args.seed,
    }) + "\n"


# --- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--pi-units", action="store_true",
                        help="read every angle argument in units of pi")

    parser = argparse.ArgumentParser(
        prog="qutrit-sync",
        description="Quantum synchronizing words for qutrits and classical reset words.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    half_pi = math.pi / 2
    p = sub.add_parser("sync-check", parents=[common], help="fidelities of a word with target |2>")
    p.add_argument("--theta", type=float, default=half_pi)
    p.add_argument("--phi", type=float, default=half_pi)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--word", default="ABA")
    p.set_defaults(func=cmd_sync_check)

    p = sub.add_parser("scan", parents=[common], help="overlap with |2> over a (theta, phi) grid")
    p.add_argument("--theta-min", type=float, default=0.4 * math.pi)
    p.add_argument("--theta-max", type=float, default=0.6 * math.pi)
    p.add_argument("--phi-min", type=float, default=0.4 * math.pi)
    p.add_argument("--phi-max", type=float, default=0.6 * math.pi)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--word", default="ABA")
    p.add_argument("--initial", default="maximally_mixed",
                   help="maximally_mixed, worst_case or basis(i)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("dfa", parents=[common], help="classical synchronizing words")
    p.add_argument("dfa_file", nargs="?")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--check", metavar="WORD")
    mode.add_argument("--shortest", action="store_true")
    mode.add_argument("--greedy", action="store_true")
    mode.add_argument("--cerny", type=int, metavar="N")
    p.set_defaults(func=cmd_dfa)

    p = sub.add_parser("cerny", parents=[common], help="shortest reset word of the Cerny automaton C_n")
    p.add_argument("cerny", type=int, metavar="N")
    p.set_defaults(func=cmd_dfa, dfa_file=None, check=None, greedy=False)

    def family_args(p, theta, phi, n):
        p.add_argument("--theta", type=float, default=theta)
        p.add_argument("--phi", type=float, default=phi)
        p.add_argument("--n", type=int, default=n)
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--cap", type=int, default=DEFAULT_FAMILY_CAP)

    fig_theta, fig_phi = 9 / 101, 4 * math.pi / 101

    p = sub.add_parser("states", parents=[common], help="point cloud of the |l,k,j> family")
    family_args(p, fig_theta, fig_phi, 101)
    p.set_defaults(func=cmd_states)

    p = sub.add_parser("prepare", parents=[common], help="reset-and-prepare word for a target state")
    p.add_argument("--target", required=True, help="three amplitudes, e.g. 0,0.707i,0.707")
    family_args(p, fig_theta, fig_phi, 101)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("coverage", parents=[common], help="covering radius of the family")
    family_args(p, fig_theta, fig_phi, 101)
    p.add_argument("--probes", type=int, default=DEFAULT_PROBES)
    p.set_defaults(func=cmd_coverage)
    return parser


@contextmanager
def _output(path: str | None):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        yield fh


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except (UsageError, ValidationError, dfa_mod.DfaError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with _output(args.out) as fh:
            fh.write(text)
    except OSError as exc:
        print(f"{parser.prog}: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
