"""``matred`` command line: analyze, reduce, mop and verify weight specs.

Reports are JSON on stdout (``--human`` prints a text summary instead).
Complex numbers are ``[re, im]`` pairs; matrices are
``{"rows": r, "cols": c, "data": [[re, im], ...]}`` in row-major order.

Exit codes: 0 success, 1 error (including failed verify checks), 2 when the
verdict depends on the kernel tolerance.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import commutant as cm
from .errors import MatredError
from .measure import GammaSequence, MatrixWeight
from .mop import DEFAULT_DEGREE, monic_mops
from .reduction import NONE, extract_blocks, full_reduce
from .specio import canonical_spec_dict, load_input
from .suite import IDENTITY_TOL, gamma_suite, support_interior, weight_suite

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SENSITIVE = 2

REDUCTION_TOL = 1e-8
VERIFY_DEGREE = 4

class _Parser(argparse.ArgumentParser):
    # usage errors are errors (exit 1); exit code 2 is reserved for tolerance sensitivity
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# serialization


def _cnum(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_json(M) -> dict:
    M = np.asarray(M, complex)
    if M.ndim == 1:
        M = M[None, :]
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "data": [_cnum(z) for z in M.ravel()]}


def matrix_from_json(obj: dict) -> np.ndarray:
    data = np.array([complex(re, im) for re, im in obj["data"]])
    return data.reshape(obj["rows"], obj["cols"])


# ---------------------------------------------------------------------------
# report blocks


def verdict_block(w: MatrixWeight, args) -> tuple[dict, bool]:
    rep = cm.verdict(w, args.kernel_tol, args.span_tol)
    sym_dim, comm_dim, herm_dim = rep.dims
    block = {
        "dims": {"sym_real": sym_dim, "commutant_complex": comm_dim, "hermitian_real": herm_dim},
        "star_invariant": bool(rep.star_invariant),
        "classification": rep.classification,
        "tolerance_sensitive": bool(rep.tolerance_sensitive),
        "sym_basis": [matrix_json(T) for T in rep.sym.basis],
        "hermitian_basis": [matrix_json(T) for T in rep.herm.basis],
    }
    return block, rep.tolerance_sensitive


def reduction_tolerance(w: MatrixWeight) -> float:
    scale = max(np.linalg.norm(W) for W in w.at(np.linspace(*support_interior(w), 7)))
    return REDUCTION_TOL * max(float(scale), 1.0)


def reduction_block(w: MatrixWeight, args):
    red = full_reduce(w, args.seed, args.kernel_tol, args.span_tol, args.gap_tol)
    tol = reduction_tolerance(w)
    block = {
        "mode": red.mode,
        "block_sizes": [int(s) for s in red.block_sizes],
        "partition": [[int(i) for i in g] for g in red.partition],
        "transform": matrix_json(red.transform),
        "residual": {"value": float(red.residual), "tolerance": tol,
                     "passed": bool(red.residual <= tol)},
        "seed": red.seed,
        "eigenvalues": None if red.eigenvalues is None else [float(v) for v in red.eigenvalues],
        "S": None if red.S is None else matrix_json(red.S),
        "diagnostic": red.diagnostic,
    }
    return block, red


def mop_block(w: MatrixWeight, degree: int) -> dict:
    mops = monic_mops(w, degree)
    return {
        "degree": degree,
        "H": [matrix_json(H) for H in mops.norms],
        "B": [matrix_json(B) for B in mops.recurrence_B],
        "C": [matrix_json(C) for C in mops.recurrence_C[1:]],
        "hankel_conditions": [float(c) for c in mops.hankel_conditions],
    }


def gamma_block(seq: GammaSequence, args) -> tuple[dict, bool]:
    pairs, sensitive = [], False
    for n in range(len(seq) - 1):
        sp = cm.gamma_sym_space(seq, [n, n + 1], args.kernel_tol)
        sensitive |= sp.tolerance_sensitive
        pairs.append({"indices": [n, n + 1], "real_dim": sp.real_dim,
                      "star_invariant": bool(cm.star_invariant(sp, args.span_tol)),
                      "tolerance_sensitive": bool(sp.tolerance_sensitive)})
    block = {"label": seq.label, "count": len(seq),
             "norms": [matrix_json(G) for G in seq.matrices], "pairs": pairs}
    return block, sensitive


# ---------------------------------------------------------------------------
# commands


def _load(args):
    return load_input(args.builtin, args.spec)


def _require_weight(obj, command: str) -> MatrixWeight:
    if not isinstance(obj, MatrixWeight):
        raise MatredError(f"{command} needs a weight; this input is a sequence of norms only")
    return obj


def _header(args, desc) -> dict:
    return {
        "tool": "matred",
        "version": __version__,
        "command": args.command,
        "input": desc,
        "tolerances": {
            "kernel_tol": args.kernel_tol,
            "span_tol": args.span_tol,
            "gap_tol": "auto" if args.gap_tol is None else args.gap_tol,
            "identity_tol": IDENTITY_TOL,
            "seed": args.seed,
        },
    }


def cmd_analyze(args) -> tuple[dict, int]:
    obj, desc = _load(args)
    report = _header(args, desc)
    if isinstance(obj, GammaSequence):
        report["gamma"], sensitive = gamma_block(obj, args)
    else:
        report["verdict"], sensitive = verdict_block(obj, args)
    return report, EXIT_SENSITIVE if sensitive else EXIT_OK


def cmd_reduce(args) -> tuple[dict, int]:
    obj, desc = _load(args)
    w = _require_weight(obj, "reduce")
    report = _header(args, desc)
    report["verdict"], sensitive = verdict_block(w, args)
    report["reduction"], red = reduction_block(w, args)
    if args.emit_blocks:
        report["reduction"]["emitted"] = emit_blocks(w, red, Path(args.emit_blocks))
    code = EXIT_SENSITIVE if sensitive else EXIT_OK
    if not report["reduction"]["residual"]["passed"]:
        code = EXIT_ERROR
    return report, code


def emit_blocks(w: MatrixWeight, red, outdir: Path) -> list[str]:
    """Write the transformed weight and each diagonal block as spec files."""
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    wt = w.transformed(red.transform, name=f"{w.name}|reduced")
    items = [("transformed.json", wt)]
    if red.mode != NONE:
        items += [(f"block{k}.json", b) for k, b in enumerate(extract_blocks(w, red))]
    for fname, b in items:
        spec = canonical_spec_dict(b.monomial_coefficients(), b.base, b.name)
        (outdir / fname).write_text(json.dumps(spec, indent=2) + "\n")
        written.append(fname)
    return written


def cmd_mop(args) -> tuple[dict, int]:
    obj, desc = _load(args)
    w = _require_weight(obj, "mop")
    report = _header(args, desc)
    degree = DEFAULT_DEGREE if args.degree is None else args.degree
    report["mop"] = mop_block(w, degree)
    return report, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    obj, desc = _load(args)
    report = _header(args, desc)
    if isinstance(obj, GammaSequence):
        report["gamma"], sensitive = gamma_block(obj, args)
        checks = gamma_suite(obj, args.kernel_tol, args.span_tol)
    else:
        degree = VERIFY_DEGREE if args.degree is None else args.degree
        report["verdict"], _ = verdict_block(obj, args)
        checks, sensitive = weight_suite(obj, degree, args.kernel_tol, args.span_tol, args.seed)
    passed = all(c.passed for c in checks)
    report["properties"] = {"passed": passed, "count": len(checks),
                            "failed": [c.name for c in checks if not c.passed],
                            "checks": [c.as_dict() for c in checks]}
    if not passed:
        return report, EXIT_ERROR
    return report, EXIT_SENSITIVE if sensitive else EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "reduce": cmd_reduce, "mop": cmd_mop, "verify": cmd_verify}


# ---------------------------------------------------------------------------
# text output


def human_summary(report: dict) -> str:
    lines = [f"matred {report['version']} {report['command']}",
             f"input: {json.dumps(report['input'])}"]
    if "verdict" in report:
        v = report["verdict"]
        d = v["dims"]
        lines.append(f"classification: {v['classification']}")
        lines.append(f"dims: sym (real) {d['sym_real']}, commutant (complex) {d['commutant_complex']}, "
                     f"hermitian (real) {d['hermitian_real']}")
        lines.append(f"*-invariant: {v['star_invariant']}  tolerance-sensitive: {v['tolerance_sensitive']}")
    if "gamma" in report:
        for p in report["gamma"]["pairs"]:
            lines.append(f"norms {p['indices']}: real dim {p['real_dim']}, *-invariant {p['star_invariant']}")
    if "reduction" in report:
        r = report["reduction"]
        res = r["residual"]
        lines.append(f"reduction: mode {r['mode']}, blocks {r['block_sizes']}, "
                     f"residual {res['value']:.3e} (tol {res['tolerance']:.1e})")
    if "mop" in report:
        m = report["mop"]
        lines.append(f"monic polynomials up to degree {m['degree']}")
        for n, H in enumerate(m["H"]):
            diag = [H["data"][k * (H["cols"] + 1)][0] for k in range(H["rows"])]
            lines.append(f"  diag H_{n} = " + ", ".join(f"{x:.10g}" for x in diag))
    if "properties" in report:
        p = report["properties"]
        lines.append(f"properties: {p['count'] - len(p['failed'])}/{p['count']} passed")
        for c in p["checks"]:
            if not c["passed"]:
                lines.append(f"  FAIL {c['name']}: {c['value']:.3e} > {c['tolerance']:.1e}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# entry point


def _gap_tol(text: str):
    if text == "auto":
        return None
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'auto' or a positive number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("gap tolerance must be positive")
    return v


def _unit_interval(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="matred", description="Reducibility analysis of matrix-valued weights.")
    parser.add_argument("--version", action="version", version=f"matred {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "analyze": "symmetry space, commutant and classification",
        "reduce": "explicit block-diagonalizing transform",
        "mop": "monic orthogonal polynomials: norms and recurrence coefficients",
        "verify": "full numerical property suite",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--builtin", metavar="NAME",
                         help="tirao-variant | 'gegenbauer(ell, nu)' | 'q-gegenbauer-norms(ell, q, count)'")
        src.add_argument("--spec", metavar="FILE", help="weight spec (or a previous report) as JSON")
        p.add_argument("--degree", type=int, default=None,
                       help=f"polynomial degree (mop default {DEFAULT_DEGREE}, verify default {VERIFY_DEGREE})")
        p.add_argument("--emit-blocks", metavar="DIR", default=None,
                       help="reduce: write the transformed weight and its blocks as spec files")
        p.add_argument("--human", action="store_true", help="text summary instead of JSON")
        p.add_argument("--kernel-tol", type=_unit_interval, default=cm.KERNEL_TOL,
                       help="relative singular value cut for kernels (default 1e-9)")
        p.add_argument("--span-tol", type=_unit_interval, default=cm.SPAN_TOL,
                       help="span membership tolerance (default 1e-8)")
        p.add_argument("--gap-tol", type=_gap_tol, default=None,
                       help="eigenvalue grouping threshold (default auto: 1e-6 x spread)")
        p.add_argument("--seed", type=int, default=0, help="seed for the generic commutant element")
        p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    if args.degree is not None and args.degree < 0:
        print("matred: error: --degree must be non-negative", file=sys.stderr)
        return EXIT_ERROR
    if args.emit_blocks and args.command != "reduce":
        print("matred: error: --emit-blocks only applies to reduce", file=sys.stderr)
        return EXIT_ERROR
    try:
        report, code = COMMANDS[args.command](args)
    except (MatredError, ValueError) as exc:
        print(f"matred: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.human:
        print(human_summary(report))
    else:
        print(json.dumps(report, indent=1))
    if code == EXIT_ERROR:
        failed = report.get("properties", {}).get("failed") or ["reduction residual"]
        print(f"matred: failed: {', '.join(failed)}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
