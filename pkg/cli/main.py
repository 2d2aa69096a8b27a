"""
Qudit Magic State Distillation - Command Line

Subcommands:
- canonicalize: canonical form and triviality of a code file
- distill:      exact / brute-force / Monte Carlo distillation of a state
- sweep:        nu_out = f(nu_in) table for one face
- witness:      contextuality witness of a single-qudit state
- theorem2:     random-code survey of f(0) and bound margins over all faces
- graph:        exclusivity graph counts, DIMACS export, independence number

Exit codes: 0 success (including solver timeouts), 2 input error,
3 zero acceptance, 4 contract violation.
"""

import argparse
import json
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

# Add project root
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from config import CLI_CONFIG, OUTPUT_DIR, VERSION, WITNESS_CONFIG
from src.codes.stabilizer import canonicalize, load_code, validate
from src.contextuality.independent_set import max_independent_set
from src.contextuality.witness import build_graph, ontological_sweep, witness_value
from src.distillation.engine import distill_bruteforce, distill_exact, distill_mc
from src.distillation.sweep import nu_grid, nu_sweep, survey_frame, sweep_frame, theorem2_survey
from src.phase_space.wigner import density_from_wigner
from src.serialization.formats import (
    DistillationResultFile, ExperimentManifest, WitnessReportFile,
    file_digest, load_state, write_csv, write_dimacs,
)
from src.utils.errors import (
    ContractViolation, InvalidCode, NegativeInput, QuditMSDError, ShapeError, SolverTimedOut,
    ZeroAcceptance,
)
from src.utils.logger import get_logger

logger = get_logger()


def parse_face(text: str) -> Tuple[int, int]:
    """Parse 'u,v'."""
    try:
        u, v = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"face must look like 'u,v', got {text!r}")
    return u, v


def _emit_json(payload: Dict[str, Any], output: Optional[Path]) -> List[Path]:
    if output is None:
        print(json.dumps(payload, indent=2))
        return []
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return [output]


def cmd_canonicalize(args: argparse.Namespace) -> List[Path]:
    code = load_code(args.code)
    verdict = validate(code)
    if not verdict:
        raise InvalidCode(verdict.reason)
    canonical = canonicalize(code)
    report = canonical.to_dict()

    print(f"n: {canonical.n}")
    print(f"m: {canonical.m}")
    for name in ("A", "B", "C", "vecA", "vecB", "vecC", "permutation"):
        print(f"{name}: {report[name]}")
    print(f"trivial: {str(report['trivial']).lower()}")
    if args.output:
        return _emit_json(report, args.output)
    return []


def cmd_distill(args: argparse.Namespace) -> List[Path]:
    code = load_code(args.code)
    w_in, _ = load_state(args.state)
    if args.engine == "mc":
        result = distill_mc(code, w_in, args.samples, args.seed, threads=args.threads)
    elif args.engine == "bruteforce":
        result = distill_bruteforce(code, w_in)
    else:
        result = distill_exact(code, w_in, threads=args.threads)

    payload = DistillationResultFile(
        engine=result.engine, d=int(code.d), N=code.n_qudits,
        values=result.w_out.values.tolist(),
        acceptance_probability=result.acceptance_probability,
        histogram=result.histogram.tolist(),
        samples=result.samples, accepted=result.accepted,
        seed=args.seed if args.engine == "mc" else None,
        prng=result.metadata.get("prng"),
    )
    if args.output is None:
        print(payload.model_dump_json(indent=2))
        return []
    return [payload.save(args.output)]


def cmd_sweep(args: argparse.Namespace) -> List[Path]:
    code = load_code(args.code)
    frame = sweep_frame(nu_sweep(code, args.face, nu_grid(args.nu_min, args.nu_max, args.steps),
                                 threads=args.threads))
    if args.output is None:
        print(frame.to_csv(index=False, float_format="%.17g"), end="")
        return []
    return [write_csv(frame, args.output)]


def cmd_witness(args: argparse.Namespace) -> List[Path]:
    w, rho = load_state(args.state)
    if w.n_qudits != 1:
        raise ShapeError("witness takes a single-qudit state")
    if rho is None:
        rho = density_from_wigner(w)
    sigma = None
    if args.ancilla is not None:
        w_anc, sigma = load_state(args.ancilla)
        if sigma is None:
            sigma = density_from_wigner(w_anc)
    report = witness_value(rho, sigma, *args.face)
    payload = WitnessReportFile(**report.to_dict())
    if args.output is None:
        print(payload.model_dump_json(indent=2))
        return []
    return [payload.save(args.output)]


def cmd_theorem2(args: argparse.Namespace) -> List[Path]:
    rows = theorem2_survey(args.d, args.n_max, args.codes, args.seed,
                           threads=args.threads, progress=args.progress)
    frame = survey_frame(rows)
    failures = int((~frame["consistent"]).sum()) if len(frame) else 0
    if args.output is None:
        print(frame.to_csv(index=False, float_format="%.17g"), end="")
        written = []
    else:
        written = [write_csv(frame, args.output)]
    summary = (f"codes: {len(rows)}, trivial: {int(frame['trivial'].sum()) if len(frame) else 0}, "
               f"dichotomy failures: {failures}")
    print(summary)
    logger.info(f"theorem2 d={args.d} n_max={args.n_max} seed={args.seed}: {summary}")
    if failures:
        raise ContractViolation(f"{failures} code(s) break the trivial/nontrivial gap dichotomy")
    return written


def cmd_graph(args: argparse.Namespace) -> List[Path]:
    u, v = args.face
    graph = build_graph(args.d, u, v, threads=args.threads)
    print(f"vertices: {graph.n_vertices}, edges: {graph.n_edges}")
    written = []
    if args.out is not None:
        written.append(write_dimacs(graph, args.out))

    if args.solve_mis:
        seed_set = ontological_sweep(args.d, u, v).best_set
        try:
            result = max_independent_set(graph, args.budget, initial=seed_set)
            print(f"independence_number: {result.size}")
        except SolverTimedOut as e:
            print(f"independence_number: timed out, lower bound {e.best_size}")
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qudit-msd",
        description="Qudit magic state distillation in discrete phase space",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", type=Path, default=None, help="Write the result here")
    common.add_argument("--threads", type=int, default=None, help="Worker threads")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canonicalize", parents=[common], help="Canonical form of a code")
    p.add_argument("code", type=Path)
    p.set_defaults(func=cmd_canonicalize)

    p = sub.add_parser("distill", parents=[common], help="Distill a single-qudit state")
    p.add_argument("code", type=Path)
    p.add_argument("state", type=Path)
    p.add_argument("--engine", choices=["exact", "mc", "bruteforce"], default="exact")
    p.add_argument("--samples", type=int, default=CLI_CONFIG["default_mc_samples"])
    p.add_argument("--seed", type=int, default=CLI_CONFIG["default_seed"])
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("sweep", parents=[common], help="nu_out = f(nu_in) at one face")
    p.add_argument("code", type=Path)
    p.add_argument("--face", type=parse_face, default=(0, 0))
    p.add_argument("--nu-min", type=float, default=-1.0 / 3.0)
    p.add_argument("--nu-max", type=float, default=1.0 / 9.0)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("witness", parents=[common], help="Contextuality witness of a state")
    p.add_argument("state", type=Path)
    p.add_argument("--face", type=parse_face, default=(0, 0))
    p.add_argument("--ancilla", type=Path, default=None)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("theorem2", parents=[common], help="Survey f(0) over random codes")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--codes", type=int, default=200)
    p.add_argument("--seed", type=int, default=CLI_CONFIG["default_seed"])
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_theorem2)

    p = sub.add_parser("graph", parents=[common], help="Exclusivity graph of a face")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--face", type=parse_face, default=(0, 0))
    p.add_argument("--out", type=Path, default=None, help="DIMACS output path")
    p.add_argument("--solve-mis", action="store_true")
    p.add_argument("--budget", type=float, default=WITNESS_CONFIG["mis_budget_seconds"])
    p.set_defaults(func=cmd_graph)
    return parser


def write_manifest(args: argparse.Namespace, started_at: str, exit_code: int,
                   outputs: Sequence[Path]) -> Path:
    """
    Write <output>.manifest.json next to the primary output.

    Runs that print to stdout get OUTPUT_DIR/manifests/<command>-<timestamp>.manifest.json.
    """
    primary = getattr(args, "output", None) or getattr(args, "out", None)
    if primary is not None:
        path = Path(str(primary) + ".manifest.json")
    else:
        stamp = datetime.now().strftime("%Y%m%dT%H%M%S%f")
        path = Path(OUTPUT_DIR) / "manifests" / f"{args.command}-{stamp}.manifest.json"
        path.parent.mkdir(parents=True, exist_ok=True)
    parameters = {k: (str(v) if isinstance(v, Path) else v)
                  for k, v in vars(args).items() if k not in ("func",)}
    manifest = ExperimentManifest(
        command=args.command,
        parameters=json.loads(json.dumps(parameters, default=str)),
        seed=getattr(args, "seed", None),
        version=VERSION,
        started_at=started_at,
        finished_at=datetime.now().isoformat(),
        exit_code=exit_code,
        outputs={str(p): file_digest(p) for p in outputs},
    )
    return manifest.save(path)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return CLI_CONFIG["exit_ok"] if e.code == 0 else CLI_CONFIG["exit_input_error"]

    started = time.perf_counter()
    started_at = datetime.now().isoformat()
    exit_code = CLI_CONFIG["exit_ok"]
    outputs: List[Path] = []
    try:
        outputs = args.func(args)
    except ZeroAcceptance as e:
        exit_code = CLI_CONFIG["exit_zero_acceptance"]
        print(f"error: zero acceptance: {e}", file=sys.stderr)
        logger.log_error(e, {"command": args.command})
    except (NegativeInput, ContractViolation) as e:
        exit_code = CLI_CONFIG["exit_contract_violation"]
        print(f"error: {e}", file=sys.stderr)
        logger.log_error(e, {"command": args.command})
    except (QuditMSDError, ValueError) as e:
        exit_code = CLI_CONFIG["exit_input_error"]
        print(f"error: {e}", file=sys.stderr)
        logger.log_error(e, {"command": args.command})

    if exit_code == CLI_CONFIG["exit_ok"]:
        write_manifest(args, started_at, exit_code, outputs)
    logger.log_run(args.command, {k: v for k, v in vars(args).items() if k != "func"},
                   time.perf_counter() - started, exit_code)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
