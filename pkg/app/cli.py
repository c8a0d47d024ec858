"""Command-line front end.

Every command prints one JSON :class:`~app.models.run_report.RunReport` to
stdout (or ``--out``) and a one-line summary through the logger to stderr.

Exit codes: 0 true / success, 1 false, 2 invalid input, 3 budget exceeded.
"""

import argparse
import hashlib
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from app.errors import BudgetExceededError
from app.logging_config import configure_logging
from app.models.run_report import RunReport
from app.models.simulation import SimConfig
from app.services import payloads
from app.services.kernels.loader import load_kernel
from app.services.refinement.graphs import load_graph
from app.settings import MAX_NODES, THREADS

logger = logging.getLogger(__name__)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3

# Flags that never change the results payload.
_NOT_ECHOED = {"threads", "out", "no_timing", "handler"}

Outcome = tuple[bool, Dict[str, Any]]


class Inputs:
    """Loads input files and records the SHA-256 digest of each."""

    def __init__(self) -> None:
        self.digests: Dict[str, str] = {}

    def _record(self, path: str) -> None:
        self.digests[path] = hashlib.sha256(Path(path).read_bytes()).hexdigest()

    def kernel(self, path: str):
        self._record(path)
        return load_kernel(path)

    def graph(self, path: str):
        self._record(path)
        return load_graph(path)


def _rounded(value: Any) -> Any:
    """Floats at 12 significant digits, recursively."""
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {key: _rounded(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(item) for item in value]
    return value


def _sim_config(args: argparse.Namespace, depth: int) -> SimConfig:
    return SimConfig(
        seed=args.seed,
        samples=args.samples,
        depth=depth,
        max_nodes=args.max_nodes,
        threads=args.threads,
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_fi(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.fi_payload(inputs.kernel(args.a), inputs.kernel(args.b), args.mode)


def cmd_tree_prob(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    tree = None if args.all else args.tree
    return payloads.tree_prob_payload(inputs.kernel(args.kernel), args.process, args.depth, tree, args.max_vertices)


def cmd_simulate(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.simulate_payload(
        inputs.kernel(args.kernel), args.process, _sim_config(args, args.depth), compare=args.compare
    )


def cmd_extinction(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.extinction_payload(inputs.kernel(args.kernel), args.horizon, _sim_config(args, 0))


def cmd_separate(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.separate_payload(inputs.kernel(args.a), inputs.kernel(args.b), args.max_height, args.max_vertices)


def cmd_survival(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.survival_payload(inputs.kernel(args.kernel), args.scale, args.tol)


def cmd_cw(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.cw_payload(inputs.kernel(args.kernel))


def cmd_components(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.components_payload(inputs.kernel(args.kernel))


def cmd_refine(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.refine_payload(inputs.kernel(args.kernel))


def cmd_summary(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.summary_payload(inputs.kernel(args.kernel))


def cmd_graph_fi(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.graph_fi_payload(inputs.graph(args.a), inputs.graph(args.b))


def cmd_ust(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.ust_payload(
        inputs.kernel(args.kernel),
        args.n,
        args.radius,
        args.graphs,
        args.roots_per_graph,
        args.seed,
        threads=args.threads,
        compare=args.compare,
    )


def cmd_percolate(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.percolate_payload(
        inputs.kernel(args.kernel),
        args.a_param,
        args.n,
        args.depth,
        args.graphs,
        args.seed,
        threads=args.threads,
        compare=args.compare,
    )


def cmd_sparse(args: argparse.Namespace, inputs: Inputs) -> Outcome:
    return payloads.sparse_payload(
        inputs.kernel(args.kernel),
        args.n,
        args.depth,
        args.graphs,
        args.seed,
        threads=args.threads,
        compare=args.compare,
    )


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational number") from exc


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="Write the report here instead of stdout.")
    parser.add_argument("--threads", type=_positive, default=THREADS, help="Worker threads (never changes results).")
    parser.add_argument("--no-timing", action="store_true", help="Omit wall time so reports are byte-comparable.")


def _seeded(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, required=True, help="Explicit 64-bit seed.")


def _add(
    sub: "argparse._SubParsersAction",
    name: str,
    handler: Callable[[argparse.Namespace, Inputs], Outcome],
    help_text: str,
) -> argparse.ArgumentParser:
    parser = sub.add_parser(name, help=help_text, description=help_text)
    _common(parser)
    parser.set_defaults(handler=handler)
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchly",
        description="Exact and simulated branching processes on step kernels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = _add(sub, "fi", cmd_fi, "Decide (projective / piecewise) fractional isomorphism of two kernels.")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--mode", choices=["exact", "projective", "piecewise"], default="exact")

    p = _add(sub, "tree-prob", cmd_tree_prob, "Exact ball probabilities of X_W or U_W.")
    p.add_argument("kernel")
    p.add_argument("--process", choices=["x", "u"], default="x")
    p.add_argument("--depth", type=_nonnegative, required=True)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--tree", help="Canonical code, e.g. '(()())'.")
    which.add_argument("--all", action="store_true", help="Tabulate every tree up to --max-vertices.")
    p.add_argument("--max-vertices", type=_positive, default=6)

    p = _add(sub, "simulate", cmd_simulate, "Monte Carlo ball frequencies and generation statistics.")
    p.add_argument("kernel")
    p.add_argument("--process", choices=["x", "u", "xdagger", "u-minus"], default="x")
    p.add_argument("--depth", type=_nonnegative, default=2)
    p.add_argument("--samples", type=_positive, default=10_000)
    p.add_argument("--max-nodes", type=_positive, default=MAX_NODES)
    p.add_argument("--compare", action="store_true", help="Add the TV distance to the exact law.")
    _seeded(p)

    p = _add(sub, "extinction", cmd_extinction, "Extinction curve of the Markov-renormalized process.")
    p.add_argument("kernel")
    p.add_argument("--horizon", type=_positive, default=200)
    p.add_argument("--samples", type=_positive, default=10_000)
    p.add_argument("--max-nodes", type=_positive, default=MAX_NODES)
    _seeded(p)

    p = _add(sub, "separate", cmd_separate, "Search for a tree whose ball probabilities differ.")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--max-height", type=_positive, default=3)
    p.add_argument("--max-vertices", type=_positive, default=8)

    p = _add(sub, "survival", cmd_survival, "Survival probability of X_W.")
    p.add_argument("kernel")
    p.add_argument("--scale", type=_rational, help="Multiply the kernel by this rational first.")
    p.add_argument("--tol", type=float, default=1e-12)

    for name, handler, text in (
        ("cw", cmd_cw, "The rescaling constant c_W."),
        ("components", cmd_components, "Connected components and their masses."),
        ("refine", cmd_refine, "Stable color refinement and its template."),
        ("summary", cmd_summary, "Degrees, norms and components of a kernel."),
    ):
        _add(sub, name, handler, text).add_argument("kernel")

    p = _add(sub, "graph-fi", cmd_graph_fi, "Practional isomorphism of two graphs.")
    p.add_argument("a")
    p.add_argument("b")

    p = _add(sub, "ust", cmd_ust, "Ball law of uniform spanning trees of dense W-random graphs.")
    p.add_argument("kernel")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--radius", type=_nonnegative, default=1)
    p.add_argument("--graphs", type=_positive, default=100)
    p.add_argument("--roots-per-graph", type=_positive, default=1)
    p.add_argument("--compare", action="store_true", help="Add the TV distance to the exact U_W law.")
    _seeded(p)

    p = _add(sub, "percolate", cmd_percolate, "Ball law of a/n-percolated dense W-random graphs.")
    p.add_argument("kernel")
    p.add_argument("--a", dest="a_param", type=float, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--depth", type=_nonnegative, default=2)
    p.add_argument("--graphs", type=_positive, default=100)
    p.add_argument("--compare", action="store_true", help="Add the TV distance to the X_{aW} law.")
    _seeded(p)

    p = _add(sub, "sparse", cmd_sparse, "Ball law of sparse G(n, W/n) random graphs.")
    p.add_argument("kernel")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--depth", type=_nonnegative, default=2)
    p.add_argument("--graphs", type=_positive, default=100)
    p.add_argument("--compare", action="store_true", help="Add the TV distance to the X_W law.")
    _seeded(p)

    return parser


def _echo(args: argparse.Namespace) -> Dict[str, Any]:
    echo = {}
    for key, value in vars(args).items():
        if key in _NOT_ECHOED:
            continue
        echo[key] = str(value) if isinstance(value, Fraction) else value
    return echo


def _emit(report: RunReport, out: Optional[str]) -> None:
    text = json.dumps(_rounded(report.model_dump(exclude_none=True)), indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    inputs = Inputs()
    started = time.perf_counter()
    try:
        outcome, results = args.handler(args, inputs)
    except BudgetExceededError as exc:
        logger.error("Budget exceeded: %s", exc, extra={"details": exc.details})
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        logger.error("Invalid input: %s", exc)
        return EXIT_INVALID

    report = RunReport(
        command=_echo(args),
        inputs=inputs.digests,
        seed=getattr(args, "seed", None),
        results=results,
        wall_time=None if args.no_timing else time.perf_counter() - started,
    )
    _emit(report, args.out)
    code = EXIT_TRUE if outcome else EXIT_FALSE
    logger.info("%s finished with exit code %d", args.command, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
