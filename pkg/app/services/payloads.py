"""JSON payloads shared by the command-line front end and the HTTP routers.

Each builder runs one operation and returns ``(outcome, payload)``: the
outcome is the boolean a decision command encodes in its exit status
(``True`` for non-decision commands), the payload is plain JSON data with
rationals written as ``int`` or ``"p/q"``.
"""

import logging
from fractions import Fraction
from typing import Any, Literal, Optional

from app.errors import KernelError
from app.models.simulation import Process, SimConfig
from app.services.kernels.loader import dump_kernel, format_rational
from app.services.kernels.operations import (
    components,
    connected,
    cw_constant,
    degree_distribution,
    degrees,
    l1_norm,
    markov_renormalize,
    max_degree,
    min_degree,
    scale,
)
from app.services.kernels.step_kernel import StepAkernel, StepKernel
from app.services.probabilities.balls import u_ball_distribution, x_ball_distribution
from app.services.probabilities.separation import separating_tree_search
from app.services.probabilities.survival import poisson_survival_reference, survival
from app.services.probabilities.tree_probs import u_tree_prob, x_tree_prob
from app.services.refinement.color_refinement import Template, refine
from app.services.refinement.graphs import Graph, graph_equitable, graph_factor_check, practional_iso
from app.services.refinement.isomorphism import (
    ComponentGrouping,
    frac_iso_witness,
    piecewise_grouping,
    proj_frac_iso,
)
from app.services.simulation.statistics import coarsen, extinction_stats, simulate, tv_distance
from app.services.spanning.percolation import percolation_ball_distribution, sparse_ball_distribution
from app.services.spanning.ust import ust_ball_distribution
from app.services.trees.rooted_tree import parse_code

logger = logging.getLogger(__name__)

FiMode = Literal["exact", "projective", "piecewise"]
TreeProcess = Literal["x", "u"]

# Vertex bound of the exact laws used by ``compare`` options.
COMPARE_MAX_VERTICES = 10


def rationals(values) -> list:
    return [format_rational(Fraction(v)) for v in values]


def template_json(template: Template) -> dict[str, Any]:
    return {"p": rationals(template.p), "D": [rationals(row) for row in template.D]}


def grouping_json(grouping: ComponentGrouping) -> dict[str, Any]:
    return {
        "isolated_mass_u": format_rational(grouping.isolated_mass_u),
        "isolated_mass_w": format_rational(grouping.isolated_mass_w),
        "classes": [
            {
                "members_u": [list(part) for part in c.members_u],
                "members_w": [list(part) for part in c.members_w],
                "mass_u": format_rational(c.mass_u),
                "mass_w": format_rational(c.mass_w),
            }
            for c in grouping.classes
        ],
    }


def _require_symmetric(kernel: StepAkernel, what: str) -> StepKernel:
    if not isinstance(kernel, StepKernel):
        raise KernelError(f"{what} needs a symmetric kernel")
    return kernel


# ---------------------------------------------------------------------------
# Kernel structure
# ---------------------------------------------------------------------------


def fi_payload(u: StepAkernel, w: StepAkernel, mode: FiMode) -> tuple[bool, dict[str, Any]]:
    if mode == "exact":
        witness = frac_iso_witness(u, w)
        return witness.equal, {
            "mode": mode,
            "equal": witness.equal,
            "rounds": witness.partition.rounds,
            "template": template_json(witness.template),
            "mass_u": rationals(witness.mass_u),
            "mass_w": rationals(witness.mass_w),
        }
    u_sym = _require_symmetric(u, f"{mode} fractional isomorphism")
    w_sym = _require_symmetric(w, f"{mode} fractional isomorphism")
    if mode == "projective":
        t = proj_frac_iso(u_sym, w_sym)
        return t is not None, {
            "mode": mode,
            "equal": t is not None,
            "t": format_rational(t) if t is not None else None,
        }
    grouping = piecewise_grouping(u_sym, w_sym)
    return grouping.equal, {"mode": mode, "equal": grouping.equal, "grouping": grouping_json(grouping)}


def refine_payload(kernel: StepAkernel) -> tuple[bool, dict[str, Any]]:
    partition, template = refine(kernel)
    return True, {
        "k": partition.k,
        "rounds": partition.rounds,
        "color": list(partition.color),
        "history": [list(colors) for colors in partition.history],
        "template": template_json(template),
    }


def components_payload(kernel: StepAkernel) -> tuple[bool, dict[str, Any]]:
    decomposition = components(kernel)
    return True, {
        "components": [sorted(part) for part in decomposition.components],
        "masses": rationals(decomposition.masses),
        "isolated": sorted(decomposition.isolated),
        "isolated_mass": format_rational(decomposition.isolated_mass),
        "connected": connected(kernel),
    }


def cw_payload(kernel: StepAkernel) -> tuple[bool, dict[str, Any]]:
    return True, {"c_w": cw_constant(kernel)}


def summary_payload(kernel: StepAkernel) -> tuple[bool, dict[str, Any]]:
    _, structure = components_payload(kernel)
    norm = l1_norm(kernel)
    return True, {
        "kernel": dump_kernel(kernel),
        "types": kernel.n,
        "symmetric": isinstance(kernel, StepKernel),
        "degrees": rationals(degrees(kernel)),
        "degree_distribution": {
            str(format_rational(d)): format_rational(m) for d, m in sorted(degree_distribution(kernel).items())
        },
        "l1_norm": format_rational(norm),
        "min_degree": format_rational(min_degree(kernel)),
        "max_degree": format_rational(max_degree(kernel)),
        "c_w": cw_constant(kernel) if norm else None,
        **structure,
    }


# ---------------------------------------------------------------------------
# Exact probabilities
# ---------------------------------------------------------------------------


def tree_prob_payload(
    kernel: StepAkernel,
    process: TreeProcess,
    depth: int,
    tree: Optional[str] = None,
    max_vertices: int = 6,
) -> tuple[bool, dict[str, Any]]:
    if process == "u":
        kernel = _require_symmetric(kernel, "the uniform-spanning-tree process")
    if tree is not None:
        parsed = parse_code(tree)
        p = u_tree_prob(kernel, parsed, depth) if process == "u" else x_tree_prob(kernel, parsed, depth)
        return True, {"process": process, "tree": parsed.code, "depth": depth, "p": p}
    law = u_ball_distribution(kernel, depth, max_vertices) if process == "u" else x_ball_distribution(
        kernel, depth, max_vertices
    )
    return True, {"process": process, "max_vertices": max_vertices, "distribution": law.model_dump()}


def separate_payload(
    u: StepAkernel, w: StepAkernel, max_height: int, max_vertices: int
) -> tuple[bool, dict[str, Any]]:
    found = separating_tree_search(u, w, max_height, max_vertices)
    if found is None:
        return False, {"found": False, "max_height": max_height, "max_vertices": max_vertices}
    return True, {"found": True, "tree": found.tree.code, "k": found.depth, "pU": found.p_u, "pW": found.p_w}


def survival_payload(
    kernel: StepAkernel, factor: Optional[Fraction] = None, tol: float = 1e-12
) -> tuple[bool, dict[str, Any]]:
    if factor is not None:
        kernel = scale(kernel, factor)
    result = survival(kernel, tol=tol)
    payload: dict[str, Any] = {
        "gamma": result.gamma,
        "s": list(result.s),
        "iterations": result.iterations,
        "residual": result.residual,
    }
    if kernel.n == 1:
        payload["reference"] = poisson_survival_reference(float(kernel.w[0][0]))
    return True, payload


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def _exact_counterpart(kernel: StepAkernel, process: Process, depth: int):
    if process == "x":
        return x_ball_distribution(kernel, depth, COMPARE_MAX_VERTICES)
    if process in ("xdagger", "u-minus"):
        return x_ball_distribution(markov_renormalize(kernel), depth, COMPARE_MAX_VERTICES)
    return u_ball_distribution(kernel, depth, COMPARE_MAX_VERTICES)


def simulate_payload(
    kernel: StepAkernel, process: Process, cfg: SimConfig, compare: bool = False
) -> tuple[bool, dict[str, Any]]:
    report = simulate(kernel, process, cfg)
    payload = report.model_dump()
    if compare:
        exact = _exact_counterpart(kernel, process, cfg.depth)
        payload["tv"] = tv_distance(coarsen(report.distribution, COMPARE_MAX_VERTICES), exact)
    return True, payload


def extinction_payload(kernel: StepAkernel, horizon: int, cfg: SimConfig) -> tuple[bool, dict[str, Any]]:
    kernel = _require_symmetric(kernel, "the Markov renormalization")
    return True, extinction_stats(kernel, horizon, cfg).model_dump()


# ---------------------------------------------------------------------------
# Finite graphs
# ---------------------------------------------------------------------------


def graph_fi_payload(g: Graph, h: Graph) -> tuple[bool, dict[str, Any]]:
    equal = practional_iso(g, h)
    return equal, {
        "equal": equal,
        "factor_check": graph_factor_check(g, h),
        "template_g": template_json(graph_equitable(g)[1]),
        "template_h": template_json(graph_equitable(h)[1]),
    }


def ust_payload(
    kernel: StepAkernel,
    n: int,
    radius: int,
    graphs: int,
    roots_per_graph: int,
    seed: int,
    threads: int = 1,
    compare: bool = False,
) -> tuple[bool, dict[str, Any]]:
    kernel = _require_symmetric(kernel, "the uniform spanning tree")
    report = ust_ball_distribution(kernel, n, radius, graphs, roots_per_graph, seed, threads)
    payload = report.model_dump()
    if compare:
        exact = u_ball_distribution(kernel, radius, COMPARE_MAX_VERTICES)
        payload["tv"] = tv_distance(coarsen(report.distribution, COMPARE_MAX_VERTICES), exact)
        payload["root_degree"] = _root_degree_tv(report.distribution, exact)
    return True, payload


def _root_degree_law(distribution) -> dict[int, float]:
    law: dict[int, float] = {}
    for code, p in distribution.entries.items():
        degree = parse_code(code).root_degree
        law[degree] = law.get(degree, 0.0) + p
    return law


def _root_degree_tv(empirical, exact) -> dict[str, Any]:
    """Root-degree laws of both sides and their TV distance."""
    a, b = _root_degree_law(empirical), _root_degree_law(exact)
    keys = sorted(set(a) | set(b))
    tv = 0.5 * sum(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys)
    return {
        "empirical": {str(k): a.get(k, 0.0) for k in keys},
        "exact": {str(k): b.get(k, 0.0) for k in keys},
        "tv": tv,
    }


def percolate_payload(
    kernel: StepAkernel,
    a: float,
    n: int,
    depth: int,
    graphs: int,
    seed: int,
    threads: int = 1,
    compare: bool = False,
) -> tuple[bool, dict[str, Any]]:
    kernel = _require_symmetric(kernel, "percolation on W-random graphs")
    report = percolation_ball_distribution(kernel, a, n, depth, graphs, seed, threads)
    payload = report.model_dump()
    if compare:
        exact = x_ball_distribution(scale(kernel, Fraction(a).limit_denominator(10**9)), depth, COMPARE_MAX_VERTICES)
        payload["tv"] = tv_distance(coarsen(report.distribution, COMPARE_MAX_VERTICES), exact)
    return True, payload


def sparse_payload(
    kernel: StepAkernel,
    n: int,
    depth: int,
    graphs: int,
    seed: int,
    threads: int = 1,
    compare: bool = False,
) -> tuple[bool, dict[str, Any]]:
    kernel = _require_symmetric(kernel, "sparse W-random graphs")
    report = sparse_ball_distribution(kernel, n, depth, graphs, seed, threads)
    payload = report.model_dump()
    if compare:
        exact = x_ball_distribution(kernel, depth, COMPARE_MAX_VERTICES)
        payload["tv"] = tv_distance(coarsen(report.distribution, COMPARE_MAX_VERTICES), exact)
    return True, payload
