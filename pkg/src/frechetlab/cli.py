"""Command-line interface.

Exit codes: 0 on success, 2 on malformed input, 3 on contract violations.
"""
from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import click
import numpy as np

from . import applications as apps
from . import classic, cpm, io, reduction, render, speed
from .fsmap import ContractViolation

EXIT_INPUT = 2
EXIT_CONTRACT = 3


def _load(path: str, *kinds: str) -> Dict[str, Any]:
    inst = io.read_instance(path)
    if kinds and inst["kind"] not in kinds:
        raise io.InputError(f"kind: {path} is {inst['kind']!r}, expected {' or '.join(kinds)}")
    return inst


def _eps(inst: Dict[str, Any], eps: Optional[float], required: bool = True) -> Optional[float]:
    if eps is not None:
        if eps < 0 or not np.isfinite(eps):
            raise io.InputError("eps: expected a finite non-negative number")
        return eps
    if "eps" in inst:
        return inst["eps"]
    if required:
        raise io.InputError("eps: give --eps or an eps field in the instance")
    return None


def _value(v: float) -> str:
    return f"{v:.12f}" if np.isfinite(v) else "inf"


def _pts(a) -> str:
    return json.dumps([[float(c) for c in p] for p in np.asarray(a, float)])


def _answer(ok: bool) -> None:
    click.echo("YES" if ok else "NO")


def _profiles(inst: Dict[str, Any]):
    if "speeds" in inst:
        return speed.SpeedProfiles(*inst["speeds"])
    return speed.SpeedProfiles.unconstrained(len(inst["P"]) - 1, len(inst["Q"]) - 1)


def _decide_one(path: str, eps: Optional[float]) -> str:
    inst = _load(path, "pair", "closed-pair")
    return "YES" if classic.decide_frechet(inst["P"], inst["Q"], _eps(inst, eps)) else "NO"


def _compute_one(path: str) -> str:
    inst = _load(path, "pair", "closed-pair")
    v, kind = classic.compute_frechet_with_kind(inst["P"], inst["Q"])
    return f"{_value(v)} {kind}"


def _batch(fn, paths: Sequence[str], jobs: int, *args) -> List[str]:
    if jobs <= 1 or len(paths) <= 1:
        return [fn(p, *args) for p in paths]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, paths, *[[a] * len(paths) for a in args]))


EPS = click.option("--eps", type=float, default=None, help="Distance threshold (overrides the file).")


@click.group()
def cli() -> None:
    """Fréchet distance tools."""


@cli.command()
@click.argument("files", nargs=-1, required=True, type=click.Path())
@EPS
@click.option("--jobs", type=int, default=1, show_default=True, help="Parallel workers for several files.")
def decide(files, eps, jobs):
    """Is the Fréchet distance of P and Q at most eps?"""
    res = _batch(_decide_one, list(files), jobs, eps)
    for f, r in zip(files, res):
        click.echo(r if len(files) == 1 else f"{f}: {r}")


@cli.command()
@click.argument("files", nargs=-1, required=True, type=click.Path())
@click.option("--jobs", type=int, default=1, show_default=True)
def compute(files, jobs):
    """Fréchet distance of P and Q and the kind of critical value reached."""
    res = _batch(_compute_one, list(files), jobs)
    for f, r in zip(files, res):
        click.echo(r if len(files) == 1 else f"{f}: {r}")


@cli.command()
@click.argument("file", type=click.Path())
@EPS
def weak(file, eps):
    """Weak Fréchet distance, or the decision when eps is given."""
    inst = _load(file, "pair", "closed-pair")
    e = _eps(inst, eps, required=False)
    if e is None:
        click.echo(_value(classic.compute_weak_frechet(inst["P"], inst["Q"])))
    else:
        _answer(classic.decide_weak_frechet(inst["P"], inst["Q"], e))


@cli.command()
@click.argument("file", type=click.Path())
@EPS
def discrete(file, eps):
    """Discrete Fréchet distance over the vertices, or the decision when eps is given."""
    inst = _load(file, "pair", "closed-pair")
    v = classic.discrete_frechet(inst["P"], inst["Q"])
    e = _eps(inst, eps, required=False)
    if e is None:
        click.echo(_value(v))
    else:
        _answer(v <= e * (1 + 1e-12))


@cli.command("speed-decide")
@click.argument("file", type=click.Path())
@EPS
@click.option("--simple", is_flag=True, help="Use the eager interval sweep.")
def speed_decide(file, eps, simple):
    """Speed-constrained decision."""
    inst = _load(file, "pair")
    fn = speed.decide_speed_simple if simple else speed.decide_speed_fast
    _answer(fn(inst["P"], inst["Q"], _profiles(inst), _eps(inst, eps)))


@cli.command("speed-compute")
@click.argument("file", type=click.Path())
def speed_compute(file):
    """Speed-constrained Fréchet distance."""
    inst = _load(file, "pair")
    v, kind = speed.compute_speed_frechet_with_kind(inst["P"], inst["Q"], _profiles(inst))
    click.echo(f"{_value(v)} {kind}")


@cli.command()
@click.argument("file", type=click.Path())
@EPS
def partial(file, eps):
    """Subcurve of P matching all of Q."""
    inst = _load(file, "pair")
    e = _eps(inst, eps, required=False)
    if e is None:
        click.echo(_value(apps.partial_match_optimize(inst["P"], inst["Q"])))
        return
    m = apps.partial_match(inst["P"], inst["Q"], e)
    _answer(m is not None)
    if m is not None:
        click.echo(f"subcurve: [{m.start!r}, {m.end!r}]")


@cli.command()
@click.argument("file", type=click.Path())
@EPS
def closed(file, eps):
    """Fréchet distance of closed curves (free choice of starting point on P)."""
    inst = _load(file, "closed-pair", "pair")
    e = _eps(inst, eps, required=False)
    if e is None:
        click.echo(_value(apps.closed_frechet_optimize(inst["P"], inst["Q"])))
        return
    t = apps.closed_match(inst["P"], inst["Q"], e)
    _answer(t is not None)
    if t is not None:
        click.echo(f"shift: {t!r}")


def _walk(file, eps, fn):
    inst = _load(file, "pair")
    m = fn(inst["P"], inst["Q"], _eps(inst, eps))
    _answer(m is not None)
    if m is not None:
        click.echo(f"subcurve: [{m.start!r}, {m.end!r}]")
        click.echo(f"length: {m.length!r}")


@cli.command()
@click.argument("file", type=click.Path())
@EPS
def maxwalk(file, eps):
    """Longest subcurve of P matching Q."""
    _walk(file, eps, apps.max_walk)


@cli.command()
@click.argument("file", type=click.Path())
@EPS
def minwalk(file, eps):
    """Shortest subcurve of P matching Q."""
    _walk(file, eps, apps.min_walk)


@cli.command()
@click.argument("file", type=click.Path())
@EPS
def dagmatch(file, eps):
    """Path in a geometric DAG matching P."""
    inst = _load(file, "dag")
    G = apps.GeometricDag(inst["vertices"], inst["edges"])
    e = _eps(inst, eps, required=False)
    if e is None:
        click.echo(_value(apps.dag_match_optimize(inst["P"], G)))
        return
    path = apps.dag_match(inst["P"], G, e)
    _answer(path is not None)
    if path is not None:
        click.echo(f"path: {json.dumps(path)}")


@cli.command("cpm-decide")
@click.argument("file", type=click.Path())
@EPS
def cpm_decide(file, eps):
    """Curve through the point set within eps of P."""
    inst = _load(file, "pointset")
    c = cpm.CpmInstance(inst["S"], inst["P"], _eps(inst, eps))
    Q = cpm.cpm_reconstruct(c)
    _answer(Q is not None)
    if Q is not None:
        click.echo(f"curve: {_pts(Q)}")


@cli.command("cpm-compute")
@click.argument("file", type=click.Path())
def cpm_compute(file):
    """Smallest eps admitting a curve through the point set."""
    inst = _load(file, "pointset")
    click.echo(_value(cpm.cpm_optimize(inst["S"], inst["P"])))


def _formula(path: str) -> reduction.SatFormula:
    try:
        with open(path, encoding="utf-8") as fh:
            return io.parse_dimacs(fh.read())
    except OSError as exc:
        raise io.InputError(f"{path}: {exc.strerror}") from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@cli.command("reduce-3sat")
@click.argument("formula", type=click.Path())
@click.option("-o", "--output", default=None, help="Write the instance here instead of stdout.")
@click.option("--literal", is_flag=True, help="Keep the original end-point offsets.")
def reduce_3sat(formula, output, literal):
    """Point-set instance that is feasible iff the formula is satisfiable."""
    inst = reduction.reduce_3sat(_formula(formula), literal=literal)
    doc = {"kind": "pointset", "P": inst.P, "S": inst.S, "eps": inst.eps, "all_points": True}
    _emit(io.write_instance(doc), output)


@cli.command("build-assignment-curve")
@click.argument("formula", type=click.Path())
@click.option("--assignment", required=True, help="Truth values as a 0/1 string, x1 first.")
@click.option("-o", "--output", default=None)
@click.option("--literal", is_flag=True)
def build_assignment_curve(formula, assignment, output, literal):
    """Curve realizing a truth assignment on the reduced instance."""
    phi = _formula(formula)
    if len(assignment) != phi.n_vars or set(assignment) - {"0", "1"}:
        raise io.InputError(f"assignment: expected {phi.n_vars} characters of 0/1")
    Q = reduction.build_assignment_curve(phi, [c == "1" for c in assignment], literal=literal)
    _emit(io.write_instance({"kind": "curve", "Q": Q}), output)


@cli.command()
@click.argument("instance", type=click.Path())
@click.argument("curve", type=click.Path())
@click.option("--tolerance", type=float, default=1e-12, show_default=True, help="Vertex-to-point match tolerance.")
def verify(instance, curve, tolerance):
    """Check a curve against a point-set instance."""
    inst = _load(instance, "pointset")
    Q = _load(curve, "curve")["Q"]
    c = cpm.CpmInstance(inst["S"], inst["P"], _eps(inst, None), all_points=inst.get("all_points", False))
    click.echo("FEASIBLE" if cpm.verify_feasible(Q, c, tol=tolerance) else "INFEASIBLE")


@cli.command("render")
@click.argument("file", type=click.Path())
@EPS
@click.option("--resolution", type=int, default=32, show_default=True, help="Slices per cell.")
@click.option("--query", "queries", type=float, multiple=True, help="Start point on the bottom row to annotate.")
@click.option("-o", "--output", default=None)
def render_cmd(file, eps, resolution, queries, output):
    """SVG of the free-space diagram of a curve pair."""
    inst = _load(file, "pair", "closed-pair")
    if resolution < 2:
        raise io.InputError("resolution: need at least 2")
    svg = render.render_free_space_svg(inst["P"], inst["Q"], _eps(inst, eps), resolution, queries=queries)
    _emit(svg, output)


def run_command(argv: Sequence[str]) -> int:
    """Run the CLI on ``argv`` and return the exit code."""
    try:
        cli.main(args=list(argv), prog_name="frechetlab", standalone_mode=False)
    except ContractViolation as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CONTRACT
    except (io.InputError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    except click.exceptions.Abort:
        return 1
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
