"""Command-line front end.

Reads a streaming problem from CSV or JSON, runs the library, and prints
either a readable table or machine-ready JSON.  Exact rationals appear as
'p/q' strings in JSON mode and as rounded decimals in table mode.

Exit codes: 0 for success (including reports of failed properties), 2 for
bad input, 3 for an internal invariant violation such as the two core
oracles disagreeing.
"""
from __future__ import annotations

import functools
import json
import sys
from fractions import Fraction

import click

from . import axioms as axioms_mod
from . import claims as claims_mod
from . import game as game_mod
from . import indices as indices_mod
from . import model
from .indices import Index, banded_index, index_from_weights, rewards, table_weight_system
from .model import decimal_display

EXIT_INPUT = 2
EXIT_INTERNAL = 3


class OracleDisagreement(RuntimeError):
    """The enumeration and flow core oracles returned different verdicts."""


def _guarded(fn):
    """Map library errors to exit code 2 and oracle splits to exit code 3."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except OracleDisagreement as exc:
            click.echo(f"internal error: {exc}", err=True)
            sys.exit(EXIT_INTERNAL)
        except (model.ModelError, claims_mod.InvalidProblem,
                claims_mod.WeightContractViolated, indices_mod.NonPositiveWeight,
                indices_mod.ZeroIndexSum, game_mod.NotInCore,
                OSError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_problem(path: str, format: str | None, fee: str | None) -> model.StreamingProblem:
    if format is None:
        if path.endswith(".csv"):
            format = "csv"
        elif path.endswith(".json"):
            format = "json"
        else:
            raise model.ParseError(
                "cannot infer the input format; pass --format csv or --format json")
    problem = model.parse_problem(_read_text(path), format)
    if fee is not None:
        problem = problem.with_fee(model.as_rational(fee, "fee"))
    return problem


def _echo_json(payload) -> None:
    click.echo(json.dumps(payload, indent=2))


def _echo_table(headers: list[str], rows: list[list[str]]) -> None:
    widths = [len(h) for h in headers]
    for row in rows:
        for k, cell in enumerate(row):
            widths[k] = max(widths[k], len(cell))
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    click.echo(fmt.format(*headers))
    click.echo(fmt.format(*("-" * w for w in widths)))
    for row in rows:
        click.echo(fmt.format(*row))


def _method_index(method: str, alpha: int | None, beta: int | None,
                  weights_file: str | None) -> Index:
    if method == "pro-rata":
        return indices_mod.PRO_RATA
    if method == "user-centric":
        return indices_mod.USER_CENTRIC
    if method == "banded":
        if alpha is None or beta is None:
            raise ValueError("--method banded requires --alpha and --beta")
        return banded_index(alpha, beta)
    if method == "weighted-file":
        if weights_file is None:
            raise ValueError("--method weighted-file requires --weights-file")
        table = json.loads(_read_text(weights_file))
        if not isinstance(table, dict):
            raise ValueError("the weights file must hold a JSON object of user weights")
        return index_from_weights(table_weight_system(table))
    raise ValueError(f"unknown method {method!r}")


_METHOD_CHOICES = ("pro-rata", "user-centric", "banded", "weighted-file")


def _input_options(fn):
    fn = click.option("--input", "-i", "input_path", required=True,
                      help="Problem file, or - for stdin.")(fn)
    fn = click.option("--format", "input_format", type=click.Choice(("csv", "json")),
                      default=None, help="Input format; inferred from the extension.")(fn)
    fn = click.option("--fee", default=None,
                      help="Per-user fee as an integer or p/q (default 1, or the "
                           "fee stored in a JSON input).")(fn)
    return fn


def _output_options(fn):
    fn = click.option("--output", "-o", "output_mode",
                      type=click.Choice(("table", "json")), default="table",
                      help="Print a table or JSON.")(fn)
    fn = click.option("--precision", type=int, default=4, show_default=True,
                      help="Decimal places in table mode (display only).")(fn)
    return fn


def _method_options(fn):
    fn = click.option("--method", type=click.Choice(_METHOD_CHOICES),
                      default="pro-rata", show_default=True)(fn)
    fn = click.option("--alpha", type=int, default=None,
                      help="Lower band edge for --method banded.")(fn)
    fn = click.option("--beta", type=int, default=None,
                      help="Upper band edge for --method banded.")(fn)
    fn = click.option("--weights-file", default=None,
                      help="JSON object of per-user weights for --method weighted-file.")(fn)
    return fn


@click.group()
def cli() -> None:
    """Divide streaming revenue among artists, exactly."""


@cli.command()
@_input_options
@_method_options
@_output_options
@_guarded
def allocate(input_path, input_format, fee, method, alpha, beta, weights_file,
             output_mode, precision) -> None:
    """Compute one method's index scores and payouts."""
    problem = _load_problem(input_path, input_format, fee)
    index = _method_index(method, alpha, beta, weights_file)
    values = index(problem)
    payout = rewards(problem, values)
    if output_mode == "json":
        _echo_json({
            "method": index.name,
            "fee": str(problem.fee),
            "revenue": str(problem.revenue),
            "index": {a: str(s) for a, s in values.as_dict().items()},
            "rewards": {a: str(x) for a, x in payout.as_dict().items()},
        })
        return
    rows = [[a, str(values[a]), str(payout[a]), decimal_display(payout[a], precision)]
            for a in problem.artists]
    _echo_table(["artist", "index", "reward", "approx"], rows)


@cli.command()
@_input_options
@_output_options
@click.option("--method", "methods", type=click.Choice(_METHOD_CHOICES),
              multiple=True, help="Methods to include; repeatable.")
@click.option("--alpha", type=int, default=None)
@click.option("--beta", type=int, default=None)
@click.option("--weights-file", default=None)
@_guarded
def compare(input_path, input_format, fee, output_mode, precision,
            methods, alpha, beta, weights_file) -> None:
    """Run several methods side by side on one problem."""
    problem = _load_problem(input_path, input_format, fee)
    if not methods:
        methods = ("pro-rata", "user-centric")
        if alpha is not None and beta is not None:
            methods += ("banded",)
    resolved = [_method_index(m, alpha, beta, weights_file) for m in methods]
    results = [(idx, idx(problem)) for idx in resolved]
    if output_mode == "json":
        _echo_json({
            "fee": str(problem.fee),
            "revenue": str(problem.revenue),
            "methods": {
                idx.name: {
                    "index": {a: str(s) for a, s in values.as_dict().items()},
                    "rewards": {a: str(x)
                                for a, x in rewards(problem, values).as_dict().items()},
                }
                for idx, values in results
            },
        })
        return
    headers = ["artist"] + [idx.name for idx, _ in results]
    payouts = [rewards(problem, values) for _, values in results]
    rows = [[a] + [f"{payout[a]} ({decimal_display(payout[a], precision)})"
                   for payout in payouts]
            for a in problem.artists]
    _echo_table(headers, rows)


@cli.command(name="core-check")
@_input_options
@_method_options
@_output_options
@_guarded
def core_check(input_path, input_format, fee, method, alpha, beta, weights_file,
               output_mode, precision) -> None:
    """Test a method's payout for stability, with both oracles."""
    problem = _load_problem(input_path, input_format, fee)
    index = _method_index(method, alpha, beta, weights_file)
    payout = rewards(problem, index(problem))
    flow = game_mod.in_core_flow(problem, payout)
    direct = None
    if problem.artist_count <= game_mod.MAX_ENUMERABLE_PLAYERS:
        direct = game_mod.in_core_direct(game_mod.streaming_game(problem), payout)
        if direct.in_core != flow.in_core:
            raise OracleDisagreement(
                f"direct oracle says {direct.in_core}, flow oracle says {flow.in_core}")
    in_core = flow.in_core
    blocking = (sorted(direct.blocking_coalition)
                if direct is not None and direct.blocking_coalition is not None else None)
    if output_mode == "json":
        _echo_json({
            "method": index.name,
            "rewards": {a: str(x) for a, x in payout.as_dict().items()},
            "in_core": in_core,
            "oracles": {
                "direct": None if direct is None else direct.in_core,
                "flow": flow.in_core,
            },
            "blocking_coalition": blocking,
            "decomposition": (game_mod.decomposition_to_dict(flow.decomposition)
                              if flow.decomposition is not None else None),
        })
        return
    click.echo(f"method: {index.name}")
    click.echo("payout: " + "  ".join(
        f"{a}={payout[a]} ({decimal_display(payout[a], precision)})"
        for a in problem.artists))
    if direct is None:
        click.echo(f"direct oracle: skipped ({problem.artist_count} artists exceed "
                   f"the {game_mod.MAX_ENUMERABLE_PLAYERS}-player cap; flow-only mode)")
    elif direct.in_core:
        click.echo("direct oracle: in core")
    else:
        click.echo(f"direct oracle: NOT in core"
                   + (f" (blocking coalition: {', '.join(blocking)})" if blocking else ""))
    click.echo(f"flow oracle: {'in core' if flow.in_core else 'NOT in core'}")
    if flow.decomposition is not None:
        for user, row in zip(problem.users, flow.decomposition.shares):
            parts = [f"{a}={x}" for a, x in zip(problem.artists, row) if x]
            click.echo(f"  fee of {user}: " + "  ".join(parts))
    click.echo(f"verdict: {'IN CORE' if in_core else 'NOT IN CORE'}")


@cli.command()
@_input_options
@_output_options
@_guarded
def game(input_path, input_format, fee, output_mode, precision) -> None:
    """Print the coalition worths, dividends, and the supermodularity check."""
    problem = _load_problem(input_path, input_format, fee)
    try:
        g = game_mod.streaming_game(problem)
    except game_mod.TooManyPlayers as exc:
        if output_mode == "json":
            _echo_json({"players": list(problem.artists), "skipped": str(exc)})
        else:
            click.echo(f"coalition table skipped: {exc}")
            click.echo("core checks remain available in flow-only mode")
        return
    dividends = game_mod.harsanyi_dividends(g)
    shape = game_mod.is_supermodular(g)
    if output_mode == "json":
        payload = game_mod.game_to_dict(g)
        payload["dividends"] = game_mod.dividends_to_dict(dividends)["dividends"]
        payload["supermodular"] = shape.holds
        _echo_json(payload)
        return
    rows = [[", ".join(g.coalition_members(mask)) or "(empty)", str(g.value(mask))]
            for mask in range(1, 1 << g.player_count)]
    _echo_table(["coalition", "worth"], rows)
    click.echo("")
    nz = dividends.nonzero()
    div_rows = [[", ".join(g.coalition_members(mask)), str(value)] for mask, value in nz]
    _echo_table(["coalition", "dividend"], div_rows or [["(none)", "0"]])
    click.echo("")
    click.echo(f"supermodular: {'yes' if shape.holds else 'NO'}")


@cli.command()
@_input_options
@_output_options
@click.option("--stage1", type=click.Choice(("proportional", "cea")),
              default="proportional", show_default=True,
              help="Rule dividing the revenue across users.")
@click.option("--stage2", type=click.Choice(("proportional", "cea")),
              default="proportional", show_default=True,
              help="Rule dividing each user's budget across artists.")
@_guarded
def claims(input_path, input_format, fee, output_mode, precision,
           stage1, stage2) -> None:
    """Divide the revenue as a two-stage claims problem."""
    problem = _load_problem(input_path, input_format, fee)
    multi = claims_mod.streaming_to_claims(problem)
    awards = claims_mod.two_stage_rule(multi, stage1, stage2)
    if output_mode == "json":
        _echo_json({
            "stage1": stage1,
            "stage2": stage2,
            "endowment": str(multi.endowment),
            "issue_totals": {u: str(t)
                             for u, t in zip(multi.issues, multi.issue_totals())},
            "awards": {a: str(x) for a, x in zip(multi.agents, awards)},
        })
        return
    rows = [[a, str(x), decimal_display(x, precision)]
            for a, x in zip(multi.agents, awards)]
    _echo_table(["artist", "award", "approx"], rows)


@cli.command(name="axioms")
@_output_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--budget", type=int, default=100, show_default=True,
              help="Random instances searched per (index, property) cell.")
@click.option("--indices", "index_names", default=None,
              help="Comma-separated index names (default: all built-ins).")
@click.option("--axioms", "axiom_names", default=None,
              help="Comma-separated property names (default: all).")
@click.option("--alpha", type=int, default=20, show_default=True)
@click.option("--beta", type=int, default=60, show_default=True)
@_guarded
def axioms(output_mode, precision, seed, budget, index_names, axiom_names,
           alpha, beta) -> None:
    """Check the built-in indices against the fairness properties."""
    catalog = indices_mod.standard_indices(alpha, beta)
    if index_names is None:
        chosen = [idx for name, idx in catalog.items() if name != "banded"]
    else:
        chosen = []
        for name in index_names.split(","):
            name = name.strip()
            if name not in catalog:
                raise ValueError(
                    f"unknown index {name!r}; expected one of {sorted(catalog)}")
            chosen.append(catalog[name])
    wanted_axioms = None
    if axiom_names is not None:
        wanted_axioms = [axioms_mod.normalize_axiom(a.strip())
                         for a in axiom_names.split(",")]
    generator = axioms_mod.ProblemGenerator(seed=seed, max_artists=6, max_users=6)
    matrix = axioms_mod.axiom_matrix(chosen, wanted_axioms, generator, budget)
    if output_mode == "json":
        _echo_json({
            "seed": seed,
            "budget": budget,
            "results": axioms_mod.matrix_to_rows(matrix),
        })
        return
    rows = []
    for (index_name, axiom_name), verdict in matrix.items():
        rows.append([index_name, axiom_name, verdict.status.value,
                     str(verdict.instances), verdict.detail])
    _echo_table(["index", "property", "status", "instances", "detail"], rows)


def main() -> None:
    cli(prog_name="streamshare")


if __name__ == "__main__":
    main()
