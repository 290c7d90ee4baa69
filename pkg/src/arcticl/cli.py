"""arcticl CLI: arctic curves, edge probabilities and samples for L-shaped domains."""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Any, TypeVar

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from arcticl import __version__
from arcticl.config import ArcticConfig, ArcticError, ConfigError, RunConfig, parse_alpha
from arcticl.curve.branches import CurveSet, curve_branches
from arcticl.curve.regime import RegimeError
from arcticl.loggas.generating import LogGasError
from arcticl.model.geometry import GeometryError, LGeometry, R_from_beta, scale_geometry
from arcticl.model.transfer import TransferError
from arcticl.render import (
    FORMATS,
    FigureSpec,
    curve_csv,
    curve_json,
    grid_csv,
    grid_json,
    render_svg,
    samples_csv,
    samples_json,
    write_text,
)
from arcticl.shuffling.order import order_parameters
from arcticl.shuffling.probabilities import PlaquetteProbabilities, edge_probabilities
from arcticl.shuffling.sampler import BATCH_SIZE, empirical_edge_frequencies, sample_tilings
from arcticl.shuffling.weights import AztecWeightGrid, ShufflingError, build_weights
from arcticl.verify import SUITES, VerificationFailed, VerifyOptions, run_suites

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

# Errors that mean the request itself is invalid
CONFIG_ERRORS = (
    ConfigError,
    GeometryError,
    RegimeError,
    ShufflingError,
    TransferError,
    LogGasError,
)

HELP_TEXT = """\
ARCTICL(1)                       User Commands                      ARCTICL(1)

NAME
    arcticl - arctic curves of the free-fermion six-vertex model on
    L-shaped domains

SYNOPSIS
    arcticl [-v] [--log-file PATH] <command> [options]

DESCRIPTION
    arcticl computes the arctic curve of the free-fermion six-vertex model
    with domain wall boundary conditions on an N x N square whose top-left
    s x (N-r) corner has been removed. The curve comes from the tangent
    method: a family of lines x - M(w) y - Phi(w) = 0 whose envelope is the
    boundary of the disordered region.

    The same domain is a cut Aztec diamond. Exact edge probabilities come
    from a shuffling recursion and exact random tilings from domino
    shuffling, so lattice data can be compared with the analytic curve.

    Coordinates: x is measured leftward from the right edge and y downward
    from the top edge, both scaled to [0, 1]. The cut is the rectangle
    x > xi_x, y < xi_y with xi_x = R/(R+Q+1), xi_y = 1/(R+Q+1).

GEOMETRY
    A geometry is given either on the lattice or in the scaling limit,
    never both:

        --N N --r R --s S     lattice sizes, 1 <= r <= N, 0 <= s <= r
        --R R [--Q Q]         R = r/s >= 1 and Q = (N-r-s)/s >= 0
        --beta B              Q = 0 with R recovered from
                              beta = (R-1)/((R+1) sqrt(alpha)) (curve only)

    --alpha is required everywhere; ratios such as 1/3 are kept exact.

COMMANDS
    curve --alpha A (--R R [--Q Q] | --N N --r R --s S | --beta B)
          [--n-curve K] [--format csv|json|svg] [--out PATH]
        Sample both branches C- and C+ of the arctic curve (the ellipse
        in Regime I) together with contact points and cusps.

            arcticl curve --alpha 0.3 --R 1.5 --format svg
            arcticl curve --alpha 0.3 --R 4 --out -

    probs --alpha A --N N --r R --s S [--eps-const C] [--format ...] [--out PATH]
        Exact edge-inclusion probabilities (p, q, r, s) per plaquette, the
        order parameters x and z, and the fluid mask at threshold
        C * N^(-2/3). The SVG overlays the analytic curve.

            arcticl probs --alpha 1/2 --N 300 --r 168 --s 132 --format svg

    sample --alpha A --N N --r R --s S [--seed SEED] [--samples K] [--format ...]
        Exact random tilings by domino shuffling. Every sample records its
        seed, stream index, batch size and generator. The SVG shows the
        empirical x field.

            arcticl sample --alpha 0.4 --N 16 --r 10 --s 6 --seed 7 --samples 5

    verify [SUITE ...] [--N N] [--samples K] [--seed SEED] [--json]
        Run verification suites: oracle, curve-identities, sextic,
        shuffling, figures, or all (the default). Exits with status 1 when
        any check fails.

            arcticl verify oracle sextic
            arcticl verify figures --N 300 --json

    help [TOPIC]
        Show this page, or the option summary of one command.

OUTPUT
    Files are written to --out, or to the output directory under the name
    <command>-a<alpha>-<geometry>.<ext>. --out - streams to stdout.
    CSV files start with one header line; JSON files carry a metadata
    object with the version, the configuration and provenance tags.
    Identical inputs give byte-identical outputs.

EXIT STATUS
    0   success
    1   a verification check failed, or a computation broke down
    2   invalid configuration

ENVIRONMENT VARIABLES
    ARCTICL_HOME           Base directory (default: ~/.arcticl)
    ARCTICL_OUTPUT_DIR     Output directory (default: $ARCTICL_HOME/out)
    ARCTICL_MAX_N          Largest lattice order for probs/sample (default: 1024)
    ARCTICL_EPS_CONST      Fluid-mask constant (default: 1)
    ARCTICL_SEED           Default sampler seed
    ARCTICL_CURVE_SAMPLES  Parameter samples per branch (default: 2000)
    ARCTICL_LOG_LEVEL      Log level (default: WARNING)

VERSION
    arcticl {version}

ARCTICL(1)                       User Commands                      ARCTICL(1)
""".format(version=__version__)


def _setup_logging(level: str, log_file: Path | None = None) -> None:
    """Configure stderr (and optional file) logging for the arcticl package."""
    formatter = logging.Formatter(
        "%(asctime)s [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    root = logging.getLogger("arcticl")
    for handler in list(root.handlers):
        root.removeHandler(handler)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    root.addHandler(console_handler)

    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)

    root.setLevel(level.upper())


def get_config(**overrides: Any) -> ArcticConfig:
    """Environment config with the command-line flags that were given on top."""
    config = ArcticConfig.from_env().with_overrides(**overrides)
    config.ensure_dirs()
    return config


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map arcticl errors to exit statuses with a one-line message on stderr."""
    try:
        yield
    except VerificationFailed as e:
        err_console.print(f"[red]{escape(str(e))}[/]")
        raise SystemExit(1) from e
    except CONFIG_ERRORS as e:
        err_console.print(f"[red]error:[/] {escape(str(e))}")
        raise SystemExit(2) from e
    except ArcticError as e:
        err_console.print(f"[red]failed:[/] {escape(str(e))}")
        raise SystemExit(1) from e


def _emit(text: str, run: RunConfig, out: str | None, config: ArcticConfig) -> None:
    if out == "-":
        click.echo(text, nl=False)
        return
    name = f"{run.slug()}.{run.fmt}"
    if out is None:
        path = config.output_dir / name
    else:
        path = Path(out)
        if path.is_dir():
            path = path / name
    write_text(text, path)
    err_console.print(f"[green]wrote[/] {path}")


def _alpha(_ctx: click.Context, _param: click.Parameter, value: str) -> Fraction | float:
    try:
        return parse_alpha(value)
    except ConfigError as e:
        raise click.BadParameter(str(e)) from e


def geometry_options(func: F) -> F:
    """--alpha plus the lattice and scaled geometry flags."""
    options = [
        click.option("--alpha", required=True, callback=_alpha, help="Weight parameter in (0, 1)"),
        click.option("--N", "N", type=int, default=None, help="Lattice order"),
        click.option("--r", "r", type=int, default=None, help="Kept width of the cut rows"),
        click.option("--s", "s", type=int, default=None, help="Height of the cut"),
        click.option("--R", "R", type=float, default=None, help="Scaled ratio r/s"),
        click.option("--Q", "Q", type=float, default=None, help="Scaled ratio (N-r-s)/s"),
        click.option(
            "--format", "fmt", type=click.Choice(FORMATS), default="csv", help="Output format"
        ),
        click.option("--out", default=None, help="Output file or directory; '-' for stdout"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _lattice_weights(run: RunConfig, config: ArcticConfig) -> AztecWeightGrid:
    if not run.is_lattice:
        raise ConfigError(f"{run.command} needs a lattice geometry: --N, --r and --s")
    assert run.N is not None and run.r is not None and run.s is not None
    return build_weights(run.N, run.r, run.s, run.alpha, max_order=config.max_lattice)


def _lattice_figure(run: RunConfig, title: str) -> FigureSpec:
    """Figure with the cut outline and, when it exists, the analytic curve."""
    assert run.N is not None and run.r is not None and run.s is not None
    alpha = float(run.alpha)
    spec = FigureSpec(title=title, alpha=alpha)
    if run.s >= 1 and run.r + run.s <= run.N:
        scaled = scale_geometry(LGeometry(run.N, run.r, run.s), alpha)
        spec.cut_corner = scaled.cut_corner
        try:
            spec.add_curves(curve_branches(scaled.R, scaled.Q, alpha))
        except ArcticError as e:
            logger.warning(f"no analytic overlay: {e}")
    return spec


@click.group()
@click.version_option(version=__version__, prog_name="arcticl")
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level")
@click.option(
    "--log-file", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Also write log records to this file",
)
def cli(verbose: bool, log_file: Path | None) -> None:
    """arcticl - arctic curves of the six-vertex model on L-shaped domains.

    Computes arctic curves, exact edge probabilities and exact samples, and
    cross-checks them. Run 'arcticl help' for full documentation.
    """
    try:
        level = ArcticConfig.from_env().log_level
    except ConfigError:
        level = "WARNING"
    _setup_logging("DEBUG" if verbose else level, log_file)


# ── Help Command ────────────────────────────────────────────────


@cli.command()
@click.argument("topic", required=False, default=None)
def help(topic: str | None) -> None:
    """Show detailed help. Optionally specify a command name for targeted help."""
    if topic is None:
        click.echo_via_pager(HELP_TEXT)
        return

    cmd = cli.get_command(None, topic)  # type: ignore[arg-type]
    if cmd is not None:
        with click.Context(cmd, info_name=f"arcticl {topic}") as sub_ctx:
            click.echo(cmd.get_help(sub_ctx))
        return

    console.print(
        f"[yellow]Unknown topic: '{topic}'. Run 'arcticl help' for full documentation.[/]"
    )


# ── Commands ────────────────────────────────────────────────────


@cli.command()
@geometry_options
@click.option("--beta", type=float, default=None, help="Q = 0 geometry through beta")
@click.option("--n-curve", type=int, default=None, help="Parameter samples per branch")
def curve(
    alpha: Fraction | float,
    N: int | None,
    r: int | None,
    s: int | None,
    R: float | None,
    Q: float | None,
    fmt: str,
    out: str | None,
    beta: float | None,
    n_curve: int | None,
) -> None:
    """Sample the arctic curve branches."""
    with _exit_codes():
        config = get_config(curve_samples=n_curve)
        if beta is not None:
            if R is not None or Q is not None:
                raise ConfigError("--beta fixes Q = 0 and R; drop --R/--Q")
            R, Q = R_from_beta(beta, alpha), 0.0
        run = RunConfig(
            "curve", alpha, N=N, r=r, s=s, R=R, Q=Q, fmt=fmt,
            n_curve=config.curve_samples,
        )
        run.validate()
        if run.n_curve < 10:
            raise ConfigError("--n-curve must be at least 10")
        R_val, Q_val = run.scaled()
        curves = curve_branches(R_val, Q_val, float(alpha), n_samples=run.n_curve)
        _emit(_render_curve(curves, run), run, out, config)


def _render_curve(curves: CurveSet, run: RunConfig) -> str:
    if run.fmt == "csv":
        return curve_csv(curves)
    if run.fmt == "json":
        return curve_json(curves, run)
    params = curves.params
    spec = FigureSpec(
        title=f"arctic curve, {params.describe()}",
        alpha=params.alpha,
        cut_corner=params.geometry.cut_corner,
    )
    spec.add_curves(curves)
    return render_svg(spec)


@cli.command()
@geometry_options
@click.option("--eps-const", type=float, default=None, help="Fluid-mask constant C in C*N^(-2/3)")
def probs(
    alpha: Fraction | float,
    N: int | None,
    r: int | None,
    s: int | None,
    R: float | None,
    Q: float | None,
    fmt: str,
    out: str | None,
    eps_const: float | None,
) -> None:
    """Exact edge-inclusion probabilities and order parameters."""
    with _exit_codes():
        config = get_config(eps_const=eps_const)
        run = RunConfig(
            "probs", alpha, N=N, r=r, s=s, R=R, Q=Q, fmt=fmt, eps_const=config.eps_const,
        )
        run.validate()
        wg = _lattice_weights(run, config)
        probabilities = edge_probabilities(wg, show_progress=err_console.is_terminal)
        fld = order_parameters(probabilities, eps_const=run.eps_const)
        if fmt == "csv":
            text = grid_csv(probabilities, fld)
        elif fmt == "json":
            text = grid_json(probabilities, fld, run, source="shuffling recursion")
        else:
            spec = _lattice_figure(run, f"edge probabilities, {wg.geometry.label()}")
            spec.heat, spec.mask = fld.x, fld.mask
            text = render_svg(spec)
        _emit(text, run, out, config)


@cli.command()
@geometry_options
@click.option("--seed", type=int, default=None, help="Generator seed (default: ARCTICL_SEED or 0)")
@click.option("--samples", type=int, default=1, help="Number of tilings")
@click.option("--eps-const", type=float, default=None, help="Fluid-mask constant for the SVG")
def sample(
    alpha: Fraction | float,
    N: int | None,
    r: int | None,
    s: int | None,
    R: float | None,
    Q: float | None,
    fmt: str,
    out: str | None,
    seed: int | None,
    samples: int,
    eps_const: float | None,
) -> None:
    """Exact random tilings by domino shuffling."""
    with _exit_codes():
        config = get_config(seed=seed, eps_const=eps_const)
        seed = config.seed if config.seed is not None else 0
        run = RunConfig(
            "sample", alpha, N=N, r=r, s=s, R=R, Q=Q, seed=seed, samples=samples, fmt=fmt,
            eps_const=config.eps_const,
        )
        run.validate()
        wg = _lattice_weights(run, config)
        batch = min(samples, BATCH_SIZE)
        tilings = list(sample_tilings(wg, seed, samples, batch_size=batch))
        if fmt == "csv":
            text = samples_csv(tilings)
        elif fmt == "json":
            text = samples_json(tilings, run)
        else:
            frequencies = PlaquetteProbabilities(empirical_edge_frequencies(tilings))
            fld = order_parameters(frequencies, eps_const=run.eps_const)
            spec = _lattice_figure(run, f"{samples} sample(s), seed {seed}, {wg.geometry.label()}")
            spec.heat, spec.mask = fld.x, fld.mask
            text = render_svg(spec)
        _emit(text, run, out, config)


@cli.command()
@click.argument("suites", nargs=-1, type=click.Choice([*SUITES, "all"]))
@click.option("--N", "figure_N", type=int, default=300, help="Lattice order of the figures suite")
@click.option("--samples", type=int, default=100_000, help="Tilings drawn by the shuffling suite")
@click.option("--seed", type=int, default=None, help="Seed for the random checks")
@click.option("--json", "as_json", is_flag=True, help="Print the machine-readable report")
def verify(
    suites: tuple[str, ...], figure_N: int, samples: int, seed: int | None, as_json: bool
) -> None:
    """Run verification suites; exits 1 when a check fails."""
    with _exit_codes():
        config = get_config(seed=seed)
        if figure_N < 8 or samples < 1:
            raise ConfigError("--N must be at least 8 and --samples at least 1")
        options = VerifyOptions(
            figure_N=figure_N,
            samples=samples,
            seed=config.seed if config.seed is not None else 0,
            eps_const=config.eps_const,
            max_lattice=config.max_lattice,
            show_progress=err_console.is_terminal,
        )
        report = run_suites(suites or ("all",), options)
        if as_json:
            click.echo(json.dumps(report.to_dict(), indent=2))
        else:
            table = Table(title="Verification")
            table.add_column("Suite", style="bold")
            table.add_column("Check")
            table.add_column("Measured", justify="right")
            table.add_column("Tolerance", justify="right")
            table.add_column("Result")
            for check in report.checks:
                measured = "" if check.measured is None else f"{check.measured:.3g}"
                tolerance = "" if check.tolerance is None else f"{check.tolerance:.0e}"
                verdict = "[green]pass[/]" if check.passed else "[red]FAIL[/]"
                table.add_row(check.suite, escape(check.name), measured, tolerance, verdict)
            console.print(table)
        report.raise_for_failures()
