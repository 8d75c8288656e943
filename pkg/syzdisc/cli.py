"""
Command-line interface for syzdisc.

Usage:
    syzdisc mirror-map --geometry KP3 --order 5
    syzdisc slab --geometry KP2-outer
    syzdisc potential --geometry C3 --format json
    syzdisc table --geometry KP2-inner --convention inner --format csv
    syzdisc av-potential --geometry KP2-inner --wrt z2
    syzdisc verify all --report json --timing

Exit status: 1 for configuration and computation errors, 2 for usage errors,
3 when verification finds a mismatch.
"""

import json
import sys
from functools import partial
from pathlib import Path
from typing import Literal, NoReturn, Optional

import click
from loguru import logger
from pydantic import BaseModel, Field, field_validator

from syzdisc.conf.env import settings
from syzdisc.corpus.verify import verify, verify_all
from syzdisc.errors import GeometryError, SyzdiscError
from syzdisc.geometry.builtin import BUILTIN_GEOMETRIES, Convention, GeometryConfig, resolve_geometry
from syzdisc.mirror.mirror_map import compute_mirror_map, delta_series, g_series
from syzdisc.render.tables import render_reports, render_series, render_table
from syzdisc.series.kernel import clip
from syzdisc.series.text import SeriesDocument, to_expression
from syzdisc.solver.potential import av_potential, coefficient_table
from syzdisc.workflows.pipeline import build_slab, run_pipeline, toric_data_of

__all__ = [
    "RunConfig",
    "cli",
    "main",
]

EXIT_CONFIG = 1
EXIT_MISMATCH = 3

Format = Literal["pretty", "csv", "json"]


class RunConfig(BaseModel):
    """Everything a subcommand needs to locate and truncate its geometry."""

    geometry: str = Field(description="Builtin name or path to a JSON geometry")
    frame: Optional[list[list[int]]] = Field(default=None, description="Frame override, rows of the basis")
    q_total: Optional[int] = Field(default=None, ge=0)
    uv_max: Optional[int] = Field(default=None, ge=0)
    z_window: Optional[int] = Field(default=None, ge=0)
    convention: Optional[Convention] = None
    fmt: Format = "pretty"
    out: Optional[Path] = None

    @field_validator("frame", mode="before")
    @classmethod
    def _frame_from_json(cls, value):
        return json.loads(value) if isinstance(value, str) else value

    def geometry_config(self) -> GeometryConfig:
        """Builtin or file config, then environment overrides, then the flags given here."""
        config = resolve_geometry(self.geometry)
        update: dict = {"truncation": config.truncation.with_overrides(self.q_total, self.uv_max, self.z_window)}
        if self.frame is not None:
            update["frame"] = self.frame
        if self.convention is not None:
            update["convention"] = self.convention
        return GeometryConfig.model_validate({**config.model_dump(), **update})


def _fail(e: Exception) -> NoReturn:
    logger.error(f"{type(e).__name__}: {e}")
    click.echo(f"Error: {e}", err=True)
    sys.exit(EXIT_CONFIG)


def _emit(text: str, out: Optional[Path]) -> None:
    if out:
        Path(out).write_text(text)
        click.echo(f"Results saved to {out}", err=True)
    else:
        click.echo(text, nl=False)


def geometry_options(func):
    """--geometry plus the truncation and frame overrides shared by the solving commands."""
    options = [
        click.option("--geometry", "-g", required=True, help=f"Builtin geometry ({', '.join(BUILTIN_GEOMETRIES)}) or JSON config path"),
        click.option("--q-total", type=int, default=None, help="Total Kähler degree cap"),
        click.option("--uv-max", type=int, default=None, help="Degree cap on uv"),
        click.option("--z-window", type=int, default=None, help="Displayed phase window |e| <= W"),
        click.option("--frame", default=None, help="Frame override as JSON, e.g. '[[1,0],[0,1]]'"),
        click.option("--out", "-o", type=click.Path(dir_okay=False), default=None, help="Write output to a file instead of stdout"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.version_option(version="0.1.0", prog_name="syzdisc")
@click.option("--log-level", default=None, help="stderr log level (default: SYZDISC_LOG_LEVEL or WARNING)")
def cli(log_level: Optional[str]):
    """Exact disc potentials of immersed Lagrangians in toric Calabi-Yau manifolds."""
    logger.remove()
    logger.add(sys.stderr, level=(log_level or settings.LOG_LEVEL).upper())


@cli.command("mirror-map")
@click.option("--geometry", "-g", required=True, help="Builtin toric geometry or JSON config path")
@click.option("--order", type=int, default=None, help="Truncation order (default: the geometry's mirror order)")
@click.option("--json", "output_json", is_flag=True, help="Output as JSON")
@click.option("--out", "-o", type=click.Path(dir_okay=False), default=None, help="Write output to a file instead of stdout")
def mirror_map(geometry: str, order: Optional[int], output_json: bool, out: Optional[str]):
    """Mirror map q(Q) and its inverse Q(q)."""
    try:
        config = RunConfig(geometry=geometry).geometry_config()
        if config.kind != "toric":
            raise GeometryError(f"{config.name} is not given by toric data; it has no mirror map")
        data = toric_data_of(config)
        mirror = compute_mirror_map(data, order or config.order)
        deltas = {i: delta_series(data, i, mirror.order, mirror) for i in range(data.m) if not g_series(data, i, mirror.order).is_zero()}
    except (SyzdiscError, ValueError) as e:
        _fail(e)
    if output_json:
        document = {
            "order": mirror.order,
            "forward": [SeriesDocument.from_series(s).model_dump() for s in mirror.forward],
            "inverse": [SeriesDocument.from_series(s).model_dump() for s in mirror.inverse],
            "delta": {str(i): SeriesDocument.from_series(s).model_dump() for i, s in deltas.items()},
        }
        _emit(json.dumps(document, indent=2) + "\n", out)
        return
    lines = [f"{q}(Q) = {to_expression(s)}" for q, s in zip(data.kahler_names, mirror.forward)]
    lines += [f"{m}(q) = {to_expression(s)}" for m, s in zip(data.mirror_names, mirror.inverse)]
    lines += [f"1 + delta_{i}(q) = {to_expression(s + 1)}" for i, s in deltas.items()]
    _emit("".join(f"{line}\n" for line in lines) or "no curve classes\n", out)


@cli.command()
@geometry_options
@click.option("--json", "output_json", is_flag=True, help="Output as JSON")
def slab(geometry: str, q_total, uv_max, z_window, frame, out, output_json: bool):
    """Slab function f with uv = f(z)."""
    try:
        run = RunConfig(
            geometry=geometry, q_total=q_total, uv_max=uv_max, z_window=z_window, frame=frame, fmt="json" if output_json else "pretty", out=out
        )
        config = run.geometry_config()
        stage = build_slab(config)
    except (SyzdiscError, ValueError) as e:
        _fail(e)
    text = render_series(stage.slab.series, f"slab function f for {config.name}", run.fmt)
    provenance = [term.model_dump() for term in stage.slab.provenance]
    if run.fmt == "json":
        text = json.dumps({"series": json.loads(text), "provenance": provenance}, indent=2) + "\n"
    elif provenance:
        text += "".join(f"point {p['index']}: z^{p['exponents']} charge {p['charge']}\n" for p in provenance)
    _emit(text, run.out)


@cli.command()
@geometry_options
@click.option("--format", "fmt", type=click.Choice(["pretty", "csv", "json"]), default="pretty", help="Output format")
def potential(geometry: str, q_total, uv_max, z_window, frame, out, fmt: str):
    """Equivariant disc potential lambda * log Z over the displayed window."""
    try:
        run = RunConfig(
            geometry=geometry, q_total=q_total, uv_max=uv_max, z_window=z_window, frame=frame, fmt=fmt, out=out
        )
        config = run.geometry_config()
        result = run_pipeline(config)
    except (SyzdiscError, ValueError) as e:
        _fail(e)
    heading = f"W = lambda * log Z for {config.name}"
    _emit(render_series(clip(result.potential.lambda_coefficient), heading, run.fmt, config.display_names), run.out)


@cli.command()
@geometry_options
@click.option(
    "--convention",
    type=click.Choice(["inner", "plain", "negated", "twisted"]),
    default=None,
    help="Sign convention (default: the geometry's own)",
)
@click.option("--format", "fmt", type=click.Choice(["pretty", "csv", "json"]), default="pretty", help="Output format")
def table(geometry: str, q_total, uv_max, z_window, frame, out, convention: Optional[str], fmt: str):
    """Coefficient table a of log Z under a sign convention."""
    try:
        run = RunConfig(
            geometry=geometry, q_total=q_total, uv_max=uv_max, z_window=z_window, frame=frame, convention=convention, fmt=fmt, out=out
        )
        config = run.geometry_config()
        result = run_pipeline(config)
    except (SyzdiscError, ValueError) as e:
        _fail(e)
    coefficients = coefficient_table(result.potential, config.convention)
    _emit(render_table(coefficients, run.fmt, config.display_names), run.out)


@cli.command("av-potential")
@geometry_options
@click.option("--wrt", default=None, help="Phase variable to integrate in (default: the first one)")
@click.option("--strict", is_flag=True, help="Fail on terms that would integrate to a logarithm")
@click.option("--json", "output_json", is_flag=True, help="Output as JSON")
def av_potential_command(geometry: str, q_total, uv_max, z_window, frame, out, wrt: Optional[str], strict: bool, output_json: bool):
    """Formal integral of log Z at uv = 0 in a phase variable."""
    try:
        run = RunConfig(
            geometry=geometry, q_total=q_total, uv_max=uv_max, z_window=z_window, frame=frame, fmt="json" if output_json else "pretty", out=out
        )
        config = run.geometry_config()
        if wrt is not None:
            shown = {v: k for k, v in config.display_names.items()}
            wrt = shown.get(wrt, wrt)
        result = av_potential(run_pipeline(config).solution, wrt=wrt, strict=strict)
    except (SyzdiscError, ValueError) as e:
        _fail(e)
    render = partial(render_series, display_names=config.display_names)
    if run.fmt == "json":
        document = {
            "wrt": config.display_names.get(result.wrt, result.wrt),
            "series": json.loads(render(clip(result.series), "", "json")),
            "logarithmic_terms": json.loads(render(clip(result.logarithmic_terms), "", "json")),
        }
        _emit(json.dumps(document, indent=2) + "\n", run.out)
        return
    text = render(clip(result.series), f"integral of log Z|uv=0 d{config.display_names.get(result.wrt, result.wrt)} for {config.name}")
    if not result.logarithmic_terms.is_zero():
        text += "\n" + render(clip(result.logarithmic_terms), "logarithmic terms (not integrated)")
    _emit(text, run.out)


@cli.command("verify")
@click.argument("case")
@click.option("--report", "fmt", type=click.Choice(["pretty", "json"]), default="pretty", help="Report format")
@click.option("--timing", is_flag=True, help="Include wall time per case")
@click.option("--out", "-o", type=click.Path(dir_okay=False), default=None, help="Write the report to a file instead of stdout")
def verify_command(case: str, fmt: str, timing: bool, out: Optional[str]):
    """Compare a builtin case (or all of them) against the stored reference values."""
    try:
        reports = verify_all(timing=timing) if case == "all" else [verify(case, timing=timing)]
    except (SyzdiscError, ValueError) as e:
        _fail(e)
    _emit(render_reports(reports, fmt), out)
    if not all(r.passed for r in reports):
        sys.exit(EXIT_MISMATCH)


def main():
    """Entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
