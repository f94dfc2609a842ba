import json
import logging
import sys
from typing import Optional

import click
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.logging import RichHandler

from engel_lab.config import settings
from engel_lab.exceptions import EngelLabError
from engel_lab.routers import explain as explain_router
from engel_lab.routers.verification import router
from engel_lab.schemas import ErrorReport, RunConfig, Suite


def setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def canonical_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json", by_alias=True), sort_keys=True, indent=2) + "\n"


def emit(text: str, output_path: Optional[str] = None) -> None:
    if output_path:
        with open(output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Debug logging on stderr.")
def cli(verbose: bool):
    """Verification suites for the GF(2) Lie algebras L(m), L* and the group G."""
    setup_logging(verbose)


@cli.command()
@click.option("--suite", type=click.Choice([s.value for s in Suite]), default=Suite.ALL.value, show_default=True)
@click.option("--m", "m", type=int, default=3, show_default=True)
@click.option("--ground", "ground_size", type=int, default=settings.DEFAULT_GROUND, show_default=True)
@click.option("--samples", type=int, default=settings.DEFAULT_SAMPLES, show_default=True)
@click.option("--seed", type=int, default=settings.DEFAULT_SEED, show_default=True)
@click.option("--jobs", type=int, default=settings.JOBS, show_default=True, help="Parallel workers (ENGEL_LAB_JOBS).")
@click.option("--r", "r", type=int, default=2, show_default=True, help="Largest number of conjugates.")
@click.option("--out", "output_path", type=click.Path(dir_okay=False), default=None)
@click.option("--force", is_flag=True, help="Lift the m, r and matrix-dimension caps.")
def verify(suite, m, ground_size, samples, seed, jobs, r, output_path, force):
    """Run a verification suite and print its JSON report."""
    try:
        config = RunConfig(m=m, ground_size=ground_size, seed=seed, samples=samples, jobs=jobs, r=r,
                           suite=Suite(suite), output_path=output_path, force=force)
    except ValidationError as e:
        raise click.UsageError(str(e))
    try:
        report = router.dispatch(config)
    except EngelLabError as e:
        logging.getLogger(__name__).error("%s", e.detail)
        emit(canonical_json(ErrorReport(error=type(e).__name__, detail=e.detail, exit_status=e.exit_status)))
        sys.exit(e.exit_status)
    emit(canonical_json(report), output_path)
    sys.exit(0 if report.ok else 1)


@cli.command()
@click.argument("topic", type=click.Choice(list(explain_router.TOPICS)))
def explain(topic):
    """Describe a construction and what its suite checks."""
    click.echo(explain_router.explain(topic), nl=False)


if __name__ == "__main__":
    cli()
