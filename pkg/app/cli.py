import os
import sys
from typing import List, Optional

import click

from config.settings import CONFIG, setup_logging
from .exceptions import GNSError
from .log import logger
from .processor import ScenarioProcessor
from .reports import fmt, fmt_entropy, fmt_list, scan_summary, write_gram_csv, write_scan_csv
from .scenario import load_scenario

COMPARE_TOL = 1e-12

GAUGE_PROJECTOR_NOTE = (
    "Gauge projectors are built as J rep(g p_k g*) J; the literal form g p_k g "
    "is not idempotent for a generic unitary g"
)


def scenario_argument(f):
    return click.argument("scenario_path", type=click.Path(exists=True, dir_okay=False))(f)


def verbose_option(f):
    return click.option("--verbose", "-v", is_flag=True, help="Log debug information")(f)


def tol_option(f):
    return click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=None, help="Relative null-space cutoff")(f)


def seed_option(f):
    return click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed of the random draws")(f)


def _processor(path: str, verbose: bool, **overrides) -> ScenarioProcessor:
    if verbose:
        setup_logging("DEBUG")
    scenario = load_scenario(path, overrides)
    return ScenarioProcessor(scenario)


@click.group()
def cli():
    """GNS representations, reduced-state entropies and their gauge ambiguity."""
    pass


@cli.command()
@scenario_argument
@tol_option
@click.option("--dump-gram", type=click.Path(dir_okay=False), default=None, help="Write the Gram matrix as CSV")
@verbose_option
def gns(scenario_path: str, tol: Optional[float], dump_gram: Optional[str], verbose: bool):
    """Build the GNS representation and print its dimensions."""
    processor = _processor(scenario_path, verbose, tolerance=tol)
    result = processor.gns_summary()
    click.echo(f"scenario: {result['scenario']}")
    click.echo(f"algebra: {result['algebra']}")
    click.echo(f"algebra_dim: {result['algebra_dim']}")
    click.echo(f"hilbert_dim: {result['hilbert_dim']}")
    click.echo(f"null_dim: {result['null_dim']}")
    click.echo(f"gram_spectrum: {fmt_list(result['gram_spectrum'])}")
    click.echo(f"cyclic: {str(result['cyclic']).lower()}")
    if dump_gram:
        write_gram_csv(dump_gram, result["gram"])
        click.echo(f"gram_csv: {dump_gram}")
    return 0


@cli.command()
@scenario_argument
@seed_option
@tol_option
@verbose_option
def reduce(scenario_path: str, seed: Optional[int], tol: Optional[float], verbose: bool):
    """Decompose into irreducibles and print the density spectrum."""
    processor = _processor(scenario_path, verbose, tolerance=tol, seed=seed)
    logger.debug(GAUGE_PROJECTOR_NOTE)
    result = processor.reduce()
    click.echo(f"scenario: {result['scenario']}")
    click.echo(f"seed: {result['seed']}")
    click.echo("multiplicities:")
    click.echo("  irrep_dim  multiplicity")
    for irrep_dim, multiplicity in result["multiplicities"]:
        click.echo(f"  {irrep_dim:<9}  {multiplicity}")
    click.echo(f"unique: {str(result['unique']).lower()}")
    click.echo(f"projector_ranks: {result['projector_ranks']}")
    click.echo(f"spectrum: {fmt_list(result['spectrum'])}")
    click.echo(f"pairing_deviation: {fmt(result['pairing_deviation'])}")
    return 0


@cli.command()
@scenario_argument
@seed_option
@tol_option
@click.option("--bits", is_flag=True, help="Display the entropy in bits")
@verbose_option
def entropy(scenario_path: str, seed: Optional[int], tol: Optional[float], bits: bool, verbose: bool):
    """Print the von Neumann entropy of the (restricted) state."""
    processor = _processor(scenario_path, verbose, tolerance=tol, seed=seed)
    result = processor.entropy()
    click.echo(f"scenario: {result['scenario']}")
    click.echo(f"spectrum: {fmt_list(result['spectrum'])}")
    click.echo(f"entropy: {fmt_entropy(result['entropy'], bits)}")
    return 0


@cli.command()
@scenario_argument
@verbose_option
def compare(scenario_path: str, verbose: bool):
    """Compare restriction to the left factor with the partial trace."""
    processor = _processor(scenario_path, verbose)
    result = processor.compare()
    deviation = result["left_deviation"]
    click.echo(f"scenario: {result['scenario']}")
    click.echo(f"dims: {result['dims']}")
    click.echo(f"max_deviation: {fmt(deviation)}")
    click.echo(f"right_factor_deviation: {fmt(result['right_deviation'])}")
    if deviation > COMPARE_TOL:
        logger.error(f"Restriction and partial trace differ by {deviation:.3e}")
        return 1
    return 0


@cli.command("scan-gauge")
@scenario_argument
@click.option("--samples", type=click.IntRange(min=1), default=None, help="Number of Haar draws")
@seed_option
@tol_option
@click.option("--refine", is_flag=True, help="Run a local ascent from the best sample")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="CSV output path")
@click.option("--output", "output_dir", type=click.Path(file_okay=False), default=None, help="Directory for the CSV")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Parallel sample workers")
@click.option("--bits", is_flag=True, help="Also display the summary in bits")
@verbose_option
def scan_gauge(
    scenario_path: str,
    samples: Optional[int],
    seed: Optional[int],
    tol: Optional[float],
    refine: bool,
    csv_path: Optional[str],
    output_dir: Optional[str],
    workers: Optional[int],
    bits: bool,
    verbose: bool,
):
    """Scan entropies of gauge-transformed density operators."""
    processor = _processor(scenario_path, verbose, tolerance=tol, seed=seed, samples=samples)
    scenario = processor.scenario
    result = processor.scan_gauge(refine=refine, workers=workers)
    report = result["report"]
    if csv_path is None:
        directory = output_dir or CONFIG["output_dir"]
        csv_path = os.path.join(directory, f"{scenario.name}_scan_seed{report.seed}.csv")
    write_scan_csv(csv_path, report)
    click.echo(f"scenario: {result['scenario']}")
    click.echo(f"samples: {report.samples}")
    click.echo(f"seed: {report.seed}")
    click.echo(f"csv: {csv_path}")
    if refine:
        click.echo(f"argmax_parameters: {fmt_list(report.argmax_parameters)}")
    if bits:
        click.echo(
            f"bits: baseline={fmt_entropy(report.baseline_entropy, True)} "
            f"max={fmt_entropy(report.max_entropy, True)}"
        )
    click.echo(scan_summary(report))
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and translate failures into exit codes.

    0 on success, 1 on validation failure, 2 on numerical degeneracy.
    """
    try:
        result = cli.main(args=argv, prog_name="gns-entropy", standalone_mode=False)
    except GNSError as e:
        logger.error(f"Error: {e}")
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 1
    except click.exceptions.Abort:
        return 1
    return result if isinstance(result, int) else 0


if __name__ == '__main__':
    sys.exit(main())
