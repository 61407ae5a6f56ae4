import logging
import sys
from typing import Any, Dict, List, Optional

import click

from fareyprod.config_handler import build_run_config, get_default, read_config, update_defaults
from fareyprod.exceptions import ConfigError, CrossCheckError, DomainError
from fareyprod.output import render_rows, write_rows
from fareyprod.sweeps import run_command

EXIT_CONFIG = 2
EXIT_CROSS_CHECK = 3

n_max_option = click.option("--n-max", type=int, help="Largest n of the sweep")
prime_option = click.option("-p", "--prime", type=int, help="Prime p of the valuation")
out_option = click.option("--out", "output_path", help="Output file path (stdout when omitted)")
format_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "tsv"]), default="csv", show_default=True
)


def _split_methods(value: Optional[str]) -> List[str]:
    if not value:
        return ["inversion"]
    return [m.strip() for m in value.split(",") if m.strip()]


def _execute(**fields: Any) -> None:
    """Validate, run and emit one command, mapping failures to exit codes"""
    fields.setdefault("threads", get_default("threads") or 1)
    fields.setdefault("oracle_ceiling", get_default("oracle_ceiling"))
    fields.setdefault("n_max_ceiling", get_default("n_max_ceiling"))
    try:
        cfg = build_run_config(**fields)
        result = run_command(cfg)
    except (ConfigError, DomainError) as e:
        click.echo(f"Configuration Error: {e}", err=True)
        sys.exit(EXIT_CONFIG)
    except CrossCheckError as e:
        click.echo(f"Cross-check failed: {e}", err=True)
        sys.exit(EXIT_CROSS_CHECK)

    if cfg.output_path:
        path = write_rows(
            result.header,
            result.rows,
            cfg.output_path,
            fmt=cfg.format,
            comment=result.comment,
            trailer=result.summary,
        )
        click.echo(f"{len(result.rows)} rows written to {path}", err=True)
    else:
        click.echo(
            render_rows(
                result.header,
                result.rows,
                fmt=cfg.format,
                comment=result.comment,
                trailer=result.summary,
            ),
            nl=False,
        )
    if result.mismatches:
        click.echo(f"Cross-check failed: {result.mismatches} mismatching rows", err=True)
        sys.exit(EXIT_CROSS_CHECK)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
def cli(verbose):
    """fareyprod - valuations and remainder terms of Farey products"""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@cli.group()
def config():
    """Manage configuration settings"""
    pass


@config.command()
@click.option("--threads", type=int, help="Worker processes for sweeps")
@click.option("--n-max-ceiling", type=int, help="Largest table bound build_tables accepts")
@click.option("--oracle-ceiling", type=int, help="Largest n the brute-force oracle accepts")
@click.option("--jump-threshold-factor", type=float, help="Jump threshold in medians of |Δ|")
def set(threads, n_max_ceiling, oracle_ceiling, jump_threshold_factor):
    """Set configuration values"""
    try:
        update_defaults(
            threads=threads,
            n_max_ceiling=n_max_ceiling,
            oracle_ceiling=oracle_ceiling,
            jump_threshold_factor=jump_threshold_factor,
        )
        click.echo("Configuration updated successfully!")
    except ConfigError as e:
        click.echo(f"Error updating config: {str(e)}", err=True)
        sys.exit(EXIT_CONFIG)


@config.command()
@click.argument("key", required=False)
def get(key):
    """Get configuration values"""
    defaults: Dict[str, Any] = read_config().get("defaults", {})
    if key:
        if key not in defaults:
            click.echo(f"Unknown setting: '{key}'", err=True)
            sys.exit(EXIT_CONFIG)
        click.echo(f"{key}: {defaults[key]}")
        return
    for k, v in defaults.items():
        click.echo(f"{k}: {v}")


@cli.command()
@n_max_option
@out_option
@format_option
def sieve(n_max, output_path, fmt):
    """Dump φ, μ, M, Φ and ψ up to n_max"""
    _execute(command="sieve", n_max=n_max, output_path=output_path, format=fmt)


@cli.command()
@n_max_option
@prime_option
@click.option("-b", "--base", type=int, help="Any base b >= 2 instead of a prime")
@click.option("--method", "methods", help="inversion, oracle or both, comma separated")
@out_option
@format_option
def ordg(n_max, prime, base, methods, output_path, fmt):
    """ordₚ(Ḡₙ) (or ν_b(Ḡₙ)) for 1 <= n <= n_max

    Example:
      fareyprod ordg -p 2 --n-max 1023
    """
    _execute(
        command="ordg",
        n_max=n_max,
        prime=prime,
        base=base,
        methods=_split_methods(methods),
        output_path=output_path,
        format=fmt,
    )


@cli.command()
@n_max_option
@prime_option
@click.option("-b", "--base", type=int, help="Any base b >= 2 instead of a prime")
@click.option("--method", "methods", help="inversion, direct, oracle; comma separated to compare")
@out_option
@format_option
def ordf(n_max, prime, base, methods, output_path, fmt):
    """ordₚ(F̄ₙ) (or ν_b(F̄ₙ)) for 1 <= n <= n_max

    Examples:
      fareyprod ordf -p 2 --n-max 1023
      fareyprod ordf -p 2 --n-max 100 --method inversion,oracle
    """
    _execute(
        command="ordf",
        n_max=n_max,
        prime=prime,
        base=base,
        methods=_split_methods(methods),
        output_path=output_path,
        format=fmt,
    )


@cli.command()
@prime_option
@click.option("--max-power", type=int, help="Rows r = 1..max_power at N = p^r - 1")
@n_max_option
@out_option
@format_option
def table(prime, max_power, n_max, output_path, fmt):
    """ordₚ(F̄_N) at N = p^r - 1 with its normalised ratios"""
    _execute(
        command="table",
        prime=prime,
        max_power=max_power,
        n_max=n_max,
        output_path=output_path,
        format=fmt,
    )


@cli.command()
@click.option(
    "--kind", type=click.Choice(["mikolas", "inf", "p0", "p1", "p2"]), help="Which split to emit"
)
@n_max_option
@prime_option
@out_option
@format_option
def remainder(kind, n_max, prime, output_path, fmt):
    """Main and remainder terms of ln F̄ₙ or ordₚ(F̄ₙ)"""
    _execute(
        command="remainder",
        kind=kind,
        n_max=n_max,
        prime=prime,
        output_path=output_path,
        format=fmt,
    )


@cli.command()
@click.option("--integers", "mode", flag_value="integers", help="n with F̄ₙ an integer")
@click.option("--psq", "mode", flag_value="psq", help="ordₚ(F̄_{p²-1}) for odd primes p <= p_max")
@click.option("--properties", "mode", flag_value="properties", help="Sign and growth statistics")
@click.option("--p-max", type=int, help="Largest prime of the --psq scan")
@n_max_option
@prime_option
@out_option
@format_option
def scan(mode, p_max, n_max, prime, output_path, fmt):
    """Integrality, p² - 1 and property scans

    Examples:
      fareyprod scan --integers --n-max 200
      fareyprod scan --psq --p-max 1000
      fareyprod scan --properties -p 2 --n-max 32767
    """
    _execute(
        command="scan",
        scan=mode,
        p_max=p_max,
        n_max=n_max,
        prime=prime,
        output_path=output_path,
        format=fmt,
    )


@cli.command()
@prime_option
@n_max_option
@out_option
@format_option
def jumps(prime, n_max, output_path, fmt):
    """Jump points shared by R̄_∞ and −R̄_{p,1}"""
    _execute(command="jumps", prime=prime, n_max=n_max, output_path=output_path, format=fmt)


if __name__ == "__main__":
    cli()
