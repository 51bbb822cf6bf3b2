"""
Main CLI entry point for defect-audit
"""

import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

import click
import yaml
from colorama import init

from . import __version__
from .adequacy.experiment import AdequacyRunner, workable_entries
from .adequacy.sweep import SweepBudget
from .config.manager import ConfigManager
from .dataset.ids import expand_id_ranges
from .dataset.manifest import load_manifest, select_entries
from .errors import AuditError
from .report.published import load_published_data
from .report.summary import HUMAN_READABLE, STRUCTURED, emit, summary_from_log
from .subject.registry import register_default_adapters
from .utils.cache import CacheManager, CoverageCache
from .utils.formatters import (
    format_duration, format_output, parse_duration, print_error, print_header, print_info,
    print_key_value_pairs, print_section, print_success, print_warning, set_color_output, setup_logging,
)
from .workability.results_log import ResultsLog, replay
from .workability.runner import AuditRunner
from .workability.verdicts import Outcome, RoundConfig

init(autoreset=True)

logger = logging.getLogger(__name__)

LOG_DIR_ENV = 'DEFECT_AUDIT_LOG_DIR'

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_AUDIT_ERROR = 2


class AuditGroup(click.Group):
    """
    Group whose exit status follows the tool's convention: 0 success,
    1 usage or validation error, 2 an audit error was recorded
    """

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args=args, prog_name=prog_name, complete_var=complete_var,
                              standalone_mode=False, **extra)
        except click.exceptions.Abort:
            print_error("Aborted")
            rv = EXIT_USAGE
        except click.ClickException as e:
            e.show()
            rv = EXIT_USAGE
        except AuditError as e:
            print_error(str(e))
            rv = EXIT_USAGE
        if not isinstance(rv, int):
            rv = EXIT_OK
        if standalone_mode:
            sys.exit(rv)
        return rv


def _schedule(value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        levels = [int(part) for part in value.split(',') if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")
    if not levels or any(level < 1 for level in levels):
        raise click.BadParameter("every parallelism level must be at least 1")
    return levels


def _duration(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_duration(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


def _ids(value: Optional[str]) -> Optional[List[str]]:
    if not value:
        return None
    return expand_id_ranges(value)


def _prepare_adapters(ctx) -> None:
    config = ctx.obj['config_manager'].config
    register_default_adapters(config.subject_settings(), isolation=config.subject.isolation,
                              external_adapters=config.external_adapters, replace=True)


def _scratch_root(ctx) -> Optional[Path]:
    workspace_dir = ctx.obj['config_manager'].config.subject.workspace_dir
    return Path(workspace_dir) if workspace_dir else None


def _cache_manager(ctx) -> Optional[CacheManager]:
    if ctx.obj.get('no_cache') or not ctx.obj['config_manager'].config.cache_enabled:
        return None
    if ctx.obj.get('cache_manager') is None:
        ctx.obj['cache_manager'] = CacheManager(cache_dir=ctx.obj['config_manager'].config.cache_dir)
        ctx.call_on_close(ctx.obj['cache_manager'].close)
    return ctx.obj['cache_manager']


def default_log_path(ctx, dataset_name: str) -> Path:
    """Results log location: $DEFECT_AUDIT_LOG_DIR, then the configured log_dir, then the working directory"""
    log_dir = os.environ.get(LOG_DIR_ENV) or ctx.obj['config_manager'].config.log_dir or '.'
    safe_name = ''.join(c if c.isalnum() or c in '-_.' else '_' for c in dataset_name)
    return Path(log_dir) / f"{safe_name}.jsonl"


@click.group(cls=AuditGroup)
@click.version_option(__version__, prog_name='daudit')
@click.option('--debug', is_flag=True, help='Enable debug logging')
@click.option('--config-dir', type=click.Path(), help='Custom configuration directory')
@click.option('--no-cache', is_flag=True, help='Disable the coverage cache')
@click.pass_context
def cli(ctx, debug, config_dir, no_cache):
    """
    defect-audit - workability and test-suite adequacy audits for defect datasets

    Audit which defects of a program-repair benchmark can be set up, built and
    tested reliably, find defects a single statement deletion "repairs", and
    reproduce the resulting exclusion tables and fix rates.
    """
    setup_logging(debug)

    ctx.ensure_object(dict)
    ctx.obj['debug'] = debug
    ctx.obj['no_cache'] = no_cache
    ctx.obj['config_manager'] = ConfigManager(config_dir)
    ctx.obj['cache_manager'] = None

    config = ctx.obj['config_manager'].config
    set_color_output(config.ui.color_output)
    if not debug and config.debug_mode:
        setup_logging(True)


@cli.command()
@click.argument('manifest', type=click.Path())
@click.pass_context
def validate(ctx, manifest):
    """Load a dataset manifest and check its invariants"""
    dataset = load_manifest(manifest)
    ui = ctx.obj['config_manager'].config.ui

    per_adapter = {}
    for entry in dataset.entries:
        key = (entry.project, entry.adapter)
        per_adapter[key] = per_adapter.get(key, 0) + 1
    rows = [{'project': project, 'adapter': adapter, 'defects': count}
            for (project, adapter), count in sorted(per_adapter.items())]

    print_header(f"{dataset.name} {dataset.version}".strip())
    print(format_output(rows, ui.default_output_format, tablefmt=ui.table_style))
    print_success(f"{len(dataset)} entries are valid")
    return EXIT_OK


@cli.command()
@click.argument('manifest', type=click.Path())
@click.option('--rounds', type=click.IntRange(min=1), help='Setup-test rounds per defect')
@click.option('--parallel-schedule', help='Comma-separated parallelism levels, cycled over rounds')
@click.option('--out', 'out', type=click.Path(dir_okay=False), help='Results log (appended to, resumable)')
@click.option('--ids', help='Only these defects, e.g. "Cli/1-5,7; Lang/3"')
@click.option('--keep-workspaces', is_flag=True, help='Keep round workspaces for inspection')
@click.pass_context
def audit(ctx, manifest, rounds, parallel_schedule, out, ids, keep_workspaces):
    """Run the workability setup-test over a dataset"""
    config = ctx.obj['config_manager'].config
    dataset = load_manifest(manifest)
    entries = select_entries(dataset, _ids(ids))
    base = config.round_config()
    cfg = RoundConfig(rounds=rounds or base.rounds,
                      parallelism_schedule=tuple(_schedule(parallel_schedule) or base.parallelism_schedule),
                      suite_timeout=base.suite_timeout, test_timeout=base.test_timeout)
    log_path = Path(out) if out else default_log_path(ctx, dataset.name)
    _prepare_adapters(ctx)

    print_header(f"Auditing {len(entries)} defect(s) of {dataset.name}")
    print_info(f"{cfg.rounds} round(s), parallelism {','.join(map(str, cfg.parallelism_schedule))}; log: {log_path}")

    def on_round(round_index, level, pending):
        print_info(f"Round {round_index + 1}/{cfg.rounds}: {pending} defect(s) at parallelism {level}")

    with ResultsLog(log_path) as log:
        report = AuditRunner(entries, cfg, log, scratch_root=_scratch_root(ctx),
                             keep_workspaces=keep_workspaces or config.subject.keep_workspaces,
                             on_round=on_round).run()

    rows = []
    for defect_id, verdict in report.verdicts.items():
        failing = sorted(verdict.rounds[-1].observed_failing) if verdict.rounds else []
        rows.append({'defect': defect_id, 'outcome': verdict.outcome.value, 'rounds': len(verdict.rounds),
                     'failing': ', '.join(failing)})
    for defect_id, message in report.audit_errors.items():
        rows.append({'defect': defect_id, 'outcome': 'audit error', 'rounds': '', 'failing': message})
    print_section("Verdicts")
    print(format_output(rows, config.ui.default_output_format, tablefmt=config.ui.table_style))

    workable = sum(1 for v in report.verdicts.values() if v.outcome is Outcome.WORKABLE)
    print_success(f"{workable} of {len(entries)} defect(s) workable; results in {log_path}")
    if report.audit_errors:
        print_warning(f"{len(report.audit_errors)} defect(s) could not be audited")
        return EXIT_AUDIT_ERROR
    return EXIT_OK


@cli.command()
@click.argument('manifest', type=click.Path())
@click.option('--log', 'log_file', required=True, type=click.Path(dir_okay=False),
              help='Results log of a previous audit; adequacy records are appended')
@click.option('--threshold', type=click.FloatRange(0.0, 1.0), help='Minimum suspiciousness (default 0.01)')
@click.option('--cap', type=click.IntRange(min=0), help='Maximum deletion candidates (default 300)')
@click.option('--budget', callback=_duration, help='Wall-clock budget per defect, e.g. 60s, 3h, 1h30m')
@click.option('--workers', type=click.IntRange(min=1), help='Concurrent deletion trials')
@click.option('--ids', help='Only these defects')
@click.pass_context
def adequacy(ctx, manifest, log_file, threshold, cap, budget, workers, ids):
    """Run fault localization and single-statement deletion sweeps on workable defects"""
    config = ctx.obj['config_manager'].config
    dataset = load_manifest(manifest)
    entries = select_entries(dataset, _ids(ids))

    verdicts = replay(log_file).verdicts()
    unaudited = [e.id for e in entries if e.id not in verdicts]
    if unaudited:
        print_warning(f"{len(unaudited)} defect(s) have no workability verdict in {log_file}; "
                      f"run 'daudit audit' first")
    candidates = workable_entries(entries, [k for k, v in verdicts.items() if v.outcome is Outcome.WORKABLE])

    settings = config.adequacy
    sweep_budget = SweepBudget(wall_clock_limit=settings.budget_seconds if budget is None else budget,
                               per_variant_timeout=settings.per_variant_timeout)
    cache_manager = _cache_manager(ctx)
    _prepare_adapters(ctx)

    print_header(f"Adequacy of {len(candidates)} workable defect(s)")
    print_info(f"budget {format_duration(sweep_budget.wall_clock_limit)} per defect")
    with ResultsLog(log_file) as log:
        report = AdequacyRunner(
            candidates, log,
            threshold=settings.threshold if threshold is None else threshold,
            cap=settings.cap if cap is None else cap,
            budget=sweep_budget,
            workers=workers or settings.workers,
            cache=CoverageCache(cache_manager) if cache_manager else None,
            scratch_root=_scratch_root(ctx),
            keep_workspaces=config.subject.keep_workspaces,
        ).run()

    rows = [{'defect': v.defect_id, 'plausible deletions': ', '.join(map(str, v.plausible_locations)),
             'deletion-only fix': v.human_patch_deletion_only, 'under-specified': v.under_specified,
             'truncated': v.sweep_truncated} for v in report.verdicts.values()]
    if rows:
        print(format_output(rows, config.ui.default_output_format, tablefmt=config.ui.table_style))

    if report.all_unevaluated:
        print_warning(f"The budget of {format_duration(sweep_budget.wall_clock_limit)} expired before any "
                      f"deletion was evaluated")
    elif report.unevaluated:
        print_warning(f"{report.unevaluated} of {report.trials} deletion(s) were not evaluated within the budget")

    under_specified = sum(1 for v in report.verdicts.values() if v.under_specified)
    print_success(f"{under_specified} under-specified test suite(s) among {len(report.verdicts)} defect(s)")
    if report.audit_errors:
        print_warning(f"{len(report.audit_errors)} defect(s) could not be analysed")
        return EXIT_AUDIT_ERROR
    return EXIT_OK


@cli.command()
@click.option('--log', 'log_file', type=click.Path(exists=True, dir_okay=False), help='Results log to summarize')
@click.option('--paper-data', '--published-data', 'paper_data', type=click.Path(exists=True, file_okay=False),
              help='Directory of bundled published data to reproduce, e.g. paper-data/')
@click.option('--dataset', 'dataset_name', help='Dataset name shown for --log (default: log file name)')
@click.option('--format', 'output_format', type=click.Choice(['text', 'json']), default='text',
              help='Human-readable text or structured JSON')
@click.option('--output', type=click.Path(dir_okay=False), help='Write to a file instead of stdout')
@click.pass_context
def report(ctx, log_file, paper_data, dataset_name, output_format, output):
    """Summarize a results log and/or reproduce the bundled published tables"""
    if not log_file and not paper_data:
        raise click.UsageError("give --log, --paper-data or both")

    style = STRUCTURED if output_format == 'json' else HUMAN_READABLE
    documents = []
    if log_file:
        documents.append(emit(summary_from_log(log_file, dataset_name), style))
    if paper_data:
        documents.append(emit(load_published_data(paper_data).summary(), style))
    text = '\n'.join(documents)

    if output:
        Path(output).write_text(text, encoding='utf-8')
        print_success(f"Report written to {output}")
    else:
        click.echo(text, nl=False)
    return EXIT_OK


@cli.group()
def cache():
    """Coverage cache management"""
    pass


@cache.command('status')
@click.pass_context
def cache_status(ctx):
    """Show cache status and statistics"""
    cache_manager = _cache_manager(ctx)
    if not cache_manager:
        print_info("Caching is disabled")
        return EXIT_OK

    stats = cache_manager.get_stats()
    print_header("Cache Statistics")
    print_key_value_pairs({
        'Total items': stats['total_items'],
        'Cache size (MB)': stats['cache_size_mb'],
        'Cache directory': stats['cache_dir'],
    })
    return EXIT_OK


@cache.command('clear')
@click.option('--confirm', is_flag=True, help='Skip confirmation prompt')
@click.pass_context
def cache_clear(ctx, confirm):
    """Clear cached coverage"""
    cache_manager = _cache_manager(ctx)
    if not cache_manager:
        print_info("Caching is disabled")
        return EXIT_OK
    if not confirm:
        click.confirm("Clear all cached coverage?", abort=True)
    if cache_manager.clear():
        print_success("Cache cleared successfully")
        return EXIT_OK
    print_error("Failed to clear cache")
    return EXIT_USAGE


@cli.group()
def config():
    """Configuration management"""
    pass


@config.command('get')
@click.argument('key')
@click.pass_context
def config_get(ctx, key):
    """Get a configuration value"""
    value = ctx.obj['config_manager'].get(key)
    if value is None:
        print_error(f"Configuration key '{key}' not found")
        return EXIT_USAGE
    click.echo(f"{key}: {value}")
    return EXIT_OK


@config.command('set')
@click.argument('key')
@click.argument('value')
@click.pass_context
def config_set(ctx, key, value):
    """Set a configuration value (YAML syntax: 20, 0.5, true, [1, 5, 10])"""
    config_manager = ctx.obj['config_manager']
    try:
        parsed_value = yaml.safe_load(value)
    except yaml.YAMLError:
        parsed_value = value

    if not config_manager.set(key, parsed_value):
        print_error(f"Failed to set {key}")
        return EXIT_USAGE
    issues = config_manager.validate_config()
    if issues:
        print_error("Configuration issues found:")
        for issue in issues:
            click.echo(f"  - {issue}")
        return EXIT_USAGE
    config_manager.save_config()
    print_success(f"Set {key} = {parsed_value}")
    return EXIT_OK


@config.command('list')
@click.option('--section', help='Show specific configuration section')
@click.pass_context
def config_list(ctx, section):
    """List configuration values"""
    config_manager = ctx.obj['config_manager']
    if section:
        config_data = config_manager.get_section(section)
        if not config_data:
            print_error(f"Section '{section}' not found")
            return EXIT_USAGE
        print_key_value_pairs(config_data, title=f"{section} configuration")
    else:
        print_key_value_pairs(config_manager.get_all(), title="Configuration")
    return EXIT_OK


@config.command('reset')
@click.confirmation_option(prompt='Are you sure you want to reset all configuration to defaults?')
@click.pass_context
def config_reset(ctx):
    """Reset configuration to defaults"""
    config_manager = ctx.obj['config_manager']
    config_manager.reset_to_defaults()
    if not config_manager.save_config():
        print_error("Failed to save configuration")
        return EXIT_USAGE
    print_success("Configuration reset to defaults")
    return EXIT_OK


@config.command('validate')
@click.pass_context
def config_validate(ctx):
    """Validate configuration"""
    issues = ctx.obj['config_manager'].validate_config()
    if not issues:
        print_success("Configuration is valid")
        return EXIT_OK
    print_error("Configuration issues found:")
    for issue in issues:
        click.echo(f"  - {issue}")
    return EXIT_USAGE


def main():
    """Main entry point"""
    try:
        cli()
    except KeyboardInterrupt:
        print_info("\nOperation cancelled by user")
        sys.exit(EXIT_USAGE)
    except Exception as e:
        if '--debug' in sys.argv:
            logging.exception("Unexpected error")
        print_error(f"Unexpected error: {e}")
        sys.exit(EXIT_USAGE)


if __name__ == '__main__':
    main()
