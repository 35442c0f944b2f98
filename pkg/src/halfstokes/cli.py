"""Command-line entry point wiring configuration to the verification suites.

Commands run one suite each and write a JSON artifact into the output
directory; ``report`` folds a directory of artifacts into a markdown + CSV
summary with figures.  Configuration is a flat key=value text file whose keys
override the reference defaults (see ``report.DEFAULTS``).  Exit codes:
0 = all checks passed, 1 = at least one check failed, 2 = usage error.
"""

import json
import sys

import click

from . import report as report_mod
from .report import DEFAULTS, SUITE_NAMES, SUITE_RUNNERS, write_artifact


def parse_config(path):
    """Flat key=value config; blank lines and #-comments ignored."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise click.UsageError(
                    f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in DEFAULTS:
                raise click.UsageError(f"{path}:{lineno}: unknown key {key!r}")
            kind = type(DEFAULTS[key])
            try:
                out[key] = kind(value)
            except ValueError:
                raise click.UsageError(
                    f"{path}:{lineno}: cannot parse {value!r} as "
                    f"{kind.__name__}")
    return out


def _emit(verbose, record):
    if verbose:
        click.echo(json.dumps(record, sort_keys=True,
                              default=report_mod._json_default))


def _run_suite(name, config, out, seed, strict, verbose):
    runner = SUITE_RUNNERS[name]
    _emit(verbose, {"event": "start", "suite": name, "seed": seed})
    artifact = runner(config, seed)
    path = write_artifact(artifact, out)
    failed = [c["name"] for c in artifact["checks"] if not c["pass"]]
    for c in artifact["checks"]:
        _emit(verbose, {"event": "check", "suite": name, **c})
    _emit(verbose, {"event": "done", "suite": name, "artifact": path,
                    "failed": failed})
    if failed:
        click.echo(f"{name}: FAILED checks: {', '.join(failed)}", err=True)
        return 1
    click.echo(f"{name}: {len(artifact['checks'])} checks passed "
               f"-> {path}")
    return 0


_COMMON = [
    click.option("--config", "config_path", type=click.Path(exists=True),
                 default=None, help="flat key=value configuration file"),
    click.option("--out", type=click.Path(), default="artifacts",
                 help="output directory for artifacts"),
    click.option("--seed", type=int, default=None,
                 help="seed for random families (defaults from config)"),
    click.option("--strict", is_flag=True, help="treat warnings as failures"),
    click.option("--verbose", is_flag=True,
                 help="JSON-lines diagnostics on stdout"),
]


def _with_common(fn):
    for opt in reversed(_COMMON):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Half-space Stokes verification tool."""


def _load(config_path, seed):
    config = dict(DEFAULTS)
    if config_path:
        config.update(parse_config(config_path))
    if seed is None:
        seed = int(config["seed"])
    return config, seed


def _make_suite_command(cli_name, suite_name):
    @main.command(name=cli_name)
    @_with_common
    def cmd(config_path, out, seed, strict, verbose):
        config, seed = _load(config_path, seed)
        sys.exit(_run_suite(suite_name, config, out, seed, strict, verbose))

    cmd.__doc__ = f"Run the {suite_name} verification suite."
    return cmd


for _cli, _suite in [("kernel-check", "kernel"), ("tent-suite", "tent"),
                     ("freq-suite", "freq"), ("linear-suite", "linear"),
                     ("gbeta-suite", "gbeta"), ("green-suite", "green"),
                     ("solve", "solve"), ("scaling-check", "scaling")]:
    _make_suite_command(_cli, _suite)


@main.command(name="report")
@click.option("--suite", "suites", multiple=True,
              type=click.Choice(SUITE_NAMES),
              help="restrict the summary to these suites")
@_with_common
def report(suites, config_path, out, seed, strict, verbose):
    """Aggregate suite artifacts into summary.md / summary.csv / figures."""
    try:
        result = report_mod.write_summary(out, suites or None)
    except FileNotFoundError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    for row in result["rows"]:
        _emit(verbose, {"event": "estimate", **row})
    click.echo(f"summary: {result['markdown']} ({len(result['rows'])} "
               f"estimate rows)")
    sys.exit(0 if result["all_pass"] else 1)


if __name__ == "__main__":
    main()
