"""``approxop`` command line.

    approxop <command> --config <path> [--n ...] [--seed ...] [--out <path>] [--format csv|json]

Exit codes: 0 success, 2 configuration error, 3 enumeration budget exceeded,
4 a checked property was violated.  ``APPROXOP_BUDGET`` overrides the
enumeration budget.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path

import click

from approxop.errors import ApproxOpError, FeasibilityError, SpecError
from approxop.experiments import COMMANDS, ExperimentResult, parse_spec, run_experiment

EXIT_SPEC = 2
EXIT_FEASIBILITY = 3
EXIT_VIOLATION = 4


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value if math.isfinite(value) else ""
    return str(value)


def _json_value(value) -> str:
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    return json.dumps(str(value))


def format_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_cell(row.get(c)) for c in result.columns])
    return buf.getvalue()


def format_json(result: ExperimentResult) -> str:
    """JSON with floats written to 17 significant digits, like the CSV cells."""
    doc = {
        "command": result.command,
        "columns": result.columns,
        "rows": [{c: row.get(c) for c in result.columns} for row in result.rows],
        "violation": result.violation,
        "messages": result.messages,
    }
    return _json_value(doc) + "\n"


def _parse_n(values) -> list[int] | None:
    out = []
    for v in values:
        for part in str(v).split(","):
            if part.strip():
                try:
                    out.append(int(part))
                except ValueError:
                    raise SpecError(f"--n expects integers, got {part!r}") from None
    return out or None


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("command", type=click.Choice(COMMANDS))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="JSON experiment configuration.")
@click.option("--n", "n_values", multiple=True, help="Override n_list (repeatable or comma separated).")
@click.option("--seed", type=int, default=None, help="Override the random seed.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None, help="Output format.")
def main(command, config_path, n_values, seed, out_path, fmt):
    """Run one experiment on the infinite-dimensional approximation operators."""
    try:
        with open(config_path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        click.echo(f"error: cannot parse {config_path}: {exc}", err=True)
        sys.exit(EXIT_SPEC)
    output = data.get("output", {}) if isinstance(data, dict) else {}
    out_path = out_path or output.get("path")
    suffix = Path(out_path).suffix.lstrip(".") if out_path else ""
    fmt = fmt or output.get("format") or (suffix if suffix in ("csv", "json") else "csv")
    if fmt not in ("csv", "json"):
        click.echo(f"error: unknown output format {fmt!r}", err=True)
        sys.exit(EXIT_SPEC)
    try:
        spec = parse_spec(data, command, _parse_n(n_values), seed)
        result = run_experiment(spec)
    except SpecError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SPEC)
    except FeasibilityError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_FEASIBILITY)
    except ApproxOpError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SPEC)
    text = format_csv(result) if fmt == "csv" else format_json(result)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    for msg in result.messages:
        click.echo(msg, err=True)
    sys.exit(EXIT_VIOLATION if result.violation else 0)


if __name__ == "__main__":
    main()
