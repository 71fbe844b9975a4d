"""Command-line surface for exact integrals, certified bounds, sweeps and the cache.

Exit codes: 0 success, 1 usage error, 2 domain/precondition error,
3 failed mathematical verification (never used for I/O problems).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import cache as cache_io
from .asymptotics import RatioPoint, root_window
from .bounds import (
    DEFAULT_MODE,
    MODES,
    BoundCertificate,
    DivisorSpec,
    VolumeTable,
    build_chain,
    divisor_mu,
    kodaira_bound,
    thm1_step,
    thm2_bound,
    thm3_bound,
    verify_anchor_values,
    verify_lemma1,
    verify_thm1,
    verify_thm2,
)
from .errors import CacheError, DomainError, VerificationError
from .intersect import IntersectionEngine, IntersectionKey

ZERO = Fraction(0)


@dataclass
class CommandResult:
    exit_code: int
    payload: str


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse hook: report usage problems, never exit
        raise _UsageError(message)


def _rat(value: Fraction) -> str:
    return cache_io.format_value(Fraction(value))


def _flt(value, digits: int) -> str:
    return "" if value is None else f"{value:.{digits}g}"


def _ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise _UsageError(f"expected a comma-separated integer list, got {text!r}") from exc


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(part) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"expected comma-separated rationals, got {text!r}") from exc


def _kappa_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            j, m = part.split(":")
            pairs.append((int(j), int(m)))
        except ValueError as exc:
            raise _UsageError(f"expected kappa factors as j:m pairs, got {part!r}") from exc
    return pairs


def _build_parser() -> _Parser:
    parser = _Parser(prog="wpvol", add_help=True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--digits", type=int, default=12)
    common.add_argument("--cache-path")

    p = sub.add_parser("volume", parents=[common])
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("psi", parents=[common])
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--exp", required=True)

    p = sub.add_parser("mixed", parents=[common])
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--psi", default="")
    p.add_argument("--kappa", default="")

    p = sub.add_parser("bound", parents=[common])
    p.add_argument("rule", choices=("thm1", "thm2", "thm3", "kodaira", "chain"))
    p.add_argument("--g", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--p", dest="p_coeff")
    p.add_argument("--q", dest="q_coeffs")
    p.add_argument("--mode", choices=MODES, default=DEFAULT_MODE)
    p.add_argument("--g-max", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--budget", type=int, default=9)
    p.add_argument("--override-exclusions", action="store_true")

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("check", choices=("anchors", "thm1", "thm2", "lemma1"))
    p.add_argument("--max-dim", type=int)

    p = sub.add_parser("asym", parents=[common])
    p.add_argument("--g-max", type=int, required=True)
    p.add_argument("--source", choices=("exact", "chain"), default="exact")
    p.add_argument("--budget", type=int, default=9)

    p = sub.add_parser("cache", parents=[common])
    p.add_argument("action", choices=("export", "import", "clear"))
    p.add_argument("--path")

    return parser


def _render_rows(fmt: str, header: list[str], rows: list[list[str]], text_lines: list[str]) -> str:
    if fmt == "text":
        return "\n".join(text_lines)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue().rstrip("\n")
    return json.dumps([dict(zip(header, row)) for row in rows], indent=2, sort_keys=True)


def _cert_obj(cert: BoundCertificate) -> dict:
    params = {}
    for key, val in cert.params:
        if isinstance(val, Fraction):
            params[key] = _rat(val)
        elif isinstance(val, tuple):
            params[key] = [_rat(x) for x in val]
        else:
            params[key] = val
    return {
        "target_g": cert.target.g,
        "target_n": cert.target.n,
        "kind": cert.kind,
        "value": _rat(cert.value),
        "strict": cert.strict,
        "rule": cert.rule,
        "params": params,
        "inputs": [
            {"name": ti.name, "value": _rat(ti.value), "provenance": ti.provenance, "role": ti.role}
            for ti in cert.inputs
        ],
        "notes": list(cert.notes),
    }


def _cert_text(cert: BoundCertificate) -> list[str]:
    head = (
        f"{cert.kind} bound for V({cert.target.g},{cert.target.n}): {_rat(cert.value)}"
        + (" (strict)" if cert.strict else "")
    )
    detail = ", ".join(
        f"{key}={_rat(val) if isinstance(val, Fraction) else val}"
        for key, val in cert.params
        if key not in ("mu",) and val is not None
    )
    lines = [head, f"  rule {cert.rule} [{detail}]"]
    lines += [f"  input {ti}" for ti in cert.inputs]
    lines += [f"  note: {note}" for note in cert.notes]
    return lines


def _render_cert(fmt: str, cert: BoundCertificate) -> str:
    if fmt == "json":
        return json.dumps(_cert_obj(cert), indent=2, sort_keys=True)
    if fmt == "csv":
        header = ["target_g", "target_n", "kind", "value", "strict", "rule"]
        row = [
            str(cert.target.g),
            str(cert.target.n),
            cert.kind,
            _rat(cert.value),
            str(cert.strict).lower(),
            cert.rule,
        ]
        return _render_rows("csv", header, [row], [])
    return "\n".join(_cert_text(cert))


def _render_table(fmt: str, table: VolumeTable) -> str:
    header = ["g", "n", "exact", "lower", "upper"]
    rows = []
    text_lines = ["g\tn\texact\tlower\tupper"]
    for g, n in table.points():
        cell = table.cell(g, n)
        exact = _rat(cell.exact) if cell.exact is not None else ""
        lower = _rat(cell.lower.value) if cell.lower is not None else ""
        upper = _rat(cell.upper.value) if cell.upper is not None else ""
        rows.append([str(g), str(n), exact, lower, upper])
        text_lines.append(f"{g}\t{n}\t{exact or '-'}\t{lower or '-'}\t{upper or '-'}")
    for g, n, reason in table.gaps:
        text_lines.append(f"gap: ({g},{n}): {reason}")
    if fmt == "json":
        return json.dumps(
            {
                "cells": [dict(zip(header, row)) for row in rows],
                "gaps": [{"g": g, "n": n, "reason": reason} for g, n, reason in table.gaps],
            },
            indent=2,
            sort_keys=True,
        )
    return _render_rows(fmt, header, rows, text_lines)


def _resolve_cache_path(args, env: Mapping[str, str]) -> str | None:
    return args.cache_path or env.get("WPVOL_CACHE") or None


# ------------------------------------------------------------------ handlers


def _cmd_volume(args, engine: IntersectionEngine) -> str:
    value = engine.wp_volume(args.g, args.n)
    if args.format == "text":
        return _rat(value)
    return _render_rows(
        args.format,
        ["g", "n", "value"],
        [[str(args.g), str(args.n), _rat(value)]],
        [_rat(value)],
    )


def _cmd_psi(args, engine: IntersectionEngine) -> str:
    exps = _ints(args.exp)
    value = engine.psi_intersection(args.g, exps)
    if args.format == "text":
        return _rat(value)
    return _render_rows(
        args.format,
        ["g", "exponents", "value"],
        [[str(args.g), ",".join(map(str, exps)), _rat(value)]],
        [_rat(value)],
    )


def _cmd_mixed(args, engine: IntersectionEngine) -> str:
    key = IntersectionKey.make(args.g, args.n, _ints(args.psi), _kappa_pairs(args.kappa))
    value = engine.mixed_intersection(key)
    if args.format == "text":
        return _rat(value)
    return _render_rows(
        args.format,
        ["g", "n", "psi", "kappa", "value"],
        [
            [
                str(args.g),
                str(args.n),
                ",".join(map(str, key.psi)),
                ",".join(f"{j}:{m}" for j, m in key.kappa),
                _rat(value),
            ]
        ],
        [_rat(value)],
    )


def _cmd_bound(args, engine: IntersectionEngine) -> str:
    if args.rule == "chain":
        if args.g_max is None or args.n_max is None:
            raise _UsageError("bound chain requires --g-max and --n-max")
        table = build_chain(args.g_max, args.n_max, args.budget, engine=engine)
        return _render_table(args.format, table)

    if args.g is None:
        raise _UsageError(f"bound {args.rule} requires --g")

    if args.rule == "thm1":
        if args.n is None:
            raise _UsageError("bound thm1 requires --g and --n")
        if (args.g, args.n) == (0, 3):
            v, prov = ZERO, "convention"
        else:
            v, prov = engine.wp_volume(args.g, args.n), "exact"
        cert = thm1_step(
            args.g, args.n, v, provenance=prov, override_exclusions=args.override_exclusions
        )
        return _render_cert(args.format, cert)

    table = build_chain(max(args.g - 1, 1), 2, args.budget, engine=engine)
    if args.rule == "thm2":
        cert = thm2_bound(args.g, table, args.mode)
    elif args.rule == "kodaira":
        cert = kodaira_bound(args.g, table, args.mode, override_genus=args.override_exclusions)
    else:  # thm3
        if args.p_coeff is None or args.q_coeffs is None:
            raise _UsageError("bound thm3 requires --p and --q")
        spec = DivisorSpec(Fraction(args.p_coeff), tuple(_rationals(args.q_coeffs)))
        cert = thm3_bound(args.g, divisor_mu(spec), table, args.mode)
    return _render_cert(args.format, cert)


def _cmd_verify(args) -> str:
    # always recompute: verification never trusts a warm cache
    fresh = IntersectionEngine()
    lines: list[str] = []
    if args.check == "anchors":
        for label, detail in verify_anchor_values(fresh):
            lines.append(f"ok: {label}: {detail}")
    elif args.check == "thm1":
        limit = args.max_dim if args.max_dim is not None else 9
        for g, n, bound, nxt, equal in verify_thm1(fresh, limit):
            tag = "equality" if equal else "ok"
            lines.append(f"{tag}: ({g},{n}) -> ({g},{n + 1}): bound {_rat(bound)} <= V = {_rat(nxt)}")
    elif args.check == "thm2":
        g_top = (args.max_dim + 3) // 3 if args.max_dim is not None else 4
        genera = tuple(range(2, max(g_top, 2) + 1))
        for g, mode, bound, exact in verify_thm2(fresh, genera):
            lines.append(f"ok: g={g} [{mode}]: bound {_rat(bound)} <= V({g},0) = {_rat(exact)}")
    else:  # lemma1
        max_dim = args.max_dim if args.max_dim is not None else 6
        rows = verify_lemma1(fresh, max_dim)
        seen: dict[tuple[int, int], int] = {}
        for g, n, _part, _value in rows:
            seen[(g, n)] = seen.get((g, n), 0) + 1
        for (g, n), count in sorted(seen.items()):
            lines.append(f"ok: ({g},{n}): {count} kappa monomials all >= 0")
    lines.append(f"all {len(lines)} checks passed")
    return "\n".join(lines)


def _cmd_asym(args, engine: IntersectionEngine) -> str:
    if args.g_max < 2:
        raise DomainError(f"asym needs --g-max >= 2, got {args.g_max}")
    points: list[RatioPoint] = []
    if args.source == "exact":
        for g in range(2, args.g_max + 1):
            points.append(RatioPoint.from_volume(g, 0, engine.wp_volume(g, 0), "exact"))
    else:
        table = build_chain(args.g_max, 2, args.budget, engine=engine)
        for g in range(2, args.g_max + 1):
            cell = table.cell(g, 0)
            if cell is None or cell.lower is None:
                continue
            points.append(RatioPoint.from_volume(g, 0, cell.lower.value, "lower"))
    if not points:
        raise DomainError("no volume data available for the requested range")
    c_est, c_max = root_window(points)

    header = ["g", "n", "kind", "r", "root", "logprof"]
    rows = [
        [
            str(p.g),
            str(p.n),
            p.value_kind,
            _rat(p.r),
            _flt(p.root, args.digits),
            _flt(p.logprof, args.digits),
        ]
        for p in points
    ]
    text_lines = ["g\tn\tkind\tr\troot\tlogprof"]
    text_lines += ["\t".join(row) for row in rows]
    text_lines.append(f"window: c_est = {_flt(c_est, args.digits)}, C_est = {_flt(c_max, args.digits)}")
    if args.format == "json":
        return json.dumps(
            {
                "points": [dict(zip(header, row)) for row in rows],
                "window": {"c_est": _flt(c_est, args.digits), "C_est": _flt(c_max, args.digits)},
            },
            indent=2,
            sort_keys=True,
        )
    return _render_rows(args.format, header, rows, text_lines)


def _cmd_cache(args, env: Mapping[str, str]) -> str:
    resolved = _resolve_cache_path(args, env)
    if args.action == "export":
        src = resolved
        dst = args.path or resolved
        if src is None or dst is None:
            raise DomainError("cache export needs a cache path (--cache-path/WPVOL_CACHE) and/or --path")
        entries = cache_io.read_cache_file(src) if os.path.exists(src) else {}
        cache_io.write_cache_file(dst, entries)
        return f"exported {len(entries)} entries to {dst}"
    if args.action == "import":
        if args.path is None:
            raise _UsageError("cache import requires --path")
        if resolved is None:
            raise DomainError("cache import needs a destination (--cache-path or WPVOL_CACHE)")
        incoming = cache_io.read_cache_file(args.path)
        existing = cache_io.read_cache_file(resolved) if os.path.exists(resolved) else {}
        existing.update(incoming)
        cache_io.write_cache_file(resolved, existing)
        return f"imported {len(incoming)} entries into {resolved} ({len(existing)} total)"
    # clear
    target = args.path or resolved
    if target is None:
        raise DomainError("cache clear needs a path (--path, --cache-path or WPVOL_CACHE)")
    cache_io.write_cache_file(target, {})
    return f"cleared cache at {target}"


_ENGINE_COMMANDS = ("volume", "psi", "mixed", "bound", "asym")


def run_command(argv: list[str], env: Mapping[str, str] | None = None) -> CommandResult:
    """Dispatch one CLI invocation; never raises, never exits."""
    env = env if env is not None else {}
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("missing subcommand")
        if getattr(args, "digits", 12) < 1:
            raise _UsageError("--digits must be >= 1")

        if args.command == "cache":
            return CommandResult(0, _cmd_cache(args, env))

        engine = IntersectionEngine()
        cache_path = _resolve_cache_path(args, env)
        if args.command in _ENGINE_COMMANDS and cache_path and os.path.exists(cache_path):
            engine.preload(cache_io.read_cache_file(cache_path))

        if args.command == "volume":
            payload = _cmd_volume(args, engine)
        elif args.command == "psi":
            payload = _cmd_psi(args, engine)
        elif args.command == "mixed":
            payload = _cmd_mixed(args, engine)
        elif args.command == "bound":
            payload = _cmd_bound(args, engine)
        elif args.command == "verify":
            payload = _cmd_verify(args)
        else:  # asym
            payload = _cmd_asym(args, engine)

        if args.command in _ENGINE_COMMANDS and cache_path:
            cache_io.write_cache_file(cache_path, engine.snapshot())
        return CommandResult(0, payload)
    except _UsageError as exc:
        return CommandResult(1, f"usage error: {exc}")
    except CacheError as exc:
        return CommandResult(2, f"cache error: {exc}")
    except DomainError as exc:
        return CommandResult(2, f"domain error: {exc}")
    except VerificationError as exc:
        return CommandResult(3, f"verification failed: {exc}")


def main(argv: list[str] | None = None) -> int:
    result = run_command(sys.argv[1:] if argv is None else argv, os.environ)
    stream = sys.stdout if result.exit_code == 0 else sys.stderr
    if result.payload:
        print(result.payload, file=stream)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
