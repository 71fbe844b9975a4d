"""Persistent memo cache: a versioned, human-diffable JSON file.

Keys follow the grammar

    g=<int>;psi=<comma-separated ints, descending>;kappa=<j:m pairs, ascending j>

with empty psi/kappa segments allowed, and values are rationals rendered as
"<int>/<positive int>" in lowest terms or a bare integer.  Loading validates
the grammar strictly (canonical order, reduced fractions) and round-trips
bit-exactly.  Files are written atomically (temp file + rename), so
concurrent writers sharing a path cannot corrupt it; the last writer wins.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction
from typing import Mapping

from .errors import CacheError, DomainError
from .intersect import IntersectionKey

CACHE_VERSION = 1

_INT = r"(?:0|[1-9][0-9]*)"
_KEY_RE = re.compile(rf"^g=({_INT});psi=((?:{_INT})(?:,{_INT})*)?;kappa=((?:{_INT}:{_INT})(?:,{_INT}:{_INT})*)?$")
_VALUE_RE = re.compile(rf"^(-?{_INT})(?:/({_INT}))?$")


def format_key(key: IntersectionKey) -> str:
    psi = ",".join(str(a) for a in key.psi)
    kappa = ",".join(f"{j}:{m}" for j, m in key.kappa)
    return f"g={key.point.g};psi={psi};kappa={kappa}"


def parse_key(text: str) -> IntersectionKey:
    match = _KEY_RE.match(text)
    if match is None:
        raise CacheError(f"malformed cache key {text!r}")
    g = int(match.group(1))
    psi = tuple(int(a) for a in match.group(2).split(",")) if match.group(2) else ()
    if any(a < b for a, b in zip(psi, psi[1:])):
        raise CacheError(f"cache key {text!r}: psi exponents must be descending")
    kappa = []
    for pair in (match.group(3) or "").split(","):
        if not pair:
            continue
        j, m = pair.split(":")
        kappa.append((int(j), int(m)))
    if any(a[0] >= b[0] for a, b in zip(kappa, kappa[1:])):
        raise CacheError(f"cache key {text!r}: kappa indices must be strictly ascending")
    if any(m < 1 for _, m in kappa):
        raise CacheError(f"cache key {text!r}: kappa multiplicities must be >= 1")
    try:
        key = IntersectionKey.make(g, len(psi), psi, kappa)
    except DomainError as exc:
        raise CacheError(f"cache key {text!r}: {exc}") from exc
    return key


def format_value(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_value(text: str) -> Fraction:
    match = _VALUE_RE.match(text)
    if match is None:
        raise CacheError(f"malformed cache value {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) else 1
    if match.group(2) is not None and den == 1:
        raise CacheError(f"malformed cache value {text!r}: integers are written without '/1'")
    if den == 0:
        raise CacheError(f"malformed cache value {text!r}: zero denominator")
    value = Fraction(num, den)
    if value.numerator != num or value.denominator != den:
        raise CacheError(f"malformed cache value {text!r}: not in lowest terms")
    if format_value(value) != text:
        raise CacheError(f"malformed cache value {text!r}: not in canonical form")
    return value


def dump_cache(entries: Mapping[IntersectionKey, Fraction]) -> str:
    payload = {
        "version": CACHE_VERSION,
        "entries": {format_key(k): format_value(v) for k, v in entries.items()},
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def load_cache(text: str) -> dict[IntersectionKey, Fraction]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CacheError(f"cache file is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise CacheError("cache file must hold a JSON object")
    version = payload.get("version")
    if version != CACHE_VERSION:
        raise CacheError(f"unsupported cache version {version!r}, expected {CACHE_VERSION}")
    raw = payload.get("entries")
    if not isinstance(raw, dict):
        raise CacheError("cache file is missing its 'entries' object")
    entries: dict[IntersectionKey, Fraction] = {}
    for key_text, value_text in raw.items():
        if not isinstance(value_text, str):
            raise CacheError(f"cache value for {key_text!r} must be a string")
        key = parse_key(key_text)
        if format_key(key) != key_text:
            raise CacheError(f"cache key {key_text!r} is not in canonical form")
        entries[key] = parse_value(value_text)
    return entries


def read_cache_file(path: str) -> dict[IntersectionKey, Fraction]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise CacheError(f"cannot read cache file {path}: {exc}") from exc
    return load_cache(text)


def write_cache_file(path: str, entries: Mapping[IntersectionKey, Fraction]) -> None:
    text = dump_cache(entries)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(prefix=".wpvol-cache-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise
