"""The line-oriented configuration file format and its JSON mirror.

A configuration file has sections introduced by ``name:``; a section's
payload runs until the next section header.  ``#`` starts a comment.

    angles: 1 2 3 1' 2' 3'
    g: (1 2 3) (1' 2' 3')
    polygons: (1 1') (2 2') (3 3')
    layers: (1) (2) (3) (1') (2') (3')   # optional, defaults to singletons
    degree: 1=2 1'=2

Angle ids are any whitespace-free tokens not using the reserved characters
``( ) = # :`` or ``,``.  The degree section lists one representative per
orbit (extra entries must agree).  Files ending in .json are read as a JSON
object with the same keys: angles, g, polygons, layers, degree.

Map files reuse the section syntax with one or more ``map:`` sections of
``from=to`` pairs.
"""

from __future__ import annotations

import json
import re

from .core import FbcError, RawConfig, validate_fbc

_RESERVED = set("()=#:,")
_SECTION = re.compile(r"^([A-Za-z_][A-Za-z0-9_-]*):(.*)$")


class ParseError(FbcError):
    def __init__(self, message, line=None):
        self.line = line
        where = " (line %d)" % line if line is not None else ""
        super().__init__(message + where)


def _check_token(tok, line):
    if not tok or any(c in _RESERVED for c in tok):
        raise ParseError("bad token %r" % tok, line)
    return tok


def _sections(text):
    out = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _SECTION.match(line.strip())
        if m:
            current = (m.group(1), lineno, [m.group(2)])
            out.append(current)
        elif current is None:
            raise ParseError("content before the first section header", lineno)
        else:
            current[2].append(line)
    return [(name, lineno, " ".join(chunks)) for name, lineno, chunks in out]


def _parse_groups(payload, lineno):
    """Parenthesized token groups: (a b) (c) ..."""
    groups = []
    depth = 0
    current = []
    token = ""

    def flush_token():
        nonlocal token
        if token:
            current.append(_check_token(token, lineno))
            token = ""

    for c in payload:
        if c == "(":
            if depth:
                raise ParseError("nested group", lineno)
            depth = 1
        elif c == ")":
            flush_token()
            if not depth:
                raise ParseError("unbalanced ')'", lineno)
            groups.append(tuple(current))
            current = []
            depth = 0
        elif c.isspace():
            flush_token()
        else:
            token += c
    flush_token()
    if depth:
        raise ParseError("unbalanced '('", lineno)
    if current:
        raise ParseError("tokens outside a group: %s" % " ".join(current), lineno)
    return tuple(groups)


def _parse_pairs(payload, lineno):
    pairs = []
    for tok in payload.split():
        if "=" not in tok:
            raise ParseError("expected key=value, got %r" % tok, lineno)
        left, right = tok.split("=", 1)
        pairs.append((_check_token(left, lineno), right))
    return pairs


def parse_config_text(text):
    sections = {}
    for name, lineno, payload in _sections(text):
        if name in sections:
            raise ParseError("duplicate section %r" % name, lineno)
        sections[name] = (lineno, payload)
    for required in ("angles", "g", "polygons", "degree"):
        if required not in sections:
            raise ParseError("missing section %r" % required)
    lineno, payload = sections["angles"]
    angles = tuple(_check_token(t, lineno) for t in payload.split())
    lineno, payload = sections["g"]
    g_cycles = _parse_groups(payload, lineno)
    lineno, payload = sections["polygons"]
    polygons = _parse_groups(payload, lineno)
    layers = None
    if "layers" in sections:
        lineno, payload = sections["layers"]
        layers = _parse_groups(payload, lineno)
    lineno, payload = sections["degree"]
    degree = []
    for key, value in _parse_pairs(payload, lineno):
        try:
            degree.append((key, int(value)))
        except ValueError:
            raise ParseError("degree value must be an integer: %r" % value, lineno)
    extra = set(sections) - {"angles", "g", "polygons", "layers", "degree"}
    if extra:
        raise ParseError("unknown section %r" % sorted(extra)[0])
    return RawConfig(angles=angles, g_cycles=g_cycles, polygons=polygons,
                     layers=layers, degree=tuple(degree))


def parse_config_json(text):
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ParseError("top-level JSON value must be an object")
    for required in ("angles", "g", "polygons", "degree"):
        if required not in data:
            raise ParseError("missing key %r" % required)
    degree = data["degree"]
    if isinstance(degree, dict):
        degree = tuple(sorted(degree.items()))
    else:
        degree = tuple((e, d) for e, d in degree)
    return RawConfig(
        angles=tuple(data["angles"]),
        g_cycles=tuple(tuple(c) for c in data["g"]),
        polygons=tuple(tuple(b) for b in data["polygons"]),
        layers=(tuple(tuple(b) for b in data["layers"])
                if data.get("layers") is not None else None),
        degree=degree)


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        raw = parse_config_json(text)
    else:
        raw = parse_config_text(text)
    return validate_fbc(raw)


def load_raw(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return parse_config_json(text)
    return parse_config_text(text)


def config_text(cfg):
    """Canonical text form of a configuration."""
    raw = cfg.to_raw()
    lines = ["angles: " + " ".join(raw.angles)]
    lines.append("g: " + " ".join("(%s)" % " ".join(c) for c in raw.g_cycles))
    lines.append("polygons: " + " ".join("(%s)" % " ".join(b) for b in raw.polygons))
    lines.append("layers: " + " ".join("(%s)" % " ".join(b) for b in raw.layers))
    lines.append("degree: " + " ".join("%s=%d" % p for p in raw.degree))
    return "\n".join(lines) + "\n"


def parse_maps_text(text):
    """All ``map:`` sections of a map file, each a dict."""
    maps = []
    for name, lineno, payload in _sections(text):
        if name != "map":
            raise ParseError("unknown section %r in a map file" % name, lineno)
        mapping = {}
        for left, right in _parse_pairs(payload, lineno):
            if left in mapping:
                raise ParseError("angle %r mapped twice" % left, lineno)
            mapping[left] = _check_token(right, lineno)
        maps.append(mapping)
    if not maps:
        raise ParseError("map file has no map: section")
    return maps


def load_maps(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_maps_text(fh.read())


def map_text(mapping, order=None):
    keys = list(order) if order is not None else sorted(mapping)
    return "map: " + " ".join("%s=%s" % (k, mapping[k]) for k in keys) + "\n"
