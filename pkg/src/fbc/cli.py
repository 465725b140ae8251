"""Command-line front end.

Every subcommand reads configuration files in the text format of
``fileformat`` (or its .json mirror), writes deterministic output, and exits
0 on success, 1 on validation or domain failures, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import io
import json
import shlex
import sys
from pathlib import Path

from . import coverings, fileformat, groups, pipeline, quiver, walks as wk
from .core import (ConfigurationError, FbcError, classify, fbc_violations,
                   generate_group, quotient)

DEFAULT_BUDGET = 64
DEFAULT_RADIUS = 6


class CliError(FbcError):
    pass


def _load(path):
    try:
        return fileformat.load_config(path)
    except FileNotFoundError:
        raise CliError("no such file: %s" % path)
    except ConfigurationError as exc:
        raise CliError("invalid configuration %s:\n%s" % (
            path, "\n".join("- %s" % v for v in exc.violations)))
    except fileformat.ParseError as exc:
        raise CliError("cannot parse %s: %s" % (path, exc))


def _summary(cfg):
    kind = classify(cfg).value
    return "%s; %d angles, %d vertices, %d polygons" % (
        kind, len(cfg.angles), len(cfg.vertices), len(cfg.polygons))


def cmd_validate(args, out):
    try:
        raw = fileformat.load_raw(args.config)
    except FileNotFoundError:
        raise CliError("no such file: %s" % args.config)
    except fileformat.ParseError as exc:
        raise CliError("cannot parse %s: %s" % (args.config, exc))
    violations = fbc_violations(raw)
    if violations:
        out.write("invalid: %d violation(s)\n" % len(violations))
        for v in violations:
            out.write("- %s\n" % v)
        return 1
    from .core import validate_fbc
    cfg = validate_fbc(raw)
    out.write("valid: %s\n" % _summary(cfg))
    return 0


def cmd_classify(args, out):
    cfg = _load(args.config)
    out.write(classify(cfg).value + "\n")
    return 0


def _print_quiver(qwr, out):
    out.write("vertices (%d): %s\n" % (len(qwr.vertices), " ".join(qwr.vertices)))
    out.write("arrows (%d):\n" % len(qwr.arrows))
    for a in qwr.arrows:
        out.write("  %s: %s -> %s\n" % (a.name, a.source, a.target))
    out.write("zero relations (%d):\n" % len(qwr.zero_relations))
    for p in qwr.zero_relations:
        out.write("  %s\n" % " ".join(p))
    out.write("binomial relations (%d):\n" % len(qwr.binomial_relations))
    for u, v in qwr.binomial_relations:
        out.write("  %s = %s\n" % (" ".join(u), " ".join(v)))


def cmd_quiver(args, out):
    cfg = _load(args.config)
    _print_quiver(quiver.quiver_of(cfg), out)
    return 0


def cmd_reduce(args, out):
    cfg = _load(args.config)
    reduced, subst = quiver.reduce_presentation(cfg)
    _print_quiver(reduced, out)
    changed = {a: path for a, path in sorted(subst.items()) if path != (a,)}
    if changed:
        out.write("substitutions (%d):\n" % len(changed))
        for a, path in changed.items():
            out.write("  %s -> %s\n" % (a, " ".join(path)))
    return 0


def cmd_pi1(args, out):
    cfg = _load(args.config)
    result, formula, split_pres = pipeline.pi1_bc_both_routes(cfg)
    out.write("presentation: %s\n" % groups.presentation_text(result.presentation))
    inv = groups.abelianize(result.presentation)
    out.write("abelian invariants: %s\n" % inv)
    simplified = groups.tietze_simplify(result.presentation)
    out.write("simplified: %s\n" % groups.presentation_text(simplified))
    n_split = len(result.trace.steps) if result.trace else 0
    inserted = sum(len(s.inserted) for s in result.trace.steps) if result.trace else 0
    out.write("trace: %d polygon(s) split, %d angle(s) inserted; "
              "routes agree on invariants\n" % (n_split, inserted))
    if args.emit_trace:
        Path(args.emit_trace).write_text(
            json.dumps(result.trace.to_jsonable(), indent=2) + "\n",
            encoding="utf-8")
    return 0


def cmd_pi1_quiver(args, out):
    cfg = _load(args.config)
    if args.reduced:
        qwr, _ = quiver.reduce_presentation(cfg)
    else:
        qwr = quiver.quiver_of(cfg)
    base = args.base or qwr.vertices[0]
    pres = quiver.pi1_quiver(qwr, qwr.binomial_relations, base)
    out.write("presentation: %s\n" % groups.presentation_text(pres))
    out.write("abelian invariants: %s\n" % groups.abelianize(pres))
    return 0


def _load_map(path):
    try:
        maps = fileformat.load_maps(path)
    except FileNotFoundError:
        raise CliError("no such file: %s" % path)
    except fileformat.ParseError as exc:
        raise CliError("cannot parse %s: %s" % (path, exc))
    return maps


def cmd_cover_check(args, out):
    dom = _load(args.dom)
    cod = _load(args.cod)
    mapping = _load_map(args.map)[0]
    violations = coverings.morphism_violations(dom, cod, mapping)
    if violations:
        out.write("morphism: FAILED\n")
        for v in violations:
            out.write("- %s\n" % v)
        return 1
    out.write("morphism: ok\n")
    violations = coverings.covering_violations(dom, cod, mapping)
    if violations:
        out.write("covering: FAILED\n")
        for v in violations:
            out.write("- %s\n" % v)
        return 1
    out.write("covering: ok (%d angles over %d)\n"
              % (len(dom.angles), len(cod.angles)))
    return 0


def cmd_lift(args, out):
    dom = _load(args.dom)
    cod = _load(args.cod)
    mapping = _load_map(args.map)[0]
    try:
        cov = coverings.check_covering(dom, cod, mapping)
    except coverings.MorphismError as exc:
        raise CliError("map is not a covering: %s" % exc)
    w = wk.parse_walk(args.walk)
    if not wk.is_valid_walk(cod, w):
        raise CliError("walk is not valid in the codomain")
    lifted = coverings.lift_walk(cov, w, args.start)
    out.write(lifted.text() + "\n")
    return 0


def cmd_deck(args, out):
    dom = _load(args.dom)
    cod = _load(args.cod)
    mapping = _load_map(args.map)[0]
    try:
        cov = coverings.check_covering(dom, cod, mapping)
    except coverings.MorphismError as exc:
        raise CliError("map is not a covering: %s" % exc)
    group = coverings.deck_group(cov)
    base = dom.angles[0]
    fiber = [x for x in dom.angles if mapping[x] == mapping[base]]
    regular = {phi[base] for phi in group} == set(fiber)
    out.write("deck group order %d (fiber size %d): %s\n"
              % (len(group), len(fiber), "regular" if regular else "not regular"))
    for i, phi in enumerate(group):
        out.write("phi%d: %s" % (i, fileformat.map_text(phi, order=dom.angles)))
    return 0


def cmd_quotient(args, out):
    cfg = _load(args.config)
    gens = _load_map(args.map)
    group = generate_group(cfg, gens)
    q, proj = quotient(cfg, group)
    out.write("# group order %d\n" % len(group))
    out.write(fileformat.config_text(q))
    out.write("# projection\n")
    out.write(fileformat.map_text(proj, order=cfg.angles))
    return 0


def cmd_normalize(args, out):
    cfg = _load(args.config)
    if not cfg.is_ms():
        raise CliError("normal forms need all-singleton layers")
    w = wk.parse_walk(args.walk)
    if not wk.is_valid_walk(cfg, w):
        raise CliError("walk is not valid in the configuration")
    nf = wk.ms_normal_form(cfg, w)
    out.write("special: %s; turns: %d\n"
              % (nf.special.to_walk(cfg).text(), nf.turns))
    return 0


def cmd_ucover(args, out):
    cfg = _load(args.config)
    base = args.base or cfg.angles[0]
    try:
        tc = coverings.universal_cover_truncated(cfg, base, args.radius)
    except wk.HomotopyUndecided as exc:
        raise CliError(str(exc))
    depths = {}
    for a in tc.angles:
        depths[tc.depth[a]] = depths.get(tc.depth[a], 0) + 1
    out.write("angles: %d (interior %d, boundary %d)\n"
              % (len(tc.angles), len(tc.interior), len(tc.boundary)))
    out.write("depth counts: %s\n"
              % " ".join("%d:%d" % (d, depths[d]) for d in sorted(depths)))
    violations = coverings.truncated_covering_violations(tc)
    out.write("projection check (interior): %s\n"
              % ("ok" if not violations else "FAILED"))
    for v in violations:
        out.write("- %s\n" % v)
    return 1 if violations else 0


def cmd_emit_dot(args, out):
    cfg = _load(args.config)
    if args.reduced:
        qwr, _ = quiver.reduce_presentation(cfg)
    else:
        qwr = quiver.quiver_of(cfg)
    out.write(quiver.emit_dot(qwr))
    return 0


def corpus_dir():
    return Path(__file__).resolve().parent / "corpus"


def cmd_corpus(args, out):
    root = Path(args.dir) if args.dir else corpus_dir()
    cases_file = root / "cases.txt"
    if not cases_file.exists():
        raise CliError("no corpus cases file at %s" % cases_file)
    failures = 0
    total = 0
    for line in cases_file.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        name, _, command = line.partition("|")
        name = name.strip()
        argv = shlex.split(command)
        expected_file = root / "expected" / (name + ".out")
        total += 1
        buffer = io.StringIO()
        try:
            code = _dispatch(argv, buffer, cwd=root)
        except CliError as exc:
            buffer.write("error: %s\n" % exc)
            code = 1
        got = "exit %d\n" % code + buffer.getvalue()
        if not expected_file.exists():
            out.write("FAIL %s (missing golden file)\n" % name)
            failures += 1
            continue
        want = expected_file.read_text(encoding="utf-8")
        if got == want:
            out.write("PASS %s\n" % name)
        else:
            out.write("FAIL %s\n" % name)
            failures += 1
    out.write("%d/%d cases passed\n" % (total - failures, total))
    return 1 if failures else 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fbc",
        description="fractional Brauer configurations: validation, walks, "
                    "coverings, and fundamental groups")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the defining axioms")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="report general / type S / type MS")
    p.add_argument("config")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("quiver", help="print the quiver with relations")
    p.add_argument("config")
    p.set_defaults(func=cmd_quiver)

    p = sub.add_parser("reduce", help="print the reduced quiver with relations")
    p.add_argument("config")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("pi1", help="fundamental group of a Brauer configuration")
    p.add_argument("config")
    p.add_argument("--emit-trace", metavar="FILE",
                   help="write the splitting trace as JSON")
    p.set_defaults(func=cmd_pi1)

    p = sub.add_parser("pi1-quiver", help="fundamental group via the quiver")
    p.add_argument("config")
    p.add_argument("--base", help="base vertex (default: first)")
    p.add_argument("--reduced", action="store_true",
                   help="use the reduced presentation")
    p.set_defaults(func=cmd_pi1_quiver)

    p = sub.add_parser("cover-check", help="verify a morphism / covering")
    p.add_argument("dom")
    p.add_argument("cod")
    p.add_argument("map")
    p.set_defaults(func=cmd_cover_check)

    p = sub.add_parser("lift", help="lift a codomain walk through a covering")
    p.add_argument("dom")
    p.add_argument("cod")
    p.add_argument("map")
    p.add_argument("--walk", required=True)
    p.add_argument("--start", required=True)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("deck", help="deck transformations of a covering")
    p.add_argument("dom")
    p.add_argument("cod")
    p.add_argument("map")
    p.set_defaults(func=cmd_deck)

    p = sub.add_parser("quotient", help="quotient by an automorphism group")
    p.add_argument("config")
    p.add_argument("map", help="map file; sections generate the group")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("normalize", help="exact normal form of a walk")
    p.add_argument("config")
    p.add_argument("--walk", required=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("ucover", help="truncated universal cover summary")
    p.add_argument("config")
    p.add_argument("--base")
    p.add_argument("--radius", type=int, default=DEFAULT_RADIUS)
    p.set_defaults(func=cmd_ucover)

    p = sub.add_parser("emit-dot", help="DOT graph of the quiver")
    p.add_argument("config")
    p.add_argument("--reduced", action="store_true")
    p.set_defaults(func=cmd_emit_dot)

    p = sub.add_parser("corpus", help="run the golden regression corpus")
    p.add_argument("dir", nargs="?")
    p.set_defaults(func=cmd_corpus)
    return parser


def _dispatch(argv, out, cwd=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if cwd is not None:
        for attr in ("config", "dom", "cod", "map"):
            if hasattr(args, attr):
                value = getattr(args, attr)
                if value is not None and not Path(value).is_absolute():
                    setattr(args, attr, str(cwd / value))
    return args.func(args, out)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        code = _dispatch(argv, sys.stdout)
    except CliError as exc:
        sys.stdout.write("error: %s\n" % exc)
        code = 1
    except FbcError as exc:
        sys.stdout.write("error: %s\n" % exc)
        code = 1
    return code


if __name__ == "__main__":
    sys.exit(main())
