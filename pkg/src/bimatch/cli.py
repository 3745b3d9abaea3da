"""Command-line front end.

Exit status is 0 on success, 1 when an input fails validation and 2 when an
input cannot be read or parsed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import io
from .bl import bl_matching
from .enriched import Span, enriched_matching, k_module
from .errors import BimatchError, ParseError, ValidationError
from .filtration import homology_module, span_from_filtrations, union_filtration
from .ladder import induced_matching, validate
from .persistence import barcode, diagram

EXIT_OK, EXIT_INVALID, EXIT_PARSE = 0, 1, 2


class Report:
    """Collects text lines and a JSON payload; only one of them is printed."""

    def __init__(self):
        self.lines: list[str] = []
        self.data: dict = {}


def _bc_json(bc) -> list[list[int]]:
    return [[k.a, k.b, m] for k, m in bc]


def _matching_json(m) -> list[list[int]]:
    return [[*k, v] for k, v in sorted(m.items(), key=lambda kv: io._pair_order(kv[0]))]


def _cmd_validate(args, rep: Report) -> None:
    for path in args.inputs:
        kind, obj = io.load(path, args.p)
        if kind == "morphism":
            bad = validate(obj)
            if bad is not None:
                raise ValidationError(f"{path}: {bad}", bad.square)
        rep.lines.append(f"{path}: ok ({kind})")
        rep.data.setdefault("ok", []).append({"path": str(path), "kind": kind})


def _cmd_barcode(args, rep: Report) -> None:
    (path,) = args.inputs
    _, v = io.load(path, args.p, expect=["module"])
    bc = barcode(diagram(v))
    rep.lines += io.barcode_lines(bc)
    rep.data["barcode"] = _bc_json(bc)


def _load_morphism(args):
    (path,) = args.inputs
    _, alpha = io.load(path, args.p, expect=["morphism"])
    bad = validate(alpha)
    if bad is not None:
        raise ValidationError(f"{path}: {bad}", bad.square)
    return alpha


def _cmd_match(args, rep: Report) -> None:
    m = induced_matching(_load_morphism(args))
    rep.lines += io.matching_lines(m)
    rep.data["matching"] = _matching_json(m)


def _cmd_bl_match(args, rep: Report) -> None:
    alpha = _load_morphism(args)
    sigma, m = bl_matching(alpha)
    rep.lines += io.matching_lines(m)
    rep.data["matching"] = _matching_json(m)
    if args.sigma:
        src = barcode(diagram(alpha.source))
        rep.lines += io.sigma_lines(sigma, src)
        lookup = sigma.as_dict()
        rep.data["sigma"] = [
            [x.key.a, x.key.b, x.copy] + ([y.key.a, y.key.b, y.copy] if (y := lookup.get(x)) else [])
            for x in src.representation_set()
        ]


def _enriched_report(span: Span, rep: Report) -> None:
    g = enriched_matching(span)
    rep.lines += io.enriched_lines(g)
    rep.data["enriched"] = [{"pair": list(k), "barcode": _bc_json(g[k])} for k in g]


def _cmd_enriched(args, rep: Report) -> None:
    (path,) = args.inputs
    _, span = io.load(path, args.p, expect=["span"])
    _enriched_report(span, rep)


def _cmd_kmodule(args, rep: Report) -> None:
    (path,) = args.inputs
    _, span = io.load(path, args.p, expect=["span"])
    K, _ = k_module(span)
    bc = barcode(diagram(K))
    rep.lines += io.barcode_lines(bc)
    rep.data.update(io.module_to_json(K))
    rep.data["barcode"] = _bc_json(bc)


def _cmd_homology(args, rep: Report) -> None:
    (path,) = args.inputs
    _, flt = io.load(path, expect=["filtration"])
    v = homology_module(flt, args.k, 2 if args.p is None else args.p)
    bc = barcode(diagram(v))
    rep.lines += io.barcode_lines(bc)
    rep.data.update(io.module_to_json(v))
    rep.data["barcode"] = _bc_json(bc)


def _load_triple(args):
    fk, fl, pm = args.inputs
    _, K = io.load(fk, expect=["filtration"])
    _, L = io.load(fl, expect=["filtration"])
    _, mu = io.load(pm, expect=["pmap"])
    return K, L, mu


def _cmd_union(args, rep: Report) -> None:
    K, L, mu = _load_triple(args)
    union, inclK, inclL = union_filtration(K, L, mu)
    rep.lines += [f"[{','.join(map(str, s))}] @ {t}" for s, t in union.simplices.items()]
    rep.lines.append("K: " + " ".join(f"{a}->{b}" for a, b in sorted(inclK.items())))
    rep.lines.append("L: " + " ".join(f"{a}->{b}" for a, b in sorted(inclL.items())))
    rep.data.update(io.filtration_to_json(union))
    rep.data["inclK"] = sorted(map(list, inclK.items()))
    rep.data["inclL"] = sorted(map(list, inclL.items()))


def _cmd_span_match(args, rep: Report) -> None:
    K, L, mu = _load_triple(args)
    span = span_from_filtrations(K, L, mu, args.k, 2 if args.p is None else args.p)
    _enriched_report(span, rep)


_COMMANDS: dict[str, tuple[Callable, str, int | str]] = {
    "validate": (_cmd_validate, "check that input files parse and satisfy their invariants", "+"),
    "barcode": (_cmd_barcode, "interval decomposition of a persistence module (.pmod)", 1),
    "match": (_cmd_match, "basis-independent matching induced by a morphism (.lmod)", 1),
    "bl-match": (_cmd_bl_match, "matching obtained by factoring a morphism through its image (.lmod)", 1),
    "enriched": (_cmd_enriched, "enriched matching of a span V -> W <- U (.span)", 1),
    "kmodule": (_cmd_kmodule, "barcode of the common submodule of a span (.span)", 1),
    "homology": (_cmd_homology, "barcode of H_k of a filtration (.flt)", 1),
    "union": (_cmd_union, "glue two filtrations along a partial map (.flt .flt .pmap)", 3),
    "span-match": (_cmd_span_match, "enriched matching of the span built from two filtrations (.flt .flt .pmap)", 3),
}


def _prime(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _common_flags(top: bool) -> argparse.ArgumentParser:
    # subcommands use SUPPRESS so a flag given before the verb is not reset
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=_prime, default=d(None), help="prime modulus (default 2, or the value stored in the file)")
    common.add_argument("-k", type=int, default=d(0), help="homology degree (default 0)")
    common.add_argument("--json", action="store_true", default=d(False), help="emit one JSON document instead of text lines")
    common.add_argument("-o", "--output", metavar="PATH", default=d(None), help="write the report here instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bimatch", description=__doc__.splitlines()[0], parents=[_common_flags(True)])
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    for verb, (_, help_text, nargs) in _COMMANDS.items():
        sp = sub.add_parser(verb, help=help_text, parents=[_common_flags(False)])
        sp.add_argument("inputs", nargs=nargs, metavar="FILE")
        if verb == "bl-match":
            sp.add_argument("--sigma", action="store_true", help="also list the matched representatives")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.k < 0:
        print("error: homology degree must be non-negative", file=stderr)
        return EXIT_INVALID
    rep = Report()
    try:
        _COMMANDS[args.verb][0](args, rep)
    except ParseError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    except (ValidationError, BimatchError, ValueError) as exc:
        where = getattr(exc, "where", None)
        print(f"error: {exc}" + (f" (at {where})" if where is not None else ""), file=stderr)
        return EXIT_INVALID
    text = json.dumps(rep.data, sort_keys=True) + "\n" if args.json else "".join(line + "\n" for line in rep.lines)
    if args.output:
        Path(args.output).write_text(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
