"""JSON input formats and the fixed text renderings used by the command line.

Formats (all JSON objects):

* persistence module: ``{"p": 2, "n": 3, "dims": [...], "maps": [...]}``
* morphism: ``{"p": 2, "V": <module>, "U": <module>, "alpha": [...]}``
* span: ``{"p": 2, "V": <module>, "W": <module>, "U": <module>, "alpha": [...], "beta": [...]}``
* filtration: ``{"n": 3, "simplices": [{"v": [0], "t": 1}, ...]}``
* partial map: ``{"pairs": [[src, dst], ...]}``

Matrices are row-major nested lists.  ``"p"`` and ``"n"`` are optional inside
modules; when present they are checked.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Mapping

from .bl import SetMatching
from .enriched import EnrichedMatching, Span
from .errors import ParseError, ValidationError
from .filtration import PartialSimplicialMap, SimplicialFiltration
from .ladder import LadderMorphism, Matching
from .linalg import PrimeModulus
from .persistence import Barcode, IntervalKey, PersistenceModule, canonical_order

__all__ = [
    "read_json",
    "detect_kind",
    "module_from_json",
    "module_to_json",
    "morphism_from_json",
    "span_from_json",
    "filtration_from_json",
    "filtration_to_json",
    "pmap_from_json",
    "load",
    "barcode_lines",
    "matching_lines",
    "sigma_lines",
    "enriched_lines",
]


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ParseError(f"{path}: no such file") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}", (exc.lineno, exc.colno)) from None


def _field(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected a JSON object", where)
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}", f"{where}.{key}")
    return obj[key]


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{where}: expected an integer, got {x!r}", where)
    return x


def _list(x: Any, where: str) -> list:
    if not isinstance(x, list):
        raise ParseError(f"{where}: expected a list, got {type(x).__name__}", where)
    return x


def _resolve_p(obj: Any, p: int | None, where: str) -> int:
    file_p = obj.get("p") if isinstance(obj, dict) else None
    if file_p is not None:
        file_p = _int(file_p, f"{where}.p")
        if p is not None and p != file_p:
            raise ValidationError(f"{where}: file declares p={file_p} but p={p} was requested", f"{where}.p")
        return file_p
    return 2 if p is None else p


def _field_of(p: int, where: str) -> PrimeModulus:
    try:
        return PrimeModulus(p)
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}", f"{where}.p") from None


def _matrix_list(x: Any, where: str) -> list:
    for i, m in enumerate(_list(x, where)):
        for j, row in enumerate(_list(m, f"{where}[{i}]")):
            for k, e in enumerate(_list(row, f"{where}[{i}][{j}]")):
                _int(e, f"{where}[{i}][{j}][{k}]")
    return x


def module_from_json(obj: Any, p: int | None = None, where: str = "module") -> PersistenceModule:
    p = _resolve_p(obj, p, where)
    dims = [_int(d, f"{where}.dims[{i}]") for i, d in enumerate(_list(_field(obj, "dims", where), f"{where}.dims"))]
    if "n" in obj and _int(obj["n"], f"{where}.n") != len(dims):
        raise ValidationError(f"{where}: n={obj['n']} but {len(dims)} dimensions given", f"{where}.n")
    maps = _matrix_list(obj.get("maps", []), f"{where}.maps")
    return PersistenceModule.build(dims, maps, _field_of(p, where))


def module_to_json(v: PersistenceModule) -> dict:
    return {"p": v.p, "n": v.n, "dims": list(v.dims), "maps": [m.tolist() for m in v.maps]}


def morphism_from_json(obj: Any, p: int | None = None, where: str = "morphism") -> LadderMorphism:
    p = _resolve_p(obj, p, where)
    V = module_from_json(_field(obj, "V", where), p, f"{where}.V")
    U = module_from_json(_field(obj, "U", where), p, f"{where}.U")
    alpha = _matrix_list(_field(obj, "alpha", where), f"{where}.alpha")
    return LadderMorphism.build(V, U, alpha)


def span_from_json(obj: Any, p: int | None = None, where: str = "span") -> Span:
    p = _resolve_p(obj, p, where)
    V = module_from_json(_field(obj, "V", where), p, f"{where}.V")
    W = module_from_json(_field(obj, "W", where), p, f"{where}.W")
    U = module_from_json(_field(obj, "U", where), p, f"{where}.U")
    alpha = LadderMorphism.build(V, W, _matrix_list(_field(obj, "alpha", where), f"{where}.alpha"))
    beta = LadderMorphism.build(U, W, _matrix_list(_field(obj, "beta", where), f"{where}.beta"))
    return Span(alpha, beta)


def filtration_from_json(obj: Any, where: str = "filtration") -> SimplicialFiltration:
    n = _int(_field(obj, "n", where), f"{where}.n")
    items = []
    for i, s in enumerate(_list(_field(obj, "simplices", where), f"{where}.simplices")):
        w = f"{where}.simplices[{i}]"
        verts = [_int(v, f"{w}.v") for v in _list(_field(s, "v", w), f"{w}.v")]
        items.append((verts, _int(_field(s, "t", w), f"{w}.t")))
    return SimplicialFiltration.from_list(n, items)


def filtration_to_json(f: SimplicialFiltration) -> dict:
    return {"n": f.n, "simplices": [{"v": list(s), "t": t} for s, t in f.simplices.items()]}


def pmap_from_json(obj: Any, where: str = "pmap") -> PartialSimplicialMap:
    pairs = []
    for i, pr in enumerate(_list(_field(obj, "pairs", where), f"{where}.pairs")):
        pr = _list(pr, f"{where}.pairs[{i}]")
        if len(pr) != 2:
            raise ParseError(f"{where}.pairs[{i}]: expected [source, target]", f"{where}.pairs[{i}]")
        pairs.append((_int(pr[0], f"{where}.pairs[{i}][0]"), _int(pr[1], f"{where}.pairs[{i}][1]")))
    return PartialSimplicialMap(tuple(pairs))


_SUFFIX_KINDS = {".pmod": "module", ".lmod": "morphism", ".span": "span", ".flt": "filtration", ".pmap": "pmap"}


def detect_kind(path: str | Path, obj: Any) -> str:
    """File kind from its suffix, or failing that from its top-level keys."""
    kind = _SUFFIX_KINDS.get(Path(path).suffix)
    if kind:
        return kind
    if isinstance(obj, dict):
        if "beta" in obj:
            return "span"
        if "alpha" in obj:
            return "morphism"
        if "simplices" in obj:
            return "filtration"
        if "pairs" in obj:
            return "pmap"
        if "dims" in obj:
            return "module"
    raise ParseError(f"{path}: cannot tell what kind of input this is", str(path))


def load(path: str | Path, p: int | None = None, expect: Iterable[str] | None = None):
    """Read, parse and validate a file; returns ``(kind, object)``."""
    obj = read_json(path)
    kind = detect_kind(path, obj)
    if expect is not None and kind not in set(expect):
        raise ParseError(f"{path}: expected {' or '.join(expect)}, got {kind}", str(path))
    name = Path(path).name
    if kind == "module":
        return kind, module_from_json(obj, p, name)
    if kind == "morphism":
        return kind, morphism_from_json(obj, p, name)
    if kind == "span":
        return kind, span_from_json(obj, p, name)
    if kind == "filtration":
        return kind, filtration_from_json(obj, name)
    return kind, pmap_from_json(obj, name)


# -- text renderings ---------------------------------------------------------


def _key(k: tuple[int, int]) -> str:
    return f"[{k[0]},{k[1]}]"


def barcode_lines(bc: Barcode) -> list[str]:
    return [f"{_key(k)} x {m}" for k, m in bc]


def _pair_order(k: tuple[int, int, int, int]):
    return canonical_order(IntervalKey(k[0], k[1])) + canonical_order(IntervalKey(k[2], k[3]))


def matching_lines(m: Matching | Mapping[tuple[int, int, int, int], int]) -> list[str]:
    return [
        f"{_key(k[:2])} -> {_key(k[2:])} x {v}" for k, v in sorted(m.items(), key=lambda kv: _pair_order(kv[0])) if v
    ]


def sigma_lines(sigma: SetMatching, source: Barcode) -> list[str]:
    """One line per source element, ``none`` for unmatched ones."""
    lookup = sigma.as_dict()
    out = []
    for x in source.representation_set():
        y = lookup.get(x)
        out.append(f"{x} -> {y if y is not None else 'none'}")
    return out


def enriched_lines(g: EnrichedMatching) -> list[str]:
    return [f"{_key(k[:2])} ~ {_key(k[2:])} : {g[k]}" for k in g]
