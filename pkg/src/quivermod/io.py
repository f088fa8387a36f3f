"""JSON, CSV and Graphviz formats for quiver pairs and enumeration tables."""
from __future__ import annotations

import base64
import csv
import io
import json
from importlib import resources
from pathlib import Path

from .errors import QuiverError
from .quiver import Arrow, Quiver, QuiverPair, canonical_key, check_weight

PAIR_FIELDS = ("vertices", "arrows", "alpha", "theta")
ARROW_FIELDS = ("id", "source", "target")
CSV_COLUMNS = ("canonical_key", "vertices", "arrows", "alpha", "d", "minimal_verdict")


class FormatError(QuiverError):
    """Malformed input file."""


def _expect(cond, where, msg):
    if not cond:
        raise FormatError(f"{where}: {msg}")


def _int_map(obj, where) -> dict:
    _expect(isinstance(obj, dict), where, "expected an object of vertex -> integer")
    for k, v in obj.items():
        _expect(isinstance(v, int) and not isinstance(v, bool), f"{where}.{k}",
                f"expected an integer, got {v!r}")
    return dict(obj)


def pair_from_dict(data, source="input"):
    """Validate a decoded JSON object and build ``(pair, theta or None)``."""
    _expect(isinstance(data, dict), source, "top level must be a JSON object")
    unknown = [k for k in data if k not in PAIR_FIELDS]
    _expect(not unknown, source, f"unknown field(s) {unknown}")
    for k in ("vertices", "arrows", "alpha"):
        _expect(k in data, source, f"missing field {k!r}")
    verts = data["vertices"]
    _expect(isinstance(verts, list) and all(isinstance(v, str) for v in verts),
            f"{source}.vertices", "expected a list of strings")
    _expect(isinstance(data["arrows"], list), f"{source}.arrows", "expected a list")
    arrows = []
    for i, a in enumerate(data["arrows"]):
        where = f"{source}.arrows[{i}]"
        _expect(isinstance(a, dict), where, "expected an object")
        bad = sorted(set(a) ^ set(ARROW_FIELDS))
        _expect(not bad, where, f"fields must be exactly {list(ARROW_FIELDS)} (offending: {bad})")
        for k in ARROW_FIELDS:
            _expect(isinstance(a[k], str), f"{where}.{k}", "expected a string")
        arrows.append(Arrow(a["id"], a["source"], a["target"]))
    alpha = _int_map(data["alpha"], f"{source}.alpha")
    theta = _int_map(data["theta"], f"{source}.theta") if "theta" in data else None
    try:
        pair = QuiverPair(Quiver(tuple(verts), tuple(arrows)), alpha)
        if theta is not None:
            theta = check_weight(pair.quiver, theta)
    except QuiverError as e:
        raise FormatError(f"{source}: {e}") from None
    return pair, theta


def loads_pair(text: str, source="input"):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: "
                          f"{e.msg}") from None
    return pair_from_dict(data, source)


def load_pair(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FormatError(f"{path}: cannot read file ({e.strerror})") from None
    return loads_pair(text, str(path))


def pair_to_dict(pair: QuiverPair, theta=None) -> dict:
    d = {
        "vertices": list(pair.vertices),
        "arrows": [{"id": a.id, "source": a.source, "target": a.target}
                   for a in pair.quiver.arrows],
        "alpha": {v: pair.alpha[v] for v in pair.vertices},
    }
    if theta is not None:
        d["theta"] = {v: theta[v] for v in pair.vertices}
    return d


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def dumps_pair(pair: QuiverPair, theta=None) -> str:
    return dumps(pair_to_dict(pair, theta))


def fixture_names() -> list:
    root = resources.files("quivermod") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_path(name: str) -> Path:
    """Path of a bundled example file, e.g. ``fixture_path("fig1")``."""
    p = resources.files("quivermod") / "fixtures" / f"{name}.json"
    return Path(str(p))


def load_fixture(name: str):
    return load_pair(fixture_path(name))


def emit_dot(pair: QuiverPair, theta=None) -> str:
    """Graphviz digraph with vertex labels ``name:alpha[/theta]``."""
    q = json.dumps
    lines = ["digraph {"]
    for v in pair.vertices:
        label = f"{v}:{pair.alpha[v]}" + (f"/{theta[v]}" if theta is not None else "")
        lines.append(f"  {q(v)} [label={q(label)}];")
    for a in pair.quiver.arrows:
        lines.append(f"  {q(a.source)} -> {q(a.target)} [label={q(a.id)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- CSV tables --------------------------------------------------------------

def encode_key(key: bytes) -> str:
    return base64.b64encode(key).decode("ascii")


def write_table(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\r\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        p = r.pair
        w.writerow([
            encode_key(r.canonical_key),
            ";".join(p.vertices),
            ";".join(f"{a.id}:{a.source}>{a.target}" for a in p.quiver.arrows),
            ";".join(str(x) for x in p.vector),
            r.d,
            r.minimal_verdict,
        ])


def table_to_string(rows) -> str:
    buf = io.StringIO()
    write_table(rows, buf)
    return buf.getvalue()


def _parse_arrow(text, where):
    ident, sep, rest = text.partition(":")
    s, sep2, t = rest.partition(">")
    _expect(sep and sep2 and ident and s and t, where, f"bad arrow {text!r}; expected id:s>t")
    return Arrow(ident, s, t)


def read_table(fh, source="table") -> list:
    from .search import ClassificationRow

    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"{source}: empty file") from None
    _expect(tuple(header) == CSV_COLUMNS, f"{source}:1", f"header must be {list(CSV_COLUMNS)}")
    rows = []
    for lineno, rec in enumerate(reader, 2):
        where = f"{source}:{lineno}"
        if not rec:
            continue
        _expect(len(rec) == len(CSV_COLUMNS), where, f"expected {len(CSV_COLUMNS)} fields")
        key_b64, verts, arrows, alpha, d, verdict = rec
        vs = tuple(verts.split(";")) if verts else ()
        arr = tuple(_parse_arrow(x, where) for x in arrows.split(";")) if arrows else ()
        try:
            vals = [int(x) for x in alpha.split(";")] if alpha else []
            d = int(d)
            key = base64.b64decode(key_b64, validate=True)
        except ValueError as e:
            raise FormatError(f"{where}: {e}") from None
        _expect(len(vals) == len(vs), where, "alpha length differs from vertex count")
        try:
            pair = QuiverPair(Quiver(vs, arr), dict(zip(vs, vals)))
        except QuiverError as e:
            raise FormatError(f"{where}: {e}") from None
        _expect(canonical_key(pair) == key, f"{where} canonical_key", "does not match the pair")
        rows.append(ClassificationRow(key, pair, d, verdict))
    return rows


def load_table(path) -> list:
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            return read_table(fh, str(path))
    except OSError as e:
        raise FormatError(f"{path}: cannot read file ({e.strerror})") from None
