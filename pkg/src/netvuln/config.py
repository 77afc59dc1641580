"""JSON model configs: direct ``model`` (A, b) or Taylor ``network`` form."""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .netmodel import LinearModel, ModelError, SocialNetworkSpec, build_taylor_model
from .ratfun import to_fraction

EXAMPLE_PREFIX = "example:"


class ConfigError(ValueError):
    pass


def fraction_to_str(x: Fraction) -> str:
    """Exact decimal string when the expansion terminates, else ``p/q``."""
    x = Fraction(x)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    scaled = x * 10**places
    assert scaled.denominator == 1
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    sign = "-" if x < 0 else ""
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _num(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got a boolean")
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{where}: cannot parse {value!r} as a number ({exc})") from None


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    if key not in obj:
        raise ConfigError(f"{where}: missing field {key!r}")
    return obj[key]


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise ConfigError(f"{where}: expected a list")
    return value


def _exposed(raw, labels: tuple[str, ...]) -> tuple[int, ...] | None:
    if raw is None:
        return None
    out = []
    for k, item in enumerate(_list(raw, "exposed")):
        if isinstance(item, int) and not isinstance(item, bool):
            if not 1 <= item <= len(labels):
                raise ConfigError(f"exposed[{k}]: index {item} out of range 1..{len(labels)}")
            out.append(item - 1)
        elif item in labels:
            out.append(labels.index(item))
        else:
            raise ConfigError(f"exposed[{k}]: unknown state {item!r}")
    return tuple(out)


def model_from_dict(doc: dict) -> LinearModel:
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected a JSON object")
    has_model, has_net = "model" in doc, "network" in doc
    if has_model == has_net:
        raise ConfigError("top level: exactly one of 'model' or 'network' is required")
    try:
        if has_model:
            m = doc["model"]
            A_raw = _list(_require(m, "A", "model"), "model.A")
            A = [
                [_num(x, f"model.A[{i}][{j}]") for j, x in enumerate(_list(row, f"model.A[{i}]"))]
                for i, row in enumerate(A_raw)
            ]
            b = [_num(x, f"model.b[{i}]") for i, x in enumerate(_list(_require(m, "b", "model"), "model.b"))]
            labels = m.get("labels")
            if labels is not None:
                labels = tuple(str(x) for x in _list(labels, "model.labels"))
            if labels is None:
                labels = tuple(f"x{k + 1}" for k in range(len(A)))
            return LinearModel(tuple(map(tuple, A)), tuple(b), _exposed(doc.get("exposed"), labels), labels)
        net = doc["network"]
        agents = [str(a) for a in _list(_require(net, "agents", "network"), "network.agents")]
        edges = []
        for k, e in enumerate(_list(net.get("edges", []), "network.edges")):
            where = f"network.edges[{k}]"
            edges.append((_require(e, "source", where), _require(e, "target", where),
                          _num(_require(e, "weight", where), f"{where}.weight")))
        sources = []
        for k, s in enumerate(_list(net.get("sources", []), "network.sources")):
            where = f"network.sources[{k}]"
            sources.append((_require(s, "name", where), _num(_require(s, "sentiment", where), f"{where}.sentiment")))
        pers = []
        for k, p in enumerate(_list(net.get("persuasibility", []), "network.persuasibility")):
            where = f"network.persuasibility[{k}]"
            pers.append((_require(p, "agent", where), _require(p, "source", where),
                         _num(_require(p, "weight", where), f"{where}.weight")))
        spec = SocialNetworkSpec.create(agents, edges, sources, pers)
        model = build_taylor_model(spec)
        exposed = _exposed(doc.get("exposed"), model.labels)
        return model if exposed is None else model.with_exposed(exposed)
    except ModelError as exc:
        raise ConfigError(str(exc)) from None


def resolve_path(path: str | Path):
    """Filesystem path, or ``example:<name>`` for a bundled config."""
    text = str(path)
    if text.startswith(EXAMPLE_PREFIX):
        name = text[len(EXAMPLE_PREFIX):]
        res = resources.files("netvuln") / "data" / f"{name}.json"
        if not res.is_file():
            raise ConfigError(f"no bundled example named {name!r}")
        return res
    return Path(path)


def load_text(path) -> str:
    res = resolve_path(path)
    try:
        return res.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from None


def load_config(path) -> LinearModel:
    text = load_text(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return model_from_dict(doc)


def model_to_dict(model: LinearModel) -> dict:
    doc = {
        "model": {
            "A": [[fraction_to_str(x) for x in row] for row in model.A],
            "b": [fraction_to_str(x) for x in model.b],
            "labels": list(model.labels),
        }
    }
    if not model.fully_exposed or list(model.exposed) != list(range(model.n)):
        doc["exposed"] = [model.labels[k] for k in model.exposed]
    return doc


def dump_config(model: LinearModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def bundled_examples() -> list[str]:
    root = resources.files("netvuln") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))
