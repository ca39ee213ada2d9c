"""JSON formats for networks, behaviors, and finite models.

Exact rationals travel as "num/den" strings (plain integers accepted);
float-flavor values are JSON numbers.  A behavior or model may inline its
network or reference it by path, resolved relative to the referencing file.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import product
from pathlib import Path

from .models import FiniteLocalModel
from .network import EXACT, FLOAT, Behavior, Network


def format_rational(value) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text)
    raise ValueError(f"expected an integer or 'num/den' string, got {text!r}")


def network_to_dict(network: Network) -> dict:
    return {
        "parties": [
            {"inputs": x, "outputs": a} for x, a in zip(network.inputs, network.outputs)
        ],
        "incidence": [list(row) for row in network.incidence],
    }


def network_from_dict(data: dict) -> Network:
    parties = data["parties"]
    return Network(
        tuple(p["inputs"] for p in parties),
        tuple(p["outputs"] for p in parties),
        tuple(tuple(row) for row in data["incidence"]),
    )


def behavior_to_dict(behavior: Behavior) -> dict:
    if behavior.flavor == EXACT:
        values = [format_rational(v) for v in behavior.values]
    else:
        values = [float(v) for v in behavior.values]
    return {
        "network": network_to_dict(behavior.network),
        "flavor": behavior.flavor,
        "values": values,
    }


def _resolve_network(data, base: Path | None) -> Network:
    if isinstance(data, str):
        path = Path(data)
        if base is not None and not path.is_absolute():
            path = base / path
        return network_from_dict(json.loads(path.read_text()))
    return network_from_dict(data)


def behavior_from_dict(data: dict, base: Path | None = None) -> Behavior:
    network = _resolve_network(data["network"], base)
    flavor = data.get("flavor", EXACT)
    if flavor == EXACT:
        values = tuple(parse_rational(v) for v in data["values"])
    else:
        values = tuple(float(v) for v in data["values"])
    return Behavior(network, values, flavor)


def model_to_dict(model: FiniteLocalModel) -> dict:
    exact = model.flavor == EXACT
    fmt = format_rational if exact else float
    responses = []
    for i in range(model.network.m):
        sources = model.network.sources_of(i)
        radix = [model.cards[j] for j in sources]
        table = {}
        for x in range(model.network.inputs[i]):
            for k, combo in enumerate(product(*(range(c) for c in radix))):
                key = ",".join(str(v) for v in (x, *combo))
                table[key] = [fmt(v) for v in model.responses[i][x][k]]
        responses.append({"party": i, "table": table})
    return {
        "network": network_to_dict(model.network),
        "flavor": model.flavor,
        "cards": list(model.cards),
        "sources": [[fmt(w) for w in dist] for dist in model.source_dists],
        "responses": responses,
    }


def model_from_dict(data: dict, base: Path | None = None) -> FiniteLocalModel:
    network = _resolve_network(data["network"], base)
    flavor = data.get("flavor", EXACT)
    conv = parse_rational if flavor == EXACT else float
    cards = tuple(data["cards"])
    dists = tuple(tuple(conv(w) for w in dist) for dist in data["sources"])
    responses: list = [None] * network.m
    for entry in data["responses"]:
        i = entry["party"]
        sources = network.sources_of(i)
        radix = [cards[j] for j in sources]
        table = []
        for x in range(network.inputs[i]):
            slice_ = []
            for combo in product(*(range(c) for c in radix)):
                key = ",".join(str(v) for v in (x, *combo))
                slice_.append(tuple(conv(v) for v in entry["table"][key]))
            table.append(tuple(slice_))
        responses[i] = tuple(table)
    return FiniteLocalModel(network, cards, dists, tuple(responses), flavor)


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def load_behavior(path) -> Behavior:
    path = Path(path)
    return behavior_from_dict(load_json(path), path.parent)


def load_network(path) -> Network:
    return network_from_dict(load_json(path))


def load_model(path) -> FiniteLocalModel:
    path = Path(path)
    return model_from_dict(load_json(path), path.parent)
