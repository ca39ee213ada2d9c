"""Shared random generators for the property suites (seeded, no hypothesis)."""

from __future__ import annotations

import random
from fractions import Fraction
from math import prod

from netlocal.network import EXACT, Network
from netlocal.models import FiniteLocalModel


def rand_dist(rng: random.Random, k: int) -> tuple:
    raw = [Fraction(rng.randint(1, 30)) for _ in range(k)]
    total = sum(raw)
    return tuple(v / total for v in raw)


def rand_model(rng: random.Random, network: Network, cards) -> FiniteLocalModel:
    cards = tuple(cards)
    dists = tuple(rand_dist(rng, c) for c in cards)
    responses = []
    for i in range(network.m):
        width = prod(cards[j] for j in network.sources_of(i))
        table = tuple(
            tuple(rand_dist(rng, network.outputs[i]) for _ in range(width))
            for _ in range(network.inputs[i])
        )
        responses.append(table)
    return FiniteLocalModel(network, cards, dists, tuple(responses), EXACT)


def rand_triangle_model(rng: random.Random, cards=(2, 2, 2)) -> FiniteLocalModel:
    return rand_model(rng, Network.triangle(), cards)


def rand_symmetric_triangle_model(rng: random.Random, card: int = 2) -> FiniteLocalModel:
    """One shared source distribution and one shared response function.

    Party i applies the same response f(first, second) to its sources in the
    cyclic order (i+1, i+2); party 1 reads them in swapped storage order, so
    its stored table is the transpose of the shared one.
    """
    net = Network.triangle()
    dist = rand_dist(rng, card)
    shared = [[rand_dist(rng, 2) for _ in range(card)] for _ in range(card)]
    straight = tuple(shared[v1][v2] for v1 in range(card) for v2 in range(card))
    swapped = tuple(shared[v2][v1] for v1 in range(card) for v2 in range(card))
    responses = ((straight,), (swapped,), (straight,))
    return FiniteLocalModel(net, (card,) * 3, (dist,) * 3, responses, EXACT)


def rand_small_network(rng: random.Random) -> Network:
    m = rng.randint(1, 3)
    n = rng.randint(1, 2)
    while True:
        rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(m)]
        for i in range(m):
            if not any(rows[i]):
                rows[i][rng.randrange(n)] = 1
        if all(any(rows[i][j] for i in range(m)) for j in range(n)):
            break
    inputs = tuple(rng.randint(1, 2) for _ in range(m))
    outputs = tuple(rng.randint(2, 3) for _ in range(m))
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # disconnected incidences are fine here
        return Network(inputs, outputs, tuple(tuple(r) for r in rows))
