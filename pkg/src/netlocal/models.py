"""Finite local hidden-variable models: evaluation, conditioning, compression.

A model assigns each source a discrete distribution over ``cards[j]`` values
and each party a response table P(a | x, source values).  Evaluation iterates
the dense grid of source values; at desk scale this is the simplest exact
method.  Compression rewrites one source's distribution over at most
affdim+1 support points without changing the behavior, via an exact
Carathéodory reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod

from .linalg import affine_dependency
from .network import EXACT, FLOAT, Behavior, Network, ResourceCapError, behavior_index

GRID_CAP = 10**8  # max source-grid terms per input tuple in evaluate()


@dataclass(frozen=True)
class FiniteLocalModel:
    """Discrete source distributions plus per-party response tables.

    ``responses[i][x][k]`` is the output distribution of party ``i`` on input
    ``x`` when its connected sources (ascending source order) take the values
    encoded by flat index ``k`` (mixed radix over the connected cards).
    """

    network: Network
    cards: tuple[int, ...]
    source_dists: tuple[tuple, ...]
    responses: tuple[tuple, ...]
    flavor: str = EXACT

    def __post_init__(self):
        net = self.network
        if len(self.cards) != net.n or len(self.source_dists) != net.n:
            raise ValueError("one card count and one distribution per source required")
        if len(self.responses) != net.m:
            raise ValueError("one response table per party required")
        exact = self.flavor == EXACT
        for j, dist in enumerate(self.source_dists):
            if len(dist) != self.cards[j]:
                raise ValueError(f"source {j}: distribution length != card {self.cards[j]}")
            _check_dist(dist, exact, f"source {j}")
        for i in range(net.m):
            table = self.responses[i]
            width = prod(self.cards[j] for j in net.sources_of(i))
            if len(table) != net.inputs[i]:
                raise ValueError(f"party {i}: response table needs {net.inputs[i]} input slices")
            for x, slice_ in enumerate(table):
                if len(slice_) != width:
                    raise ValueError(f"party {i}, input {x}: expected {width} source columns")
                for k, col in enumerate(slice_):
                    if len(col) != net.outputs[i]:
                        raise ValueError(f"party {i}: output column of wrong length")
                    _check_dist(col, exact, f"party {i}, input {x}, column {k}")

    def source_radix(self, party: int) -> tuple[int, ...]:
        return tuple(self.cards[j] for j in self.network.sources_of(party))

    def response(self, party: int, x: int, source_values: dict) -> tuple:
        """Output distribution of a party given the values of its sources."""
        k = 0
        for j in self.network.sources_of(party):
            k = k * self.cards[j] + source_values[j]
        return self.responses[party][x][k]


def _check_dist(dist, exact: bool, what: str):
    from .network import TOL

    if any(v < 0 and not (not exact and v > -TOL) for v in dist):
        raise ValueError(f"{what}: negative probability")
    s = sum(dist)
    if exact:
        if s != 1:
            raise ValueError(f"{what}: sums to {s}, expected 1")
    elif abs(s - 1) > TOL:
        raise ValueError(f"{what}: sums to {s!r}")


def evaluate(model: FiniteLocalModel, cap: int = GRID_CAP) -> Behavior:
    """Behavior of the model: sum over the full source-value grid of the
    product of source weights and response probabilities."""
    net = model.network
    grid_size = prod(model.cards)
    if grid_size > cap:
        raise ResourceCapError(f"source grid has {grid_size} points, cap is {cap}")
    zero = Fraction(0) if model.flavor == EXACT else 0.0
    values = [zero] * net.dimension
    party_sources = [net.sources_of(i) for i in range(net.m)]
    for lam in product(*(range(c) for c in model.cards)):
        weight = model.source_dists[0][lam[0]]
        for j in range(1, net.n):
            weight = weight * model.source_dists[j][lam[j]]
        if weight == 0:
            continue
        flat = []
        for i in range(net.m):
            k = 0
            for j in party_sources[i]:
                k = k * model.cards[j] + lam[j]
            flat.append(k)
        for xs in net.input_tuples():
            cols = [model.responses[i][xs[i]][flat[i]] for i in range(net.m)]
            base = behavior_index(net, xs, (0,) * net.m)
            for offset, outs in enumerate(product(*(range(a) for a in net.outputs))):
                term = weight
                for i in range(net.m):
                    term = term * cols[i][outs[i]]
                values[base + offset] += term
    return Behavior(net, tuple(values), model.flavor)


@dataclass(frozen=True)
class ConditionalBehaviorFamily:
    """Behaviors obtained by pinning one source to each of its values."""

    source: int
    members: tuple  # of (value, Behavior, weight)

    def mean_values(self) -> tuple:
        """Weighted average of the member behaviors (law of total probability)."""
        acc = None
        for _, beh, w in self.members:
            contrib = [w * v for v in beh.values]
            acc = contrib if acc is None else [a + c for a, c in zip(acc, contrib)]
        return tuple(acc)


def pin_source(model: FiniteLocalModel, source: int, value: int) -> FiniteLocalModel:
    """Model with one source made deterministic at the given value."""
    one = Fraction(1) if model.flavor == EXACT else 1.0
    zero = Fraction(0) if model.flavor == EXACT else 0.0
    dists = list(model.source_dists)
    dists[source] = tuple(one if k == value else zero for k in range(model.cards[source]))
    return FiniteLocalModel(model.network, model.cards, tuple(dists), model.responses, model.flavor)


def conditional_family(
    model: FiniteLocalModel, source: int, cap: int = GRID_CAP
) -> ConditionalBehaviorFamily:
    if not 0 <= source < model.network.n:
        raise ValueError(f"source {source} outside 0..{model.network.n - 1}")
    members = []
    for value in range(model.cards[source]):
        beh = evaluate(pin_source(model, source, value), cap=cap)
        members.append((value, beh, model.source_dists[source][value]))
    return ConditionalBehaviorFamily(source, tuple(members))


def caratheodory_reduce(points: list, weights: list) -> list[Fraction]:
    """Rewrite a convex mixture over the given points onto a support of at most
    affdim(points)+1 of them, preserving the mean exactly.

    Repeatedly finds an affine dependency among the supported points (exact
    elimination, lowest free index first) and slides the weights along it until
    one hits zero.  Deterministic for a fixed input ordering.
    """
    if len(points) != len(weights):
        raise ValueError("points and weights must have the same length")
    if not points:
        return []
    dim = len(points[0])
    if any(len(p) != dim for p in points):
        raise ValueError("points must share a dimension")
    w = [Fraction(v) for v in weights]
    if any(v < 0 for v in w):
        raise ValueError("weights must be nonnegative")
    if sum(w) != 1:
        raise ValueError("weights must sum to 1 exactly")
    pts = [tuple(Fraction(c) for c in p) for p in points]
    while True:
        support = [i for i, v in enumerate(w) if v > 0]
        dep = affine_dependency([pts[i] for i in support])
        if dep is None:
            return w
        # slide toward the smallest ratio among positive dependency entries;
        # flipping the sign makes that side nonempty when needed
        if all(c <= 0 for c in dep):
            dep = [-c for c in dep]
        step = min(
            (w[support[k]] / c for k, c in enumerate(dep) if c > 0),
        )
        for k, i in enumerate(support):
            w[i] -= step * dep[k]
            if w[i] < 0:  # exact arithmetic: can only be a bug
                raise AssertionError("negative weight after slide")


def compress_source(model: FiniteLocalModel, source: int, cap: int = GRID_CAP) -> FiniteLocalModel:
    """Replace one source's distribution by an equivalent one of support at most
    affdim of its conditional behaviors plus one; the behavior is unchanged
    bit-exactly.  Duplicate conditional behaviors are merged first.

    Exact-flavor models only: compression must preserve the behavior exactly.
    """
    if model.flavor != EXACT:
        raise ValueError("compression requires an exact-flavor model")
    family = conditional_family(model, source, cap=cap)
    reps: list[int] = []
    rep_weight: list[Fraction] = []
    seen: dict[tuple, int] = {}
    for value, beh, weight in family.members:
        key = beh.values
        if key in seen:
            rep_weight[seen[key]] += weight
        else:
            seen[key] = len(reps)
            reps.append(value)
            rep_weight.append(Fraction(weight))
    points = [family.members[v][1].values for v in reps]
    reduced = caratheodory_reduce(points, rep_weight)
    kept = [k for k, v in enumerate(reduced) if v > 0]
    kept_values = [reps[k] for k in kept]
    new_dist = tuple(reduced[k] for k in kept)

    net = model.network
    cards = list(model.cards)
    cards[source] = len(kept_values)
    dists = list(model.source_dists)
    dists[source] = new_dist
    responses = []
    for i in range(net.m):
        js = net.sources_of(i)
        if source not in js:
            responses.append(model.responses[i])
            continue
        old_radix = [model.cards[j] for j in js]
        pos = js.index(source)
        table = []
        for x in range(net.inputs[i]):
            slice_ = []
            for combo in product(*(
                kept_values if j == source else range(model.cards[j]) for j in js
            )):
                k = 0
                for r, v in zip(old_radix, combo):
                    k = k * r + v
                slice_.append(model.responses[i][x][k])
            table.append(tuple(slice_))
        responses.append(tuple(table))
    return FiniteLocalModel(net, tuple(cards), tuple(dists), tuple(responses), EXACT)


def threshold_triangle_model(
    alpha_vals, beta_vals, gamma_vals, alpha_w, beta_w, gamma_w
) -> FiniteLocalModel:
    """Triangle model whose parties output threshold comparisons of their two
    source values: a = [beta >= gamma], b = [gamma >= alpha], c = [alpha >= beta].

    The value lists fix only the ordering of the representatives, so ties
    across different sources are rejected (the comparison would be ambiguous);
    perturb the representatives into open intervals instead.  The model is
    exact-flavor iff every weight is rational.
    """
    values = (tuple(alpha_vals), tuple(beta_vals), tuple(gamma_vals))
    weights = (tuple(alpha_w), tuple(beta_w), tuple(gamma_w))
    for j, vals in enumerate(values):
        if len(vals) != len(weights[j]):
            raise ValueError(f"source {j}: values and weights differ in length")
        if any(vals[k] >= vals[k + 1] for k in range(len(vals) - 1)):
            raise ValueError(f"source {j}: values must be strictly increasing")
    for j in range(3):
        for k in range(j + 1, 3):
            common = set(values[j]) & set(values[k])
            if common:
                raise ValueError(
                    f"sources {j} and {k} share representative value(s) {sorted(common)}"
                )
    exact = all(isinstance(w, (int, Fraction)) for ws in weights for w in ws)
    flavor = EXACT if exact else FLOAT
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0

    net = Network.triangle()
    cards = tuple(len(v) for v in values)
    if exact:
        dists = tuple(tuple(Fraction(w) for w in ws) for ws in weights)
    else:
        dists = tuple(tuple(float(w) for w in ws) for ws in weights)

    responses = []
    for i in range(3):
        first, second = (i + 1) % 3, (i + 2) % 3  # compare value(first) >= value(second)
        j1, j2 = sorted(net.sources_of(i))
        cols = []
        for v1 in range(cards[j1]):
            for v2 in range(cards[j2]):
                by_source = {j1: v1, j2: v2}
                out = 1 if values[first][by_source[first]] >= values[second][by_source[second]] else 0
                cols.append((one, zero) if out == 0 else (zero, one))
        responses.append((tuple(cols),))
    return FiniteLocalModel(net, cards, dists, tuple(responses), flavor)


def pneq_behavior(flavor: str = EXACT) -> Behavior:
    """The triangle behavior that is 0 on aligned outputs and 1/6 elsewhere."""
    net = Network.triangle()
    vals = [Fraction(1, 6)] * 8
    vals[0] = Fraction(0)
    vals[7] = Fraction(0)
    beh = Behavior(net, tuple(vals), EXACT)
    return beh.as_float() if flavor == FLOAT else beh


def peq_behavior(flavor: str = EXACT) -> Behavior:
    """The triangle behavior with perfectly aligned outputs, 1/2 each."""
    net = Network.triangle()
    vals = [Fraction(0)] * 8
    vals[0] = Fraction(1, 2)
    vals[7] = Fraction(1, 2)
    beh = Behavior(net, tuple(vals), EXACT)
    return beh.as_float() if flavor == FLOAT else beh


def minimal_pneq_model() -> FiniteLocalModel:
    """Exact cards-(2,2,2) triangle model reproducing :func:`pneq_behavior`.

    Source biases 1/3, 1/3, 1/4; a = beta*gamma, b = 1 xor gamma*alpha, and the
    third party flips a fair coin when alpha == beta, else outputs alpha.
    """
    net = Network.triangle()
    f = Fraction
    dists = ((f(1, 3), f(2, 3)), (f(1, 3), f(2, 3)), (f(1, 4), f(3, 4)))
    zero_col = (f(1), f(0))  # output 0 surely
    one_col = (f(0), f(1))
    coin = (f(1, 2), f(1, 2))

    # party 0 reads (beta, gamma): a = beta * gamma
    a_cols = tuple(one_col if (b and g) else zero_col for b in range(2) for g in range(2))
    # party 1 reads (alpha, gamma): b = 1 xor gamma * alpha
    b_cols = tuple(zero_col if (a and g) else one_col for a in range(2) for g in range(2))
    # party 2 reads (alpha, beta): c = coin if alpha == beta else alpha
    c_cols = tuple(
        coin if a == b else (one_col if a else zero_col) for a in range(2) for b in range(2)
    )
    responses = ((a_cols,), (b_cols,), (c_cols,))
    return FiniteLocalModel(net, (2, 2, 2), dists, responses, EXACT)


def threshold_pneq_model() -> FiniteLocalModel:
    """Float cards-(3,2,6) threshold triangle model reproducing
    :func:`pneq_behavior` to numerical precision.

    Weights involve sqrt(3), so the model only exists in float flavor.
    """
    s3 = 3 ** 0.5
    a1 = (3 - s3) / 12
    alpha_vals = (a1, 0.5, 1 - a1)
    u = (3 - s3) / 6
    alpha_w = (u, 1 - 2 * u, u)
    beta_vals = ((3 - s3) / 6, (3 + s3) / 6)
    beta_w = (0.5, 0.5)
    cuts = sorted((0.0, alpha_vals[0], beta_vals[0], alpha_vals[1], beta_vals[1], alpha_vals[2], 1.0))
    gamma_vals = tuple((cuts[k] + cuts[k + 1]) / 2 for k in range(6))
    w_edge = (3 - s3) / 12
    w_mid = 1 / (2 * s3)
    gamma_w = (w_edge, w_edge, w_mid, w_mid, w_edge, w_edge)
    return threshold_triangle_model(alpha_vals, beta_vals, gamma_vals, alpha_w, beta_w, gamma_w)
