"""Single-source Bell polytope: deterministic strategies, exact membership LP
with dual certificates, and desk-scale facet enumeration.

The local set is conv{d_lambda} over joint deterministic strategies.
Membership is a rational feasibility LP; infeasibility converts into a
certificate xi with xi . d_lambda >= 0 for every strategy and xi . P < 0,
re-verified exactly before being returned.  Facets are computed in the
Collins-Gisin coordinate chart by double description over the vertices,
which is equivalent to eliminating the weights but avoids the blow-up of
raw Fourier-Motzkin.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, lcm, prod

from .network import Behavior, EXACT, Network, ResourceCapError, behavior_index
from .simplex import feasible_point


@dataclass(frozen=True)
class StrategyMatrix:
    """Deterministic behaviors of a single-source scenario, one per column.

    ``strategies[k][i][x]`` is the output of party ``i`` on input ``x`` under
    strategy ``k``; ``columns[k]`` is the corresponding 0/1 behavior vector.
    """

    network: Network
    strategies: tuple
    columns: tuple

    @property
    def column_count(self) -> int:
        return len(self.columns)


def enumerate_strategies(network: Network) -> StrategyMatrix:
    """All prod A_i^{X_i} joint deterministic strategies, lexicographic order."""
    if network.n != 1 or any(not row[0] for row in network.incidence):
        raise ValueError(
            "strategy enumeration needs a single source feeding every party; "
            "use the triangle-search tools for multi-source networks"
        )
    per_party = [
        list(product(range(network.outputs[i]), repeat=network.inputs[i]))
        for i in range(network.m)
    ]
    strategies = []
    columns = []
    one, zero = Fraction(1), Fraction(0)
    for joint in product(*per_party):
        values = [zero] * network.dimension
        for xs in network.input_tuples():
            outs = tuple(joint[i][xs[i]] for i in range(network.m))
            values[behavior_index(network, xs, outs)] = one
        strategies.append(joint)
        columns.append(tuple(values))
    return StrategyMatrix(network, tuple(strategies), tuple(columns))


@dataclass(frozen=True)
class Decomposition:
    """Convex weights over strategies reproducing a behavior exactly."""

    weights: tuple


@dataclass(frozen=True)
class LocalityCertificate:
    """Dual witness of nonlocality: xi . d_lambda >= 0 for every strategy,
    xi . P = value < 0 for the certified behavior."""

    xi: tuple
    value: Fraction
    tight_strategies: tuple


def _dot(u, v) -> Fraction:
    return sum(a * b for a, b in zip(u, v))


def _primitive(vec: list[Fraction]) -> tuple[Fraction, ...]:
    denom = lcm(*(v.denominator for v in vec)) if vec else 1
    ints = [int(v * denom) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(Fraction(v) for v in ints)


def membership_lp(behavior: Behavior):
    """Decide Bell locality exactly.

    Returns a :class:`Decomposition` when the behavior is a convex mixture of
    deterministic strategies, else a :class:`LocalityCertificate`.  Both are
    re-verified by exact substitution before being returned.
    """
    if behavior.flavor != EXACT:
        raise ValueError("membership test requires an exact-flavor behavior")
    sm = enumerate_strategies(behavior.network)
    d = behavior.network.dimension
    matrix = [[sm.columns[k][r] for k in range(sm.column_count)] for r in range(d)]
    target = [Fraction(v) for v in behavior.values]
    status, vec = feasible_point(matrix, target)
    if status == "feasible":
        for r in range(d):
            assert _dot(matrix[r], vec) == target[r]
        return Decomposition(tuple(vec))

    xi = [-y for y in vec]
    # shift so the smallest strategy value is exactly zero: subtracting a
    # multiple of one input block's indicator moves every column value equally
    block = [0] * d
    for outs in behavior.network.output_tuples():
        block[behavior_index(behavior.network, (0,) * behavior.network.m, outs)] = 1
    shift = min(_dot(xi, col) for col in sm.columns)
    xi = [v - shift * b for v, b in zip(xi, block)]
    xi = list(_primitive(xi))
    value = _dot(xi, target)
    strategy_values = [_dot(xi, col) for col in sm.columns]
    if value >= 0 or any(v < 0 for v in strategy_values) or min(strategy_values) != 0:
        raise AssertionError("certificate failed exact re-verification")
    tight = tuple(k for k, v in enumerate(strategy_values) if v == 0)
    return LocalityCertificate(tuple(xi), value, tight)


# ---------------------------------------------------------------------------
# Collins-Gisin chart and facet enumeration


def cg_labels(network: Network) -> list[tuple]:
    """Coordinate labels of the Collins-Gisin chart: per party either None
    (marginalized out) or a pair (input, output) with the last output dropped.
    The all-None label (total normalization) is excluded."""
    options = []
    for i in range(network.m):
        opts = [None]
        for x in range(network.inputs[i]):
            for a in range(network.outputs[i] - 1):
                opts.append((x, a))
        options.append(opts)
    return [lab for lab in product(*options) if any(v is not None for v in lab)]


def cg_coordinates(behavior: Behavior, labels=None) -> tuple:
    """Evaluate the Collins-Gisin coordinates of a behavior.

    Marginalized parties are summed out at input 0; for nonsignaling
    behaviors (all deterministic strategies included) the choice is immaterial.
    """
    net = behavior.network
    if labels is None:
        labels = cg_labels(net)
    coords = []
    for lab in labels:
        xs = tuple(0 if v is None else v[0] for v in lab)
        free = [i for i, v in enumerate(lab) if v is None]
        total = 0
        for outs_free in product(*(range(net.outputs[i]) for i in free)):
            outs = [v[1] if v is not None else 0 for v in lab]
            for i, a in zip(free, outs_free):
                outs[i] = a
            total += behavior.value(xs, outs)
        coords.append(total)
    return tuple(coords)


@dataclass(frozen=True)
class Facet:
    """One facet inequality coeffs . cg(P) + offset >= 0 of the local polytope."""

    coeffs: tuple
    offset: Fraction

    def value_on(self, cg_point) -> Fraction:
        return _dot(self.coeffs, cg_point) + self.offset

    def satisfied_by(self, behavior: Behavior) -> bool:
        return self.value_on(cg_coordinates(behavior)) >= 0


def _extreme_rays(constraints: list[tuple]) -> list[tuple]:
    """Extreme rays of {x : a . x >= 0 for all rows a} by double description.

    The rows must span the space (pointed cone).  Rays are returned as
    primitive integer-fraction vectors in a deterministic order.
    """
    from .linalg import invert

    dim = len(constraints[0])
    # greedily pick dim independent rows to seed a pointed simplicial cone
    chosen: list[int] = []
    basis_rows: list[list[Fraction]] = []
    from .linalg import rank as _rank

    for idx, row in enumerate(constraints):
        if _rank(basis_rows + [list(row)]) > len(basis_rows):
            chosen.append(idx)
            basis_rows.append(list(row))
            if len(chosen) == dim:
                break
    if len(chosen) < dim:
        raise ValueError("constraints do not span; the polytope is not full-dimensional")
    inv = invert(basis_rows)
    rays = [_primitive([inv[r][c] for r in range(dim)]) for c in range(dim)]
    zero_sets = []
    for ray in rays:
        zs = frozenset(i for i in chosen if _dot(constraints[i], ray) == 0)
        zero_sets.append(zs)
    processed = set(chosen)

    for idx, row in enumerate(constraints):
        if idx in processed:
            continue
        vals = [_dot(row, r) for r in rays]
        keep_idx = [k for k, v in enumerate(vals) if v >= 0]
        plus = [k for k, v in enumerate(vals) if v > 0]
        minus = [k for k, v in enumerate(vals) if v < 0]
        new_rays = []
        new_zero = []
        for p in plus:
            for q in minus:
                common = zero_sets[p] & zero_sets[q]
                adjacent = not any(
                    r != p and r != q and common <= zero_sets[r] for r in range(len(rays))
                )
                if not adjacent:
                    continue
                combo = [vals[p] * b - vals[q] * a for a, b in zip(rays[p], rays[q])]
                ray = _primitive(combo)
                new_rays.append(ray)
                new_zero.append((zero_sets[p] & zero_sets[q]) | {idx})
        rays = [rays[k] for k in keep_idx] + new_rays
        zero_sets = [
            zero_sets[k] | ({idx} if vals[k] == 0 else set()) for k in keep_idx
        ] + new_zero
        processed.add(idx)
    order = sorted(range(len(rays)), key=lambda k: rays[k])
    return [rays[k] for k in order]


def facet_enumeration(network: Network, cap: int = 64) -> list[Facet]:
    """Complete irredundant facet list of the local polytope in the
    Collins-Gisin chart.  Desk scale only: at most ``cap`` strategies."""
    sm = enumerate_strategies(network)
    if sm.column_count > cap:
        raise ResourceCapError(
            f"{sm.column_count} strategies exceed the facet-enumeration cap {cap}"
        )
    labels = cg_labels(network)
    vertices = [
        cg_coordinates(Behavior(network, col, EXACT), labels) for col in sm.columns
    ]
    # facets of conv(V) = extreme rays of {(c, xi) : c + xi . v >= 0 for v in V}
    constraints = [tuple([Fraction(1)] + [Fraction(v) for v in vert]) for vert in vertices]
    rays = _extreme_rays(constraints)
    facets = []
    for ray in rays:
        facets.append(Facet(tuple(ray[1:]), ray[0]))
    return facets
