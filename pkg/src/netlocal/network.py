"""Scenario definitions, behavior vectors, and cardinality-bound arithmetic.

A network couples ``m`` parties to ``n`` independent latent sources through a
binary incidence matrix.  A behavior is the full conditional probability table
P(outputs | inputs) flattened into a vector, indexed inputs-major,
outputs-minor, party 0 outermost.  Exact behaviors carry ``Fraction`` entries;
float behaviors are binary64 and compared with the global ``TOL``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterable, NamedTuple, Sequence

TOL = 1e-12  # single comparison tolerance for all float-flavor arithmetic

EXACT = "exact"
FLOAT = "float"


class ResourceCapError(RuntimeError):
    """A computation would exceed its configured resource cap."""


@dataclass(frozen=True)
class Network:
    """A scenario: input/output alphabet sizes per party plus the incidence matrix.

    ``incidence[i][j] == 1`` means party ``i`` reads source ``j``.  Every party
    must read at least one source and every source must feed at least one party.
    """

    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    incidence: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.inputs)
        if len(self.outputs) != m or len(self.incidence) != m:
            raise ValueError("inputs, outputs and incidence must agree on the party count")
        if m == 0:
            raise ValueError("network needs at least one party")
        if any(x < 1 for x in self.inputs) or any(a < 1 for a in self.outputs):
            raise ValueError("alphabet sizes must be strictly positive")
        n = len(self.incidence[0])
        if any(len(row) != n for row in self.incidence):
            raise ValueError("ragged incidence matrix")
        if any(v not in (0, 1) for row in self.incidence for v in row):
            raise ValueError("incidence entries must be 0 or 1")
        if any(not any(row) for row in self.incidence):
            raise ValueError("every party must be connected to at least one source")
        if n == 0 or any(not any(row[j] for row in self.incidence) for j in range(n)):
            raise ValueError("every source must feed at least one party")
        if not self._connected():
            warnings.warn("network is disconnected; per-source bounds degenerate", stacklevel=3)

    def _connected(self) -> bool:
        seen = {0}
        frontier = [0]
        while frontier:
            i = frontier.pop()
            for j in range(self.n):
                if self.incidence[i][j]:
                    for k in range(self.m):
                        if self.incidence[k][j] and k not in seen:
                            seen.add(k)
                            frontier.append(k)
        return len(seen) == self.m

    @property
    def m(self) -> int:
        return len(self.inputs)

    @property
    def n(self) -> int:
        return len(self.incidence[0])

    @property
    def dimension(self) -> int:
        """Length d of the flat behavior vector."""
        return prod(self.inputs) * prod(self.outputs)

    def sources_of(self, party: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.incidence[party][j])

    def parties_of(self, source: int) -> tuple[int, ...]:
        return tuple(i for i in range(self.m) if self.incidence[i][source])

    def input_tuples(self):
        return product(*(range(x) for x in self.inputs))

    def output_tuples(self):
        return product(*(range(a) for a in self.outputs))

    @classmethod
    def triangle(cls) -> "Network":
        """Three no-input binary parties in a loop; party i reads the two sources != i."""
        rows = tuple(tuple(0 if j == i else 1 for j in range(3)) for i in range(3))
        return cls((1, 1, 1), (2, 2, 2), rows)

    @classmethod
    def bilocal(cls) -> "Network":
        """Three parties with binary inputs/outputs; the middle one bridges two sources."""
        return cls((2, 2, 2), (2, 2, 2), ((1, 0), (1, 1), (0, 1)))

    @classmethod
    def bell_scenario(cls, inputs: Sequence[int], outputs: Sequence[int]) -> "Network":
        """Single shared source feeding every party."""
        m = len(inputs)
        return cls(tuple(inputs), tuple(outputs), tuple((1,) for _ in range(m)))


def behavior_index(network: Network, inputs: Sequence[int], outputs: Sequence[int]) -> int:
    """Flat index of P(outputs|inputs): inputs-major, outputs-minor, party 0 outermost."""
    if len(inputs) != network.m or len(outputs) != network.m:
        raise ValueError("inputs/outputs must have one component per party")
    k = 0
    for i, x in enumerate(inputs):
        if not 0 <= x < network.inputs[i]:
            raise ValueError(f"party {i}: input {x} outside alphabet of size {network.inputs[i]}")
        k = k * network.inputs[i] + x
    for i, a in enumerate(outputs):
        if not 0 <= a < network.outputs[i]:
            raise ValueError(f"party {i}: output {a} outside alphabet of size {network.outputs[i]}")
        k = k * network.outputs[i] + a
    return k


def behavior_unindex(network: Network, index: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Inverse of :func:`behavior_index`."""
    if not 0 <= index < network.dimension:
        raise ValueError(f"index {index} outside 0..{network.dimension - 1}")
    digits = []
    radices = list(network.inputs) + list(network.outputs)
    for r in reversed(radices):
        digits.append(index % r)
        index //= r
    digits.reverse()
    m = network.m
    return tuple(digits[:m]), tuple(digits[m:])


@dataclass(frozen=True)
class Behavior:
    """Flat vector of conditional probabilities over a network."""

    network: Network
    values: tuple
    flavor: str = EXACT

    def __post_init__(self):
        if self.flavor not in (EXACT, FLOAT):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if len(self.values) != self.network.dimension:
            raise ValueError(
                f"behavior needs {self.network.dimension} entries, got {len(self.values)}"
            )
        block = prod(self.network.outputs)
        for v in self.values:
            if v < 0 and not (self.flavor == FLOAT and v > -TOL):
                raise ValueError("negative probability entry")
        for start in range(0, len(self.values), block):
            s = sum(self.values[start : start + block])
            if self.flavor == EXACT:
                if s != 1:
                    raise ValueError(f"input block at offset {start} sums to {s}, expected 1")
            elif abs(s - 1) > TOL:
                raise ValueError(f"input block at offset {start} sums to {s!r}")

    def value(self, inputs: Sequence[int], outputs: Sequence[int]):
        return self.values[behavior_index(self.network, inputs, outputs)]

    def as_float(self) -> "Behavior":
        return Behavior(self.network, tuple(float(v) for v in self.values), FLOAT)


class MarginalViolation(NamedTuple):
    """One broken no-signaling constraint: party's input shifts an outside marginal."""

    party: int
    input_a: int
    input_b: int
    rest_inputs: tuple[int, ...]
    rest_outputs: tuple[int, ...]
    difference: object


def is_nonsignaling(behavior: Behavior) -> tuple[bool, list[MarginalViolation]]:
    """Check that every party's marginal on the rest is independent of its input.

    Single-party conditions generate all no-signaling constraints for complete
    joint distributions, so only those are enumerated.
    """
    net = behavior.network
    violations = []
    for i in range(net.m):
        if net.inputs[i] == 1:
            continue
        others = [p for p in range(net.m) if p != i]
        for rest_x in product(*(range(net.inputs[p]) for p in others)):
            for rest_a in product(*(range(net.outputs[p]) for p in others)):
                marginals = []
                for x_i in range(net.inputs[i]):
                    xs = [0] * net.m
                    As = [0] * net.m
                    for p, v in zip(others, rest_x):
                        xs[p] = v
                    for p, v in zip(others, rest_a):
                        As[p] = v
                    xs[i] = x_i
                    total = 0
                    for a_i in range(net.outputs[i]):
                        As[i] = a_i
                        total += behavior.value(xs, As)
                    marginals.append(total)
                for k in range(1, len(marginals)):
                    diff = marginals[k] - marginals[0]
                    bad = diff != 0 if behavior.flavor == EXACT else abs(diff) > TOL
                    if bad:
                        violations.append(
                            MarginalViolation(i, 0, k, rest_x, rest_a, diff)
                        )
    return not violations, violations


def affine_dimension(inputs: Iterable[int], outputs: Iterable[int]) -> int:
    """Affine dimension of the nonsignaling set: prod of X_i(A_i-1)+1, minus one."""
    return prod(x * (a - 1) + 1 for x, a in zip(inputs, outputs, strict=True)) - 1


@dataclass(frozen=True)
class PartySplit:
    """Partition of the parties relative to one designated source."""

    a_side: frozenset
    b_side: frozenset

    @classmethod
    def from_source(cls, network: Network, source: int) -> "PartySplit":
        a = frozenset(network.parties_of(source))
        return cls(a, frozenset(range(network.m)) - a)


def cardinality_bound_basic(network: Network) -> int:
    """Universal per-source cardinality bound d + 1."""
    return network.dimension + 1


def cardinality_bound_refined(network: Network, source: int) -> int:
    """Tighter per-source bound: full affine dimension minus that of the
    parties not reading the source (whose marginal is pinned when the source
    value is fixed)."""
    if not 0 <= source < network.n:
        raise ValueError(f"source {source} outside 0..{network.n - 1}")
    split = PartySplit.from_source(network, source)
    total = affine_dimension(network.inputs, network.outputs)
    if not split.b_side:
        warnings.warn(
            f"source {source} feeds every party; bound falls back to the whole space",
            stacklevel=2,
        )
        return total
    rest = sorted(split.b_side)
    return total - affine_dimension(
        [network.inputs[i] for i in rest], [network.outputs[i] for i in rest]
    )


def relaxation_size(rank: int) -> tuple[int, int]:
    """Degrees of freedom and moment-matrix side length of the degree-2
    relaxation of the triangle feasibility system at source rank ``rank``."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    dof = 3 * (rank * rank + rank - 1)
    return dof, dof * (dof + 1) // 2
