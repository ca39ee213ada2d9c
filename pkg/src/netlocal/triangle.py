"""Hybrid combinatorial-algebraic search for finite triangle models.

The relaxed problem tracks, for every response-table cell, only whether the
party outputs 0 surely, 1 surely, or either (a three-valued support pattern).
With full-support sources every grid point occurs, so a pattern is consistent
with a target behavior exactly when its possible-outcome set equals the
target's support.  Surviving patterns are canonicalized under the triangle
symmetries and handed to a numeric feasibility stage whose positive answers
are re-verified in exact arithmetic.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import prod

from .models import FiniteLocalModel, evaluate
from .network import EXACT, Behavior, Network, ResourceCapError

ZERO, ONE, INTERIOR = 0, 1, 2  # P(output 0 | cell) = 0, = 1, or in (0,1)

# party p reads sources (p+1)%3 and (p+2)%3; cells are indexed by the
# ascending-source-order value pair (v1, v2) -> flat v1*card2 + v2
_VIEW = tuple(tuple(sorted(((p + 1) % 3, (p + 2) % 3))) for p in range(3))

_PERMIT = {ZERO: (False, True), ONE: (True, False), INTERIOR: (True, True)}

TrianglePattern = tuple  # 3-tuple of per-party mark tuples


def pattern_cells(cards: tuple[int, int, int]) -> tuple[int, int, int]:
    """Number of response cells per party for the given source cards."""
    return tuple(cards[j1] * cards[j2] for j1, j2 in _VIEW)


def possible_outcomes(pattern: TrianglePattern, cards=(2, 2, 2)) -> frozenset:
    """Outcome triples reachable for some source values under the pattern."""
    outcomes = set()
    for lam in product(*(range(c) for c in cards)):
        per_party = []
        for p in range(3):
            j1, j2 = _VIEW[p]
            mark = pattern[p][lam[j1] * cards[j2] + lam[j2]]
            per_party.append([a for a in (0, 1) if _PERMIT[mark][a]])
        for outs in product(*per_party):
            outcomes.add(outs)
    return frozenset(outcomes)


def behavior_support(behavior: Behavior) -> frozenset:
    """Outcome triples with nonzero probability (triangle network)."""
    net = behavior.network
    support = set()
    for outs in net.output_tuples():
        if behavior.value((0,) * net.m, outs) != 0:
            support.add(outs)
    return frozenset(support)


# ---------------------------------------------------------------------------
# Symmetry group


@dataclass(frozen=True)
class TriangleSymmetry:
    """Party permutation with per-source value flips and per-party output flips.

    The permutation relabels party p to perm[p] and source j to perm[j]
    (sources sit opposite their namesake party, so one permutation drives
    both).  Value flips act on the old source labels, output flips on the new
    party labels.
    """

    perm: tuple[int, int, int]
    source_flips: tuple[int, int, int]
    output_flips: tuple[int, int, int]

    def on_outcome(self, outs) -> tuple:
        new = [0, 0, 0]
        for p in range(3):
            new[self.perm[p]] = outs[p] ^ self.output_flips[self.perm[p]]
        return tuple(new)

    def on_support(self, support) -> frozenset:
        return frozenset(self.on_outcome(o) for o in support)

    def on_pattern(self, pattern: TrianglePattern, cards=(2, 2, 2)) -> TrianglePattern:
        if cards != (2, 2, 2):
            raise ValueError("symmetry action is implemented for cards (2,2,2)")
        new = [[None] * 4 for _ in range(3)]
        for q in range(3):
            p = self.perm.index(q)  # party moved onto q
            k1, k2 = _VIEW[p]
            j1, j2 = _VIEW[q]
            for v1 in range(2):
                for v2 in range(2):
                    by_new = {j1: v1, j2: v2}
                    w1 = by_new[self.perm[k1]] ^ self.source_flips[k1]
                    w2 = by_new[self.perm[k2]] ^ self.source_flips[k2]
                    mark = pattern[p][w1 * 2 + w2]
                    if self.output_flips[q] and mark != INTERIOR:
                        mark = ONE - mark
                    new[q][v1 * 2 + v2] = mark
        return tuple(tuple(row) for row in new)


def symmetry_group() -> list[TriangleSymmetry]:
    """All 384 combinations of party permutation, source flips, output flips."""
    elems = []
    for perm in permutations(range(3)):
        for sf in product((0, 1), repeat=3):
            for of in product((0, 1), repeat=3):
                elems.append(TriangleSymmetry(perm, sf, of))
    return elems


def support_stabilizer(support: frozenset) -> list[TriangleSymmetry]:
    return [g for g in symmetry_group() if g.on_support(support) == support]


def canonical_pattern(pattern: TrianglePattern, group) -> TrianglePattern:
    """Lexicographic minimum of the pattern's orbit under the group."""
    return min(g.on_pattern(pattern) for g in group)


def _action_table(g: TriangleSymmetry) -> tuple[tuple[int, ...], tuple[bool, ...]]:
    """Flat form of the pattern action at cards (2,2,2): target cell k' takes
    the mark of source cell src[k'], flipped ZERO<->ONE when flip[k']."""
    src = [0] * 12
    flip = [False] * 12
    for q in range(3):
        p = g.perm.index(q)
        k1, k2 = _VIEW[p]
        j1, j2 = _VIEW[q]
        for v1 in range(2):
            for v2 in range(2):
                by_new = {j1: v1, j2: v2}
                w1 = by_new[g.perm[k1]] ^ g.source_flips[k1]
                w2 = by_new[g.perm[k2]] ^ g.source_flips[k2]
                src[q * 4 + v1 * 2 + v2] = p * 4 + w1 * 2 + w2
                flip[q * 4 + v1 * 2 + v2] = bool(g.output_flips[q])
    return tuple(src), tuple(flip)


_FLIPPED = {ZERO: ONE, ONE: ZERO, INTERIOR: INTERIOR}


def _orbit_reduce(flat_patterns, group) -> list[TrianglePattern]:
    """One canonical (orbit-minimal) representative per group orbit."""
    tables = [_action_table(g) for g in group]
    pending = set(flat_patterns)
    canon = []
    while pending:
        pat = pending.pop()
        orbit = set()
        for src, flip in tables:
            orbit.add(tuple(
                _FLIPPED[pat[src[k]]] if flip[k] else pat[src[k]] for k in range(12)
            ))
        canon.append(min(orbit))
        pending -= orbit
    return sorted(
        (flat[0:4], flat[4:8], flat[8:12]) for flat in canon
    )


# ---------------------------------------------------------------------------
# Enumeration over all 3^12 patterns at cards (2,2,2)


def _party_tables():
    """All 81 per-party mark rows with their per-cell permitted bitmasks."""
    tables = list(product((ZERO, ONE, INTERIOR), repeat=4))
    masks = []
    for t in tables:
        masks.append(tuple((1 if _PERMIT[m][0] else 0) | (2 if _PERMIT[m][1] else 0) for m in t))
    return tables, masks


def _product_mask_table():
    """outcome bitmask (bit a*4+b*2+c) of a grid point, indexed [ma][mb][mc]
    by the three per-party permit masks"""
    table = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    for ma in range(1, 4):
        for mb in range(1, 4):
            for mc in range(1, 4):
                bits = 0
                for a in (0, 1):
                    if not ma & (1 << a):
                        continue
                    for b in (0, 1):
                        if not mb & (1 << b):
                            continue
                        for c in (0, 1):
                            if mc & (1 << c):
                                bits |= 1 << (a * 4 + b * 2 + c)
                table[ma][mb][mc] = bits
    return table


def _support_of_target(target: Behavior | frozenset) -> frozenset:
    if isinstance(target, Behavior):
        net = target.network
        if net.inputs != (1, 1, 1) or net.outputs != (2, 2, 2) or net.n != 3:
            raise ValueError("pattern search is defined on the triangle network")
        return behavior_support(target)
    return frozenset(target)


def _scan_patterns_222(support: frozenset, threads: int = 1, first_only: bool = False):
    """All raw cards-(2,2,2) patterns whose possible-outcome set equals the
    support, as flat 12-tuples; vectorized over the 81^2 inner table pairs."""
    import numpy as np

    want = 0
    for a, b, c in support:
        want |= 1 << (a * 4 + b * 2 + c)
    tables, masks = _party_tables()
    prod_mask = np.array(_product_mask_table(), dtype=np.uint8)
    grid = [(al, be, ga) for al in range(2) for be in range(2) for ga in range(2)]
    cell_at = [[lam[j1] * 2 + lam[j2] for lam in grid] for j1, j2 in _VIEW]
    mask_at = [
        np.array([[masks[t][cell_at[p][gp]] for gp in range(8)] for t in range(81)],
                 dtype=np.intp)
        for p in range(3)
    ]

    def scan(lo: int, hi: int) -> list[tuple]:
        found = []
        for ia in range(lo, hi):
            seen = np.zeros((81, 81), dtype=np.uint8)
            for gp in range(8):
                seen |= prod_mask[
                    mask_at[0][ia, gp],
                    mask_at[1][:, gp][:, None],
                    mask_at[2][:, gp][None, :],
                ]
            for ib, ic in zip(*np.nonzero(seen == want)):
                found.append(tables[ia] + tables[int(ib)] + tables[int(ic)])
                if first_only:
                    return found
        return found

    if first_only or threads <= 1:
        return scan(0, 81)
    bounds = [(k * 81) // threads for k in range(threads + 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        chunks = pool.map(lambda se: scan(*se), zip(bounds, bounds[1:]))
    return [p for chunk in chunks for p in chunk]


def enumerate_and_prune(target: Behavior | frozenset, threads: int = 1) -> list[TrianglePattern]:
    """Scan all 3^12 support patterns at cards (2,2,2), keep those whose
    possible-outcome set equals the target's support, and return canonical
    representatives under the target-stabilizing symmetries, sorted."""
    support = _support_of_target(target)
    survivors = _scan_patterns_222(support, threads=threads)
    return _orbit_reduce(survivors, support_stabilizer(support))


# ---------------------------------------------------------------------------
# Possibilistic feasibility at general (small) cards


def possibilistic_feasible(
    support: frozenset, cards=(2, 2, 2), cell_cap: int = 12
) -> TrianglePattern | None:
    """Search for any support pattern over the cards grid whose
    possible-outcome set equals the support; None means none exists.

    Backtracking with forward pruning: a grid point whose cells are all
    assigned must only produce outcomes inside the support, and at the end
    every support element must be covered.  Exhaustive, so a None answer is
    a proof at the given cards.
    """
    support = frozenset(tuple(o) for o in support)
    if not support:
        raise ValueError("support must be nonempty")
    cells = pattern_cells(cards)
    if sum(cells) > cell_cap:
        raise ResourceCapError(
            f"{sum(cells)} response cells exceed the cap {cell_cap}; raise cell_cap"
        )
    if cards == (2, 2, 2):
        hits = _scan_patterns_222(support, first_only=True)
        if not hits:
            return None
        flat = hits[0]
        return (flat[0:4], flat[4:8], flat[8:12])
    grid = list(product(*(range(c) for c in cards)))
    cell_of = []
    for p in range(3):
        j1, j2 = _VIEW[p]
        cell_of.append({lam: lam[j1] * cards[j2] + lam[j2] for lam in grid})

    # assign cells in grid-point-major order so every grid point becomes
    # fully checkable as early as possible
    order = []
    seen_cells = set()
    for lam in grid:
        for p in range(3):
            key = (p, cell_of[p][lam])
            if key not in seen_cells:
                seen_cells.add(key)
                order.append(key)
    marks = [[None] * cells[p] for p in range(3)]

    def assignment_matches() -> bool:
        covered = set()
        for lam in grid:
            per_party = [
                tuple(a for a in (0, 1) if _PERMIT[marks[p][cell_of[p][lam]]][a])
                for p in range(3)
            ]
            for outs in product(*per_party):
                if outs not in support:
                    return False
                covered.add(outs)
        return covered == support

    def dfs(k: int) -> TrianglePattern | None:
        if k == len(order):
            if assignment_matches():
                return tuple(tuple(row) for row in marks)
            return None
        p, c = order[k]
        for mark in (ZERO, ONE, INTERIOR):
            marks[p][c] = mark
            # check only grid points whose three cells are now all assigned
            feasible = True
            for lam in grid:
                if cell_of[p][lam] != c:
                    continue
                per_party = []
                done = True
                for q in range(3):
                    mq = marks[q][cell_of[q][lam]]
                    if mq is None:
                        done = False
                        break
                    per_party.append(tuple(a for a in (0, 1) if _PERMIT[mq][a]))
                if not done:
                    continue
                for outs in product(*per_party):
                    if outs not in support:
                        feasible = False
                        break
                if not feasible:
                    break
            if feasible:
                hit = dfs(k + 1)
                if hit is not None:
                    return hit
            marks[p][c] = None
        return None

    return dfs(0)


# ---------------------------------------------------------------------------
# Numeric feasibility with exact re-verification


@dataclass(frozen=True)
class FeasibilityProblem:
    """One pruned pattern plus the free probabilities it leaves open."""

    pattern: TrianglePattern
    cards: tuple[int, int, int] = (2, 2, 2)

    @property
    def interior_cells(self) -> list[tuple[int, int]]:
        return [
            (p, k)
            for p in range(3)
            for k, mark in enumerate(self.pattern[p])
            if mark == INTERIOR
        ]

    @property
    def unknown_count(self) -> int:
        return sum(c - 1 for c in self.cards) + len(self.interior_cells)


def model_from_parameters(
    problem: FeasibilityProblem, source_probs, interior_probs
) -> FiniteLocalModel:
    """Triangle model realizing the pattern with the given free probabilities.

    ``source_probs[j]`` is P(source j = 0) at cards 2 (general cards take a
    full distribution).  ``interior_probs`` fills the INTERIOR cells in the
    order of :attr:`FeasibilityProblem.interior_cells`.
    """
    cards = problem.cards
    net = Network.triangle()
    params = list(source_probs) + list(interior_probs)
    exact = all(isinstance(v, (int, Fraction)) for v in params)
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    dists = []
    for j, p in enumerate(source_probs):
        if cards[j] == 2 and not isinstance(p, (tuple, list)):
            dists.append((p, one - p))
        else:
            dists.append(tuple(p))
    it = iter(interior_probs)
    responses = []
    for p in range(3):
        cols = []
        for mark in problem.pattern[p]:
            if mark == ZERO:
                cols.append((zero, one))
            elif mark == ONE:
                cols.append((one, zero))
            else:
                t = next(it)
                cols.append((t, one - t))
        responses.append((tuple(cols),))
    flavor = EXACT if exact else "float"
    return FiniteLocalModel(net, cards, tuple(dists), tuple(responses), flavor)


def numeric_feasibility(
    problem: FeasibilityProblem,
    target: Behavior,
    starts: int = 1000,
    seed: int = 0,
    denominator_cap: int = 10**4,
    residual_tol: float = 1e-10,
) -> FiniteLocalModel | None:
    """Multistart projected coordinate descent on the squared residual of the
    eight behavior equations; candidates below the residual tolerance are
    rationalized and re-verified exactly.  Only exact successes are returned,
    so None is no proof of infeasibility.
    """
    import random

    if problem.cards != (2, 2, 2):
        raise ValueError("numeric search is implemented for cards (2,2,2)")
    rng = random.Random(seed)
    tgt = [float(v) for v in target.values]
    n_interior = len(problem.interior_cells)
    n_unknowns = 3 + n_interior
    lo, hi = 1e-6, 1 - 1e-6

    permit0 = [[None] * 4 for _ in range(3)]  # P(out=0 | cell) as 0/1/None
    for p in range(3):
        for k, mark in enumerate(problem.pattern[p]):
            permit0[p][k] = {ZERO: 0.0, ONE: 1.0, INTERIOR: None}[mark]
    interior_index = {pk: 3 + i for i, pk in enumerate(problem.interior_cells)}

    grid = [(al, be, ga) for al in range(2) for be in range(2) for ga in range(2)]
    cell_at = [[lam[j1] * 2 + lam[j2] for lam in grid] for j1, j2 in _VIEW]

    def behavior_of(u: list[float]) -> list[float]:
        out = [0.0] * 8
        for gi, lam in enumerate(grid):
            w = 1.0
            for j in range(3):
                w *= u[j] if lam[j] == 0 else 1 - u[j]
            pr0 = []
            for p in range(3):
                cell = cell_at[p][gi]
                v = permit0[p][cell]
                pr0.append(u[interior_index[p, cell]] if v is None else v)
            for a in (0, 1):
                pa = pr0[0] if a == 0 else 1 - pr0[0]
                if pa == 0.0:
                    continue
                for b in (0, 1):
                    pb = pr0[1] if b == 0 else 1 - pr0[1]
                    if pb == 0.0:
                        continue
                    for c in (0, 1):
                        pc = pr0[2] if c == 0 else 1 - pr0[2]
                        out[a * 4 + b * 2 + c] += w * pa * pb * pc
        return out

    def residual(u):
        beh = behavior_of(u)
        return sum((x - y) ** 2 for x, y in zip(beh, tgt))

    for _ in range(starts):
        u = [rng.uniform(0.05, 0.95) for _ in range(n_unknowns)]
        res = residual(u)
        for _ in range(200):
            improved = False
            for k in range(n_unknowns):
                # the behavior is multilinear, so the residual is an exact
                # parabola in coordinate k: fit it from three evaluations
                saved = u[k]
                u[k] = 0.0
                f0 = residual(u)
                u[k] = 1.0
                f1 = residual(u)
                u[k] = 0.5
                fh = residual(u)
                a2 = 2 * (f0 + f1 - 2 * fh)
                if a2 > 1e-18:
                    best = min(max((3 * f0 - 4 * fh + f1) / (2 * a2), lo), hi)
                else:
                    best = saved
                u[k] = best
                new = residual(u)
                if new > res + 1e-15:
                    u[k] = saved
                    new = residual(u)
                if new < res - 1e-16:
                    improved = True
                res = new
            if res < residual_tol * 1e-4 or not improved:
                break
        if res < residual_tol:
            approx = [Fraction(v).limit_denominator(denominator_cap) for v in u]
            if any(not 0 < v < 1 for v in approx):
                continue
            model = model_from_parameters(
                problem, approx[:3], approx[3:]
            )
            if evaluate(model).values == tuple(Fraction(v) for v in target.values):
                return model
    return None
