"""Numeric quantum oracle for the two-singlet entanglement-swapping test.

Two singlet pairs, ordering Alice (qubit 0) x Bob (qubits 1, 2) x Charlie
(qubit 3).  Alice and Charlie measure (sigma_z +- sigma_x)/sqrt(2) behind
detectors of efficiency eta; on nondetection Alice outputs (-1)^(x+1) and
Charlie +1, which folds into the effective observables below.  Bob performs a
four-outcome Bell measurement read out as two +-1 bits.  Floating arithmetic
suffices: every target is a rational polynomial in eta and all comparisons are
against 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .network import TOL

_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def _ket(vec) -> np.ndarray:
    v = np.array(vec, dtype=complex)
    return v / np.linalg.norm(v)


_PHI_PLUS = _ket([1, 0, 0, 1])
_PHI_MINUS = _ket([1, 0, 0, -1])
_PSI_PLUS = _ket([0, 1, 1, 0])
_PSI_MINUS = _ket([0, 1, -1, 0])


def _proj(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj())


@dataclass(frozen=True)
class EffectiveObservables:
    """Detector-efficiency-adjusted measurement operators."""

    eta: float
    a0: np.ndarray
    a1: np.ndarray
    c0: np.ndarray
    c1: np.ndarray
    b0: np.ndarray
    b1: np.ndarray
    b01: np.ndarray


def build_operators(eta: float) -> EffectiveObservables:
    if not 0 <= eta <= 1:
        raise ValueError(f"efficiency must lie in [0, 1], got {eta}")
    bar0 = (_SZ + _SX) / np.sqrt(2)
    bar1 = (_SZ - _SX) / np.sqrt(2)
    a0 = eta * bar0 - (1 - eta) * _I2
    a1 = eta * bar1 + (1 - eta) * _I2
    c0 = eta * bar0 + (1 - eta) * _I2
    c1 = eta * bar1 + (1 - eta) * _I2
    bell = {
        (+1, +1): _proj(_PHI_PLUS),
        (-1, +1): _proj(_PHI_MINUS),
        (+1, -1): _proj(_PSI_PLUS),
        (-1, -1): _proj(_PSI_MINUS),
    }
    for p in bell.values():
        assert np.abs(p @ p - p).max() < TOL, "projector not idempotent"
        assert np.abs(p - p.conj().T).max() < TOL, "projector not Hermitian"
    b0 = sum(k[0] * p for k, p in bell.items())
    b1 = sum(k[1] * p for k, p in bell.items())
    b01 = sum(k[0] * k[1] * p for k, p in bell.items())
    return EffectiveObservables(eta, a0, a1, c0, c1, b0, b1, b01)


def _state() -> np.ndarray:
    return np.kron(_proj(_PSI_MINUS), _proj(_PSI_MINUS))


def _part_operator(obs: EffectiveObservables, which: str, part: tuple) -> np.ndarray:
    singles = {
        "a": {(0,): obs.a0, (1,): obs.a1},
        "c": {(0,): obs.c0, (1,): obs.c1},
        "b": {(0,): obs.b0, (1,): obs.b1},
    }
    dim = 4 if which == "b" else 2
    if part == ():
        return np.eye(dim, dtype=complex)
    if part == (0, 1):
        if which == "b":
            return obs.b01
        m = singles[which][(0,)] @ singles[which][(1,)]
        return m
    return singles[which][part]


def correlator(obs: EffectiveObservables, a_part: tuple, b_part: tuple, c_part: tuple) -> float:
    """<A-part B-part C-part> on the two-singlet state; the imaginary part
    must vanish to tolerance."""
    op = np.kron(np.kron(_part_operator(obs, "a", a_part), _part_operator(obs, "b", b_part)),
                 _part_operator(obs, "c", c_part))
    value = np.trace(_state() @ op)
    assert abs(value.imag) < TOL, f"correlator has imaginary part {value.imag}"
    return float(value.real)


# printed target polynomials for every observable Table-row entry, keyed by
# (a_part, b_part, c_part) with at most one A and one C factor
def _expected_entries() -> dict:
    e = {}
    single = ((), (0,), (1,))
    for ap in single:
        for cp in single:
            for bp in ((), (0,), (1,), (0, 1)):
                e[ap, bp, cp] = lambda eta: 0.0
    e[(), (), ()] = lambda eta: 1.0
    e[(), (), (0,)] = e[(), (), (1,)] = lambda eta: 1 - eta
    e[(0,), (), ()] = lambda eta: eta - 1
    e[(1,), (), ()] = lambda eta: 1 - eta
    e[(0,), (), (0,)] = e[(0,), (), (1,)] = lambda eta: -((eta - 1) ** 2)
    e[(1,), (), (0,)] = e[(1,), (), (1,)] = lambda eta: (eta - 1) ** 2
    e[(0,), (0,), (0,)] = e[(1,), (0,), (1,)] = lambda eta: eta * eta / 2
    e[(0,), (0,), (1,)] = e[(1,), (0,), (0,)] = lambda eta: -eta * eta / 2
    for ap in ((0,), (1,)):
        for cp in ((0,), (1,)):
            e[ap, (1,), cp] = lambda eta: eta * eta / 2
    return e


def full_table(eta: float) -> dict:
    """All correlators with at most one A and one C factor, checked entry by
    entry against the printed polynomials; any mismatch raises."""
    obs = build_operators(eta)
    expected = _expected_entries()
    table = {}
    for (ap, bp, cp), target in expected.items():
        value = correlator(obs, ap, bp, cp)
        want = target(eta)
        if abs(value - want) > TOL:
            raise AssertionError(
                f"correlator {ap}|{bp}|{cp} at eta={eta}: got {value}, expected {want}"
            )
        table[ap, bp, cp] = value
    return table


def assembled_probabilities(eta: float) -> dict:
    """The 64 observable outcome probabilities P(a, b0, b1, c | x, z), keyed
    by setting pair (x, z), assembled from single-operator correlators."""
    obs = build_operators(eta)
    a_ops = ((0,), (1,))
    c_ops = ((0,), (1,))
    out = {}
    for x, z in product(range(2), range(2)):
        probs = {}
        for sa, sb0, sb1, sc in product((+1, -1), repeat=4):
            total = 0.0
            for ia, ib0, ib1, ic in product((0, 1), repeat=4):
                ap = a_ops[x] if ia else ()
                bp = ()
                if ib0 and ib1:
                    bp = (0, 1)
                elif ib0:
                    bp = (0,)
                elif ib1:
                    bp = (1,)
                cp = c_ops[z] if ic else ()
                sign = (sa ** ia) * (sb0 ** ib0) * (sb1 ** ib1) * (sc ** ic)
                total += sign * correlator(obs, ap, bp, cp)
            probs[sa, sb0, sb1, sc] = total / 16
        out[x, z] = probs
    return out
