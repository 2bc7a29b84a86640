"""A small qudit state-vector simulator for period finding and the abelian HSP.

States live on Z_{n_1} x ... x Z_{n_t}; the oracle register is never stored
explicitly: measuring it is simulated by picking a random domain point and
collapsing onto its level set, which yields the same post-measurement state.
"""
from __future__ import annotations

import math
import random
from typing import Callable, Hashable, Sequence

import numpy as np

from . import intlin
from .numtheory import factorint

__all__ = [
    "StateVector", "qft", "inverse_qft", "measure", "coset_state",
    "hsp_sample", "hsp_recover", "shor_order", "ShorFailure", "SizeGuard",
]

MAX_AMPLITUDES = 2**14


class SizeGuard(ValueError):
    pass


class ShorFailure(RuntimeError):
    pass


class StateVector:
    """Amplitudes indexed by a product of cyclic sets, shape ``dims``."""

    def __init__(self, dims: Sequence[int], amplitudes: np.ndarray | None = None):
        self.dims = tuple(int(n) for n in dims)
        size = math.prod(self.dims)
        if size > MAX_AMPLITUDES:
            raise SizeGuard(f"{size} amplitudes exceed the simulator limit {MAX_AMPLITUDES}")
        if amplitudes is None:
            amplitudes = np.zeros(self.dims, dtype=complex)
            amplitudes[(0,) * len(self.dims)] = 1.0
        self.amps = np.asarray(amplitudes, dtype=complex).reshape(self.dims)

    @classmethod
    def basis(cls, dims: Sequence[int], index: Sequence[int]) -> "StateVector":
        s = cls(dims)
        s.amps[...] = 0
        s.amps[tuple(index)] = 1.0
        return s

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def copy(self) -> "StateVector":
        return StateVector(self.dims, self.amps.copy())


def qft(state: StateVector, component: int) -> StateVector:
    """|j> -> n^{-1/2} sum_k exp(2 pi i jk / n) |k> on one tensor factor (in place)."""
    state.amps = np.fft.ifft(state.amps, axis=component, norm="ortho")
    return state


def inverse_qft(state: StateVector, component: int) -> StateVector:
    state.amps = np.fft.fft(state.amps, axis=component, norm="ortho")
    return state


def measure(state: StateVector, rng: random.Random) -> tuple[int, ...]:
    probs = state.probabilities().ravel()
    probs = probs / probs.sum()
    r = rng.random()
    idx = int(np.searchsorted(np.cumsum(probs), r, side="right"))
    idx = min(idx, probs.size - 1)
    return tuple(int(i) for i in np.unravel_index(idx, state.dims))


def coset_state(dims: Sequence[int], f: Callable[[tuple], Hashable], rng: random.Random) -> StateVector:
    """Uniform superposition, oracle query, oracle register measured."""
    dims = tuple(dims)
    state = StateVector(dims)
    points = list(np.ndindex(*dims))
    values = [f(tuple(int(c) for c in pt)) for pt in points]
    observed = values[rng.randrange(len(points))]
    amps = np.zeros(dims, dtype=complex)
    for pt, v in zip(points, values):
        if v == observed:
            amps[pt] = 1.0
    state.amps = amps / np.sqrt(np.sum(np.abs(amps) ** 2))
    return state


def hsp_sample(orders: Sequence[int], f: Callable[[tuple], Hashable], rng: random.Random) -> tuple[int, ...]:
    """One character c of the domain with sum c_i k_i / n_i in Z for every k in the hidden K."""
    state = coset_state(orders, f, rng)
    for axis in range(len(state.dims)):
        qft(state, axis)
    return measure(state, rng)


def _annihilator(orders: Sequence[int], chars: Sequence[Sequence[int]]) -> list[list[int]]:
    # K = {k : sum_i c_i (N / n_i) k_i = 0 mod N for every sampled c}
    N = math.lcm(*orders) if orders else 1
    images = [[c[i] * (N // n) for c in chars] for i, n in enumerate(orders)]
    if not chars:
        return [[int(i == j) for i in range(len(orders))] for j in range(len(orders))]
    return intlin.kernel_mod(images, [N] * len(chars), orders)


def hsp_recover(orders: Sequence[int], f: Callable[[tuple], Hashable], rng: random.Random | None = None,
                max_rounds: int = 8) -> list[list[int]]:
    """Hidden subgroup from repeated character sampling; the candidate is checked against f."""
    rng = rng or random.Random(0)
    orders = list(orders)
    if not orders:
        return []
    zero = tuple(0 for _ in orders)
    f0 = f(zero)
    chars: list[tuple[int, ...]] = []
    batch = len(orders) + 4 + sum(e for n in orders for e in factorint(n).values())
    for _ in range(max_rounds):
        chars += [hsp_sample(orders, f, rng) for _ in range(batch)]
        gens = _annihilator(orders, chars)
        if all(f(tuple(g)) == f0 for g in gens):
            return gens
    raise ShorFailure("hidden subgroup not recovered within the sampling budget")


def _convergent_denominators(num: int, den: int, bound: int) -> list[int]:
    a, b = num, den
    cf = []
    while b:
        q = a // b
        cf.append(q)
        a, b = b, a - q * b
    h0, h1, k0, k1 = 1, cf[0] if cf else 0, 0, 1
    out = [1]
    for q in cf[1:]:
        h0, h1 = h1, q * h1 + h0
        k0, k1 = k1, q * k1 + k0
        if k1 > bound:
            break
        out.append(k1)
    return out


def shor_order(a: int, N: int, rng: random.Random | None = None, attempts: int = 12,
               transcript: list | None = None) -> int:
    """Multiplicative order of a mod N by simulated period finding; verified before returning."""
    if math.gcd(a, N) != 1:
        raise ValueError(f"gcd({a}, {N}) != 1")
    if N > 64:
        raise SizeGuard("shor_order is limited to N <= 64")
    rng = rng or random.Random(0)
    a %= N
    if N == 1 or a == 1:
        return 1
    Q = 1
    while Q < N * N:
        Q *= 2
    log = transcript if transcript is not None else []
    found = 1
    for attempt in range(attempts):
        state = coset_state([Q], lambda x: pow(a, x[0], N), rng)
        qft(state, 0)
        (c,) = measure(state, rng)
        cands = _convergent_denominators(c, Q, N)
        r = None
        for den in cands:
            for mult in range(1, 4):
                cand = math.lcm(den * mult, found)
                if pow(a, cand, N) == 1:
                    r = cand
                    break
            if r:
                break
        log.append({"attempt": attempt, "measured": c, "Q": Q, "denominators": cands, "candidate": r})
        if r is None:
            found = math.lcm(found, max(cands))
            continue
        for p in factorint(r):
            while r % p == 0 and pow(a, r // p, N) == 1:
                r //= p
        return r
    raise ShorFailure(f"order of {a} mod {N} not found in {attempts} attempts")
