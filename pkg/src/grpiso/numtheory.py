"""Small integer helpers: primality, factorization, unit-group lifts."""
from __future__ import annotations

import math
import random
from functools import reduce

__all__ = [
    "is_prime", "factorint", "prime_factors", "lcm", "lcm_list", "divisors",
    "totient", "units", "lift_unit", "multiplicative_order_mod",
]

FACTOR_LIMIT = 2**63

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        c = rng.randrange(1, n)
        y = rng.randrange(0, n)
        m, g, r, q = 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorint(n: int, seed: int = 0) -> dict[int, int]:
    """Prime factorization {p: e} of n >= 1 (trial division, then Pollard rho)."""
    if n < 1:
        raise ValueError("factorint needs a positive integer")
    if n >= FACTOR_LIMIT:
        raise ValueError(f"{n} exceeds the factorization guard 2**63")
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 17
    while f * f <= n and f < 1000:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    rng = random.Random(seed)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m, rng)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def prime_factors(n: int) -> list[int]:
    return list(factorint(n))


def lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b if a and b else 0


def lcm_list(xs) -> int:
    return reduce(lcm, xs, 1)


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorint(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def totient(n: int) -> int:
    t = n
    for p in factorint(n):
        t = t // p * (p - 1)
    return t


def units(m: int) -> list[int]:
    """Z_m^*, with Z_1^* = {0} (the trivial group, written as residue 0 = 1 mod 1)."""
    if m == 1:
        return [0]
    return [k for k in range(1, m) if math.gcd(k, m) == 1]


def lift_unit(alpha: int, small: int, m: int) -> int:
    """Lift alpha in Z_small^* to k in Z_m^* with k = alpha (mod small); small | m.

    k = alpha + small * prod(q^delta) over the primes q of m dividing neither
    small nor alpha.
    """
    if m % small:
        raise ValueError(f"{small} does not divide {m}")
    if math.gcd(alpha, small) != 1:
        raise ValueError(f"{alpha} is not a unit mod {small}")
    if m == 1:
        return 0
    alpha %= small
    q_part = 1
    for q, e in factorint(m).items():
        if small % q and alpha % q:
            q_part *= q**e
    k = (alpha + small * q_part) % m
    assert math.gcd(k, m) == 1
    return k


def multiplicative_order_mod(a: int, n: int) -> int:
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not invertible mod {n}")
    if n == 1:
        return 1
    order = totient(n)
    for p in factorint(order):
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order
