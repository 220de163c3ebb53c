"""Exact integer primitives: valuations, base-p digits, the lambda_p sum,
and degrees of maximal real subfields of prime-power cyclotomic fields.

All functions operate on Python ints (arbitrary precision) and never wrap.
"""
from __future__ import annotations

from functools import lru_cache

# Deterministic Miller-Rabin witness set, valid for all n < 3,317,044,064,679,887,385,961,981
# (Sorenson & Webster 2015).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Uses trial division by a few small primes, then strong pseudoprime tests
    with a fixed witness set that is proven correct below ~3.3e24.  Inputs at
    or above that limit are rejected rather than answered probabilistically.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n >= _MR_DETERMINISTIC_LIMIT:
        raise ValueError(f"primality test is only deterministic below {_MR_DETERMINISTIC_LIMIT}")
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int) -> int:
    """Return p, raising ValueError if it is not prime."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound, ascending (sieve of Eratosthenes)."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(bound**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, bound + 1) if sieve[i]]


def valuation(p: int, n: int) -> int:
    """Largest k such that p**k divides n.

    Undefined (and rejected) for n = 0.
    """
    require_prime(p)
    if n <= 0:
        raise ValueError(f"valuation of {n} is undefined; need n >= 1")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def digits_base_p(p: int, m: int) -> list[int]:
    """Little-endian base-p digits of m; empty list for m = 0."""
    require_prime(p)
    if m < 0:
        raise ValueError("m must be non-negative")
    digits = []
    while m:
        m, c = divmod(m, p)
        digits.append(c)
    return digits


def lambda_p(p: int, m: int) -> int:
    """Digit-weighted sum: for m = sum c_i p^i, returns sum i * c_i * p^i.

    Vanishes exactly when m < p, and satisfies lambda_p(m) >= m - p + 1
    for m >= 1.  lambda_p(0) = 0 (empty sum).
    """
    require_prime(p)
    return sum(i * c * p**i for i, c in enumerate(digits_base_p(p, m)))


def real_cyclotomic_degree(p: int, r: int) -> int:
    """Degree over Q of the maximal real subfield of the p^r-th cyclotomic field.

    Equals max(1, phi(p^r) / 2): the field is Q itself for r = 0, for
    p = 2 with r <= 2, and for p = 3 with r <= 1.
    """
    require_prime(p)
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return 1
    if p == 2:
        return 1 if r <= 2 else 2 ** (r - 2)
    return p ** (r - 1) * (p - 1) // 2
