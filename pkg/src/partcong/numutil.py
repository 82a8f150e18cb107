"""Elementary number theory shared by the rest of the package.

Rationals are plain :class:`fractions.Fraction` values; they are always in
lowest terms with a positive denominator and ``math.floor`` on them is exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

Rational = Fraction

__all__ = [
    "Rational",
    "divisors",
    "factorize",
    "prime_divisors",
    "is_squarefree",
    "euler_phi",
    "index_gamma0",
    "square_classes",
    "kronecker",
    "squarefree_core",
]


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization as ``((p, e), ...)`` with p increasing."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


@lru_cache(maxsize=4096)
def _divisors(n: int) -> tuple[int, ...]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return tuple(sorted(divs))


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n`` in increasing order."""
    if n < 1:
        raise ValueError(f"divisors needs n >= 1, got {n}")
    return list(_divisors(n))


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def index_gamma0(N: int) -> int:
    """Index of Gamma_0(N) in SL_2(Z): N * prod_{p | N} (1 + 1/p)."""
    if N < 1:
        raise ValueError(f"level must be positive, got {N}")
    out = N
    for p, _ in factorize(N):
        out = out // p * (p + 1)
    return out


@lru_cache(maxsize=1024)
def _square_classes(n: int) -> frozenset[int]:
    if n == 1:
        return frozenset({0})
    return frozenset(x * x % n for x in range(1, n) if gcd(x, n) == 1)


def square_classes(n: int) -> frozenset[int]:
    """Squares of units of Z/nZ, as residues in [0, n).

    Exhaustive over the units; the moduli used here (24m for small m) are tiny.
    """
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    return _square_classes(n)


def kronecker(a: int, d: int) -> int:
    """Kronecker symbol (a | d), extended to all integers d.

    Conventions: (a | 0) = 1 iff a = +-1; (a | -1) = -1 if a < 0 else 1;
    (a | 2) = 0 for even a and (-1)^((a^2-1)/8) otherwise.
    """
    if d == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if d < 0:
        d = -d
        if a < 0:
            result = -result
    # factor out powers of two in d
    v = 0
    while d % 2 == 0:
        d //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a | d) for odd positive d
    a %= d
    while a:
        while a % 2 == 0:
            a //= 2
            if d % 8 in (3, 5):
                result = -result
        a, d = d, a
        if a % 4 == 3 and d % 4 == 3:
            result = -result
        a %= d
    return result if d == 1 else 0


def squarefree_core(x: Fraction | int) -> int:
    """Signed squarefree integer c with x = c * (rational square).

    ``x`` must be nonzero.
    """
    x = Fraction(x)
    if x == 0:
        raise ValueError("squarefree core of 0 is undefined")
    core = -1 if x < 0 else 1
    exps: dict[int, int] = {}
    for p, e in factorize(abs(x.numerator)):
        exps[p] = exps.get(p, 0) + e
    for p, e in factorize(x.denominator):
        exps[p] = exps.get(p, 0) + e
    for p, e in exps.items():
        if e % 2:
            core *= p
    return core
