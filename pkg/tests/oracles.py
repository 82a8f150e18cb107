"""Independent reference computations.

Nothing here imports the series engine: products are expanded factor by
factor, (1 - q^n)^-1 as a running prefix sum, (1 + q^n) as a shifted add.
"""

from math import gcd

import numpy as np


def naive_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def naive_inverse(a, n):
    assert a[0] in (1, -1)
    b = [0] * n
    b[0] = a[0]
    for k in range(1, n):
        b[k] = -a[0] * sum(a[j] * b[k - j] for j in range(1, min(k, len(a) - 1) + 1))
    return b


def euler_product_power(delta, e, n):
    """prod_{j>=1} (1 - q^{j delta})^e to n terms, one linear factor at a time."""
    f = [0] * n
    f[0] = 1
    j = delta
    while j < n:
        for _ in range(abs(e)):
            if e > 0:
                for i in range(n - 1, j - 1, -1):
                    f[i] -= f[i - j]
            else:
                for i in range(j, n):
                    f[i] += f[i - j]
        j += delta
    return f


def eta_product_oracle(exponents, n):
    """exponents: {delta: r}."""
    f = [0] * n
    f[0] = 1
    for delta, e in exponents.items():
        f = naive_mul(f, euler_product_power(delta, e, n), n)
    return f


def overcubic_pair_oracle(n):
    """bbar(0..n-1) from prod (1+q^j)^2 (1+q^2j)^2 / ((1-q^j)^2 (1-q^2j)^2)."""
    f = [0] * n
    f[0] = 1

    def times_plus(j):
        for i in range(n - 1, j - 1, -1):
            f[i] += f[i - j]

    def div_minus(j):
        for i in range(j, n):
            f[i] += f[i - j]

    for j in range(1, n):
        for _ in range(2):
            times_plus(j)
            times_plus(2 * j)
            div_minus(j)
            div_minus(2 * j)
    return f


def overcubic_oracle(n):
    """abar(0..n-1) from prod (1+q^j)(1+q^2j) / ((1-q^j)(1-q^2j))."""
    f = [0] * n
    f[0] = 1
    for j in range(1, n):
        for step in (j, 2 * j):
            for i in range(n - 1, step - 1, -1):
                f[i] += f[i - step]
            for i in range(step, n):
                f[i] += f[i - step]
    return f


def cubic_pair_oracle(n):
    """b(0..n-1) as the convolution of 1/(q;q)^2 and 1/(q^2;q^2)^2."""
    return naive_mul(euler_product_power(1, -2, n), euler_product_power(2, -2, n), n)


def euler_inverse_mod(n, u, factors):
    """prod over (delta, e) of (q^delta; q^delta)^-e mod u, e > 0, by strided cumulative sums."""
    f = np.zeros(n, dtype=np.int64)
    f[0] = 1
    for delta, e in factors:
        for j in range(delta, n, delta):
            rows = -(-n // j)
            for _ in range(e):
                g = np.zeros(rows * j, dtype=np.int64)
                g[:n] = f
                f = (np.cumsum(g.reshape(rows, j), axis=0) % u).reshape(-1)[:n]
    return [int(x) for x in f]


def cubic_pair_mod_oracle(n, u):
    """b(0..n-1) mod u."""
    return euler_inverse_mod(n, u, [(1, 2), (2, 2)])


def partition_numbers(n):
    """p(0..n-1) by counting partitions with parts 1..n-1 (coin-change DP)."""
    p = [0] * n
    p[0] = 1
    for part in range(1, n):
        for i in range(part, n):
            p[i] += p[i - part]
    return p


def brute_square_classes(n):
    return {x * x % n for x in range(n) if gcd(x, n) == 1} if n > 1 else {0}
