"""Truncated formal power series over Z or Z/uZ.

A :class:`TruncatedSeries` holds the coefficients ``c_0..c_T`` of a power
series in ``q`` known modulo ``q^(T+1)``.  Exact coefficients are Python
integers (numpy object arrays); residues modulo a word-sized ``u`` live in
``int64`` arrays.

Multiplication picks one of two kernels:

* sparse convolution when one operand has few nonzero terms (Euler products,
  which are sparse by the pentagonal number theorem);
* Kronecker substitution otherwise: both operands are packed into one big
  integer, multiplied by GMP, and unpacked.  This is exact and, for residues
  mod small u, needs only 2*log2(u) + log2(T) bits per coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterable, Mapping, NamedTuple, Sequence

import gmpy2
import numpy as np

from .numutil import divisors

__all__ = [
    "Domain",
    "EXACT",
    "MAX_TRUNCATION",
    "TruncatedSeries",
    "EtaExponents",
    "Comparison",
    "pentagonal",
    "eta_power",
    "eta_product",
    "mul",
    "inverse",
    "power",
    "extract_ap",
    "substitute",
    "congruent",
]

# guard against accidental blow-up in substitute()
MAX_TRUNCATION = 2_000_000

# residues below this bound fit int64 arithmetic with room for one product
_WORD_MODULUS = 1 << 31

# inverse() uses the direct recurrence while T * (nonzero terms) stays below this
_RECURRENCE_BUDGET = 200_000


@dataclass(frozen=True)
class Domain:
    """Coefficient domain: exact integers (``modulus=None``) or Z/uZ."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError(f"modular domain needs modulus >= 2, got {self.modulus}")

    @classmethod
    def mod(cls, u: int) -> Domain:
        return cls(int(u))

    @property
    def exact(self) -> bool:
        return self.modulus is None

    @property
    def kind(self) -> str:
        return "exact" if self.modulus is None else "modular"

    @property
    def dtype(self):
        if self.modulus is not None and self.modulus <= _WORD_MODULUS:
            return np.int64
        return object

    def __str__(self) -> str:
        return "exact" if self.modulus is None else f"mod{self.modulus}"

    @classmethod
    def parse(cls, text: str | int | None) -> Domain:
        """Inverse of ``str``: accepts ``"exact"``, ``"mod49"``, ``49`` or ``None``."""
        if text is None or text == "exact":
            return EXACT
        if isinstance(text, int):
            return cls(text)
        text = str(text)
        if text.startswith("mod"):
            text = text[3:]
        return cls(int(text))


EXACT = Domain()


def _coerce(values, domain: Domain) -> np.ndarray:
    u = domain.modulus
    if domain.dtype is object:
        arr = np.empty(len(values), dtype=object)
        if u is None:
            arr[:] = [int(v) for v in values]
        else:
            arr[:] = [int(v) % u for v in values]
        return arr
    if isinstance(values, np.ndarray) and values.dtype != object:
        return np.mod(values.astype(np.int64, copy=False), u)
    return np.array([int(v) % u for v in values], dtype=np.int64)


class TruncatedSeries:
    """Immutable truncated power series ``sum_{n<=T} c_n q^n``."""

    __slots__ = ("domain", "coeffs")

    def __init__(self, coeffs: Iterable[int] | np.ndarray, domain: Domain = EXACT):
        if not isinstance(coeffs, np.ndarray):
            coeffs = list(coeffs)
        if len(coeffs) == 0:
            raise ValueError("a truncated series needs at least one coefficient")
        arr = _coerce(coeffs, domain)
        arr.flags.writeable = False
        self.domain = domain
        self.coeffs = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray, domain: Domain) -> TruncatedSeries:
        # arr must already be canonical for the domain
        out = object.__new__(cls)
        arr.flags.writeable = False
        out.domain = domain
        out.coeffs = arr
        return out

    @classmethod
    def one(cls, T: int, domain: Domain = EXACT) -> TruncatedSeries:
        return cls.monomial(0, T, domain)

    @classmethod
    def zero(cls, T: int, domain: Domain = EXACT) -> TruncatedSeries:
        return cls._wrap(_zeros(T + 1, domain), domain)

    @classmethod
    def monomial(cls, k: int, T: int, domain: Domain = EXACT, c: int = 1) -> TruncatedSeries:
        arr = _zeros(T + 1, domain)
        if k <= T:
            arr[k] = c if domain.modulus is None else c % domain.modulus
        return cls._wrap(arr, domain)

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    T = truncation

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        return int(self.coeffs[n])

    def tolist(self) -> list[int]:
        return [int(c) for c in self.coeffs]

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"TruncatedSeries([{head}{more}], T={self.truncation}, {self.domain})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.domain == other.domain
            and len(self) == len(other)
            and bool(np.all(self.coeffs == other.coeffs))
        )

    __hash__ = None

    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.coeffs))

    def truncate(self, T: int) -> TruncatedSeries:
        if T > self.truncation:
            raise ValueError(f"cannot extend truncation {self.truncation} to {T}")
        return self._wrap(self.coeffs[: T + 1].copy(), self.domain)

    def reduce(self, u: int) -> TruncatedSeries:
        """Image in Z/uZ.  A modular series can only be reduced to a divisor of its modulus."""
        if self.domain.modulus is not None and self.domain.modulus % u:
            raise ValueError(f"cannot reduce mod {self.domain.modulus} series to mod {u}")
        return TruncatedSeries(self.coeffs, Domain.mod(u))

    def shift(self, k: int) -> TruncatedSeries:
        """Multiply by q^k, keeping the truncation order."""
        arr = _zeros(len(self), self.domain)
        if k <= self.truncation:
            arr[k:] = self.coeffs[: len(self) - k]
        return self._wrap(arr, self.domain)

    def _binary(self, other, op) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            _same_domain(self, other)
            n = min(len(self), len(other))
            arr = op(self.coeffs[:n], other.coeffs[:n])
        else:
            arr = self.coeffs.copy()
            arr[0] = op(arr[0], int(other))
        return self._wrap(_canon(arr, self.domain), self.domain)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._wrap(_canon(-self.coeffs, self.domain), self.domain)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        c = int(other)
        if self.domain.modulus is not None:
            c %= self.domain.modulus
        return self._wrap(_canon(self.coeffs * c, self.domain), self.domain)

    def __rmul__(self, other):
        return self.__mul__(other)


def _zeros(n: int, domain: Domain) -> np.ndarray:
    if domain.dtype is object:
        arr = np.empty(n, dtype=object)
        arr[:] = 0
        return arr
    return np.zeros(n, dtype=np.int64)


def _canon(arr: np.ndarray, domain: Domain) -> np.ndarray:
    if domain.modulus is None:
        return arr
    return arr % domain.modulus


def _same_domain(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.domain != b.domain:
        raise ValueError(f"domain mismatch: {a.domain} vs {b.domain}")


# ---------------------------------------------------------------- multiplication


def _is_sparse(nnz: int, n: int) -> bool:
    return nnz <= max(8, 4 * isqrt(n))


def _sparse_mul(sparse: np.ndarray, dense: np.ndarray, n: int, domain: Domain) -> np.ndarray:
    out = _zeros(n, domain)
    idx = np.flatnonzero(sparse[:n])
    u = domain.modulus
    if domain.dtype is object:
        for j in idx:
            out[j:] += sparse[j] * dense[: n - j]
        return _canon(out, domain)
    # int64: accumulate while the running bound is safe, then fold
    step = (u - 1) * (u - 1)
    budget = (1 << 62) // max(step, 1)
    acc = 0
    for j in idx:
        out[j:] += int(sparse[j]) * dense[: n - j]
        acc += 1
        if acc >= budget:
            out %= u
            acc = 0
    return out % u


_UINT_FOR_WIDTH = {16: np.dtype("<u2"), 32: np.dtype("<u4"), 64: np.dtype("<u8")}


def _kronecker_words(x: np.ndarray, y: np.ndarray, n: int, u: int) -> np.ndarray | None:
    """Kronecker product for int64 residues when a coefficient fits one machine word."""
    bound = (u - 1) * (u - 1) * min(len(x), len(y))
    bits = bound.bit_length()
    width = next((w for w in (16, 32, 64) if bits <= w), None)
    if width is None:
        return None
    dt = _UINT_FOR_WIDTH[width]
    X = gmpy2.mpz.from_bytes(x.astype(dt).tobytes(), "little")
    Y = gmpy2.mpz.from_bytes(y.astype(dt).tobytes(), "little")
    Z = X * Y
    nbytes = n * dt.itemsize
    raw = Z.to_bytes(max(nbytes, (Z.bit_length() + 7) // 8), "little")[:nbytes]
    words = np.frombuffer(raw, dtype=dt)
    if width == 64:
        return (words % np.uint64(u)).astype(np.int64)
    return words.astype(np.int64) % u


def _pack(values: np.ndarray, nbytes: int) -> gmpy2.mpz:
    return gmpy2.mpz.from_bytes(b"".join(int(v).to_bytes(nbytes, "little") for v in values), "little")


def _pack_signed(values: np.ndarray, nbytes: int) -> gmpy2.mpz:
    pos = _pack([v if v > 0 else 0 for v in values], nbytes)
    neg = _pack([-v if v < 0 else 0 for v in values], nbytes)
    return pos - neg


def _kronecker_generic(x: np.ndarray, y: np.ndarray, n: int, domain: Domain) -> np.ndarray:
    signed = domain.modulus is None
    mx = max((abs(int(v)) for v in x), default=0)
    my = max((abs(int(v)) for v in y), default=0)
    out = _zeros(n, domain)
    if mx == 0 or my == 0:
        return out
    bound = mx * my * min(len(x), len(y))
    bits = bound.bit_length() + (1 if signed else 0)
    nb = (bits + 7) // 8
    if signed:
        X, Y = _pack_signed(x, nb), _pack_signed(y, nb)
    else:
        X, Y = _pack(x, nb), _pack(y, nb)
    Z = X * Y
    negate = Z < 0
    if negate:
        Z = -Z
    total = n * nb
    raw = Z.to_bytes(max(total, (Z.bit_length() + 7) // 8), "little")[:total]
    if not signed:
        u = domain.modulus
        out[:] = [int.from_bytes(raw[i * nb:(i + 1) * nb], "little") % u for i in range(n)]
        return out
    # balanced digits: each coefficient lies in (-2^(w-1), 2^(w-1))
    full = 1 << (8 * nb)
    half = full >> 1
    borrow = 0
    vals = []
    for i in range(n):
        v = int.from_bytes(raw[i * nb:(i + 1) * nb], "little") + borrow
        if v >= half:
            vals.append(v - full)
            borrow = 1
        else:
            vals.append(v)
            borrow = 0
    if negate:
        vals = [-v for v in vals]
    out[:] = vals
    return out


def _mul_arrays(x: np.ndarray, y: np.ndarray, n: int, domain: Domain) -> np.ndarray:
    """First n coefficients of x*y (inputs may be shorter than n: missing terms are 0)."""
    x, y = x[:n], y[:n]
    nx, ny = int(np.count_nonzero(x)), int(np.count_nonzero(y))
    if nx == 0 or ny == 0:
        return _zeros(n, domain)
    if _is_sparse(min(nx, ny), n):
        sparse, dense = (x, y) if nx <= ny else (y, x)
        sp = _zeros(n, domain)
        sp[: len(sparse)] = sparse
        dn = _zeros(n, domain)
        dn[: len(dense)] = dense
        return _sparse_mul(sp, dn, n, domain)
    if domain.dtype is not object:
        res = _kronecker_words(x, y, n, domain.modulus)
        if res is not None:
            out = np.zeros(n, dtype=np.int64)
            out[: len(res)] = res
            return out
        xo, yo = x.astype(object), y.astype(object)
        obj = _kronecker_generic(xo, yo, n, _ObjectDomain(domain.modulus))
        return obj.astype(np.int64)
    return _kronecker_generic(x, y, n, domain)


class _ObjectDomain(Domain):
    """Modular domain forced onto object arrays (internal fallback for wide products)."""

    @property
    def dtype(self):
        return object


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product; the result is truncated at the smaller of the two orders."""
    _same_domain(a, b)
    n = min(len(a), len(b))
    return TruncatedSeries._wrap(_mul_arrays(a.coeffs, b.coeffs, n, a.domain), a.domain)


def power(a: TruncatedSeries, e: int) -> TruncatedSeries:
    """a**e for e >= 0 by binary powering."""
    if e < 0:
        return inverse(power(a, -e))
    result = None
    base = a
    while e:
        if e & 1:
            result = base if result is None else mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return TruncatedSeries.one(a.truncation, a.domain) if result is None else result


# ---------------------------------------------------------------------- inverse


def _unit_inverse(c0: int, domain: Domain) -> int:
    if domain.modulus is None:
        if c0 not in (1, -1):
            raise ValueError(f"constant term {c0} is not a unit in Z")
        return c0
    try:
        return pow(c0, -1, domain.modulus)
    except ValueError:
        raise ValueError(f"constant term {c0} is not a unit mod {domain.modulus}") from None


def _inverse_recurrence(a: TruncatedSeries, inv0: int) -> np.ndarray:
    n = len(a)
    u = a.domain.modulus
    support = [(int(j), int(a.coeffs[j])) for j in np.flatnonzero(a.coeffs) if j > 0]
    b = [0] * n
    b[0] = inv0
    for k in range(1, n):
        s = 0
        for j, aj in support:
            if j > k:
                break
            s += aj * b[k - j]
        v = -inv0 * s
        b[k] = v if u is None else v % u
    out = _zeros(n, a.domain)
    out[:] = b
    return out


def _inverse_newton(a: TruncatedSeries, inv0: int) -> np.ndarray:
    dom = a.domain
    n = len(a)
    b = _zeros(1, dom)
    b[0] = inv0
    p = 1
    while p < n:
        p = min(2 * p, n)
        e = _mul_arrays(a.coeffs, b, p, dom)
        t = _mul_arrays(b, e, p, dom)
        nb = _zeros(p, dom)
        nb[: len(b)] = 2 * b
        b = _canon(nb - t, dom)
    return b


def inverse(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse to the same truncation; the constant term must be a unit."""
    inv0 = _unit_inverse(a[0], a.domain)
    if len(a) * a.nonzero_count() <= _RECURRENCE_BUDGET:
        arr = _inverse_recurrence(a, inv0)
    else:
        arr = _inverse_newton(a, inv0)
    return TruncatedSeries._wrap(arr, a.domain)


# ------------------------------------------------------------------ eta powers


def pentagonal(T: int, domain: Domain = EXACT) -> TruncatedSeries:
    """(q; q)_inf to order T: sum over k of (-1)^k q^(k(3k-1)/2)."""
    arr = _zeros(T + 1, domain)
    u = domain.modulus
    arr[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > T:
            break
        sign = -1 if k % 2 else 1
        for g in (g1, g1 + k):
            if g <= T:
                arr[g] = sign if u is None else sign % u
        k += 1
    return TruncatedSeries._wrap(arr, domain)


def substitute(a: TruncatedSeries, d: int, T: int | None = None) -> TruncatedSeries:
    """a(q^d).  Default truncation is d*T_a, capped at MAX_TRUNCATION."""
    if d < 1:
        raise ValueError(f"substitution power must be >= 1, got {d}")
    if T is None:
        T = min(d * a.truncation, MAX_TRUNCATION)
    if T > MAX_TRUNCATION:
        raise ValueError(f"truncation {T} exceeds MAX_TRUNCATION={MAX_TRUNCATION}")
    if T > d * a.truncation + d - 1:
        raise ValueError(f"a series known to q^{a.truncation} gives a(q^{d}) only to q^{d * a.truncation + d - 1}")
    arr = _zeros(T + 1, a.domain)
    m = T // d + 1
    arr[::d] = a.coeffs[:m]
    return TruncatedSeries._wrap(arr, a.domain)


def eta_power(delta: int, e: int, T: int, domain: Domain = EXACT) -> TruncatedSeries:
    """(q^delta; q^delta)_inf ** e to order T."""
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    if e == 0:
        return TruncatedSeries.one(T, domain)
    T1 = T // delta
    base = pentagonal(T1, domain)
    p = power(base, abs(e))
    if e < 0:
        p = inverse(p)
    return p if delta == 1 else substitute(p, delta, T)


@dataclass(frozen=True)
class EtaExponents:
    """Integer exponents r_delta indexed by every divisor delta of the level M."""

    level: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        nd = len(divisors(self.level))
        if len(self.values) != nd:
            raise ValueError(
                f"level {self.level} has {nd} divisors but {len(self.values)} exponents were given"
            )

    @classmethod
    def from_map(cls, level: int, mapping: Mapping[int, int]) -> EtaExponents:
        divs = divisors(level)
        bad = [d for d in mapping if int(d) not in divs]
        if bad:
            raise ValueError(f"{bad} do not divide level {level}")
        m = {int(k): int(v) for k, v in mapping.items()}
        return cls(level, tuple(m.get(d, 0) for d in divs))

    @classmethod
    def of(cls, level: int, values: Sequence[int] | Mapping[int, int]) -> EtaExponents:
        if isinstance(values, Mapping):
            return cls.from_map(level, values)
        return cls(level, tuple(values))

    @property
    def divisors(self) -> list[int]:
        return divisors(self.level)

    def __getitem__(self, delta: int) -> int:
        return self.as_dict()[delta]

    def items(self) -> list[tuple[int, int]]:
        return list(zip(self.divisors, self.values))

    def active(self) -> list[tuple[int, int]]:
        return [(d, r) for d, r in self.items() if r]

    def as_dict(self) -> dict[int, int]:
        return dict(self.items())

    def total(self) -> int:
        """sum of r_delta"""
        return sum(self.values)

    def weighted_total(self) -> int:
        """sum of delta * r_delta"""
        return sum(d * r for d, r in self.items())

    def lift(self, level: int) -> EtaExponents:
        """Same exponents viewed at a multiple of the level."""
        if level % self.level:
            raise ValueError(f"{level} is not a multiple of {self.level}")
        return EtaExponents.from_map(level, self.as_dict())

    def __add__(self, other: EtaExponents) -> EtaExponents:
        if self.level != other.level:
            raise ValueError("exponent vectors live at different levels")
        return EtaExponents(self.level, tuple(x + y for x, y in zip(self.values, other.values)))


def eta_product(M: int, r: EtaExponents | Sequence[int], T: int, domain: Domain = EXACT) -> TruncatedSeries:
    """prod_{delta | M} (q^delta; q^delta)_inf ** r_delta to order T.

    Positive and negative parts are assembled separately so only one series
    inversion is needed.
    """
    if not isinstance(r, EtaExponents):
        r = EtaExponents(M, tuple(r))
    if r.level != M:
        raise ValueError(f"exponents indexed by divisors of {r.level}, expected {M}")
    num = TruncatedSeries.one(T, domain)
    den = TruncatedSeries.one(T, domain)
    for delta, e in r.active():
        if e > 0:
            num = mul(num, eta_power(delta, e, T, domain))
        else:
            den = mul(den, eta_power(delta, -e, T, domain))
    if den.nonzero_count() == 1:
        return num
    return mul(num, inverse(den))


# ------------------------------------------------------------------- dissection


def extract_ap(a: TruncatedSeries, m: int, t: int) -> TruncatedSeries:
    """sum_n c(m*n + t) q^n, truncated at floor((T - t) / m)."""
    if m < 1 or not 0 <= t < m:
        raise ValueError(f"need 0 <= t < m, got m={m}, t={t}")
    if t > a.truncation:
        raise ValueError(f"residue {t} lies beyond truncation {a.truncation}")
    return TruncatedSeries._wrap(a.coeffs[t::m].copy(), a.domain)


class Comparison(NamedTuple):
    holds: bool
    first_mismatch: int | None
    checked_to: int

    def __bool__(self) -> bool:
        return self.holds


def congruent(a: TruncatedSeries, b: TruncatedSeries, u: int) -> Comparison:
    """Coefficientwise a = b (mod u) up to the shared truncation."""
    for s in (a, b):
        if s.domain.modulus is not None and s.domain.modulus % u:
            raise ValueError(f"series known mod {s.domain.modulus} cannot be compared mod {u}")
    n = min(len(a), len(b))
    x, y = a.coeffs[:n], b.coeffs[:n]
    if x.dtype == object or y.dtype == object:
        diff = np.array([(int(p) - int(q)) % u for p, q in zip(x, y)], dtype=object)
    else:
        diff = (x - y) % u
    bad = np.flatnonzero(diff)
    if len(bad):
        return Comparison(False, int(bad[0]), n - 1)
    return Comparison(True, None, n - 1)
