"""Eta-quotients f(z) = prod_{d|N} eta(d z)^{r_d} as candidate forms on Gamma_0(N).

Covers the weight, the two mod-24 transformation conditions, the Nebentypus
character, orders of vanishing at the cusps c/d, and q-expansions.  Also
builds the three families used for the 2-adic density argument:

    B_k = eta(48z)^(2^k - 2) / (eta(24z)^4 eta(96z)^(2^(k-1) - 2))      level 384
    A_k = eta(48z)^(2^k - 1) / (eta(24z)^2 eta(96z)^(2^(k-1) - 1))      level 768
    F_k = eta(48z)^(2^k) / eta(96z)^(2^(k-1))                           level 384
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping

from .numutil import divisors, euler_phi, kronecker, squarefree_core
from .qseries import Domain, EXACT, EtaExponents, TruncatedSeries, congruent, eta_product, substitute

__all__ = [
    "EtaQuotient",
    "TransformationReport",
    "HolomorphyReport",
    "weight",
    "check_transformation_conditions",
    "cusp_order",
    "cusps",
    "is_holomorphic",
    "character",
    "build_Bk",
    "build_Ak",
    "build_Fk",
    "bbar_quotient",
    "abar_quotient",
    "q_expansion",
    "check_fk_congruence",
]


@dataclass(frozen=True)
class EtaQuotient:
    exponents: EtaExponents

    @classmethod
    def of(cls, level: int, r: Mapping[int, int] | list[int] | tuple[int, ...]) -> EtaQuotient:
        return cls(EtaExponents.of(level, r))

    @property
    def level(self) -> int:
        return self.exponents.level

    @property
    def r(self) -> dict[int, int]:
        return self.exponents.as_dict()

    @property
    def weight(self) -> Fraction:
        return weight(self)

    @property
    def leading_order(self) -> Fraction:
        """(1/24) sum d r_d: the exponent of q in the leading term."""
        return Fraction(self.exponents.weighted_total(), 24)

    def lift(self, level: int) -> EtaQuotient:
        return EtaQuotient(self.exponents.lift(level))

    def __mul__(self, other: EtaQuotient) -> EtaQuotient:
        return EtaQuotient(self.exponents + other.exponents)

    def __str__(self) -> str:
        parts = [f"eta({d}z)^{e}" for d, e in self.exponents.active()]
        return " * ".join(parts) or "1"


def weight(eq: EtaQuotient) -> Fraction:
    return Fraction(eq.exponents.total(), 2)


@dataclass(frozen=True)
class TransformationReport:
    cond24a: bool  # sum d r_d = 0 mod 24
    cond24b: bool  # sum (N/d) r_d = 0 mod 24
    integral_weight: bool

    def all(self) -> bool:
        return self.cond24a and self.cond24b and self.integral_weight


def check_transformation_conditions(eq: EtaQuotient) -> TransformationReport:
    N = eq.level
    items = eq.exponents.items()
    a = sum(d * r for d, r in items) % 24 == 0
    b = sum(N // d * r for d, r in items) % 24 == 0
    return TransformationReport(a, b, weight(eq).denominator == 1)


def cusp_order(eq: EtaQuotient, d: int) -> Fraction:
    """Order of vanishing at any cusp c/d with gcd(c, d) = 1, for d | N."""
    N = eq.level
    if d < 1 or N % d:
        raise ValueError(f"{d} does not divide the level {N}")
    g = gcd(d, N // d)
    total = sum(
        (Fraction(gcd(d, delta) ** 2 * r, g * d * delta) for delta, r in eq.exponents.active()),
        Fraction(0),
    )
    return Fraction(N, 24) * total


def cusps(N: int) -> list[tuple[int, int]]:
    """(d, number of inequivalent cusps c/d) for d | N."""
    return [(d, euler_phi(gcd(d, N // d))) for d in divisors(N)]


@dataclass(frozen=True)
class HolomorphyReport:
    holomorphic: bool
    orders: dict[int, Fraction]

    @property
    def failures(self) -> dict[int, Fraction]:
        return {d: v for d, v in self.orders.items() if v < 0}


def is_holomorphic(eq: EtaQuotient) -> HolomorphyReport:
    orders = {d: cusp_order(eq, d) for d in divisors(eq.level)}
    return HolomorphyReport(all(v >= 0 for v in orders.values()), orders)


def character(eq: EtaQuotient, d: int) -> int:
    """chi(d) = ((-1)^l prod delta^{r_delta} / d) for d coprime to the level."""
    w = weight(eq)
    if w.denominator != 1:
        raise ValueError(f"character needs integral weight, got {w}")
    if gcd(d, eq.level) != 1:
        raise ValueError(f"{d} is not coprime to the level {eq.level}")
    # only the square class of (-1)^l prod delta^r matters
    x = Fraction((-1) ** int(w % 2))
    for delta, r in eq.exponents.active():
        x *= Fraction(delta) ** r
    core = squarefree_core(x)
    return kronecker(core, d)


def _power_of_two(k: int, lo: int) -> int:
    if k < lo:
        raise ValueError(f"k must be >= {lo}, got {k}")
    return 1 << k


def build_Bk(k: int) -> EtaQuotient:
    p = _power_of_two(k, 2)
    return EtaQuotient.of(384, {24: -4, 48: p - 2, 96: -(p // 2 - 2)})


def build_Ak(k: int) -> EtaQuotient:
    p = _power_of_two(k, 2)
    return EtaQuotient.of(768, {24: -2, 48: p - 1, 96: -(p // 2 - 1)})


def build_Fk(k: int, level: int = 384) -> EtaQuotient:
    p = _power_of_two(k, 1)
    return EtaQuotient.of(level, {48: p, 96: -(p // 2)})


def bbar_quotient(level: int = 384) -> EtaQuotient:
    """The overcubic-pair generating function at q -> q^24: eta(96z)^2 / (eta(24z)^4 eta(48z)^2)."""
    return EtaQuotient.of(level, {24: -4, 48: -2, 96: 2})


def abar_quotient(level: int = 768) -> EtaQuotient:
    """The overcubic generating function at q -> q^24: eta(96z) / (eta(24z)^2 eta(48z))."""
    return EtaQuotient.of(level, {24: -2, 48: -1, 96: 1})


def q_expansion(eq: EtaQuotient, T: int, domain: Domain = EXACT) -> TruncatedSeries:
    """Fourier expansion sum_{n <= T} a(n) q^n.

    Computed in Q = q^g with g the gcd of the active deltas, then mapped back.
    """
    lead = eq.leading_order
    if lead.denominator != 1 or lead < 0:
        raise ValueError(f"leading exponent {lead} is not a nonnegative integer")
    L = int(lead)
    active = eq.exponents.active()
    if not active:
        return TruncatedSeries.one(T, domain)
    g = 0
    for d, _ in active:
        g = gcd(g, d)
    if L > T:
        return TruncatedSeries.zero(T, domain)
    T_inner = T - L
    M = eq.level // g
    inner = EtaExponents.from_map(M, {d // g: r for d, r in active})
    out = substitute(eta_product(M, inner, T_inner // g, domain), g, T_inner)
    if L == 0:
        return out
    return TruncatedSeries([0] * L + out.tolist(), domain)


def check_fk_congruence(k: int, T: int, exponents: tuple[int, int] | None = None) -> bool:
    """F_k = 1 (mod 2^k) through q-order T.

    Works with (q;q)^(2^k) / (q^2;q^2)^(2^(k-1)) in Q = q^48.  ``exponents``
    overrides (numerator, denominator) powers for perturbation tests.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    num, den = exponents if exponents is not None else (1 << k, 1 << (k - 1))
    u = 1 << k
    dom = Domain.mod(u)
    s = eta_product(2, EtaExponents(2, (num, -den)), T // 48, dom)
    return congruent(s, TruncatedSeries.one(s.truncation, dom), u).holds
