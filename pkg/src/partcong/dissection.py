"""Identity checks behind the mod-256 congruences for bbar(n).

The chain starts from the 2-dissection

    1/(q;q)^4 = (q^4;q^4)^14 / ((q^2;q^2)^14 (q^8;q^8)^4)
                + 4q (q^4;q^4)^2 (q^8;q^8)^4 / (q^2;q^2)^10

and walks bbar(n) -> bbar(2n) -> bbar(4n+2) -> bbar(8n+2), comparing each
extracted series with its closed eta-quotient form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .qseries import (
    Domain,
    EXACT,
    EtaExponents,
    TruncatedSeries,
    congruent,
    eta_power,
    eta_product,
    extract_ap,
)
from .sequences import coefficients

__all__ = [
    "IdentityCheck",
    "entry25_sides",
    "check_entry25",
    "check_binomial_reduction",
    "check_extraction_chain",
]


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    T: int
    modulus: int | None  # None: exact equality
    holds: bool
    first_mismatch: int | None = None


def _eta(level: int, mapping: dict[int, int], T: int, domain: Domain) -> TruncatedSeries:
    return eta_product(level, EtaExponents.from_map(level, mapping), T, domain)


def entry25_sides(T: int, domain: Domain = EXACT) -> tuple[TruncatedSeries, TruncatedSeries]:
    lhs = eta_power(1, -4, T, domain)
    even = _eta(8, {2: -14, 4: 14, 8: -4}, T, domain)
    odd = _eta(8, {2: -10, 4: 2, 8: 4}, T, domain).shift(1) * 4
    return lhs, even + odd


def _compare(name: str, a: TruncatedSeries, b: TruncatedSeries, u: int | None) -> IdentityCheck:
    if u is None:
        n = min(len(a), len(b))
        x, y = a.truncate(n - 1), b.truncate(n - 1)
        bad = next((i for i in range(n) if x[i] != y[i]), None)
        return IdentityCheck(name, n - 1, None, bad is None, bad)
    c = congruent(a, b, u)
    return IdentityCheck(name, c.checked_to, u, c.holds, c.first_mismatch)


def check_entry25(T: int = 500) -> IdentityCheck:
    lhs, rhs = entry25_sides(T)
    return _compare("entry25", lhs, rhs, None)


def check_binomial_reduction(T: int = 300, p: int = 7) -> IdentityCheck:
    """(q;q)^(p^2) = (q^p;q^p)^p (mod p^2)."""
    u = p * p
    dom = Domain.mod(u)
    return _compare(f"binomial{u}", eta_power(1, u, T, dom), eta_power(p, p, T, dom), u)


def check_extraction_chain(T: int = 300, u: int = 256) -> list[IdentityCheck]:
    """Every displayed step of the bbar(8n+2) derivation, to T terms each."""
    out: list[IdentityCheck] = []
    dom = Domain.mod(u)

    # bbar(2n): exact equalities, then the mod-u truncation of the 5-term form
    bbar = coefficients("overcubic-pair", 2 * T + 1, EXACT)
    even = extract_ap(bbar, 2, 0).truncate(T)
    closed = _eta(4, {1: -16, 2: 16, 4: -4}, T, EXACT)
    out.append(_compare("bbar(2n) closed form", even, closed, None))
    terms = [
        (1, 0, {2: -40, 4: 52, 8: -16}),
        (16, 1, {2: -36, 4: 40, 8: -8}),
        (96, 2, {2: -32, 4: 28}),
        (256, 3, {2: -28, 4: 16, 8: 8}),
        (256, 4, {2: -24, 4: 4, 8: 16}),
    ]
    five = TruncatedSeries.zero(T, EXACT)
    three = TruncatedSeries.zero(T, dom)
    for i, (c, sh, mp) in enumerate(terms):
        five = five + _eta(8, mp, T, EXACT).shift(sh) * c
        if i < 3:
            three = three + _eta(8, mp, T, dom).shift(sh) * c
    out.append(_compare("bbar(2n) five-term 2-dissection", even, five, None))
    out.append(_compare("bbar(2n) three-term reduction", even.reduce(u), three, u))

    # bbar(4n+2) and bbar(8n+2), modulo u
    bbar_u = coefficients("overcubic-pair", 8 * T + 2, dom)
    s42 = extract_ap(bbar_u, 4, 2).truncate(T)
    out.append(_compare("bbar(4n+2) first form", s42, _eta(4, {1: -36, 2: 40, 4: -8}, T, dom) * 16, u))
    out.append(_compare("bbar(4n+2) second form", s42, _eta(4, {1: -4, 2: 24, 4: -8}, T, dom) * 16, u))
    s82 = extract_ap(bbar_u, 8, 2).truncate(T)
    out.append(_compare("bbar(8n+2) final form", s82, _eta(4, {1: 10, 2: 6, 4: -4}, T, dom) * 16, u))
    return out
