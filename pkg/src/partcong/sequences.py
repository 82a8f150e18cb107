"""Named partition generating functions and congruence-family checks.

Every built-in sequence is stored in pure eta-exponent form; the overlined
factors are rewritten with (-q^d; q^d) = (q^2d; q^2d) / (q^d; q^d).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .qseries import (
    Domain,
    EXACT,
    EtaExponents,
    TruncatedSeries,
    congruent,
    eta_product,
    extract_ap,
)

__all__ = [
    "SequenceSpec",
    "BUILTIN",
    "coefficients",
    "FamilyReport",
    "check_congruence_family",
    "LinReport",
    "check_lin_identities",
    "QUOTED_FAMILIES",
]

BUILTIN: dict[str, EtaExponents] = {
    # a(n): 1 / ((q;q)(q^2;q^2))
    "cubic": EtaExponents(2, (-1, -1)),
    # b(n): 1 / ((q;q)^2 (q^2;q^2)^2)
    "cubic-pair": EtaExponents(2, (-2, -2)),
    # abar(n): (q^4;q^4) / ((q;q)^2 (q^2;q^2))
    "overcubic": EtaExponents(4, (-2, -1, 1)),
    # bbar(n): (q^4;q^4)^2 / ((q;q)^4 (q^2;q^2)^2)
    "overcubic-pair": EtaExponents(4, (-4, -2, 2)),
}


@dataclass(frozen=True)
class SequenceSpec:
    name: str
    custom: EtaExponents | None = field(default=None, compare=True)

    def __post_init__(self):
        if self.name == "custom":
            if self.custom is None:
                raise ValueError("custom sequence needs an exponent vector")
        elif self.name not in BUILTIN:
            raise ValueError(f"unknown sequence {self.name!r}; choose from {sorted(BUILTIN)} or 'custom'")
        elif self.custom is not None:
            raise ValueError(f"built-in sequence {self.name!r} takes no custom exponents")

    @classmethod
    def of(cls, name_or_spec: str | SequenceSpec | EtaExponents) -> SequenceSpec:
        if isinstance(name_or_spec, SequenceSpec):
            return name_or_spec
        if isinstance(name_or_spec, EtaExponents):
            return cls("custom", name_or_spec)
        return cls(name_or_spec)

    @property
    def eta(self) -> EtaExponents:
        return self.custom if self.custom is not None else BUILTIN[self.name]

    def key(self) -> str:
        """Canonical text form, stable across runs (used for cache keys)."""
        r = self.eta
        return f"{self.name}:M={r.level}:r={','.join(map(str, r.values))}"

    def __str__(self) -> str:
        return self.name if self.custom is None else self.key()


def coefficients(spec: str | SequenceSpec, T: int, domain: Domain = EXACT) -> TruncatedSeries:
    spec = SequenceSpec.of(spec)
    r = spec.eta
    return eta_product(r.level, r, T, domain)


@dataclass(frozen=True)
class FamilyReport:
    spec: str
    m: int
    t: int
    u: int
    n_max: int
    holds: bool
    first_failure: int | None = None
    residue: int | None = None

    def describe(self) -> str:
        head = f"{self.spec}({self.m}n+{self.t}) = 0 mod {self.u} for n <= {self.n_max}"
        if self.holds:
            return head + ": holds"
        return head + f": fails at n={self.first_failure} (residue {self.residue})"


def check_congruence_family(
    spec: str | SequenceSpec,
    m: int,
    t: int,
    u: int,
    n_max: int,
    series: TruncatedSeries | None = None,
) -> FamilyReport:
    """Check coefficient(m n + t) = 0 (mod u) for 0 <= n <= n_max.

    ``series`` may supply precomputed coefficients (mod a multiple of u, or exact).
    """
    if not 0 <= t < m:
        raise ValueError(f"need 0 <= t < m, got m={m}, t={t}")
    spec = SequenceSpec.of(spec)
    T = m * n_max + t
    if series is None:
        series = coefficients(spec, T, Domain.mod(u) if u > 1 else EXACT)
    sub = extract_ap(series.truncate(T), m, t)
    zero = TruncatedSeries.zero(sub.truncation, sub.domain)
    cmp = congruent(sub, zero, u)
    if cmp.holds:
        return FamilyReport(str(spec), m, t, u, n_max, True)
    n = cmp.first_mismatch
    return FamilyReport(str(spec), m, t, u, n_max, False, n, sub[n] % u)


# congruences quoted for a(n), b(n), bbar(n): (sequence, m, t, u)
QUOTED_FAMILIES: list[tuple[str, int, int, int]] = [
    ("cubic", 3, 2, 3),
    ("cubic-pair", 5, 4, 5),
    ("cubic-pair", 7, 2, 7),
    ("cubic-pair", 7, 3, 7),
    ("cubic-pair", 7, 4, 7),
    ("cubic-pair", 7, 6, 7),
    ("cubic-pair", 9, 7, 9),
    ("overcubic-pair", 8, 7, 64),
    ("overcubic-pair", 9, 3, 3),
]


@dataclass(frozen=True)
class LinReport:
    T: int
    mod243_holds: bool
    mod243_first_failure: int | None
    identity_7_holds: bool
    identity_7_first_mismatch: int | None
    identity_34_holds: bool
    identity_34_first_mismatch: int | None

    @property
    def holds(self) -> bool:
        return self.mod243_holds and self.identity_7_holds and self.identity_34_holds


def check_lin_identities(T: int, c7: int = 9, c34: int = 36) -> LinReport:
    """Desk-check of three statements about b(n) at n = 81k + {61, 7, 34}.

    * b(81n + 61) = 0 (mod 243), n <= T
    * sum b(81n + 7) q^n  = c7  (q^2;q^2)(q^3;q^3)^2 / (q^6;q^6)  (mod 81)
    * sum b(81n + 34) q^n = c34 (q;q)(q^6;q^6)^2 / (q^3;q^3)      (mod 81)

    ``c7``/``c34`` exist so tests can perturb the constants.
    """
    # 243 is a multiple of 81, so one mod-243 series serves all three checks
    dom = Domain.mod(243)
    b = coefficients("cubic-pair", 81 * T + 61, dom)
    fam = check_congruence_family("cubic-pair", 81, 61, 243, T, series=b)

    b81 = b.reduce(81)
    dom81 = Domain.mod(81)
    lhs7 = extract_ap(b81, 81, 7).truncate(T)
    rhs7 = eta_product(6, EtaExponents.from_map(6, {2: 1, 3: 2, 6: -1}), T, dom81) * c7
    lhs34 = extract_ap(b81, 81, 34).truncate(T)
    rhs34 = eta_product(6, EtaExponents.from_map(6, {1: 1, 3: -1, 6: 2}), T, dom81) * c34
    i7 = congruent(lhs7, rhs7, 81)
    i34 = congruent(lhs34, rhs34, 81)
    return LinReport(
        T,
        fam.holds,
        fam.first_failure,
        i7.holds,
        i7.first_mismatch,
        i34.holds,
        i34.first_mismatch,
    )
