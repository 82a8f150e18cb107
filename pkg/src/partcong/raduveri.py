"""Finite verification of congruences c_r(mn + t) = 0 (mod u) by Radu's method.

For an eta-product ``sum c_r(n) q^n = prod_{d|M} (q^d; q^d)^{r_d}`` and a tuple
``(m, M, N, r, t)`` in the admissible set Delta*, checking the congruence for
all residues in the orbit P_{m,r}(t) and ``n <= floor(nu)`` proves it for every
n, provided the cusp quantities ``p_{m,r}(gamma) + p*_{r'}(gamma)`` are
nonnegative on a complete set of double-coset representatives of
Gamma_0(N) \\ Gamma / Gamma_inf.

Every intermediate value is exact and lands in a :class:`VerificationCertificate`.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import floor, gcd, prod
from typing import Sequence

from .numutil import divisors, index_gamma0, is_squarefree, prime_divisors, square_classes
from .qseries import Domain, EtaExponents, eta_product

__all__ = [
    "EtaExponents",
    "CongruenceTuple",
    "CosetRep",
    "CosetPreconditionError",
    "DeltaStar",
    "CosetCheck",
    "CoefficientCheck",
    "VerificationCertificate",
    "delta_star_check",
    "p_set",
    "coset_reps",
    "p_mr",
    "p_star",
    "nu_bound",
    "verify",
    "spot_check",
    "PRESETS",
]


@dataclass(frozen=True)
class CongruenceTuple:
    m: int
    M: int
    N: int
    r: EtaExponents
    t: int

    def __post_init__(self):
        if not isinstance(self.r, EtaExponents):
            object.__setattr__(self, "r", EtaExponents.of(self.M, self.r))
        if self.r.level != self.M:
            raise ValueError(f"r is indexed by divisors of {self.r.level}, not M={self.M}")
        if min(self.m, self.M, self.N) < 1:
            raise ValueError("m, M, N must be positive")
        if not 0 <= self.t < self.m:
            raise ValueError(f"need 0 <= t < m, got t={self.t}, m={self.m}")

    @property
    def k(self) -> int:
        return gcd(self.m * self.m - 1, 24)

    @property
    def s_j(self) -> tuple[int, int]:
        """(s, j) with prod_{d|M} d^|r_d| = 2^s * j, j odd."""
        x = prod(d ** abs(e) for d, e in self.r.items())
        s = (x & -x).bit_length() - 1
        return s, x >> s

    @property
    def s(self) -> int:
        return self.s_j[0]

    @property
    def j(self) -> int:
        return self.s_j[1]


@dataclass(frozen=True)
class CosetRep:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")


class CosetPreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class DeltaStar:
    prime_divisors_of_m_divide_N: bool
    active_deltas_divide_mN: bool
    cond3_mod24: bool
    cond4_mod8: bool
    cond5_level_divisibility: bool
    cond6_even_m: bool

    def all(self) -> bool:
        return all(asdict(self).values())

    def failed(self) -> list[str]:
        return [k for k, v in asdict(self).items() if not v]


def delta_star_check(tup: CongruenceTuple) -> DeltaStar:
    """The six Delta* conditions, each evaluated literally."""
    m, N, t, k = tup.m, tup.N, tup.t, tup.k
    items = tup.r.items()
    s, j = tup.s_j
    sum_r = sum(r for _, r in items)
    sum_dr = sum(d * r for d, r in items)

    c1 = all(N % p == 0 for p in prime_divisors(m))
    c2 = all((m * N) % d == 0 for d, r in items if r)
    # (kN) * sum_d r_d * (mN / d); mN/d need not be integral, so clear it exactly
    c3_val = Fraction(k * N) * sum(Fraction(r * m * N, d) for d, r in items)
    c3 = c3_val.denominator == 1 and c3_val.numerator % 24 == 0
    c4 = (k * N * sum_r) % 8 == 0
    g = gcd(-24 * k * t - k * sum_dr, 24 * m)
    c5 = N % (24 * m // g) == 0
    if m % 2 == 0:
        c6 = ((k * N) % 4 == 0 and (s * N) % 8 == 0) or (s % 2 == 0 and ((1 - j) * N) % 8 == 0)
    else:
        c6 = True
    return DeltaStar(c1, c2, c3, c4, c5, c6)


def p_set(m: int, r: EtaExponents, t: int) -> frozenset[int]:
    """Orbit P_{m,r}(t) of t under the squares of Z/24mZ."""
    if not 0 <= t < m:
        raise ValueError(f"need 0 <= t < m, got t={t}, m={m}")
    sum_dr = r.weighted_total()
    out = set()
    for s in square_classes(24 * m):
        # every unit square mod 24m is 1 mod 24
        out.add((t * s + (s - 1) // 24 * sum_dr) % m)
    return frozenset(out)


def coset_reps(N: int) -> list[CosetRep]:
    """[[1, 0], [d, 1]] for d | N: complete double-coset representatives when N or N/2 is squarefree."""
    if not (is_squarefree(N) or (N % 2 == 0 and is_squarefree(N // 2))):
        raise CosetPreconditionError(
            f"representative set not guaranteed complete: neither {N} nor {N}/2 is squarefree"
        )
    return [CosetRep(1, 0, d, 1) for d in divisors(N)]


def p_mr(gamma: CosetRep, m: int, r: EtaExponents, k: int | None = None) -> Fraction:
    """min over lambda in [0, m) of (1/24) sum_d r_d gcd^2(d a + d k lambda c, m c) / (d m)."""
    if gamma.c == 0:
        raise ValueError("p_mr is only defined here for representatives with c != 0")
    if k is None:
        k = gcd(m * m - 1, 24)
    a, c = gamma.a, gamma.c
    active = r.active()
    best = None
    for lam in range(m):
        val = sum(
            (Fraction(e * gcd(d * a + d * k * lam * c, m * c) ** 2, d * m) for d, e in active),
            Fraction(0),
        ) / 24
        if best is None or val < best:
            best = val
    return best


def p_star(gamma: CosetRep, rprime: EtaExponents) -> Fraction:
    """(1/24) sum_{d|N} r'_d gcd^2(d, c) / d."""
    return sum((Fraction(e * gcd(d, gamma.c) ** 2, d) for d, e in rprime.active()), Fraction(0)) / 24


def nu_bound(tup: CongruenceTuple, rprime: EtaExponents, t_min: int | None = None) -> tuple[Fraction, int]:
    """Coefficient bound nu and floor(nu); t_min defaults to min P_{m,r}(t)."""
    if rprime.level != tup.N:
        raise ValueError(f"r' must be indexed by divisors of N={tup.N}")
    if t_min is None:
        t_min = min(p_set(tup.m, tup.r, tup.t))
    m = tup.m
    idx = index_gamma0(tup.N)
    nu = (
        Fraction((tup.r.total() + rprime.total()) * idx - rprime.weighted_total(), 24)
        - Fraction(tup.r.weighted_total(), 24 * m)
        - Fraction(t_min, m)
    )
    return nu, floor(nu)


@dataclass(frozen=True)
class CosetCheck:
    delta: int
    p_mr: Fraction
    p_star: Fraction
    total: Fraction
    nonnegative: bool


@dataclass(frozen=True)
class CoefficientCheck:
    t_prime: int
    n: int
    residue: int


@dataclass
class VerificationCertificate:
    tuple: CongruenceTuple
    rprime: EtaExponents
    u: int
    delta_star: DeltaStar
    coset_precondition: bool
    p_set: list[int]
    coset_checks: list[CosetCheck]
    nu: Fraction | None
    nu_floor: int | None
    coefficient_checks: list[CoefficientCheck] = field(default_factory=list)
    verdict: str = "hypothesis-failed"
    witness: CoefficientCheck | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def proven(self) -> bool:
        return self.verdict == "proven"

    # JSON: integers as decimal strings, rationals as {"num", "den"}

    def to_json_dict(self) -> dict:
        tup = self.tuple
        return {
            "schema": "partcong.certificate/v1",
            "tuple": {
                "m": _i(tup.m),
                "M": _i(tup.M),
                "N": _i(tup.N),
                "r": [_i(v) for v in tup.r.values],
                "t": _i(tup.t),
                "k": _i(tup.k),
                "s": _i(tup.s),
                "j": _i(tup.j),
            },
            "rprime": [_i(v) for v in self.rprime.values],
            "u": _i(self.u),
            "delta_star": asdict(self.delta_star),
            "coset_precondition": self.coset_precondition,
            "p_set": [_i(v) for v in self.p_set],
            "coset_checks": [
                {
                    "delta": _i(c.delta),
                    "p_mr": _q(c.p_mr),
                    "p_star": _q(c.p_star),
                    "sum": _q(c.total),
                    "nonnegative": c.nonnegative,
                }
                for c in self.coset_checks
            ],
            "nu": None if self.nu is None else _q(self.nu),
            "nu_floor": None if self.nu_floor is None else _i(self.nu_floor),
            "coefficient_checks": [
                {"t_prime": _i(c.t_prime), "n": _i(c.n), "residue": _i(c.residue)}
                for c in self.coefficient_checks
            ],
            "witness": None
            if self.witness is None
            else {"t_prime": _i(self.witness.t_prime), "n": _i(self.witness.n), "residue": _i(self.witness.residue)},
            "verdict": self.verdict,
            "notes": list(self.notes),
        }

    def to_json(self, **kw) -> str:
        kw.setdefault("indent", 2)
        return json.dumps(self.to_json_dict(), **kw)

    @classmethod
    def from_json_dict(cls, doc: dict) -> VerificationCertificate:
        t = doc["tuple"]
        M, N = int(t["M"]), int(t["N"])
        tup = CongruenceTuple(int(t["m"]), M, N, EtaExponents(M, tuple(int(v) for v in t["r"])), int(t["t"]))
        cc = lambda d: CoefficientCheck(int(d["t_prime"]), int(d["n"]), int(d["residue"]))  # noqa: E731
        return cls(
            tuple=tup,
            rprime=EtaExponents(N, tuple(int(v) for v in doc["rprime"])),
            u=int(doc["u"]),
            delta_star=DeltaStar(**doc["delta_star"]),
            coset_precondition=bool(doc["coset_precondition"]),
            p_set=[int(v) for v in doc["p_set"]],
            coset_checks=[
                CosetCheck(int(c["delta"]), _unq(c["p_mr"]), _unq(c["p_star"]), _unq(c["sum"]), bool(c["nonnegative"]))
                for c in doc["coset_checks"]
            ],
            nu=None if doc["nu"] is None else _unq(doc["nu"]),
            nu_floor=None if doc["nu_floor"] is None else int(doc["nu_floor"]),
            coefficient_checks=[cc(c) for c in doc["coefficient_checks"]],
            verdict=doc["verdict"],
            witness=None if doc["witness"] is None else cc(doc["witness"]),
            notes=list(doc.get("notes", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> VerificationCertificate:
        return cls.from_json_dict(json.loads(text))


def _i(x: int) -> str:
    return str(int(x))


def _q(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _unq(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def verify(tup: CongruenceTuple, rprime: EtaExponents | Sequence[int], u: int) -> VerificationCertificate:
    """Run every hypothesis check, then the finite coefficient check.

    Structural failures short-circuit to ``hypothesis-failed`` without looking at
    coefficients.
    """
    if not isinstance(rprime, EtaExponents):
        rprime = EtaExponents.of(tup.N, rprime)
    if rprime.level != tup.N:
        raise ValueError(f"r' must be indexed by divisors of N={tup.N}")
    if u < 2:
        raise ValueError(f"modulus must be >= 2, got {u}")

    ds = delta_star_check(tup)
    P = sorted(p_set(tup.m, tup.r, tup.t))
    nu, nu_floor = nu_bound(tup, rprime, t_min=P[0])
    cert = VerificationCertificate(
        tuple=tup,
        rprime=rprime,
        u=u,
        delta_star=ds,
        coset_precondition=False,
        p_set=P,
        coset_checks=[],
        nu=nu,
        nu_floor=nu_floor,
    )
    try:
        reps = coset_reps(tup.N)
        cert.coset_precondition = True
    except CosetPreconditionError as exc:
        cert.notes.append(str(exc))
        reps = []
    for g in reps:
        pm = p_mr(g, tup.m, tup.r, tup.k)
        ps = p_star(g, rprime)
        cert.coset_checks.append(CosetCheck(g.c, pm, ps, pm + ps, pm + ps >= 0))

    if not ds.all():
        cert.notes.append("tuple not in Delta*: " + ", ".join(ds.failed()))
    bad = [c.delta for c in cert.coset_checks if not c.nonnegative]
    if bad:
        cert.notes.append(f"p_mr + p_star < 0 at delta in {bad}")
    if not (ds.all() and cert.coset_precondition and not bad):
        cert.verdict = "hypothesis-failed"
        return cert

    if nu_floor >= 0:
        T = tup.m * nu_floor + P[-1]
        c = eta_product(tup.M, tup.r, T, Domain.mod(u))
        for tp in P:
            for n in range(nu_floor + 1):
                check = CoefficientCheck(tp, n, c[tup.m * n + tp])
                cert.coefficient_checks.append(check)
                if check.residue and cert.witness is None:
                    cert.witness = check
    cert.verdict = "counterexample" if cert.witness else "proven"
    return cert


def spot_check(cert: VerificationCertificate, beyond: int = 200, samples: int = 50) -> list[CoefficientCheck]:
    """Residues at ``samples`` evenly spread n in (floor(nu), floor(nu) + beyond], every t' in P.

    For a proven certificate these must all vanish; returns the nonzero ones.
    """
    tup = cert.tuple
    lo = max(cert.nu_floor, -1) + 1
    hi = lo + beyond - 1
    step = max(1, beyond // samples)
    ns = list(range(lo, hi + 1, step))[:samples]
    T = tup.m * ns[-1] + max(cert.p_set)
    c = eta_product(tup.M, tup.r, T, Domain.mod(cert.u))
    return [
        CoefficientCheck(tp, n, c[tup.m * n + tp])
        for tp in cert.p_set
        for n in ns
        if c[tup.m * n + tp]
    ]


# (tuple, r', u).  thm1: b(49n+37) mod 49.  thm2 / thm2-66: c_r(9n+5), c_r(9n+8) mod 16
# for r = (10, 6, -4, 0), which give bbar(72n+42), bbar(72n+66) mod 256.
# The orbit of t=5 is {5} alone, so residue 8 needs its own tuple.
PRESETS: dict[str, tuple[CongruenceTuple, EtaExponents, int]] = {
    "thm1": (
        CongruenceTuple(49, 14, 14, EtaExponents(14, (47, -2, -7, 0)), 37),
        EtaExponents(14, (12, 0, 0, 0)),
        49,
    ),
    "thm2": (
        CongruenceTuple(9, 8, 12, EtaExponents(8, (10, 6, -4, 0)), 5),
        EtaExponents(12, (0, 0, 0, 0, 0, 0)),
        16,
    ),
}
PRESETS["thm2-66"] = (
    CongruenceTuple(9, 8, 12, EtaExponents(8, (10, 6, -4, 0)), 8),
    EtaExponents(12, (0, 0, 0, 0, 0, 0)),
    16,
)
