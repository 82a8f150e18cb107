"""Job files: validation against ``schemas/jobs.json`` and dispatch.

Exit codes: 0 proven/holds, 1 counterexample/fails, 2 hypothesis failure,
3 usage or schema error.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from . import cache as qcache
from .denscan import X_MAX_DEFAULT, density_scan
from .dissection import check_binomial_reduction, check_entry25, check_extraction_chain
from .etaquot import (
    EtaQuotient,
    abar_quotient,
    bbar_quotient,
    build_Ak,
    build_Bk,
    build_Fk,
    character,
    check_transformation_conditions,
    cusps,
    is_holomorphic,
    q_expansion,
    weight,
)
from .qseries import Domain, EtaExponents
from .raduveri import PRESETS, CongruenceTuple, spot_check, verify
from .sequences import SequenceSpec, check_congruence_family, check_lin_identities

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_HYPOTHESIS = 2
EXIT_USAGE = 3

KINDS = (
    "radu-verify",
    "coefficients",
    "family-check",
    "eta-analyze",
    "dissection-check",
    "lin-identities",
    "density",
)


class JobError(Exception):
    """Invalid job: schema violation or inconsistent parameters (exit 3)."""


@dataclass
class JobResult:
    report: dict
    exit_code: int
    csv: str | None = None


@lru_cache(maxsize=1)
def _schema_doc() -> dict:
    text = resources.files("partcong").joinpath("schemas/jobs.json").read_text()
    return json.loads(text)


def job_schema(kind: str) -> dict:
    doc = _schema_doc()
    if kind not in doc["kinds"]:
        raise JobError(f"unknown job kind {kind!r}; expected one of {', '.join(KINDS)}")
    return {"$schema": doc["$schema"], "$defs": doc["$defs"], **doc["kinds"][kind]}


def validate(job: dict) -> str:
    if not isinstance(job, dict):
        raise JobError("a job must be a JSON object")
    kind = job.get("kind")
    if kind is None:
        raise JobError("job has no 'kind'")
    try:
        jsonschema.validate(job, job_schema(kind))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise JobError(f"{kind} job invalid at {where}: {exc.message}") from None
    return kind


def _q(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _sequence(value) -> SequenceSpec:
    if isinstance(value, dict):
        return SequenceSpec("custom", EtaExponents(int(value["M"]), tuple(value["r"])))
    return SequenceSpec(value)


def _domain(value) -> Domain:
    return Domain.parse(value)


# ----------------------------------------------------------------------- kinds


def _radu(job: dict, cache_root) -> JobResult:
    preset = job.get("preset")
    if preset:
        tup, rp, u = PRESETS[preset]
        fields = dict(m=tup.m, M=tup.M, N=tup.N, r=list(tup.r.values), t=tup.t, rprime=list(rp.values), u=u)
    else:
        fields = {}
    fields.update({k: v for k, v in job.items() if k in ("m", "M", "N", "r", "t", "rprime", "u")})
    missing = [k for k in ("m", "M", "N", "r", "t", "rprime", "u") if k not in fields]
    if missing:
        raise JobError(f"radu-verify needs a preset or all of m, M, N, r, t, rprime, u (missing {missing})")
    tup = CongruenceTuple(fields["m"], fields["M"], fields["N"], EtaExponents(fields["M"], tuple(fields["r"])), fields["t"])
    rprime = EtaExponents(fields["N"], tuple(fields["rprime"]))
    cert = verify(tup, rprime, fields["u"])
    doc = cert.to_json_dict()
    if preset:
        doc["preset"] = preset
    if job.get("spot_check") and cert.proven:
        bad = spot_check(cert)
        doc["spot_check"] = {"beyond": "200", "failures": [asdict(b) for b in bad]}
        if bad:
            # the finite check passed but a later coefficient does not vanish
            doc["verdict"] = "counterexample"
            return JobResult(doc, EXIT_FAIL)
    code = {"proven": EXIT_OK, "counterexample": EXIT_FAIL}.get(cert.verdict, EXIT_HYPOTHESIS)
    return JobResult(doc, code)


def _coefficients(job: dict, cache_root) -> JobResult:
    spec = _sequence(job["sequence"])
    dom = _domain(job.get("domain", "exact"))
    if "n" in job and "T" in job:
        raise JobError("give either n or T, not both")
    ns = job.get("n")
    if ns is None:
        T = job.get("T")
        if T is None:
            raise JobError("coefficients job needs n or T")
        ns = list(range(T + 1))
    elif isinstance(ns, int):
        ns = [ns]
    T = max(ns)
    s = qcache.cached_coefficients(spec, T, dom, root=cache_root, use_cache=job.get("cache", True))
    report = {
        "kind": "coefficients",
        "sequence": str(spec),
        "domain": str(dom),
        "values": {str(n): str(s[n]) for n in ns},
    }
    return JobResult(report, EXIT_OK)


def _family(job: dict, cache_root) -> JobResult:
    spec = _sequence(job["sequence"])
    m, t, u, n_max = job["m"], job["t"], job["u"], job["n_max"]
    if not 0 <= t < m:
        raise JobError(f"need 0 <= t < m, got t={t}, m={m}")
    series = qcache.cached_coefficients(spec, m * n_max + t, Domain.mod(u), root=cache_root, use_cache=job.get("cache", True))
    rep = check_congruence_family(spec, m, t, u, n_max, series=series)
    doc = {"kind": "family-check", **asdict(rep), "statement": rep.describe()}
    return JobResult(doc, EXIT_OK if rep.holds else EXIT_FAIL)


def _eta_quotient(job: dict) -> EtaQuotient:
    build = job.get("build")
    if build:
        k = job.get("k")
        if build in ("B", "A", "F") and k is None:
            raise JobError(f"build {build} needs k")
        try:
            if build == "B":
                return build_Bk(k)
            if build == "A":
                return build_Ak(k)
            if build == "F":
                return build_Fk(k)
        except ValueError as exc:
            raise JobError(str(exc)) from None
        level = job.get("level")
        if build == "Bbar":
            return bbar_quotient(level or 384)
        return abar_quotient(level or 768)
    if "level" not in job or "r" not in job:
        raise JobError("eta-analyze needs build or level + r")
    r = job["r"]
    if isinstance(r, dict):
        r = {int(k): v for k, v in r.items()}
    return EtaQuotient.of(job["level"], r)


def _eta(job: dict, cache_root) -> JobResult:
    eq = _eta_quotient(job)
    tr = check_transformation_conditions(eq)
    hol = is_holomorphic(eq)
    mult = dict(cusps(eq.level))
    doc: dict[str, Any] = {
        "kind": "eta-analyze",
        "level": str(eq.level),
        "exponents": {str(d): str(r) for d, r in eq.exponents.items()},
        "weight": _q(weight(eq)),
        "leading_order": _q(eq.leading_order),
        "transformation": asdict(tr),
        "cusp_orders": [
            {"d": str(d), "cusps": str(mult[d]), "order": _q(v)} for d, v in hol.orders.items()
        ],
        "holomorphic": hol.holomorphic,
        "negative_cusps": [str(d) for d in hol.failures],
    }
    if "characters_at" in job:
        if not tr.integral_weight:
            raise JobError("character needs integral weight")
        try:
            doc["characters"] = {str(d): character(eq, d) for d in job["characters_at"]}
        except ValueError as exc:
            raise JobError(str(exc)) from None
    if "expansion_T" in job:
        try:
            s = q_expansion(eq, job["expansion_T"], _domain(job.get("domain", "exact")))
        except ValueError as exc:
            raise JobError(str(exc)) from None
        doc["expansion"] = {"domain": str(s.domain), "coefficients": [str(c) for c in s.tolist()]}
    ok = tr.all() and hol.holomorphic
    doc["modular_form"] = ok
    return JobResult(doc, EXIT_OK if ok else EXIT_FAIL)


def _dissect(job: dict, cache_root) -> JobResult:
    checks = [
        check_entry25(job.get("T", 500)),
        check_binomial_reduction(job.get("binomial_T", 300)),
        *check_extraction_chain(job.get("chain_T", 300), job.get("u", 256)),
    ]
    doc = {
        "kind": "dissection-check",
        "checks": [asdict(c) for c in checks],
        "holds": all(c.holds for c in checks),
    }
    return JobResult(doc, EXIT_OK if doc["holds"] else EXIT_FAIL)


def _lin(job: dict, cache_root) -> JobResult:
    rep = check_lin_identities(job.get("T", 100))
    doc = {"kind": "lin-identities", **asdict(rep), "holds": rep.holds}
    return JobResult(doc, EXIT_OK if rep.holds else EXIT_FAIL)


def _density(job: dict, cache_root) -> JobResult:
    spec = _sequence(job["sequence"])
    u = job["u"]
    X_max = job.get("X_max", X_MAX_DEFAULT)
    cps = job.get("checkpoints", [X_max])
    if cps != sorted(cps) or cps[-1] > X_max:
        raise JobError("checkpoints must be sorted and <= X_max")
    series = None
    if u > 1:
        series = qcache.cached_coefficients(spec, X_max, Domain.mod(u), root=cache_root, use_cache=job.get("cache", True))
    table = density_scan(spec, u, X_max, cps, series=series)
    text = table.to_csv()
    doc = {
        "kind": "density",
        "sequence": table.spec,
        "u": str(u),
        "rows": [{"X": str(r.X), "count": str(r.count), "density": _q(r.density)} for r in table.rows],
    }
    if job.get("csv"):
        with open(job["csv"], "w") as fh:
            fh.write(text)
        doc["csv"] = job["csv"]
    return JobResult(doc, EXIT_OK, csv=text)


_DISPATCH = {
    "radu-verify": _radu,
    "coefficients": _coefficients,
    "family-check": _family,
    "eta-analyze": _eta,
    "dissection-check": _dissect,
    "lin-identities": _lin,
    "density": _density,
}


def run_job(job: dict, cache_root=None) -> JobResult:
    """Validate and execute one job.  Raises :class:`JobError` for exit-3 problems."""
    kind = validate(job)
    try:
        return _DISPATCH[kind](job, cache_root)
    except JobError:
        raise
    except ValueError as exc:
        # constructor-level validation (t >= m, exponent count, ...) is a usage error
        raise JobError(str(exc)) from None
