"""partcong command line.

Every job subcommand takes ``--job FILE`` plus flags that mirror the job-file
fields; flags override the file.  Reports go to stdout (or ``--out``) as JSON.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import cache as qcache
from .jobs import EXIT_OK, EXIT_USAGE, JobError, run_job

log = logging.getLogger("partcong")

# subcommand -> job kind
SUBCOMMANDS = {
    "verify": "radu-verify",
    "coeff": "coefficients",
    "family": "family-check",
    "eta": "eta-analyze",
    "dissect": "dissection-check",
    "lin": "lin-identities",
    "density": "density",
}


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _int_or_ints(text: str):
    vals = _ints(text)
    return vals[0] if len(vals) == 1 and "," not in text else vals


def _sequence(text: str):
    # "cubic-pair" or "custom:M:r1,r2,..."
    if text.startswith("custom:"):
        _, M, r = text.split(":", 2)
        return {"M": int(M), "r": _ints(r)}
    return text


def _domain(text: str):
    return "exact" if text == "exact" else int(text.removeprefix("mod"))


def _eta_r(text: str):
    # "48:14,24:-4,96:-6" (divisor:exponent) or plain "1,0,-2,..."
    if ":" in text:
        return {k.strip(): int(v) for k, v in (p.split(":") for p in text.split(","))}
    return _ints(text)


def _bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text}")


# (flag, job field, parser, help)
FLAGS = {
    "verify": [
        ("--preset", "preset", str, "thm1, thm2 or thm2-66"),
        ("--m", "m", int, "progression modulus m"),
        ("--M", "M", int, "level M of the eta-product"),
        ("--N", "N", int, "level N"),
        ("--r", "r", _ints, "exponents r over divisors of M, comma separated"),
        ("--t", "t", int, "residue t"),
        ("--rprime", "rprime", _ints, "exponents r' over divisors of N"),
        ("--u", "u", int, "congruence modulus"),
        ("--spot-check", "spot_check", _bool, "also test 50 values beyond the bound"),
    ],
    "coeff": [
        ("--sequence", "sequence", _sequence, "cubic, cubic-pair, overcubic, overcubic-pair or custom:M:r1,r2,..."),
        ("--domain", "domain", _domain, "'exact' or a modulus"),
        ("--n", "n", _int_or_ints, "index or comma-separated indices"),
        ("--T", "T", int, "report every coefficient up to T"),
        ("--cache", "cache", _bool, "use the coefficient cache (default true)"),
    ],
    "family": [
        ("--sequence", "sequence", _sequence, "sequence name"),
        ("--m", "m", int, "progression modulus"),
        ("--t", "t", int, "residue"),
        ("--u", "u", int, "congruence modulus"),
        ("--n-max", "n_max", int, "check n <= n_max"),
        ("--cache", "cache", _bool, "use the coefficient cache"),
    ],
    "eta": [
        ("--build", "build", str, "B, A, F, Bbar or Abar"),
        ("--k", "k", int, "family index k"),
        ("--level", "level", int, "level N"),
        ("--r", "r", _eta_r, "exponents: 'd:r,d:r' or a list over divisors"),
        ("--characters-at", "characters_at", _ints, "evaluate the character at these d"),
        ("--expansion-T", "expansion_T", int, "also print the q-expansion to this order"),
        ("--domain", "domain", _domain, "domain for the expansion"),
    ],
    "dissect": [
        ("--T", "T", int, "order for the 2-dissection identity"),
        ("--chain-T", "chain_T", int, "terms per step of the extraction chain"),
        ("--binomial-T", "binomial_T", int, "order for (q;q)^49 = (q^7;q^7)^7 mod 49"),
        ("--u", "u", int, "modulus for the chain"),
    ],
    "lin": [
        ("--T", "T", int, "number of terms"),
    ],
    "density": [
        ("--sequence", "sequence", _sequence, "sequence name"),
        ("--u", "u", int, "modulus"),
        ("--X-max", "X_max", int, "largest n"),
        ("--checkpoints", "checkpoints", _ints, "comma-separated X values"),
        ("--csv", "csv", str, "write the table as CSV here"),
        ("--cache", "cache", _bool, "use the coefficient cache"),
    ],
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partcong", description=__doc__.split("\n")[0])
    p.add_argument("--cache-dir", help=f"coefficient cache directory (default ${qcache.ENV_VAR} or ~/.cache/partcong)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name, flags in FLAGS.items():
        sp = sub.add_parser(name, help=f"{SUBCOMMANDS[name]} job")
        sp.add_argument("--job", help="JSON job file")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        for flag, dest, typ, hlp in flags:
            sp.add_argument(flag, dest=f"f_{dest}", type=typ, help=hlp)
    rp = sub.add_parser("run", help="run a job file of any kind")
    rp.add_argument("job")
    rp.add_argument("--out")
    cp = sub.add_parser("cache", help="inspect or clear the coefficient cache")
    cp.add_argument("action", choices=["list", "clear", "path"])
    return p


def _load_job(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise JobError(f"cannot read job file {path}: {exc}") from None


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cache_command(action: str, root) -> int:
    if action == "path":
        print(qcache.cache_dir(root))
    elif action == "list":
        for path, header in qcache.list_entries(root):
            print(f"{path.name}\t{header}")
    else:
        print(f"removed {qcache.clear(root)} entries")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; our table reserves 2 for hypothesis failures
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    if args.command == "cache":
        return _cache_command(args.action, args.cache_dir)
    try:
        if args.command == "run":
            job = _load_job(args.job)
        else:
            kind = SUBCOMMANDS[args.command]
            job = _load_job(args.job) if args.job else {}
            if job.get("kind", kind) != kind:
                raise JobError(f"job file is a {job.get('kind')!r} job, not {kind!r}")
            job["kind"] = kind
            for key, val in vars(args).items():
                if key.startswith("f_") and val is not None:
                    job[key[2:]] = val
        result = run_job(job, cache_root=args.cache_dir)
    except JobError as exc:
        print(f"partcong: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(result.report, args.out)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
