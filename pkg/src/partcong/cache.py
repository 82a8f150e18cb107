"""On-disk coefficient cache.

One file per (sequence, domain)::

    qscache v1 <spec-hash> <domain> <T>
    c_0
    c_1
    ...

A file holding T' >= T answers a request for T.  Files that fail to parse are
ignored with a warning.  Writes go through a temp file and ``os.replace`` so
concurrent processes never see a partial file.
"""

from __future__ import annotations

import hashlib
import logging
import os
import tempfile
from pathlib import Path

from .qseries import Domain, TruncatedSeries
from .sequences import SequenceSpec, coefficients

log = logging.getLogger(__name__)

ENV_VAR = "PARTCONG_CACHE_DIR"
MAGIC = "qscache"
VERSION = "v1"


def cache_dir(root: str | os.PathLike | None = None) -> Path:
    if root is not None:
        return Path(root)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "partcong"


def spec_hash(spec: str | SequenceSpec) -> str:
    return hashlib.sha256(SequenceSpec.of(spec).key().encode()).hexdigest()[:16]


def cache_path(spec, domain: Domain, root=None) -> Path:
    return cache_dir(root) / f"{spec_hash(spec)}-{domain}.qs"


def _read(path: Path, h: str, domain: Domain) -> TruncatedSeries:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 5 or header[:2] != [MAGIC, VERSION]:
            raise ValueError("bad header")
        if header[2] != h or header[3] != str(domain):
            raise ValueError("key mismatch")
        T = int(header[4])
        values = [int(line) for line in fh]
    if len(values) != T + 1:
        raise ValueError(f"expected {T + 1} coefficients, found {len(values)}")
    u = domain.modulus
    if u is not None and any(not 0 <= v < u for v in values):
        raise ValueError("residue out of range")
    return TruncatedSeries(values, domain)


def cached_truncation(spec, domain: Domain, root=None) -> int | None:
    path = cache_path(spec, domain, root)
    try:
        with open(path) as fh:
            return int(fh.readline().split()[4])
    except (OSError, ValueError, IndexError):
        return None


def cache_get(spec, domain: Domain, T: int, root=None) -> TruncatedSeries | None:
    path = cache_path(spec, domain, root)
    if not path.exists():
        return None
    try:
        s = _read(path, spec_hash(spec), domain)
    except (OSError, ValueError) as exc:
        log.warning("ignoring corrupt cache file %s: %s", path, exc)
        return None
    if s.truncation < T:
        return None
    return s.truncate(T)


def cache_put(spec, series: TruncatedSeries, root=None) -> Path:
    """Store ``series``; an existing entry with a larger truncation is kept."""
    path = cache_path(spec, series.domain, root)
    have = cached_truncation(spec, series.domain, root)
    if have is not None and have >= series.truncation and cache_get(spec, series.domain, have, root) is not None:
        return path
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".qs")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(f"{MAGIC} {VERSION} {spec_hash(spec)} {series.domain} {series.truncation}\n")
            fh.writelines(f"{c}\n" for c in series.tolist())
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
    return path


def cached_coefficients(spec, T: int, domain: Domain, root=None, use_cache: bool = True) -> TruncatedSeries:
    if use_cache:
        hit = cache_get(spec, domain, T, root)
        if hit is not None:
            return hit
    s = coefficients(spec, T, domain)
    if use_cache:
        try:
            cache_put(spec, s, root)
        except OSError as exc:
            log.warning("could not write cache: %s", exc)
    return s


def list_entries(root=None) -> list[tuple[Path, str]]:
    d = cache_dir(root)
    out = []
    for p in sorted(d.glob("*.qs")):
        try:
            with open(p) as fh:
                out.append((p, fh.readline().strip()))
        except OSError:
            continue
    return out


def clear(root=None) -> int:
    n = 0
    for p, _ in list_entries(root):
        p.unlink()
        n += 1
    return n
