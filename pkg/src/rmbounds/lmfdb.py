"""Orbit-degree data for weight-2 trivial-character newforms.

Answers "which Galois-orbit degrees occur at level N?" from three layers:
a packaged fixture store, an append-only JSON-lines cache on disk, and the
LMFDB web API.  Network results are cached; fixtures and cache are always
consulted first, so no request is ever issued for a level they can answer.

The fixture store ships the levels needed by the sharpness scanner.  For
most of them it records only the orbit degrees that are independently
attested (a partial list); level 243 carries its complete decomposition.
"""
from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Callable

from .arith import primes_up_to, require_prime
from .bounds import ALMOST_SHARP, SHARP, b0_bound

logger = logging.getLogger(__name__)

NONE_FOUND = "none_found"

SOURCE_NETWORK = "network"
SOURCE_CACHE = "cache"
SOURCE_FIXTURE = "fixture"


class LmfdbError(Exception):
    """Base class for data-layer failures."""


class NetworkUnavailable(LmfdbError):
    """No usable network answer and neither fixtures nor cache cover the level."""


class ServiceError(LmfdbError):
    """The remote service kept failing; retry_after carries its hint, if any."""

    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class MalformedResponse(LmfdbError):
    """The remote payload did not match the configured schema."""


@dataclass(frozen=True)
class NewformOrbitRecord:
    """One Galois orbit of newforms: level, weight, character triviality, orbit degree."""

    level: int
    weight: int
    char_trivial: bool
    dim: int

    def to_json_dict(self) -> dict:
        return {"level": self.level, "weight": self.weight, "char_trivial": self.char_trivial, "dim": self.dim}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "NewformOrbitRecord":
        return cls(level=obj["level"], weight=obj["weight"], char_trivial=obj["char_trivial"], dim=obj["dim"])


@dataclass(frozen=True)
class LevelQueryResult:
    level: int
    records: tuple[NewformOrbitRecord, ...]
    source: str
    fetched_at: str | None

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(rec.dim for rec in self.records)

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "records": [rec.to_json_dict() for rec in self.records],
            "source": self.source,
            "fetched_at": self.fetched_at,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "LevelQueryResult":
        return cls(
            level=obj["level"],
            records=tuple(NewformOrbitRecord.from_json_dict(r) for r in obj["records"]),
            source=obj["source"],
            fetched_at=obj["fetched_at"],
        )


@dataclass(frozen=True)
class SharpnessWitness:
    """Outcome of a sharpness scan for one (p, d) cell."""

    p: int
    d: int
    exponent_attained: int | None
    level: int | None
    status: str  # sharp | almost_sharp | none_found

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "exponent_attained": self.exponent_attained,
            "level": self.level,
            "status": self.status,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SharpnessWitness":
        return cls(
            p=obj["p"],
            d=obj["d"],
            exponent_attained=obj["exponent_attained"],
            level=obj["level"],
            status=obj["status"],
        )


def _utcnow_iso() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")


def _record_to_line(level: int, dims: list[int], fetched_at: str) -> str:
    obj = {"level": level, "weight": 2, "char_trivial": True, "dims": sorted(dims), "fetched_at": fetched_at}
    return json.dumps(obj, separators=(", ", ": "), sort_keys=False)


def _parse_store_line(line: str, where: str, lineno: int) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{where}:{lineno}: not valid JSON: {exc}") from exc
    for key in ("level", "weight", "char_trivial", "dims", "fetched_at"):
        if key not in obj:
            raise ValueError(f"{where}:{lineno}: record is missing {key!r}")
    return obj


def load_store(lines, where: str) -> dict[int, dict]:
    """Parse JSON-lines records, last writer winning per level."""
    store: dict[int, dict] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        obj = _parse_store_line(line, where, lineno)
        store[obj["level"]] = obj
    return store


class OrbitDimCache:
    """Append-only JSON-lines cache of orbit-degree records.

    One writer with concurrent readers: appends are serialized by a lock
    and written as single lines; loading applies last-writer-wins per level.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: dict[int, dict] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as handle:
                self._records = load_store(handle, str(self.path))

    def get(self, level: int) -> dict | None:
        return self._records.get(level)

    def put(self, level: int, dims: list[int], fetched_at: str | None = None) -> dict:
        fetched_at = fetched_at or _utcnow_iso()
        line = _record_to_line(level, dims, fetched_at)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8", newline="\n") as handle:
                handle.write(line + "\n")
            obj = json.loads(line)
            self._records[level] = obj
        return obj

    def levels(self) -> list[int]:
        return sorted(self._records)


def load_fixture_store() -> dict[int, dict]:
    """The packaged fixture records, keyed by level."""
    text = resources.files("rmbounds.data").joinpath("fixtures.jsonl").read_text(encoding="utf-8")
    return load_store(text.splitlines(), "fixtures.jsonl")


@dataclass
class LmfdbConfig:
    """Where and how to query the web API.

    The endpoint path and field names are configuration because the
    upstream schema has changed historically.  ``query`` values may contain
    ``{level}``, filled per request.
    """

    base_url: str = "https://www.lmfdb.org"
    path: str = "/api/mf_newforms/"
    query: dict[str, str] = field(
        default_factory=lambda: {
            "level": "i{level}",
            "weight": "i2",
            "char_order": "i1",
            "_fields": "dim",
            "_format": "json",
        }
    )
    data_key: str = "data"
    dim_field: str = "dim"
    next_key: str = "next"
    min_interval: float = 0.5
    max_retries: int = 4
    timeout: float = 30.0


def _parse_retry_after(headers: dict) -> float | None:
    value = headers.get("Retry-After") or headers.get("retry-after")
    if value is None:
        return None
    try:
        return float(value)
    except (TypeError, ValueError):
        return None


def _requests_transport(url: str, params: dict[str, str], timeout: float):
    """Default transport: GET returning (status, parsed-or-raw body, headers)."""
    import requests

    try:
        response = requests.get(url, params=params, timeout=timeout)
    except requests.RequestException as exc:
        raise NetworkUnavailable(f"request to {url} failed: {exc}") from exc
    try:
        body = response.json()
    except ValueError:
        body = response.text
    return response.status_code, body, dict(response.headers)


class OrbitDimClient:
    """Fetches orbit degrees with fixtures-first resolution and polite networking.

    At most one network request is in flight at a time, consecutive
    requests are separated by ``config.min_interval`` seconds, and 429/5xx
    responses are retried with exponential backoff before surfacing as
    ServiceError.
    """

    def __init__(
        self,
        config: LmfdbConfig | None = None,
        cache: OrbitDimCache | None = None,
        fixtures: dict[int, dict] | None = None,
        offline: bool = False,
        transport: Callable | None = None,
        sleep: Callable[[float], None] = time.sleep,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.config = config or LmfdbConfig()
        self.cache = cache
        self.fixtures = load_fixture_store() if fixtures is None else fixtures
        self.offline = offline
        self._transport = transport or _requests_transport
        self._sleep = sleep
        self._clock = clock
        self._net_lock = threading.Lock()
        self._last_request: float | None = None

    # -- fetching ---------------------------------------------------------

    def fetch_orbit_dims(self, level: int) -> LevelQueryResult:
        """Orbit degrees at a level: fixtures, then cache, then network."""
        if level < 1:
            raise ValueError(f"level must be >= 1, got {level}")
        fixture = self.fixtures.get(level)
        if fixture is not None:
            return self._result_from_record(fixture, SOURCE_FIXTURE)
        if self.cache is not None:
            cached = self.cache.get(level)
            if cached is not None:
                return self._result_from_record(cached, SOURCE_CACHE)
        if self.offline:
            raise NetworkUnavailable(f"offline and level {level} is neither a fixture nor cached")
        dims = self._fetch_from_network(level)
        fetched_at = _utcnow_iso()
        if self.cache is not None:
            self.cache.put(level, dims, fetched_at)
        records = tuple(
            NewformOrbitRecord(level=level, weight=2, char_trivial=True, dim=dim) for dim in sorted(dims)
        )
        return LevelQueryResult(level=level, records=records, source=SOURCE_NETWORK, fetched_at=fetched_at)

    def _result_from_record(self, record: dict, source: str) -> LevelQueryResult:
        records = tuple(
            NewformOrbitRecord(
                level=record["level"],
                weight=record["weight"],
                char_trivial=record["char_trivial"],
                dim=dim,
            )
            for dim in sorted(record["dims"])
        )
        return LevelQueryResult(
            level=record["level"], records=records, source=source, fetched_at=record["fetched_at"]
        )

    def _fetch_from_network(self, level: int) -> list[int]:
        url = self.config.base_url.rstrip("/") + self.config.path
        params = {key: value.format(level=level) for key, value in self.config.query.items()}
        dims: list[int] = []
        while True:
            body = self._request_with_backoff(url, params)
            if not isinstance(body, dict) or self.config.data_key not in body:
                raise MalformedResponse(f"expected a JSON object with {self.config.data_key!r}")
            rows = body[self.config.data_key]
            if not isinstance(rows, list):
                raise MalformedResponse(f"{self.config.data_key!r} is not a list")
            for row in rows:
                if not isinstance(row, dict) or self.config.dim_field not in row:
                    raise MalformedResponse(f"row without {self.config.dim_field!r} field: {row!r}")
                dim = row[self.config.dim_field]
                if not isinstance(dim, int) or dim < 1:
                    raise MalformedResponse(f"bad orbit dimension {dim!r}")
                dims.append(dim)
            next_url = body.get(self.config.next_key)
            if not next_url:
                return dims
            url, params = str(next_url), {}
            if url.startswith("/"):
                url = self.config.base_url.rstrip("/") + url

    def _request_with_backoff(self, url: str, params: dict[str, str]):
        with self._net_lock:
            retry_after_hint: float | None = None
            for attempt in range(self.config.max_retries + 1):
                self._respect_rate_limit()
                status, body, headers = self._transport(url, params, self.config.timeout)
                self._last_request = self._clock()
                if status == 200:
                    if isinstance(body, str):
                        raise MalformedResponse("response was not JSON")
                    return body
                if status == 429 or status >= 500:
                    retry_after_hint = _parse_retry_after(headers)
                    delay = retry_after_hint or self.config.min_interval * (2**attempt)
                    logger.info("status %d from %s; backing off %.2fs", status, url, delay)
                    self._sleep(delay)
                    continue
                raise ServiceError(f"unexpected status {status} from {url}")
            raise ServiceError(
                f"giving up on {url} after {self.config.max_retries + 1} attempts",
                retry_after=retry_after_hint,
            )

    def _respect_rate_limit(self):
        if self._last_request is None:
            return
        elapsed = self._clock() - self._last_request
        if elapsed < self.config.min_interval:
            self._sleep(self.config.min_interval - elapsed)

    # -- scanning ---------------------------------------------------------

    def sharpness_scan(self, p: int, d: int, level_budget: int, strict: bool = False) -> SharpnessWitness:
        """Look for a degree-d orbit with v_p(level) hitting the cap, then the cap minus one.

        Levels p^e * M (M coprime to p) are visited in increasing order up
        to the budget.  Levels the offline store cannot answer are skipped
        (logged, resumable once cached) unless ``strict`` is set, in which
        case the NetworkUnavailable propagates.  A none_found result means
        no witness among the answerable levels, never non-existence.
        """
        require_prime(p)
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        cap = b0_bound(p, d)
        for exponent, status in ((cap, SHARP), (cap - 1, ALMOST_SHARP)):
            base = p**exponent
            if base > level_budget:
                continue
            skipped = 0
            for m in range(1, level_budget // base + 1):
                if m % p == 0:
                    continue
                level = base * m
                try:
                    result = self.fetch_orbit_dims(level)
                except NetworkUnavailable:
                    if strict:
                        raise
                    skipped += 1
                    continue
                if d in result.dims:
                    return SharpnessWitness(p=p, d=d, exponent_attained=exponent, level=level, status=status)
            if skipped:
                logger.info(
                    "scan (p=%d, d=%d, e=%d): %d level(s) unavailable offline; rerun online to resume",
                    p, d, exponent, skipped,
                )
        return SharpnessWitness(p=p, d=d, exponent_attained=None, level=None, status=NONE_FOUND)

    def annotate_table(
        self, d_max: int, level_budget: int, strict: bool = False
    ) -> dict[tuple[int, int], SharpnessWitness]:
        """Run sharpness_scan over every (p, d) grid cell with p <= 2d + 1."""
        if d_max < 1:
            raise ValueError(f"d_max must be >= 1, got {d_max}")
        witnesses: dict[tuple[int, int], SharpnessWitness] = {}
        for d in range(1, d_max + 1):
            for p in primes_up_to(2 * d + 1):
                witnesses[(p, d)] = self.sharpness_scan(p, d, level_budget, strict=strict)
        return witnesses
