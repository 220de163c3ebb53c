"""Constraint engine for forced real cyclotomic subfields.

A prime-power conductor exponent e = v_p(N) forces the real cyclotomic
field Q(zeta_{p^r})^+ (r = forced_subfield_exponent(p, e)) into the
rationality / endomorphism field K.  Fields forced at distinct primes are
linearly disjoint, so their compositum degree is the product of the
component degrees and must divide d = [K : Q].  This module decides joint
admissibility, computes refined per-prime exponent caps, enumerates
minimal forbidden exponent combinations, classifies local representation
types from exponent parity, and runs the genus-2 Jacobian analysis.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from enum import Enum

from .arith import is_prime, primes_up_to, real_cyclotomic_degree, require_prime
from .bounds import b0_bound, forced_subfield_exponent


class ProfileParseError(ValueError):
    """Raised on malformed profile syntax; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_ENTRY_RE = re.compile(r"\s*(\d+)\s*(?:\^\s*(\d+)\s*)?")


@dataclass(frozen=True, order=True)
class ExponentProfile:
    """A finite set of (prime, exponent >= 1) pairs at pairwise distinct primes."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for p, e in self.entries:
            require_prime(p)
            if e < 1:
                raise ValueError(f"exponent at prime {p} must be >= 1, got {e}")
            if p in seen:
                raise ValueError(f"duplicate prime {p} in profile")
            seen.add(p)
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    @classmethod
    def of(cls, mapping) -> "ExponentProfile":
        """Coerce a {prime: exponent} mapping (or an ExponentProfile) to a profile."""
        if isinstance(mapping, ExponentProfile):
            return mapping
        return cls(entries=tuple(sorted(mapping.items())))

    @classmethod
    def parse(cls, text: str) -> "ExponentProfile":
        """Parse comma-separated "p^e" entries, exponent defaulting to 1.

        Example: "2^9,5^3".  Raises ProfileParseError with the offending
        character position on malformed input.
        """
        if text.strip() == "":
            return cls(entries=())
        entries = []
        seen: dict[int, int] = {}
        pos = 0
        for token in text.split(","):
            m = _ENTRY_RE.fullmatch(token)
            if not m or not token.strip():
                offset = pos + (len(token) - len(token.lstrip()))
                raise ProfileParseError(f"expected 'p' or 'p^e', got {token.strip()!r}", offset)
            p = int(m.group(1))
            e = int(m.group(2)) if m.group(2) else 1
            if not is_prime(p):
                raise ProfileParseError(f"{p} is not prime", pos + m.start(1))
            if e < 1:
                raise ProfileParseError(f"exponent must be >= 1, got {e}", pos + m.start(2))
            if p in seen:
                raise ProfileParseError(f"prime {p} occurs twice", pos + m.start(1))
            seen[p] = e
            entries.append((p, e))
            pos += len(token) + 1  # past this token and the comma
        return cls(entries=tuple(entries))

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def get(self, p: int) -> int | None:
        return self.as_dict().get(p)

    def without(self, p: int) -> "ExponentProfile":
        return ExponentProfile(entries=tuple((q, e) for q, e in self.entries if q != p))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return ",".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.entries)

    def to_json_list(self) -> list[dict]:
        return [{"p": p, "e": e} for p, e in self.entries]

    @classmethod
    def from_json_list(cls, items: list[dict]) -> "ExponentProfile":
        return cls(entries=tuple((item["p"], item["e"]) for item in items))


@dataclass(frozen=True, order=True)
class RealCyclotomicField:
    """Q(zeta_{p^r})^+ with p prime and r >= 1; only nontrivial fields (degree > 1) are stored."""

    p: int
    r: int

    def __post_init__(self):
        require_prime(self.p)
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.degree == 1:
            raise ValueError(f"Q(zeta_{self.p}^{self.r})^+ is trivial; trivial fields are not stored")

    @property
    def degree(self) -> int:
        return real_cyclotomic_degree(self.p, self.r)

    @property
    def name(self) -> str:
        """Readable field name, using the quadratic-surd form where standard."""
        if (self.p, self.r) == (2, 3):
            return "Q(sqrt(2))"
        if (self.p, self.r) == (5, 1):
            return "Q(sqrt(5))"
        if self.degree == 2 and self.r == 1:
            return f"Q(sqrt({self.p}))"
        return f"Q(zeta_{self.p ** self.r})^+"

    def __str__(self):
        return self.name

    def to_json_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "degree": self.degree, "name": self.name}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "RealCyclotomicField":
        return cls(p=obj["p"], r=obj["r"])


@dataclass(frozen=True)
class Compositum:
    """Compositum of real cyclotomic fields at pairwise distinct primes.

    Distinct-prime cyclotomic fields are linearly disjoint, so the degree
    is exactly the product of the component degrees.
    """

    components: tuple[RealCyclotomicField, ...]

    def __post_init__(self):
        ps = [f.p for f in self.components]
        if len(set(ps)) != len(ps):
            raise ValueError("compositum components must live at distinct primes")
        object.__setattr__(self, "components", tuple(sorted(self.components)))

    @property
    def degree(self) -> int:
        return math.prod(f.degree for f in self.components)

    @property
    def is_trivial(self) -> bool:
        return not self.components

    @property
    def name(self) -> str:
        if self.is_trivial:
            return "Q"
        ordered = sorted(self.components, key=lambda f: (f.degree, f.p))
        return " * ".join(f.name for f in ordered)

    def __str__(self):
        return self.name

    def to_json_dict(self) -> dict:
        return {"degree": self.degree, "components": [f.to_json_dict() for f in self.components]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Compositum":
        return cls(components=tuple(RealCyclotomicField.from_json_dict(c) for c in obj["components"]))


class Determination(str, Enum):
    """How completely the forced compositum pins down the endomorphism field."""

    EXACT_FIELD = "exact_field"
    CONTAINS_SUBFIELD = "contains_subfield"
    NO_CONSTRAINT = "no_constraint"


def forced_field(p: int, e: int) -> RealCyclotomicField | None:
    """The nontrivial real cyclotomic field forced by v_p(N) = e, or None."""
    r = forced_subfield_exponent(p, e)
    if r >= 1 and real_cyclotomic_degree(p, r) > 1:
        return RealCyclotomicField(p=p, r=r)
    return None


def forced_compositum(profile: ExponentProfile) -> Compositum:
    """Compositum of all nontrivial fields forced by a profile's entries."""
    fields = [forced_field(p, e) for p, e in profile]
    return Compositum(components=tuple(f for f in fields if f is not None))


@dataclass(frozen=True)
class RmConstraintReport:
    """Verdict of the constraint engine for one profile and dimension."""

    dimension: int
    profile: ExponentProfile
    admissible: bool
    forced: Compositum
    determination: Determination
    residual_degree: int | None
    refined_bounds: dict[int, int] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "d": self.dimension,
            "profile": self.profile.to_json_list(),
            "admissible": self.admissible,
            "forced": self.forced.to_json_dict(),
            "determination": self.determination.value,
            "residual_degree": self.residual_degree,
            "refined_bounds": {str(p): cap for p, cap in sorted(self.refined_bounds.items())},
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "RmConstraintReport":
        return cls(
            dimension=obj["d"],
            profile=ExponentProfile.from_json_list(obj["profile"]),
            admissible=obj["admissible"],
            forced=Compositum.from_json_dict(obj["forced"]),
            determination=Determination(obj["determination"]),
            residual_degree=obj["residual_degree"],
            refined_bounds={int(p): cap for p, cap in obj["refined_bounds"].items()},
        )


def analyze_profile(profile, d: int) -> RmConstraintReport:
    """Decide whether a factored-level profile is admissible in dimension d.

    Assembles the compositum of the forced real cyclotomic subfields, tests
    whether its degree divides d, reports how completely the endomorphism
    field is determined, and computes for each profile prime the refined
    exponent cap implied by the remaining primes' forced degrees.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    profile = ExponentProfile.of(profile)
    forced = forced_compositum(profile)
    degree = forced.degree
    admissible = d % degree == 0
    if forced.is_trivial:
        determination = Determination.NO_CONSTRAINT
    elif degree == d:
        determination = Determination.EXACT_FIELD
    else:
        determination = Determination.CONTAINS_SUBFIELD
    refined: dict[int, int] = {}
    for p, _ in profile:
        rest = forced_compositum(profile.without(p))
        if d % rest.degree == 0:
            refined[p] = b0_bound(p, d // rest.degree)
    return RmConstraintReport(
        dimension=d,
        profile=profile,
        admissible=admissible,
        forced=forced,
        determination=determination,
        residual_degree=d // degree if admissible else None,
        refined_bounds=refined,
    )


def max_exponent_given(p: int, d: int, partial) -> int:
    """Largest admissible v_p(N) alongside an already-fixed partial profile.

    Equals b0_bound(p, d') where d' = d divided by the partial profile's
    forced compositum degree.  Rejects partial profiles that already
    mention p or are themselves inadmissible for d.
    """
    require_prime(p)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    partial = ExponentProfile.of(partial)
    if partial.get(p) is not None:
        raise ValueError(f"prime {p} already occurs in the partial profile")
    degree = forced_compositum(partial).degree
    if d % degree != 0:
        raise ValueError(f"partial profile {partial} is inadmissible for dimension {d}")
    return b0_bound(p, d // degree)


def _degree_thresholds(p: int, d: int, e_max: int = 64) -> list[tuple[int, int]]:
    """(smallest exponent, forced degree) per distinct nontrivial forced degree at p.

    Degrees at one prime form a divisibility chain, so the list is strictly
    increasing in both coordinates.
    """
    thresholds = []
    last_degree = 1
    for e in range(1, e_max + 1):
        degree = real_cyclotomic_degree(p, forced_subfield_exponent(p, e))
        if degree > last_degree:
            thresholds.append((e, degree))
            last_degree = degree
        if degree > d:
            break
    return thresholds


def _predecessors(profile: ExponentProfile, thresholds: dict[int, list[tuple[int, int]]]):
    """Immediate predecessors: each prime lowered one threshold step (or removed)."""
    for p, e in profile:
        steps = thresholds[p]
        idx = next(i for i, (te, _) in enumerate(steps) if te == e)
        if idx == 0:
            yield profile.without(p)
        else:
            lowered = dict(profile.as_dict())
            lowered[p] = steps[idx - 1][0]
            yield ExponentProfile.of(lowered)


def enumerate_forbidden(
    d: int,
    prime_bound: int,
    max_entries: int,
    include_singletons: bool = False,
) -> list[ExponentProfile]:
    """All minimal inadmissible profiles over primes <= prime_bound.

    Each entry sits at the smallest exponent forcing its degree, profiles
    are inadmissible, and every immediate predecessor (one prime lowered a
    threshold step or dropped) is admissible; admissibility is downward
    closed, so all proper sub-profiles are admissible too.  Singleton
    profiles (a lone prime exceeding its own cap, already captured by
    b0_bound) are omitted unless include_singletons is set.  Output is
    deterministically sorted by size, then entries.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if max_entries < 1:
        return []
    primes = primes_up_to(prime_bound)
    thresholds = {p: _degree_thresholds(p, d) for p in primes}

    results: list[ExponentProfile] = []

    if include_singletons:
        for p in primes:
            # First threshold whose degree fails to divide d; inadmissibility
            # is upward-absorbing along the divisibility chain.
            for e, degree in thresholds[p]:
                if d % degree != 0:
                    results.append(ExponentProfile.of({p: e}))
                    break

    # Multi-prime profiles: every singleton sub-profile must be admissible,
    # so only thresholds with degree dividing d can participate.
    usable = {
        p: [(e, g) for e, g in thresholds[p] if d % g == 0]
        for p in primes
    }
    candidates = [p for p in primes if usable[p]]
    for k in range(2, max_entries + 1):
        for combo in itertools.combinations(candidates, k):
            for choice in itertools.product(*(usable[p] for p in combo)):
                degree = math.prod(g for _, g in choice)
                if d % degree == 0:
                    continue
                profile = ExponentProfile.of({p: e for p, (e, _) in zip(combo, choice)})
                preds = _predecessors(profile, thresholds)
                if all(analyze_profile(q, d).admissible for q in preds):
                    results.append(profile)
    return sorted(results, key=lambda pr: (len(pr), pr.entries))


class LocalType(str, Enum):
    """Constraint on the local representation at p implied by exponent data."""

    SUPERCUSPIDAL_DIHEDRAL_Q3_SQRT_MINUS3 = "supercuspidal_dihedral_from_Q3(sqrt(-3))"
    SUPERCUSPIDAL_REQUIRED = "supercuspidal_required"
    UNCONSTRAINED = "unconstrained"


@dataclass(frozen=True)
class LocalTypeVerdict:
    kind: LocalType
    justification: str

    def to_json_dict(self) -> dict:
        return {"kind": self.kind.value, "justification": self.justification}


def classify_local_type(p: int, e: int, contains_forced_subfield: bool) -> LocalTypeVerdict:
    """Classify the local representation at p from v_p(N) = e and field data.

    An odd exponent e >= 3 forces a supercuspidal local component.  At
    p = 3 with e = 2m + 1 >= 3, the component is dihedral and the inducing
    quadratic extension is pinned down to Q_3(sqrt(-3)) whenever the
    rationality field fails to contain Q(zeta_{3^m})^+ (the containment
    that every other ramified quadratic extension would force).
    ``contains_forced_subfield`` supplies that containment fact; deciding
    it requires number-field data outside this package's scope.
    """
    require_prime(p)
    if e < 1:
        raise ValueError("exponent must be >= 1")
    if p == 3 and e >= 3 and e % 2 == 1 and not contains_forced_subfield:
        return LocalTypeVerdict(
            kind=LocalType.SUPERCUSPIDAL_DIHEDRAL_Q3_SQRT_MINUS3,
            justification=(
                "odd v_3(N) >= 3 forces a ramified dihedral supercuspidal; the missing "
                "real cyclotomic subfield rules out every inducing field except Q_3(sqrt(-3))"
            ),
        )
    if e >= 3 and e % 2 == 1:
        return LocalTypeVerdict(
            kind=LocalType.SUPERCUSPIDAL_REQUIRED,
            justification="odd conductor exponent >= 3 admits neither principal series nor twisted Steinberg",
        )
    return LocalTypeVerdict(
        kind=LocalType.UNCONSTRAINED,
        justification="exponent parity places no restriction on the local type",
    )


@dataclass(frozen=True)
class Genus2Report:
    """Outcome of the genus-2 Jacobian analysis.

    ``simple`` is True when the product-of-elliptic-curves exclusion fires,
    None when the exponent data cannot decide.  ``analysis`` carries the
    dimension-2 constraint report for the halved profile when simplicity
    is forced (its admissible flag exposes inconsistent inputs).
    """

    profile: ExponentProfile
    simple: bool | None
    field: RealCyclotomicField | None
    analysis: RmConstraintReport | None

    def to_json_dict(self) -> dict:
        return {
            "profile": self.profile.to_json_list(),
            "simple": self.simple,
            "field": self.field.to_json_dict() if self.field else None,
            "analysis": self.analysis.to_json_dict() if self.analysis else None,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Genus2Report":
        return cls(
            profile=ExponentProfile.from_json_list(obj["profile"]),
            simple=obj["simple"],
            field=RealCyclotomicField.from_json_dict(obj["field"]) if obj["field"] else None,
            analysis=RmConstraintReport.from_json_dict(obj["analysis"]) if obj["analysis"] else None,
        )


def genus2_rm_analysis(conductor_valuations) -> Genus2Report:
    """Analyze a genus-2 curve with real multiplication from its conductor profile.

    The profile gives v_p of the conductor of the Jacobian surface.  If it
    were a product of two elliptic curves, each exponent would be at most
    twice the dimension-1 cap; an exponent beyond that forces the Jacobian
    simple, hence maximal RM with square conductor N^2.  The exponents are
    then halved and fed to the dimension-2 engine, which may pin down the
    endomorphism field exactly.
    """
    profile = ExponentProfile.of(conductor_valuations)
    deciding = [p for p, e in profile if e > 2 * b0_bound(p, 1)]
    if not deciding:
        return Genus2Report(profile=profile, simple=None, field=None, analysis=None)
    odd = [p for p, e in profile if e % 2 == 1]
    if odd:
        raise ValueError(
            f"profile forces a simple Jacobian (prime {deciding[0]}) but has odd exponent "
            f"at {odd[0]}; the conductor of a simple surface with maximal RM is a square"
        )
    halved = ExponentProfile.of({p: e // 2 for p, e in profile})
    report = analyze_profile(halved, d=2)
    field_out: RealCyclotomicField | None = None
    if report.admissible and report.determination is Determination.EXACT_FIELD:
        field_out = report.forced.components[0]
    return Genus2Report(profile=profile, simple=True, field=field_out, analysis=report)
