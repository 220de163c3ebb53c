"""Closed-form local conductor exponent bounds.

Three bounds on v_p(N) for a degree-d object at a prime p:

* ``bk_bound``        -- B(p, d), the classical Brumer-Kramer bound on the
                         full conductor exponent v_p(N^d) = d * v_p(N).
* ``bk_prime_bound``  -- B'(p, d) = floor(B(p, d) / d), the Brumer-Kramer
                         bound per dimension.
* ``b0_bound``        -- B0(p, d), the improved bound valid under maximal
                         real multiplication.

plus the exponent r(p, e) of the real cyclotomic subfield forced into the
rationality field by v_p(N) = e, and the table renderer that lays the
bounds out on a (d, p) grid.
"""
from __future__ import annotations

from dataclasses import dataclass

from .arith import lambda_p, primes_up_to, real_cyclotomic_degree, require_prime, valuation

SHARP = "sharp"
ALMOST_SHARP = "almost_sharp"
UNKNOWN = "unknown"


def _require_dimension(d: int) -> int:
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return d


def bk_bound(p: int, d: int) -> int:
    """Brumer-Kramer bound B(p, d) = 2d + p*t + (p-1)*lambda_p(t), t = floor(2d/(p-1))."""
    require_prime(p)
    _require_dimension(d)
    t = 2 * d // (p - 1)
    return 2 * d + p * t + (p - 1) * lambda_p(p, t)


def bk_prime_bound(p: int, d: int) -> int:
    """Per-dimension Brumer-Kramer bound B'(p, d) = 2 + floor((p*t + (p-1)*lambda_p(t)) / d).

    Agrees with floor(bk_bound(p, d) / d).
    """
    require_prime(p)
    _require_dimension(d)
    t = 2 * d // (p - 1)
    return 2 + (p * t + (p - 1) * lambda_p(p, t)) // d


def b0_bound(p: int, d: int) -> int:
    """Improved bound B0(p, d) on v_p(N) under maximal real multiplication.

    8 + 2*v_2(d) at p = 2; 5 + 2*v_3(d) at p = 3; 4 + 2*v_p(d) at p >= 5
    when (p - 1) | 2d; and 2 otherwise.
    """
    require_prime(p)
    _require_dimension(d)
    if p == 2:
        return 8 + 2 * valuation(2, d)
    if p == 3:
        return 5 + 2 * valuation(3, d)
    if (2 * d) % (p - 1) == 0:
        return 4 + 2 * valuation(p, d)
    return 2


def b0_gl2_bound(p: int, d: int) -> int:
    """Per-dimension exponent cap for simple GL(2)-type varieties.

    Same as b0_bound for odd p; one larger at p = 2.
    """
    cap = b0_bound(p, d)
    return cap + 1 if p == 2 else cap


def forced_subfield_exponent(p: int, e: int) -> int:
    """Exponent r such that v_p(N) = e forces Q(zeta_{p^r})^+ into the rationality field.

    Returns 0 (no information) below the hypothesis thresholds: e < 3 for
    odd p, e < 9 for p = 2.  Otherwise r = ceil(e/2 - v_p(3)/2) - 1 - v_p(2),
    clamped below at 0.
    """
    require_prime(p)
    if e < 0:
        raise ValueError("exponent must be non-negative")
    threshold = 9 if p == 2 else 3
    if e < threshold:
        return 0
    vp3 = 1 if p == 3 else 0
    vp2 = 1 if p == 2 else 0
    return max(0, (e - vp3 + 1) // 2 - 1 - vp2)


@dataclass(frozen=True)
class BoundTriple:
    """The three bounds for one (p, d) cell."""

    p: int
    d: int
    bk: int
    bk_prime: int
    b0: int

    @classmethod
    def compute(cls, p: int, d: int) -> "BoundTriple":
        return cls(p=p, d=d, bk=bk_bound(p, d), bk_prime=bk_prime_bound(p, d), b0=b0_bound(p, d))

    def to_json_dict(self) -> dict:
        return {"p": self.p, "d": self.d, "bk": self.bk, "bk_prime": self.bk_prime, "b0": self.b0}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "BoundTriple":
        return cls(p=obj["p"], d=obj["d"], bk=obj["bk"], bk_prime=obj["bk_prime"], b0=obj["b0"])


@dataclass(frozen=True)
class TableCell:
    """One grid cell: the bound triple plus an optional sharpness flag."""

    triple: BoundTriple
    sharpness: str = UNKNOWN

    @property
    def display(self) -> str:
        """B' with the smaller B0 in parentheses, exactly when they differ."""
        t = self.triple
        if t.b0 < t.bk_prime:
            return f"{t.bk_prime} ({t.b0})"
        return str(t.bk_prime)

    def to_json_dict(self) -> dict:
        obj = self.triple.to_json_dict()
        obj["display"] = self.display
        obj["sharpness"] = self.sharpness
        return obj

    @classmethod
    def from_json_dict(cls, obj: dict) -> "TableCell":
        return cls(triple=BoundTriple.from_json_dict(obj), sharpness=obj.get("sharpness", UNKNOWN))


@dataclass(frozen=True)
class BoundTable:
    """Bounds over d = 1..d_max and primes p <= p_max.

    Cells with p > 2d + 1 (where both bounds are 2) are omitted unless the
    table was rendered with include_trivial.
    """

    d_max: int
    p_max: int
    primes: tuple[int, ...]
    cells: dict[tuple[int, int], TableCell]  # keyed by (d, p)

    def row(self, d: int) -> list[TableCell | None]:
        return [self.cells.get((d, p)) for p in self.primes]


def render_table(
    d_max: int,
    p_max: int,
    sharpness: dict[tuple[int, int], str] | None = None,
    include_trivial: bool = False,
) -> BoundTable:
    """Build the bound grid, merging per-cell sharpness flags when given.

    ``sharpness`` is keyed by (p, d) with values sharp / almost_sharp /
    none_found (the latter maps to an unknown cell flag).
    """
    _require_dimension(d_max)
    if p_max < 2:
        raise ValueError("p_max must be >= 2")
    primes = primes_up_to(p_max)
    cells: dict[tuple[int, int], TableCell] = {}
    for d in range(1, d_max + 1):
        for p in primes:
            if p > 2 * d + 1 and not include_trivial:
                continue
            flag = UNKNOWN
            if sharpness is not None:
                status = sharpness.get((p, d))
                if status in (SHARP, ALMOST_SHARP):
                    flag = status
            cells[(d, p)] = TableCell(triple=BoundTriple.compute(p, d), sharpness=flag)
    return BoundTable(d_max=d_max, p_max=p_max, primes=tuple(primes), cells=cells)
