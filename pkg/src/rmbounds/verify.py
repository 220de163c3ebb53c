"""Exhaustive verification of the bound inequalities over finite ranges.

Each property quantifies over an explicit (p, d) or (p, m) box and is
checked by direct evaluation; failures carry the first counterexample.
The d <= 10 reference grid is frozen here so the formulas can be checked
cell-for-cell against the known values.
"""
from __future__ import annotations

from dataclasses import dataclass

from .arith import digits_base_p, lambda_p, primes_up_to, real_cyclotomic_degree, valuation
from .bounds import b0_bound, bk_bound, bk_prime_bound, forced_subfield_exponent

# Known (bk_prime, b0) values for d = 1..10 and the primes p <= 2d + 1.
REFERENCE_GRID_D10: dict[tuple[int, int], tuple[int, int]] = {
    # (d, p): (bk_prime, b0)
    (1, 2): (8, 8), (1, 3): (5, 5),
    (2, 2): (10, 10), (2, 3): (5, 5), (2, 5): (4, 4),
    (3, 2): (9, 8), (3, 3): (7, 7), (3, 5): (3, 2), (3, 7): (4, 4),
    (4, 2): (12, 12), (4, 3): (6, 5), (4, 5): (4, 4), (4, 7): (3, 2),
    (5, 2): (11, 8), (5, 3): (6, 5), (5, 5): (4, 2), (5, 7): (3, 2), (5, 11): (4, 4),
    (6, 2): (11, 10), (6, 3): (7, 7), (6, 5): (4, 4), (6, 7): (4, 4), (6, 11): (3, 2),
    (6, 13): (4, 4),
    (7, 2): (10, 8), (7, 3): (6, 5), (7, 5): (4, 2), (7, 7): (4, 2), (7, 11): (3, 2),
    (7, 13): (3, 2),
    (8, 2): (14, 14), (8, 3): (6, 5), (8, 5): (4, 4), (8, 7): (3, 2), (8, 11): (3, 2),
    (8, 13): (3, 2), (8, 17): (4, 4),
    (9, 2): (13, 8), (9, 3): (9, 9), (9, 5): (4, 2), (9, 7): (4, 4), (9, 11): (3, 2),
    (9, 13): (3, 2), (9, 17): (3, 2), (9, 19): (4, 4),
    (10, 2): (13, 10), (10, 3): (8, 5), (10, 5): (6, 6), (10, 7): (4, 2), (10, 11): (4, 4),
    (10, 13): (3, 2), (10, 17): (3, 2), (10, 19): (3, 2),
}


@dataclass(frozen=True)
class PropertyResult:
    name: str
    ok: bool
    cases: int
    counterexample: str | None = None

    def to_json_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "cases": self.cases, "counterexample": self.counterexample}


def _check(name: str, failures: list[str], cases: int) -> PropertyResult:
    return PropertyResult(name=name, ok=not failures, cases=cases, counterexample=failures[0] if failures else None)


def lambda_zero_iff_small(p_max: int = 50, m_max: int = 2500) -> PropertyResult:
    """lambda_p(m) = 0 exactly when m < p."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        for m in range(m_max + 1):
            cases += 1
            if (lambda_p(p, m) == 0) != (m < p):
                failures.append(f"p={p}, m={m}: lambda={lambda_p(p, m)}")
    return _check("lambda_zero_iff_below_p", failures, cases)


def lambda_lower_bound(p_max: int = 50, m_max: int = 2500) -> PropertyResult:
    """lambda_p(m) >= m - p + 1 for m >= 1."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        for m in range(1, m_max + 1):
            cases += 1
            if lambda_p(p, m) < m - p + 1:
                failures.append(f"p={p}, m={m}: lambda={lambda_p(p, m)} < {m - p + 1}")
    return _check("lambda_lower_bound", failures, cases)


def digit_reconstruction(p_max: int = 50, m_max: int = 2500) -> PropertyResult:
    """The base-p digits of m sum back to m."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        for m in range(m_max + 1):
            cases += 1
            total = sum(c * p**i for i, c in enumerate(digits_base_p(p, m)))
            if total != m:
                failures.append(f"p={p}, m={m}: digits rebuild to {total}")
    return _check("digit_reconstruction", failures, cases)


def b0_le_bk_prime(p_max: int = 1000, d_max: int = 100) -> PropertyResult:
    """b0 <= bk_prime everywhere, with the stated equality and strictness cases."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        for d in range(1, d_max + 1):
            cases += 1
            b0, bp = b0_bound(p, d), bk_prime_bound(p, d)
            if b0 > bp:
                failures.append(f"p={p}, d={d}: b0={b0} > bk_prime={bp}")
    return _check("b0_le_bk_prime", failures, cases)


def equality_for_large_p(p_max: int = 1000, d_max: int = 100) -> PropertyResult:
    """b0 = bk_prime whenever p >= 2d + 1."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        for d in range(1, d_max + 1):
            if p < 2 * d + 1:
                continue
            cases += 1
            if b0_bound(p, d) != bk_prime_bound(p, d):
                failures.append(f"p={p}, d={d}: {b0_bound(p, d)} != {bk_prime_bound(p, d)}")
    return _check("equality_when_p_ge_2d_plus_1", failures, cases)


def strict_case_a(p_max: int = 1000, d_max: int = 100) -> PropertyResult:
    """b0 < bk_prime when 5 <= p < 2d + 1 and (p - 1) does not divide 2d."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        if p < 5:
            continue
        for d in range(1, d_max + 1):
            if not (p < 2 * d + 1 and (2 * d) % (p - 1) != 0):
                continue
            cases += 1
            if not b0_bound(p, d) < bk_prime_bound(p, d):
                failures.append(f"p={p}, d={d}")
    return _check("strict_when_p_ge_5_nondivisor", failures, cases)


def strict_case_b(d_max: int = 100) -> PropertyResult:
    """b0 < bk_prime when p <= 3, d > 3 and p does not divide d."""
    failures, cases = [], 0
    for p in (2, 3):
        for d in range(4, d_max + 1):
            if d % p == 0:
                continue
            cases += 1
            if not b0_bound(p, d) < bk_prime_bound(p, d):
                failures.append(f"p={p}, d={d}")
    return _check("strict_when_p_le_3_nondivisor", failures, cases)


def bk_prime_piecewise_large_p(p_max: int = 1000, d_max: int = 100) -> PropertyResult:
    """For p >= 5 and p >= d: bk_prime is 2 / 4 / 3 by the position of p relative to d."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        if p < 5:
            continue
        for d in range(1, d_max + 1):
            if p < d:
                continue
            if p > 2 * d + 1:
                expected = 2
            elif p == 2 * d + 1 or p == d:
                expected = 4
            elif d + 1 < p < 2 * d + 1:
                expected = 3
            else:
                continue  # p = d + 1 is not covered by the piecewise statement
            cases += 1
            if bk_prime_bound(p, d) != expected:
                failures.append(f"p={p}, d={d}: bk_prime={bk_prime_bound(p, d)} != {expected}")
    return _check("bk_prime_piecewise_large_p", failures, cases)


def bk_prime_small_p(d_max: int = 100) -> PropertyResult:
    """Small-p exact values and floors for bk_prime."""
    failures, cases = [], 0
    exact = {(3, 1): 5, (3, 2): 5, (2, 1): 8, (2, 2): 10, (2, 3): 9}
    for (p, d), expected in exact.items():
        cases += 1
        if bk_prime_bound(p, d) != expected:
            failures.append(f"p={p}, d={d}: bk_prime={bk_prime_bound(p, d)} != {expected}")
    for d in range(4, d_max + 1):
        cases += 1
        if bk_prime_bound(2, d) < 9:
            failures.append(f"p=2, d={d}: bk_prime={bk_prime_bound(2, d)} < 9")
    for d in range(3, d_max + 1):
        cases += 1
        if bk_prime_bound(3, d) < 6:
            failures.append(f"p=3, d={d}: bk_prime={bk_prime_bound(3, d)} < 6")
    return _check("bk_prime_small_p_values", failures, cases)


def bk_prime_divisor_case(p_max: int = 1000, d_max: int = 100) -> PropertyResult:
    """When (p - 1) | 2d: bk_prime >= 4 + 2 v_p(d) + (4 if p = 2) + (1 if p = 3),
    with equality when the p-free cofactor of 2d / (p - 1) is < p."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        for d in range(1, d_max + 1):
            if (2 * d) % (p - 1) != 0:
                continue
            cases += 1
            floor = 4 + 2 * valuation(p, d) + (4 if p == 2 else 0) + (1 if p == 3 else 0)
            got = bk_prime_bound(p, d)
            if got < floor:
                failures.append(f"p={p}, d={d}: bk_prime={got} < {floor}")
                continue
            quotient = 2 * d // (p - 1)
            a = quotient // p ** valuation(p, quotient) if quotient else 0
            if a and a < p and got != floor:
                failures.append(f"p={p}, d={d}: equality expected, bk_prime={got} != {floor}")
    return _check("bk_prime_divisor_case", failures, cases)


def forced_exponent_monotone(p_max: int = 200, e_max: int = 40) -> PropertyResult:
    """forced_subfield_exponent is nondecreasing in e for fixed p."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        previous = 0
        for e in range(e_max + 1):
            cases += 1
            r = forced_subfield_exponent(p, e)
            if r < previous:
                failures.append(f"p={p}, e={e}: r drops {previous} -> {r}")
            previous = r
    return _check("forced_exponent_monotone", failures, cases)


def cyclotomic_degree_monotone(p_max: int = 200, r_max: int = 30) -> PropertyResult:
    """real_cyclotomic_degree is nondecreasing in r for fixed p."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        previous = 0
        for r in range(r_max + 1):
            cases += 1
            degree = real_cyclotomic_degree(p, r)
            if degree < previous:
                failures.append(f"p={p}, r={r}")
            previous = degree
    return _check("cyclotomic_degree_monotone", failures, cases)


def b0_matches_forced_degree_oracle(p_max: int = 200, d_max: int = 64, e_max: int = 40) -> PropertyResult:
    """b0_bound equals the largest e whose forced cyclotomic degree divides d.

    This is the independent route to the improved bound: scan exponents
    directly instead of using the closed form.
    """
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        for d in range(1, d_max + 1):
            cases += 1
            best = 0
            for e in range(1, e_max + 1):
                degree = real_cyclotomic_degree(p, forced_subfield_exponent(p, e))
                if d % degree == 0:
                    best = e
            if best != b0_bound(p, d):
                failures.append(f"p={p}, d={d}: oracle={best}, b0={b0_bound(p, d)}")
    return _check("b0_equals_forced_degree_oracle", failures, cases)


def single_prime_boundary(p_max: int = 200, d_max: int = 64) -> PropertyResult:
    """A lone prime at b0_bound is admissible; one exponent higher is not."""
    from .cyclo import analyze_profile

    failures, cases = [], 0
    for p in primes_up_to(p_max):
        for d in range(1, d_max + 1):
            cases += 1
            cap = b0_bound(p, d)
            if not analyze_profile({p: cap}, d).admissible:
                failures.append(f"p={p}, d={d}: exponent {cap} not admissible")
            elif analyze_profile({p: cap + 1}, d).admissible:
                failures.append(f"p={p}, d={d}: exponent {cap + 1} not ruled out")
    return _check("single_prime_boundary", failures, cases)


def reference_grid_check() -> PropertyResult:
    """bk_prime and b0 match the frozen d <= 10 grid cell-for-cell."""
    failures, cases = [], 0
    for (d, p), (expect_bp, expect_b0) in sorted(REFERENCE_GRID_D10.items()):
        cases += 1
        got = (bk_prime_bound(p, d), b0_bound(p, d))
        if got != (expect_bp, expect_b0):
            failures.append(f"p={p}, d={d}: got {got}, expected {(expect_bp, expect_b0)}")
    return _check("reference_grid_d10", failures, cases)


def valuation_additivity(p_max: int = 50) -> PropertyResult:
    """valuation(p, p^k * n) = k + valuation(p, n)."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        for k in range(0, 8):
            for n in (1, 2, 3, 7, 30, 1999, 2 * 3 * 5 * 7 * 11):
                cases += 1
                if valuation(p, p**k * n) != k + valuation(p, n):
                    failures.append(f"p={p}, k={k}, n={n}")
    return _check("valuation_additivity", failures, cases)


def bk_prime_floor_identity(p_max: int = 200, d_max: int = 64) -> PropertyResult:
    """bk_prime_bound agrees with floor(bk_bound / d)."""
    failures, cases = [], 0
    for p in primes_up_to(p_max):
        for d in range(1, d_max + 1):
            cases += 1
            if bk_prime_bound(p, d) != bk_bound(p, d) // d:
                failures.append(f"p={p}, d={d}")
    return _check("bk_prime_floor_identity", failures, cases)


def run_all(p_max: int = 1000, d_max: int = 100) -> list[PropertyResult]:
    """Run the full suite, scaling range-quantified properties to the flags."""
    small_p = min(p_max, 50)
    oracle_p, oracle_d = min(p_max, 200), min(d_max, 64)
    results = [
        lambda_zero_iff_small(p_max=small_p),
        lambda_lower_bound(p_max=small_p),
        digit_reconstruction(p_max=small_p),
        valuation_additivity(p_max=small_p),
        b0_le_bk_prime(p_max=p_max, d_max=d_max),
        equality_for_large_p(p_max=p_max, d_max=d_max),
        strict_case_a(p_max=p_max, d_max=d_max),
        strict_case_b(d_max=d_max),
        bk_prime_piecewise_large_p(p_max=p_max, d_max=d_max),
        bk_prime_small_p(d_max=max(d_max, 4)),
        bk_prime_divisor_case(p_max=p_max, d_max=d_max),
        bk_prime_floor_identity(p_max=oracle_p, d_max=oracle_d),
        forced_exponent_monotone(p_max=oracle_p),
        cyclotomic_degree_monotone(p_max=oracle_p),
        b0_matches_forced_degree_oracle(p_max=oracle_p, d_max=oracle_d),
        single_prime_boundary(p_max=oracle_p, d_max=oracle_d),
    ]
    if p_max >= 19 and d_max >= 10:
        results.append(reference_grid_check())
    return results


def format_report(results: list[PropertyResult]) -> str:
    lines = []
    for result in results:
        if result.ok:
            lines.append(f"PASS {result.name} ({result.cases} cases)")
        else:
            lines.append(f"FAIL {result.name}: counterexample {result.counterexample}")
    ok = sum(r.ok for r in results)
    lines.append(f"{ok}/{len(results)} properties hold")
    return "\n".join(lines)
