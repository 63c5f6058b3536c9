"""The denominator sequence of x(nP+Q) and its divisor structure.

Writing x(nP+Q) = C_n / D_n in lowest terms with D_n >= 1, this module
computes the terms exactly, identifies the finite set of bad primes,
extracts primitive parts (the portion of D_n coprime to the whole history
D_1 ... D_{n-1}), certifies primitive divisors, counts distinct primes of
the product, and fits the quadratic-exponential growth rate.
"""

from dataclasses import dataclass
from math import gcd
from typing import Iterator

from .heights import log_int
from .numtheory import factorize, DEFAULT_RHO_BUDGET
from .rational_ec import Point, require_infinite_order, torsion_order

REASON_BAD_REDUCTION = "divides_discriminant"
REASON_TORSION = "divides_two_times_order_of_Q"
REASON_Q_NONINTEGRAL = "Q_reduces_to_identity"


class CollisionWithIdentityError(ValueError):
    """nP+Q hit the identity, where x is undefined."""

    def __init__(self, n: int):
        self.n = n
        super().__init__(f"{n}P+Q is the identity point")


class NonTorsionQError(ValueError):
    """bad_set needs ord(Q) finite; this Q has infinite order."""


class IncompleteHistoryError(ValueError):
    """primitive_part needs every D_m for m < n."""


@dataclass(frozen=True)
class DenomTerm:
    """x(nP+Q) = numerator/denominator in lowest terms, denominator >= 1."""

    n: int
    numerator: int
    denominator: int
    point: Point


@dataclass(frozen=True)
class PrimitiveDivisorReport:
    n: int
    primitive_part: int
    has_primitive: bool
    certificate_prime: int | None
    fully_factored: bool


@dataclass(frozen=True)
class DistinctPrimeCount:
    count: int
    is_exact: bool


@dataclass
class BadPrimeSet:
    """Finite set of excluded primes, each tagged with why it is excluded."""

    reasons: dict[int, tuple[str, ...]]

    @property
    def primes(self) -> list[int]:
        return sorted(self.reasons)

    def __contains__(self, p: int) -> bool:
        return p in self.reasons


def _term_from_point(n: int, point: Point) -> DenomTerm:
    if point.is_identity:
        raise CollisionWithIdentityError(n)
    return DenomTerm(n, point.x.numerator, point.x.denominator, point)


def denom_term(p_point: Point, q_point: Point, n: int) -> DenomTerm:
    """The n-th term, computed from scratch as nP + Q."""
    if n < 1:
        raise ValueError("term index starts at 1")
    require_infinite_order(p_point)
    return _term_from_point(n, n * p_point + q_point)


def denom_sequence(p_point: Point, q_point: Point, count: int) -> Iterator[DenomTerm]:
    """Terms 1..count, each obtained from the previous by one addition of P.

    The torsion precondition is checked eagerly, before the first term is
    consumed.
    """
    require_infinite_order(p_point)

    def walk():
        current = q_point
        for n in range(1, count + 1):
            current = current + p_point
            yield _term_from_point(n, current)

    return walk()


def bad_set(q_point: Point, rho_budget: int = DEFAULT_RHO_BUDGET) -> BadPrimeSet:
    """Primes dividing the discriminant, dividing 2*ord(Q), or where Q drops to O.

    Q must have finite order. The third class is, over Q, the primes dividing
    the denominator of x(Q) for affine Q.
    """
    order = torsion_order(q_point)
    if order is None:
        raise NonTorsionQError("Q has infinite order, so ord(Q) is undefined")

    reasons: dict[int, list[str]] = {}

    disc_fac = factorize(abs(q_point.curve.discriminant), rho_budget)
    if not disc_fac.is_complete:
        raise RuntimeError("could not fully factor the discriminant within budget")
    for p in disc_fac.factors:
        reasons.setdefault(p, []).append(REASON_BAD_REDUCTION)

    for p in factorize(2 * order, rho_budget).factors:
        reasons.setdefault(p, []).append(REASON_TORSION)

    if not q_point.is_identity and q_point.x.denominator > 1:
        den_fac = factorize(q_point.x.denominator, rho_budget)
        if not den_fac.is_complete:
            raise RuntimeError("could not fully factor den(x(Q)) within budget")
        for p in den_fac.factors:
            reasons.setdefault(p, []).append(REASON_Q_NONINTEGRAL)

    return BadPrimeSet({p: tuple(tags) for p, tags in sorted(reasons.items())})


def strip_shared_primes(value: int, other: int) -> int:
    """Divide out of ``value`` every prime it shares with ``other``, completely."""
    g = gcd(value, other)
    while g > 1:
        value //= g
        g = gcd(value, g)
    return value


def primitive_part(term: DenomTerm, history: list[int]) -> int:
    """The largest divisor of D_n coprime to D_1 * ... * D_{n-1}.

    Its prime divisors are exactly the primitive divisors of D_n, found by
    iterated gcd stripping with no factoring at all.
    """
    if len(history) != term.n - 1:
        raise IncompleteHistoryError(
            f"term {term.n} needs {term.n - 1} earlier denominators, got {len(history)}"
        )
    part = term.denominator
    for earlier in history:
        part = strip_shared_primes(part, earlier)
        if part == 1:
            break
    return part


def primitive_report(
    p_point: Point,
    q_point: Point,
    n: int,
    history: list[int],
    rho_budget: int = DEFAULT_RHO_BUDGET,
) -> PrimitiveDivisorReport:
    """Primitive-divisor certificate for the n-th term.

    has_primitive needs no factoring. The certificate prime is the smallest
    prime factor of the primitive part found within the budget; if nothing
    splits, the part itself still witnesses that primitive divisors exist.
    """
    term = denom_term(p_point, q_point, n)
    part = primitive_part(term, history)
    if part == 1:
        return PrimitiveDivisorReport(n, 1, False, None, True)
    fac = factorize(part, rho_budget)
    certificate = min(fac.factors) if fac.factors else None
    return PrimitiveDivisorReport(n, part, True, certificate, fac.is_complete)


def _coprime_support(values: list[int]) -> list[int]:
    """Pairwise-coprime integers > 1 whose primes are exactly those of the inputs."""
    basis: list[int] = []
    pending = [abs(v) for v in values if abs(v) > 1]
    while pending:
        v = pending.pop()
        if v == 1:
            continue
        for i, b in enumerate(basis):
            g = gcd(v, b)
            if g == 1:
                continue
            b_rest = strip_shared_primes(b, g)
            v_rest = strip_shared_primes(v, g)
            basis[i] = g
            if b_rest > 1:
                basis.append(b_rest)
            if v_rest > 1:
                pending.append(v_rest)
            break
        else:
            basis.append(v)
    return basis


def omega_product(terms: list[DenomTerm], rho_budget: int = DEFAULT_RHO_BUDGET) -> DistinctPrimeCount:
    """Distinct primes dividing the product of the D_n.

    The denominators are first refined into a pairwise-coprime support by gcd
    accumulation; each support element is then factored within the budget.
    Elements that resist full factoring still carry at least one unseen
    prime, so an incomplete answer is a certified lower bound.
    """
    count = 0
    exact = True
    for b in _coprime_support([t.denominator for t in terms]):
        fac = factorize(b, rho_budget)
        count += len(fac.factors)
        if not fac.is_complete:
            count += 1
            exact = False
    return DistinctPrimeCount(count, exact)


def growth_estimate(p_point: Point, q_point: Point, upto: int) -> float:
    """Least-squares slope of log D_n against n^2 over n in [upto/2, upto].

    The limit of the slope is twice the canonical height of P; restricting
    to the upper half of the range suppresses the O(n) and O(1) noise from
    height-comparison constants.
    """
    if upto < 10:
        raise ValueError("growth_estimate needs at least 10 terms")
    samples = []
    for term in denom_sequence(p_point, q_point, upto):
        if term.n >= upto // 2:
            d = term.denominator
            samples.append((term.n * term.n, log_int(d) if d > 1 else 0.0))
    u_mean = sum(u for u, _ in samples) / len(samples)
    v_mean = sum(v for _, v in samples) / len(samples)
    num = sum((u - u_mean) * (v - v_mean) for u, v in samples)
    den = sum((u - u_mean) ** 2 for u, _ in samples)
    return num / den
