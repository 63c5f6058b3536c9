"""Reduction mod good primes, finite group computations, and orbit counting.

The membership question "is Q in the cyclic group generated by P mod p"
is answered by an order-divisibility pre-filter followed by a baby-step /
giant-step discrete log inside <P mod p>, which is correct even when
E(F_p) itself is not cyclic. Group orders come from exhaustive counting
for small p and from BSGS order-finding inside the Hasse interval above
that, with lcm-of-orders disambiguation.

Every operation is deterministic: the random points used by order-finding
are drawn from a generator seeded by (p, curve coefficients), so results
do not depend on call order or parallel scheduling.
"""

import hashlib
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm

from .numtheory import factorize, primes_upto
from .rational_ec import Point, WeierstrassCurve, require_infinite_order

ENUMERATION_CUTOFF = 10 ** 4   # group_order enumerates below, BSGS above
ENUMERATION_FALLBACK_BOUND = 10 ** 6
BSGS_SAMPLE_LIMIT = 8


class BadReductionError(ValueError):
    """The prime divides the discriminant, so the reduction is not elliptic."""


@dataclass(frozen=True)
class FpCurve:
    p: int
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    discriminant: int

    def identity(self) -> "FpPoint":
        return FpPoint(self)

    def __str__(self):
        return f"E mod {self.p}: ({self.a1},{self.a2},{self.a3},{self.a4},{self.a6})"


@dataclass(frozen=True)
class FpPoint:
    curve: FpCurve
    x: int | None = None
    y: int | None = None

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def on_curve(self) -> bool:
        if self.is_identity:
            return True
        c, p = self.curve, self.curve.p
        x, y = self.x, self.y
        return (y * y + c.a1 * x * y + c.a3 * y - x ** 3 - c.a2 * x * x - c.a4 * x - c.a6) % p == 0

    def _tuple(self):
        return None if self.is_identity else (self.x, self.y)

    def __neg__(self) -> "FpPoint":
        return _wrap(self.curve, _neg(self.curve, self._tuple()))

    def __add__(self, other: "FpPoint") -> "FpPoint":
        if self.curve != other.curve:
            raise ValueError("points reduced at different primes or curves")
        return _wrap(self.curve, _add(self.curve, self._tuple(), other._tuple()))

    def __sub__(self, other: "FpPoint") -> "FpPoint":
        return self + (-other)

    def __mul__(self, k: int) -> "FpPoint":
        if not isinstance(k, int):
            raise TypeError("points scale by integers only")
        return _wrap(self.curve, _mul(self.curve, k, self._tuple()))

    __rmul__ = __mul__

    def __str__(self):
        return "O" if self.is_identity else f"({self.x}, {self.y})"


def _wrap(cp: FpCurve, t) -> FpPoint:
    return FpPoint(cp) if t is None else FpPoint(cp, t[0], t[1])


# -- raw tuple arithmetic (affine pairs, None for the identity) --------------

def _neg(cp, a):
    if a is None:
        return None
    x, y = a
    return (x, (-y - cp.a1 * x - cp.a3) % cp.p)

def _add(cp, a, b):
    if a is None:
        return b
    if b is None:
        return a
    p = cp.p
    a1, a2, a3, a4, a6 = cp.a1, cp.a2, cp.a3, cp.a4, cp.a6
    x1, y1 = a
    x2, y2 = b
    if x1 == x2:
        if (y1 + y2 + a1 * x1 + a3) % p == 0:
            return None
        den = (2 * y1 + a1 * x1 + a3) % p
        inv = pow(den, -1, p)
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * inv % p
        mu = (-(x1 ** 3) + a4 * x1 + 2 * a6 - a3 * y1) * inv % p
    else:
        inv = pow(x2 - x1, -1, p)
        lam = (y2 - y1) * inv % p
        mu = (y1 * x2 - y2 * x1) * inv % p
    x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
    y3 = (-(lam + a1) * x3 - mu - a3) % p
    return (x3, y3)

def _mul(cp, k, a):
    if k < 0:
        k, a = -k, _neg(cp, a)
    acc = None
    while k:
        if k & 1:
            acc = _add(cp, acc, a)
        k >>= 1
        if k:
            a = _add(cp, a, a)
    return acc


def reduce_curve(curve: WeierstrassCurve, p: int) -> FpCurve:
    """Residue model at a good prime; raises BadReductionError when p | disc."""
    if curve.discriminant % p == 0:
        raise BadReductionError(f"{p} divides the discriminant {curve.discriminant}")
    return FpCurve(p, curve.a1 % p, curve.a2 % p, curve.a3 % p,
                   curve.a4 % p, curve.a6 % p, curve.discriminant % p)


def reduce_point(point: Point, cp: FpCurve) -> FpPoint:
    """Reduce an exact rational point mod p.

    The affine coordinates are cleared to a coprime projective triple
    (X : Y : Z); when p divides Z the point sits over the origin of the
    formal group and reduces to the identity, otherwise to (X/Z, Y/Z) mod p.
    """
    if point.is_identity:
        return FpPoint(cp)
    p = cp.p
    x, y = point.x, point.y
    z = lcm(x.denominator, y.denominator)
    big_x = x.numerator * (z // x.denominator)
    big_y = y.numerator * (z // y.denominator)
    g = gcd(gcd(big_x, big_y), z)
    big_x, big_y, z = big_x // g, big_y // g, z // g
    if z % p == 0:
        return FpPoint(cp)
    inv = pow(z % p, -1, p)
    return FpPoint(cp, big_x * inv % p, big_y * inv % p)


# -- group order --------------------------------------------------------------

def _sqrt_mod(a: int, p: int) -> int | None:
    """Tonelli-Shanks square root mod an odd prime; None for non-residues."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = pow(z, q, p)
    x = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        x = x * b % p
        t = t * b * b % p
        c = b * b % p
        m = i
    return x


def _quartic_rhs(cp, x):
    # completed square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2 = cp.a1 * cp.a1 + 4 * cp.a2
    b4 = 2 * cp.a4 + cp.a1 * cp.a3
    b6 = cp.a3 * cp.a3 + 4 * cp.a6
    return (4 * x ** 3 + b2 * x * x + 2 * b4 * x + b6) % cp.p


def group_order_by_enumeration(cp: FpCurve) -> int:
    """#E(F_p) by counting solutions x by x; exact and branch-free, O(p)."""
    p = cp.p
    if p == 2:
        return 1 + sum(
            1 for x in (0, 1) for y in (0, 1) if FpPoint(cp, x, y).on_curve()
        )
    squares = {y * y % p for y in range(p // 2 + 1)}
    count = 1
    for x in range(p):
        rhs = _quartic_rhs(cp, x)
        if rhs == 0:
            count += 1
        elif rhs in squares:
            count += 2
    return count


def _seed(cp: FpCurve) -> int:
    text = f"{cp.p}:{cp.a1}:{cp.a2}:{cp.a3}:{cp.a4}:{cp.a6}"
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def _random_affine(cp, rng):
    p = cp.p
    if p == 2:
        pts = [(x, y) for x in (0, 1) for y in (0, 1) if FpPoint(cp, x, y).on_curve()]
        return rng.choice(pts) if pts else None
    inv2 = pow(2, -1, p)
    for _ in range(4 * p):
        x = rng.randrange(p)
        rhs = _quartic_rhs(cp, x)
        u = _sqrt_mod(rhs, p)
        if u is None:
            continue
        if rng.randrange(2):
            u = (-u) % p
        y = (u - cp.a1 * x - cp.a3) * inv2 % p
        return (x, y)
    return None


def _hasse_interval(p: int) -> tuple[int, int]:
    w = isqrt(4 * p)
    return p + 1 - w, p + 1 + w


def _annihilator_bsgs(cp, a, lo, hi) -> int:
    """A multiple of ord(a) found by meet-in-the-middle over [lo, hi].

    Scans every m in the window with m*a = O and returns the gcd of the
    hits, which is again a multiple of ord(a) and usually much smaller
    than the window.
    """
    width = hi - lo + 1
    s = isqrt(width) + 1
    table = {}
    cur = None
    for j in range(s):
        if cur not in table:
            table[cur] = j
        cur = _add(cp, cur, a)
    giant = _neg(cp, _mul(cp, s, a))
    t = _neg(cp, _mul(cp, lo, a))
    hits = []
    for i in range(width // s + 2):
        j = table.get(t, -1)
        if j >= 0:
            hits.append(lo + i * s + j)
        t = _add(cp, t, giant)
    g = 0
    for m in hits:
        g = gcd(g, m)
    if g == 0 or _mul(cp, g, a) is not None:
        raise RuntimeError("annihilator search failed; group order outside Hasse window?")
    return g


def _order_from_multiple(cp, a, multiple: int) -> int:
    order = multiple
    for q in factorize(multiple).factors:
        while order % q == 0 and _mul(cp, order // q, a) is None:
            order //= q
    return order


def _order(cp, a) -> int:
    if a is None:
        return 1
    lo, hi = _hasse_interval(cp.p)
    return _order_from_multiple(cp, a, _annihilator_bsgs(cp, a, lo, hi))


def group_order_by_bsgs(cp: FpCurve) -> int:
    """#E(F_p) via orders of random points inside the Hasse interval.

    Accumulates the lcm of sampled point orders until exactly one multiple
    of it lies in the interval. Falls back to enumeration for moderate p
    if eight samples still leave the count ambiguous.
    """
    p = cp.p
    lo, hi = _hasse_interval(p)
    rng = random.Random(_seed(cp))
    acc = 1
    for _ in range(BSGS_SAMPLE_LIMIT):
        a = _random_affine(cp, rng)
        if a is None:
            return 1
        acc = lcm(acc, _order(cp, a))
        k_lo = -(-lo // acc)
        k_hi = hi // acc
        if k_lo == k_hi:
            return k_lo * acc
    if p < ENUMERATION_FALLBACK_BOUND:
        return group_order_by_enumeration(cp)
    raise RuntimeError(f"group order mod {p} still ambiguous after {BSGS_SAMPLE_LIMIT} samples")


def group_order(cp: FpCurve) -> int:
    """#E(F_p), by enumeration for small p and BSGS order-finding beyond."""
    if cp.p <= ENUMERATION_CUTOFF:
        return group_order_by_enumeration(cp)
    return group_order_by_bsgs(cp)


def point_order(point: FpPoint, group_order_hint: int | None = None) -> int:
    """Exact order: strip primes from the group order (or a supplied multiple)."""
    if point.is_identity:
        return 1
    multiple = group_order_hint if group_order_hint is not None else group_order(point.curve)
    return _order_from_multiple(point.curve, point._tuple(), multiple)


def in_cyclic_subgroup(
    q_point: FpPoint,
    p_point: FpPoint,
    group_order_hint: int | None = None,
) -> tuple[bool, int | None]:
    """Whether Q mod p lies in <P mod p>, with a discrete-log witness.

    ord(Q) must divide ord(P) for membership, which screens out most
    non-members; survivors get a BSGS discrete log over the cyclic group
    <P>, whose solvability is exactly membership. The witness k satisfies
    k * P = Q with 0 <= k < ord(P).
    """
    if q_point.curve != p_point.curve:
        raise ValueError("points reduced at different primes or curves")
    cp = q_point.curve
    q_t, p_t = q_point._tuple(), p_point._tuple()
    if q_t is None:
        return True, 0
    if p_t is None:
        return False, None
    if group_order_hint is not None:
        ord_p = _order_from_multiple(cp, p_t, group_order_hint)
        ord_q = _order_from_multiple(cp, q_t, group_order_hint)
    else:
        ord_p = _order(cp, p_t)
        ord_q = _order(cp, q_t)
    if ord_p % ord_q:
        return False, None

    s = isqrt(ord_p) + 1
    table = {}
    cur = None
    for j in range(s):
        if cur not in table:
            table[cur] = j
        cur = _add(cp, cur, p_t)
    giant = _neg(cp, _mul(cp, s, p_t))
    t = q_t
    for i in range(ord_p // s + 2):
        j = table.get(t, -1)
        if j >= 0:
            return True, (i * s + j) % ord_p
        t = _add(cp, t, giant)
    return False, None


# -- Lang-Trotter sweep --------------------------------------------------------

@dataclass(frozen=True)
class OrbitSweepResult:
    x: int
    count: int
    ratio: float
    skipped_bad: list[int]
    member_primes: list[int] | None


def sweep_primes(
    p_point: Point,
    q_point: Point,
    primes: list[int],
) -> tuple[int, list[int], list[int]]:
    """Membership test over an explicit prime list.

    Returns (count, member primes, bad primes skipped). Results for each
    prime are independent, so any partition of the list merges by adding
    counts and concatenating lists.
    """
    curve = p_point.curve
    count = 0
    members: list[int] = []
    skipped: list[int] = []
    for p in primes:
        try:
            cp = reduce_curve(curve, p)
        except BadReductionError:
            skipped.append(p)
            continue
        qp = reduce_point(q_point, cp)
        if qp.is_identity:
            member = True
        else:
            member, _ = in_cyclic_subgroup(qp, reduce_point(p_point, cp))
        if member:
            count += 1
            members.append(p)
    return count, members, skipped


def _sweep_worker(args):
    coeffs, p_xy, q_xy, chunk = args
    curve = WeierstrassCurve(*coeffs)
    p_point = Point(curve, Fraction(p_xy[0]), Fraction(p_xy[1]))
    if q_xy is None:
        q_point = Point(curve)
    else:
        q_point = Point(curve, Fraction(q_xy[0]), Fraction(q_xy[1]))
    return sweep_primes(p_point, q_point, chunk)


def lang_trotter_sweep(
    p_point: Point,
    q_point: Point,
    x: int,
    keep_primes: bool = False,
    workers: int | None = None,
) -> OrbitSweepResult:
    """Count primes p <= x, p not dividing disc, with Q mod p in <P mod p>.

    The prime range may be split across processes (workers > 1); per-prime
    results are independent and merged by commutative counting, so the
    outcome is identical for every partition.
    """
    require_infinite_order(p_point)
    if workers is None:
        workers = int(os.environ.get("ELLDIV_THREADS", "1"))
    primes = primes_upto(x)

    if workers <= 1 or len(primes) < 64:
        count, members, skipped = sweep_primes(p_point, q_point, primes)
    else:
        curve = p_point.curve
        coeffs = (curve.a1, curve.a2, curve.a3, curve.a4, curve.a6)
        p_xy = (p_point.x, p_point.y)
        q_xy = None if q_point.is_identity else (q_point.x, q_point.y)
        chunk_count = min(4 * workers, len(primes))
        size = -(-len(primes) // chunk_count)
        chunks = [primes[i : i + size] for i in range(0, len(primes), size)]
        count, members, skipped = 0, [], []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for c, m, s in pool.map(_sweep_worker, [(coeffs, p_xy, q_xy, ch) for ch in chunks]):
                count += c
                members.extend(m)
                skipped.extend(s)
        members.sort()
        skipped.sort()

    log_x = math.log(x) if x >= 2 else 0.0
    ratio = count / math.sqrt(log_x) if log_x > 0 else 0.0
    return OrbitSweepResult(x, count, ratio, skipped, members if keep_primes else None)
