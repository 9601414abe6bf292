"""Exact arithmetic in the rings underlying Clifford+T synthesis.

Elements of three rings are provided:

* ``ZRootTwo``  -- a + b*sqrt(2) with integer a, b.
* ``ZOmega``    -- a + b*z + c*z^2 + d*z^3 with z = exp(i*pi/4).
* ``DOmega``    -- ZOmega numerator over a power of sqrt(2), kept in lowest
  terms (least denominator exponent).

plus the exact counting function ``four_square_count`` for representations
of a totally nonnegative element of Z[sqrt(2)] as a sum of four squares.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator

import mpmath

SQRT2 = 2 ** 0.5


@total_ordering
class ZRootTwo:
    """An element a + b*sqrt(2) of the real quadratic ring Z[sqrt(2)]."""

    __slots__ = ("_a", "_b")

    def __init__(self, a: int = 0, b: int = 0) -> None:
        self._a = int(a)
        self._b = int(b)

    @property
    def a(self) -> int:
        return self._a

    @property
    def b(self) -> int:
        return self._b

    @classmethod
    def from_int(cls, n: int) -> ZRootTwo:
        return cls(n, 0)

    def __repr__(self) -> str:
        return f"ZRootTwo({self._a}, {self._b})"

    def __hash__(self) -> int:
        return hash((self._a, self._b))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ZRootTwo(other)
        if isinstance(other, ZRootTwo):
            return self._a == other._a and self._b == other._b
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ZRootTwo(other)
        if isinstance(other, ZRootTwo):
            return (self - other).sign() < 0
        return NotImplemented

    def __add__(self, other: ZRootTwo | int) -> ZRootTwo:
        if isinstance(other, int):
            other = ZRootTwo(other)
        if isinstance(other, ZRootTwo):
            return ZRootTwo(self._a + other._a, self._b + other._b)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> ZRootTwo:
        return ZRootTwo(-self._a, -self._b)

    def __sub__(self, other: ZRootTwo | int) -> ZRootTwo:
        return self + (-other if isinstance(other, ZRootTwo) else -other)

    def __rsub__(self, other: int) -> ZRootTwo:
        return ZRootTwo(other) - self

    def __mul__(self, other: ZRootTwo | int) -> ZRootTwo:
        if isinstance(other, int):
            return ZRootTwo(self._a * other, self._b * other)
        if isinstance(other, ZRootTwo):
            return ZRootTwo(
                self._a * other._a + 2 * self._b * other._b,
                self._a * other._b + self._b * other._a,
            )
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> ZRootTwo:
        """Galois conjugate a - b*sqrt(2) (the 'bullet' automorphism)."""
        return ZRootTwo(self._a, -self._b)

    def norm(self) -> int:
        """Field norm a^2 - 2*b^2 (may be negative)."""
        return self._a * self._a - 2 * self._b * self._b

    def sign(self) -> int:
        """Sign of the real embedding a + b*sqrt(2), computed exactly."""
        if self._a == 0 and self._b == 0:
            return 0
        if self._a >= 0 and self._b >= 0:
            return 1
        if self._a <= 0 and self._b <= 0:
            return -1
        # mixed signs: compare a^2 with 2 b^2
        n = self.norm()
        if self._a > 0:  # b < 0
            return 1 if n > 0 else -1
        return 1 if n < 0 else -1

    def is_totally_nonneg(self) -> bool:
        """True if both real embeddings are >= 0."""
        return self.sign() >= 0 and self.conj().sign() >= 0

    def divides_exactly(self, k: int) -> bool:
        """Whether the rational integer k divides both coordinates."""
        return self._a % k == 0 and self._b % k == 0

    def divide_int(self, k: int) -> ZRootTwo:
        if not self.divides_exactly(k):
            raise ValueError(f"{self!r} is not divisible by {k}")
        return ZRootTwo(self._a // k, self._b // k)

    def div_sqrt2(self) -> ZRootTwo:
        """Exact quotient by sqrt(2); raises if not divisible."""
        if self._a % 2 != 0:
            raise ValueError(f"{self!r} is not divisible by sqrt(2)")
        return ZRootTwo(self._b, self._a // 2)

    def mul_sqrt2(self) -> ZRootTwo:
        return ZRootTwo(2 * self._b, self._a)

    def to_mpf(self) -> mpmath.mpf:
        return mpmath.mpf(self._a) + mpmath.mpf(self._b) * mpmath.sqrt(2)

    def __float__(self) -> float:
        return self._a + self._b * SQRT2


class ZOmega:
    """An element a + b*z + c*z^2 + d*z^3 of Z[z], z = exp(i*pi/4)."""

    __slots__ = ("_a", "_b", "_c", "_d")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0) -> None:
        self._a = int(a)
        self._b = int(b)
        self._c = int(c)
        self._d = int(d)

    @property
    def a(self) -> int:
        return self._a

    @property
    def b(self) -> int:
        return self._b

    @property
    def c(self) -> int:
        return self._c

    @property
    def d(self) -> int:
        return self._d

    @classmethod
    def from_int(cls, n: int) -> ZOmega:
        return cls(n, 0, 0, 0)

    @classmethod
    def from_zroot2(cls, x: ZRootTwo) -> ZOmega:
        # sqrt(2) = z - z^3
        return cls(x.a, x.b, 0, -x.b)

    def coeffs(self) -> tuple[int, int, int, int]:
        return (self._a, self._b, self._c, self._d)

    def __repr__(self) -> str:
        return f"ZOmega{self.coeffs()}"

    def __hash__(self) -> int:
        return hash(self.coeffs())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ZOmega.from_int(other)
        if isinstance(other, ZOmega):
            return self.coeffs() == other.coeffs()
        return NotImplemented

    def __bool__(self) -> bool:
        return any(self.coeffs())

    def __add__(self, other: ZOmega | int) -> ZOmega:
        if isinstance(other, int):
            other = ZOmega.from_int(other)
        if isinstance(other, ZOmega):
            return ZOmega(
                self._a + other._a,
                self._b + other._b,
                self._c + other._c,
                self._d + other._d,
            )
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> ZOmega:
        return ZOmega(-self._a, -self._b, -self._c, -self._d)

    def __sub__(self, other: ZOmega | int) -> ZOmega:
        if isinstance(other, int):
            other = ZOmega.from_int(other)
        if isinstance(other, ZOmega):
            return self + (-other)
        return NotImplemented

    def __mul__(self, other: ZOmega | int) -> ZOmega:
        if isinstance(other, int):
            return ZOmega(
                self._a * other, self._b * other, self._c * other, self._d * other
            )
        if isinstance(other, ZOmega):
            a1, b1, c1, d1 = self.coeffs()
            a2, b2, c2, d2 = other.coeffs()
            # z^4 = -1
            return ZOmega(
                a1 * a2 - b1 * d2 - c1 * c2 - d1 * b2,
                a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2,
                a1 * c2 + b1 * b2 + c1 * a2 - d1 * d2,
                a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2,
            )
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> ZOmega:
        """Complex conjugation: z |-> z^-1."""
        return ZOmega(self._a, -self._d, -self._c, -self._b)

    def bullet(self) -> ZOmega:
        """The sqrt(2) |-> -sqrt(2) automorphism: z |-> z^5 = -z."""
        return ZOmega(self._a, -self._b, self._c, -self._d)

    def mul_omega_pow(self, j: int) -> ZOmega:
        """Multiply by z^j (j any integer)."""
        j %= 8
        a, b, c, d = self.coeffs()
        for _ in range(j):
            a, b, c, d = -d, a, b, c
        return ZOmega(a, b, c, d)

    def norm_zroot2(self) -> ZRootTwo:
        """|x|^2 = x * conj(x) as an element of Z[sqrt(2)]."""
        a, b, c, d = self.coeffs()
        p = a * a + b * b + c * c + d * d
        q = a * b + b * c + c * d - d * a
        return ZRootTwo(p, q)

    def norm_int(self) -> int:
        """Absolute norm N(|x|^2) = p^2 - 2 q^2 >= 0 over Q."""
        return self.norm_zroot2().norm()

    def mul_sqrt2(self) -> ZOmega:
        # sqrt(2) = z - z^3
        a, b, c, d = self.coeffs()
        return ZOmega(b - d, a + c, b + d, c - a)

    def is_div_sqrt2(self) -> bool:
        a, b, c, d = self.coeffs()
        return (a + c) % 2 == 0 and (b + d) % 2 == 0

    def div_sqrt2(self) -> ZOmega:
        """Exact quotient by sqrt(2); raises if not divisible."""
        p, q, r, s = self.coeffs()
        if (p + r) % 2 != 0 or (q + s) % 2 != 0:
            raise ValueError(f"{self!r} is not divisible by sqrt(2)")
        return ZOmega((q - s) // 2, (p + r) // 2, (q + s) // 2, (r - p) // 2)

    def is_div_int(self, k: int) -> bool:
        return all(x % k == 0 for x in self.coeffs())

    def residue_sqrt2(self) -> int:
        """Residue class in Z[z]/(sqrt(2)) = {0, 1, z, 1+z}, encoded as
        two bits: bit0 = (a+c) mod 2, bit1 = (b+d) mod 2."""
        a, b, c, d = self.coeffs()
        return ((a + c) % 2) | (((b + d) % 2) << 1)

    def to_mpc(self, prec: int | None = None) -> mpmath.mpc:
        """Value as an mpmath complex number at the current (or given)
        working precision."""
        ctx = mpmath.mp
        with mpmath.workprec(prec or ctx.prec):
            rt2 = mpmath.sqrt(2)
            re = self._a + (self._b - self._d) / rt2
            im = self._c + (self._b + self._d) / rt2
            return mpmath.mpc(re, im)

    def __complex__(self) -> complex:
        re = self._a + (self._b - self._d) / SQRT2
        im = self._c + (self._b + self._d) / SQRT2
        return complex(re, im)


OMEGA = ZOmega(0, 1, 0, 0)


@dataclass(frozen=True)
class DOmega:
    """num / sqrt(2)^k with num in Z[z], reduced so k is minimal (the least
    denominator exponent), or k = 0."""

    num: ZOmega
    k: int

    @staticmethod
    def make(num: ZOmega, k: int) -> DOmega:
        while k < 0:
            num = num.mul_sqrt2()
            k += 1
        while k > 0 and num.is_div_sqrt2():
            num = num.div_sqrt2()
            k -= 1
        return DOmega(num, k)

    @property
    def lde(self) -> int:
        return self.k

    def conj(self) -> DOmega:
        return DOmega(self.num.conj(), self.k)

    def bullet(self) -> DOmega:
        num = self.num.bullet()
        return DOmega(num if self.k % 2 == 0 else -num, self.k)

    def to_mpc(self, prec: int | None = None) -> mpmath.mpc:
        ctx_prec = prec or mpmath.mp.prec
        with mpmath.workprec(ctx_prec):
            return self.num.to_mpc(ctx_prec) / mpmath.sqrt(2) ** self.k

    def __complex__(self) -> complex:
        return complex(self.num) / SQRT2 ** self.k


def lde(num: ZOmega, k: int) -> int:
    """Least denominator exponent of num / sqrt(2)^k."""
    return DOmega.make(num, k).k


def joint_reduce(xs: list[ZOmega], k: int) -> tuple[list[ZOmega], int]:
    """Divide all of xs by sqrt(2) as long as the denominator exponent k stays
    nonnegative and every element stays in Z[z]; returns reduced pair."""
    while k > 0 and all(x.is_div_sqrt2() for x in xs):
        xs = [x.div_sqrt2() for x in xs]
        k -= 1
    return xs, k


# ---------------------------------------------------------------------------
# Four-square representation counting (sums of four squares in Z[sqrt(2)])
# ---------------------------------------------------------------------------


def _factor_trial(n: int) -> dict[int, int]:
    """Trial-division factorization; intended for desk-scale norms."""
    factors: dict[int, int] = {}
    for p in _small_primes(n):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        if n == 1:
            break
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _small_primes(n: int) -> Iterator[int]:
    yield 2
    yield 3
    p = 5
    while p * p <= n:
        yield p
        yield p + 2
        p += 6


def _ord_rational_prime(m: ZRootTwo, p: int) -> tuple[int, ZRootTwo]:
    """Largest e with p^e | m elementwise, plus the quotient."""
    e = 0
    while m != ZRootTwo(0) and m.divides_exactly(p):
        m = m.divide_int(p)
        e += 1
    return e, m


def sigma_divisor_norm_sum(m: ZRootTwo) -> int:
    """sigma_{K/Q}(m) = sum of ideal norms N(d) over ideal divisors (d) | (m),
    for nonzero m in Z[sqrt(2)]."""
    if m == ZRootTwo(0):
        raise ValueError("sigma is undefined for m = 0")
    n_abs = abs(m.norm())
    total = 1
    # ramified prime (sqrt(2)), ideal norm 2
    e2 = 0
    mm = m
    while mm.a % 2 == 0:  # divisible by sqrt(2)
        mm = mm.div_sqrt2()
        e2 += 1
    if e2:
        total *= (1 << (e2 + 1)) - 1
    for p, e_norm in sorted(_factor_trial(n_abs).items()):
        if p == 2:
            continue
        r = p % 8
        if r in (3, 5):
            # inert: ideal norm p^2, exponent e_norm / 2
            if e_norm % 2 != 0:
                raise ArithmeticError(
                    f"inconsistent norm valuation at inert prime {p}"
                )
            e = e_norm // 2
            total *= sum(p ** (2 * g) for g in range(e + 1))
        else:
            # split: two conjugate ideals of norm p with exponents
            # (ebar + e'', ebar); sigma is symmetric in the pair.
            ebar, rest = _ord_rational_prime(m, p)
            e2nd = abs(rest.norm())
            edd = 0
            while e2nd % p == 0:
                e2nd //= p
                edd += 1
            e_hi, e_lo = ebar + edd, ebar
            total *= sum(p ** g for g in range(e_hi + 1)) * sum(
                p ** g for g in range(e_lo + 1)
            )
    return total


def four_square_count(m: ZRootTwo) -> int:
    """Number of quadruples (x1..x4) in Z[sqrt(2)]^4 with sum of squares m.

    ``m`` must be totally nonnegative (both real embeddings >= 0); otherwise a
    ValueError is raised.  Returns 0 for m with odd sqrt(2)-coefficient, which
    can never be a sum of squares (every square x^2 has even sqrt(2)-part).
    """
    if not m.is_totally_nonneg():
        raise ValueError(f"{m!r} has a negative embedding")
    if m == ZRootTwo(0):
        return 1
    if m.b % 2 != 0:
        return 0
    total = 8 * sigma_divisor_norm_sum(m)
    if m.divides_exactly(2):
        total -= 24 * sigma_divisor_norm_sum(m.divide_int(2))
        if m.divides_exactly(4):
            total += 64 * sigma_divisor_norm_sum(m.divide_int(4))
    return total
