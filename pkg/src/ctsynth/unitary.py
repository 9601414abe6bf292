"""High-precision targets and the diamond distance on projective unitaries.

A single-qubit unitary modulo global phase is identified with a point of
S^3 / {+-1} via its det-1 representative

    U = [[u1, -conj(u2)], [u2, conj(u1)]]   ->   (Re u1, Im u1, Re u2, Im u2),

and the diamond distance between the induced channels has the closed form

    d(U, V) = sqrt(1 - (u . v)^2).

All numerics use mpmath at an explicit precision; the default working
precision for a tolerance eps is ``precision_bits(eps)``.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass

import mpmath


def precision_bits(eps: float) -> int:
    """Working precision (bits) for a synthesis tolerance eps."""
    return int(math.ceil(2 * math.log2(1.0 / float(eps)))) + 64


class UnitVec4:
    """A unit vector in R^4 representing a projective unitary.

    Canonical representative: the first coordinate of largest magnitude is
    positive (sign-canonical on S^3 / {+-1}).
    """

    __slots__ = ("_c", "_prec")

    def __init__(self, components, prec: int | None = None) -> None:
        prec = prec or mpmath.mp.prec
        with mpmath.workprec(prec + 10):
            c = [mpmath.mpf(x) for x in components]
            if len(c) != 4:
                raise ValueError("need exactly 4 components")
            n = mpmath.sqrt(sum(x * x for x in c))
            if n == 0:
                raise ValueError("zero vector")
            c = [x / n for x in c]
            pivot = max(range(4), key=lambda i: abs(c[i]))
            if c[pivot] < 0:
                c = [-x for x in c]
        self._c = tuple(c)
        self._prec = prec

    @property
    def components(self) -> tuple:
        return self._c

    @property
    def prec(self) -> int:
        return self._prec

    @classmethod
    def from_pair(cls, v1, v2, prec: int | None = None) -> UnitVec4:
        """From the first column (v1, v2) of a det-1 matrix."""
        return cls([v1.real, v1.imag, v2.real, v2.imag], prec)

    def pair(self) -> tuple[mpmath.mpc, mpmath.mpc]:
        c = self._c
        return mpmath.mpc(c[0], c[1]), mpmath.mpc(c[2], c[3])

    def dot(self, other: UnitVec4) -> mpmath.mpf:
        return sum(a * b for a, b in zip(self._c, other._c))

    def floats(self) -> tuple[float, float, float, float]:
        return tuple(float(x) for x in self._c)

    def __repr__(self) -> str:
        return f"UnitVec4({self.floats()})"


@dataclass(frozen=True)
class TargetUnitary:
    """A parsed synthesis target: projective point plus its source text."""

    uvec: UnitVec4
    source: str


def diamond_distance(u: UnitVec4, v: UnitVec4, prec: int | None = None) -> mpmath.mpf:
    """Diamond distance sqrt(1 - (u.v)^2) between projective unitaries."""
    prec = prec or max(u.prec, v.prec)
    with mpmath.workprec(prec + 10):
        s = u.dot(v)
        val = 1 - s * s
        if val < 0:
            val = mpmath.mpf(0)
        return mpmath.sqrt(val)


def dist_sq_interval(u: UnitVec4, v: UnitVec4, prec: int) -> tuple:
    """Certified enclosure of d(u,v)^2 = 1 - (u.v)^2 at the given precision.

    The error bound covers representation and rounding error of the dot
    product and the final subtraction (a generous 2^(-prec+12) envelope).
    """
    with mpmath.workprec(prec + 10):
        s = u.dot(v)
        val = 1 - s * s
        err = mpmath.mpf(2) ** (-prec + 12)
        return (val - err, val + err)


def certified_dist_less(
    uvec_fn, v: UnitVec4, eps, prec: int, max_doublings: int = 3
) -> bool | None:
    """Decide d(u, v) < eps with certified rounding margins.

    ``uvec_fn(prec)`` must return the candidate's UnitVec4 computed at the
    requested precision (exact inputs recomputable at any precision).
    Returns True/False when provable; None if still ambiguous after
    ``max_doublings`` precision doublings (caller treats per its policy).
    """
    p = prec
    for _ in range(max_doublings + 1):
        with mpmath.workprec(p + 10):
            lo, hi = dist_sq_interval(uvec_fn(p), v, p)
            e2 = mpmath.mpf(eps) ** 2
            if hi < e2:
                return True
            if lo >= e2:
                return False
        p *= 2
    return None


def haar_sample(seed: int, prec: int | None = None) -> UnitVec4:
    """Haar-random projective unitary (uniform on S^3 / {+-1}), reproducible
    from the integer seed."""
    rng = random.Random(seed)
    while True:
        g = [rng.gauss(0.0, 1.0) for _ in range(4)]
        if sum(x * x for x in g) > 1e-12:
            return UnitVec4(g, prec)


# ---------------------------------------------------------------------------
# Target parsing
# ---------------------------------------------------------------------------

_PI_EXPR = re.compile(
    r"""^\s*(?P<sign>[+-])?\s*
        (?:
          (?P<coef>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)\s*\*\s*pi
          | (?P<justpi>pi)
          | (?P<plain>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
        )
        \s*(?:/\s*(?P<den>\d+(?:\.\d+)?))?\s*$""",
    re.VERBOSE,
)


def parse_angle(text: str, prec: int) -> mpmath.mpf:
    """Parse an angle: a decimal literal or a pi-expression with rational
    multipliers (e.g. ``pi/4``, ``3*pi/8``, ``-0.25``, ``1.5e-3``)."""
    m = _PI_EXPR.match(text)
    if not m:
        raise ValueError(f"cannot parse angle {text!r}")
    with mpmath.workprec(prec + 10):
        if m.group("justpi") is not None:
            val = mpmath.pi
        elif m.group("coef") is not None:
            val = mpmath.mpf(m.group("coef")) * mpmath.pi
        else:
            val = mpmath.mpf(m.group("plain"))
        if m.group("den"):
            val = val / mpmath.mpf(m.group("den"))
        if m.group("sign") == "-":
            val = -val
        return val


_FUNC_FORM = re.compile(r"^\s*(rz|rx)\s*\(\s*(.+?)\s*\)\s*$", re.IGNORECASE)


def parse_target(text: str, prec: int = 120) -> TargetUnitary:
    """Parse a synthesis target.

    Accepted forms:

    * ``rz(theta)`` -- diag(e^{-i theta/2}, e^{i theta/2})
    * ``rx(theta)`` -- cos(theta/2) I - i sin(theta/2) X
    * eight whitespace/comma-separated reals: the 2x2 matrix entries
      row-major as (re, im) pairs; must be unitary to 1e-9 and is projected
      to its det-1 representative.
    """
    m = _FUNC_FORM.match(text)
    with mpmath.workprec(prec + 10):
        if m:
            kind = m.group(1).lower()
            theta = parse_angle(m.group(2), prec)
            half = theta / 2
            if kind == "rz":
                vec = [mpmath.cos(half), -mpmath.sin(half), mpmath.mpf(0), mpmath.mpf(0)]
            else:
                vec = [mpmath.cos(half), mpmath.mpf(0), mpmath.mpf(0), -mpmath.sin(half)]
            return TargetUnitary(UnitVec4(vec, prec), text)
        nums = [t for t in re.split(r"[\s,]+", text.strip()) if t]
        if len(nums) != 8:
            raise ValueError(
                "target must be rz(angle), rx(angle), or 8 matrix entries"
            )
        try:
            vals = [mpmath.mpf(t) for t in nums]
        except ValueError as exc:
            raise ValueError(f"invalid matrix entry in {text!r}") from exc
        a = mpmath.mpc(vals[0], vals[1])
        b = mpmath.mpc(vals[2], vals[3])
        c = mpmath.mpc(vals[4], vals[5])
        d = mpmath.mpc(vals[6], vals[7])
        # unitarity check (columns orthonormal)
        err = max(
            abs(abs(a) ** 2 + abs(c) ** 2 - 1),
            abs(abs(b) ** 2 + abs(d) ** 2 - 1),
            abs(mpmath.conj(a) * b + mpmath.conj(c) * d),
        )
        if err > 1e-9:
            raise ValueError(f"matrix is not unitary (defect {float(err):.3g})")
        det = a * d - b * c
        root = mpmath.sqrt(det)
        return TargetUnitary(UnitVec4.from_pair(a / root, c / root, prec), text)
