"""Fixed-T-count candidate enumeration over the Clifford+T group.

``fixed_tcount_enum`` finds every Clifford+T unitary with T-count exactly t
within diamond distance eps of a target, by enumerating integer points of a
scaled 8-dimensional region and filtering exactly.  For large t,
``divide_and_conquer_enum`` splits each unitary as a Matsumoto-Amano prefix
(coset representative with t' T gates) times a suffix found by a cheaper
fixed-T-count subcall on the rotated target.

The integer-point enumeration runs on a compiled kernel when available and
falls back to a pure-Python implementation (set CTSYNTH_NO_KERNEL=1 to force
the fallback).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import mpmath

from . import _pyenum
from .exact import (
    CosetRep,
    ExactUnitary,
    GateWord,
    exact_synthesize,
    iter_coset_reps,
    tcount,
)
from .rings import ZOmega
from .unitary import UnitVec4, certified_dist_less, precision_bits

if os.environ.get("CTSYNTH_NO_KERNEL"):
    _kernel = None
else:
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:
        _kernel = None

HAVE_KERNEL = _kernel is not None

_COSET_CHUNK = 16384


@dataclass(frozen=True)
class RegionSpec:
    """The scaled region S_{eps,k}(v): integer points representing unit
    vectors u with u.v >= sqrt(1-eps^2), with denominator exponent k."""

    target: UnitVec4
    eps: float
    k: int


@dataclass
class CandidateList:
    """Enumeration result: (unitary, minimal word) pairs plus statistics."""

    entries: list[tuple[ExactUnitary, GateWord]] = field(default_factory=list)
    nodes: int = 0
    raw_points: int = 0
    dist_rejected: int = 0
    tcount_rejected: int = 0
    ambiguous: int = 0

    def words(self) -> list[GateWord]:
        return [w for _, w in self.entries]


def enumerate_integer_points(
    region: RegionSpec, prec: int | None = None
) -> tuple[list[tuple[int, ...]], int]:
    """Integer points of the region (exact unit norm; cap inequality checked
    with conservative slack, so boundary-ambiguous points are included).

    Returns (points, nodes_visited)."""
    prec = prec or (precision_bits(region.eps) + region.k + 16)
    if _kernel is not None:
        with mpmath.workprec(prec):
            vdd = _dd4(region.target.components)
            ph16 = _ph16_splits()
        identity = [(1, 0, 0, 0, 0, 0, 0, 0, 0, 0)]
        try:
            rows, nodes = _kernel.enumerate_cosets(
                region.k, float(region.eps), vdd, identity, 0, ph16
            )
            return [tuple(r[1:]) for r in rows], nodes
        except OverflowError:
            pass
    return _pyenum.enumerate_region_py(
        region.k, region.eps, region.target.components, prec
    )


def boxscan_integer_points(region: RegionSpec) -> list[tuple[int, ...]]:
    """Brute-force reference enumeration (box scan); only viable for small k.
    Used as an independent oracle in tests."""
    import itertools

    k, eps = region.k, float(region.eps)
    if k > 6:
        raise ValueError("box scan is only supported for k <= 6")
    theta2 = max(0.0, 1.0 - eps * eps)
    vf = [float(x) for x in region.target.components]
    bound = int(math.floor(2 ** (k / 2))) + 1
    tgt = 1 << k
    rt = 1.0 / math.sqrt(2.0)
    out = []
    rng = range(-bound, bound + 1)
    for n in itertools.product(rng, repeat=8):
        if sum(x * x for x in n) != tgt:
            continue
        a1, b1, c1, d1, a2, b2, c2, d2 = n
        q = (
            a1 * b1 + b1 * c1 + c1 * d1 - d1 * a1
            + a2 * b2 + b2 * c2 + c2 * d2 - d2 * a2
        )
        if q != 0:
            continue
        scale = 2 ** (-k / 2)
        u = (
            (a1 + (b1 - d1) * rt) * scale,
            (c1 + (b1 + d1) * rt) * scale,
            (a2 + (b2 - d2) * rt) * scale,
            (c2 + (b2 + d2) * rt) * scale,
        )
        s = sum(a * b for a, b in zip(u, vf))
        if s * s >= theta2 - 1e-12:
            out.append(tuple(-x for x in n) if s < 0 else n)
    return out


# ---------------------------------------------------------------------------
# Fixed-T-count enumeration (Algorithm 1)
# ---------------------------------------------------------------------------


def _rotated_target(target: UnitVec4, odd: bool, prec: int) -> UnitVec4:
    """Multiply the target pair by exp(i*pi/8) for odd T-count parity."""
    if not odd:
        return target
    with mpmath.workprec(prec + 10):
        ph = mpmath.exp(mpmath.mpc(0, mpmath.pi / 8))
        v1, v2 = target.pair()
        return UnitVec4.from_pair(ph * v1, ph * v2, prec)


def _enum_k(t: int) -> int:
    return (t + 2) // 2 if t % 2 == 0 else (t + 3) // 2


def _certify_and_collect(
    raw: list[tuple[ExactUnitary, tuple[int, ...] | None]],
    target: UnitVec4,
    eps,
    t: int,
    prec: int,
) -> CandidateList:
    """Dedup, distance-certify against the original target, and T-count
    filter a list of candidate unitaries."""
    res = CandidateList()
    seen: set[tuple] = set()
    for u, _ in raw:
        res.raw_points += 1
        key = u.canonical_key
        if key in seen:
            continue
        seen.add(key)
        ok = certified_dist_less(
            lambda p, u=u: UnitVec4(u.uvec4(p + 10), p), target, eps, prec
        )
        if ok is None:
            res.ambiguous += 1
            continue
        if not ok:
            res.dist_rejected += 1
            continue
        if tcount(u) != t:
            res.tcount_rejected += 1
            continue
        res.entries.append((u, exact_synthesize(u)))
    res.entries.sort(key=lambda e: e[1].sort_key())
    return res


def fixed_tcount_enum(
    target: UnitVec4, eps, t: int, prec: int | None = None
) -> CandidateList:
    """All Clifford+T unitaries with T-count exactly t and diamond distance
    (strictly, certified) less than eps from the target."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    eps = float(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    prec = prec or precision_bits(eps)
    k = _enum_k(t)
    veff = _rotated_target(target, t % 2 == 1, prec + k)
    points, nodes = enumerate_integer_points(
        RegionSpec(veff, eps, k), precision_bits(eps) + k + 16
    )
    raw = []
    for n in points:
        u = ExactUnitary(ZOmega(*n[:4]), ZOmega(*n[4:]), k, t % 2)
        raw.append((u, n))
    res = _certify_and_collect(raw, target, eps, t, prec)
    res.nodes = nodes
    return res


# ---------------------------------------------------------------------------
# Divide and conquer (Algorithm 2)
# ---------------------------------------------------------------------------


TPRIME_FACTOR = 2.65


def default_tprime(t: int, eps: float) -> int:
    """Prefix size t' = round_half_up(t - TPRIME_FACTOR * log2(1/eps)),
    clamped to [0, t].  The factor trades prefix-coset count against subcall
    lattice size; results are identical for any choice (the split is exact),
    only runtime changes."""
    x = t - TPRIME_FACTOR * math.log2(1.0 / eps)
    return max(0, min(t, int(math.floor(x + 0.5))))


def _dd4(vals) -> list[tuple[float, float, float, float]]:
    """Split mpmath values into 4-way double expansions (~212 bits), the
    kernel's quad-double input format."""
    out = []
    with mpmath.workprec(max(mpmath.mp.prec, 260)):
        for x in vals:
            x = mpmath.mpf(x)
            parts = []
            for _ in range(4):
                h = float(x)
                parts.append(h)
                x = x - mpmath.mpf(h)
            out.append(tuple(parts))
    return out


def _ph16_splits():
    """cos/sin(pi*j/8) tables for the kernel, split at quad-double accuracy."""
    with mpmath.workprec(260):
        return _dd4(
            [mpmath.cos(mpmath.pi * j / 8) for j in range(16)]
            + [mpmath.sin(mpmath.pi * j / 8) for j in range(16)]
        )


def _coset_chunks(n: int):
    """Yield lists of CosetRep of bounded size covering L_n."""
    chunk: list[CosetRep] = []
    for rep in iter_coset_reps(n):
        chunk.append(rep)
        if len(chunk) >= _COSET_CHUNK:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def divide_and_conquer_enum(
    target: UnitVec4,
    eps,
    t: int,
    prec: int | None = None,
    tprime: int | None = None,
) -> CandidateList:
    """All Clifford+T unitaries with T-count exactly t within eps of the
    target, via coset splitting U = U_L U_R with U_L a Matsumoto-Amano prefix
    holding t' T gates."""
    eps = float(eps)
    if tprime is None:
        tprime = default_tprime(t, eps)
    if tprime <= 0:
        return fixed_tcount_enum(target, eps, t, prec)
    prec = prec or precision_bits(eps)
    t_sub = t - tprime
    k = _enum_k(t_sub)
    enum_prec = precision_bits(eps) + k + 16
    odd = t_sub % 2 == 1
    raw: list[tuple[ExactUnitary, None]] = []
    nodes = 0

    def _chunk_py(chunk, vpair):
        nd_tot = 0
        for rep in chunk:
            u_l = rep.unitary
            a = u_l.adjoint().entries_mpc(enum_prec)
            w1 = a[0][0] * vpair[0] + a[0][1] * vpair[1]
            w2 = a[1][0] * vpair[0] + a[1][1] * vpair[1]
            ph = mpmath.exp(
                mpmath.mpc(0, mpmath.pi * (u_l.m + (1 if odd else 0)) / 8)
            )
            w1 *= ph
            w2 *= ph
            pts, nd = _pyenum.enumerate_region_py(
                k, eps, (w1.real, w1.imag, w2.real, w2.imag), enum_prec
            )
            nd_tot += nd
            for n in pts:
                u_r = ExactUnitary(
                    ZOmega(*n[:4]), ZOmega(*n[4:]), k, 1 if odd else 0
                )
                raw.append((u_l * u_r, None))
        return nd_tot

    with mpmath.workprec(enum_prec):
        vpair = target.pair()
        if _kernel is not None:
            ph16 = _ph16_splits()
            vdd = _dd4(target.components)
            for chunk in _coset_chunks(tprime):
                cos_rows = [
                    rep.unitary.x1.coeffs()
                    + rep.unitary.x2.coeffs()
                    + (rep.unitary.k, rep.unitary.m)
                    for rep in chunk
                ]
                try:
                    rows, nd = _kernel.enumerate_cosets(
                        k, eps, vdd, cos_rows, 1 if odd else 0, ph16
                    )
                except OverflowError:
                    nodes += _chunk_py(chunk, vpair)
                    continue
                nodes += nd
                for row in rows:
                    u_l = chunk[row[0]].unitary
                    u_r = ExactUnitary(
                        ZOmega(*row[1:5]), ZOmega(*row[5:9]), k, 1 if odd else 0
                    )
                    raw.append((u_l * u_r, None))
        else:
            for chunk in _coset_chunks(tprime):
                nodes += _chunk_py(chunk, vpair)
    res = _certify_and_collect(raw, target, eps, t, prec)
    res.nodes = nodes
    return res
