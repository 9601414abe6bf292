"""Desk-scale ground truth for testing the synthesis pipeline: an exhaustive
Clifford+T channel database built from the Matsumoto-Amano normal form, a
linear-scan minimum-T-count oracle, Monte-Carlo covering checks, and a
brute-force counterpart of the four-square counting formula.
"""

from __future__ import annotations

import math
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .exact import (
    ExactUnitary,
    GateWord,
    clifford_table,
    iter_coset_reps,
)
from .rings import ZOmega, ZRootTwo
from .unitary import UnitVec4, certified_dist_less, precision_bits

MAX_T_DATABASE = 14

EXCEEDS_T_MAX = "exceeds t_max"

_MAGIC = b"CTDB0001"

# packed record: t, a0, nsyl, syllable bits, clifford, k, m, x1/x2 coeffs
_ROW_DTYPE = np.dtype([
    ("t", "u1"), ("a0", "u1"), ("nsyl", "u1"), ("bits", "<u2"),
    ("cliff", "u1"), ("k", "u1"), ("m", "u1"),
    ("x1", "<i4", (4,)), ("x2", "<i4", (4,)),
])


_RT2 = math.sqrt(2.0)


def _vecs_from_rows(rows: np.ndarray) -> np.ndarray:
    """Vectorized float64 projective 4-vectors matching ExactUnitary.uvec4:
    entries x / sqrt(2)^k with the det-normalizing phase exp(-i pi m / 8)."""

    def cval(x):
        x = x.astype(np.float64)
        return (x[:, 0] + (x[:, 1] - x[:, 3]) / _RT2) \
            + 1j * (x[:, 2] + (x[:, 1] + x[:, 3]) / _RT2)

    ph = np.exp(-1j * np.pi * rows["m"].astype(np.float64) / 8) \
        * np.exp2(-rows["k"].astype(np.float64) / 2)
    u1 = cval(rows["x1"]) * ph
    u2 = cval(rows["x2"]) * ph
    return np.column_stack([u1.real, u1.imag, u2.real, u2.imag])


@dataclass
class TCountDatabase:
    """All Clifford+T channels with T-count <= t_max, keyed canonically."""

    t_max: int
    words: list[GateWord]
    tcounts: np.ndarray            # (N,) uint8
    vecs: np.ndarray               # (N, 4) float64 projective 4-vectors
    rows: np.ndarray               # (N,) _ROW_DTYPE, for export/reconstruction
    index: dict = field(repr=False, default_factory=dict)
    per_t_counts: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.words)

    def unitary_at(self, i: int) -> ExactUnitary:
        r = self.rows[i]
        return ExactUnitary(ZOmega(*(int(x) for x in r["x1"])),
                            ZOmega(*(int(x) for x in r["x2"])),
                            int(r["k"]), int(r["m"]))

    def lookup(self, u: ExactUnitary):
        """(tcount, GateWord) for an exactly representable channel, else
        None."""
        i = self.index.get(u.canonical_key)
        if i is None:
            return None
        return int(self.tcounts[i]), self.words[i]


def _pack_row(t: int, word: GateWord, u: ExactUnitary) -> tuple:
    bits = 0
    for j, b in enumerate(word.syllables):
        bits |= b << j
    return (t, word.a0, len(word.syllables), bits, word.clifford,
            u.k, u.m, u.x1.coeffs(), u.x2.coeffs())


def build_database(t_max: int) -> TCountDatabase:
    """Exhaustive map ExactUnitary -> (minimal T-count, word), generated from
    the Matsumoto-Amano normal form so every channel appears exactly once at
    its minimal t; per-t cardinality is 24 * 3 * 2^(t-1) for t >= 1."""
    if not 0 <= t_max <= MAX_T_DATABASE:
        raise ValueError(f"t_max must be in [0, {MAX_T_DATABASE}]")
    cliffords = clifford_table()
    index: dict = {}
    words: list[GateWord] = []
    trows: list[int] = []
    rows: list[tuple] = []
    per_t: dict[int, int] = {}
    for t in range(t_max + 1):
        new = 0
        for rep in iter_coset_reps(t):
            for ci, (_, cu) in enumerate(cliffords):
                u = rep.unitary * cu
                key = u.canonical_key
                if key in index:
                    continue
                word = GateWord(rep.a0, rep.bits, ci)
                index[key] = len(words)
                words.append(word)
                trows.append(t)
                rows.append(_pack_row(t, word, u))
                new += 1
        per_t[t] = new
    row_arr = np.array(rows, dtype=_ROW_DTYPE)
    return TCountDatabase(
        t_max=t_max,
        words=words,
        tcounts=np.asarray(trows, dtype=np.uint8),
        vecs=_vecs_from_rows(row_arr),
        rows=row_arr,
        index=index,
        per_t_counts=per_t,
    )


def oracle_min_tcount(db: TCountDatabase, v, eps: float):
    """Exact minimum T-count over the database within diamond distance eps
    of v, via a vectorized closed-form scan; boundary cases are recertified
    with high-precision interval arithmetic.  Returns the string
    ``"exceeds t_max"`` when nothing in the database is close enough."""
    if isinstance(v, UnitVec4):
        target = v
    elif hasattr(v, "uvec"):
        target = v.uvec
    else:
        target = UnitVec4(v)
    v4 = np.asarray(target.floats())
    dots = db.vecs @ v4
    d2 = np.clip(1.0 - dots * dots, 0.0, None)
    e2 = eps * eps
    margin = max(1e-12, 1e-9 * e2)
    inside = d2 < e2 - margin
    boundary = ~inside & (d2 < e2 + margin)
    best = int(db.tcounts[inside].min()) if inside.any() else None
    # only boundary entries that could improve on the confident minimum
    # matter; settle them with certified interval arithmetic
    prec = precision_bits(eps) + 20
    for i in np.nonzero(boundary)[0]:
        t = int(db.tcounts[i])
        if best is not None and t >= best:
            continue
        u = db.unitary_at(i)
        res = certified_dist_less(
            lambda p, u=u: UnitVec4(u.uvec4(p + 10), p), target, eps, prec)
        if res:
            best = t if best is None else min(best, t)
    return EXCEEDS_T_MAX if best is None else best


def save_database(db: TCountDatabase, path: str) -> None:
    """Binary export: versioned magic, t_max, row count, packed rows, CRC32."""
    payload = db.rows.tobytes()
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<IQ", db.t_max, len(db.rows)))
        f.write(payload)
        f.write(struct.pack("<I", zlib.crc32(payload)))


def load_database(path: str) -> TCountDatabase:
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < len(_MAGIC) + 16 or blob[:8] != _MAGIC:
        raise ValueError("not a T-count database file")
    t_max, count = struct.unpack_from("<IQ", blob, 8)
    start = 8 + 12
    end = start + count * _ROW_DTYPE.itemsize
    if len(blob) != end + 4:
        raise ValueError("database file truncated")
    payload = blob[start:end]
    (crc,) = struct.unpack_from("<I", blob, end)
    if zlib.crc32(payload) != crc:
        raise ValueError("database file corrupted (CRC mismatch)")
    rows = np.frombuffer(payload, dtype=_ROW_DTYPE).copy()
    words = []
    index = {}
    per_t: dict[int, int] = {}
    for i, r in enumerate(rows):
        bits = tuple((int(r["bits"]) >> j) & 1 for j in range(int(r["nsyl"])))
        words.append(GateWord(int(r["a0"]), bits, int(r["cliff"])))
        u = ExactUnitary(ZOmega(*(int(x) for x in r["x1"])),
                         ZOmega(*(int(x) for x in r["x2"])),
                         int(r["k"]), int(r["m"]))
        index[u.canonical_key] = i
        t = int(r["t"])
        per_t[t] = per_t.get(t, 0) + 1
    return TCountDatabase(
        t_max=t_max,
        words=words,
        tcounts=rows["t"].astype(np.uint8),
        vecs=_vecs_from_rows(rows),
        rows=rows,
        index=index,
        per_t_counts=per_t,
    )


# ---------------------------------------------------------------------------
# Monte-Carlo covering oracle
# ---------------------------------------------------------------------------


def _cap_samples(v4: np.ndarray, delta: float, n: int,
                 rng: np.random.Generator) -> np.ndarray:
    """Uniform samples (n, 4) from the projective ball B_delta(v) on S^3,
    i.e. the spherical cap of colatitude arcsin(delta), via inverse-CDF
    sampling of the colatitude (density ~ sin^2)."""
    theta_max = math.asin(min(delta, 1.0))
    grid = np.linspace(0.0, theta_max, 2048)
    cdf = grid - np.sin(grid) * np.cos(grid)  # unnormalized, monotone
    cdf /= cdf[-1]
    theta = np.interp(rng.random(n), cdf, grid)
    # orthonormal completion of v4 (drop the axis most parallel to v4)
    axes = np.delete(np.eye(4), int(np.argmax(np.abs(v4))), axis=1)
    basis = np.linalg.qr(np.column_stack([v4, axes]))[0]
    e = rng.normal(size=(n, 3))
    e /= np.linalg.norm(e, axis=1, keepdims=True)
    return (np.cos(theta)[:, None] * v4[None, :]
            + np.sin(theta)[:, None] * (e @ basis[:, 1:].T))


def monte_carlo_covering(inst, n_samples: int = 100_000, seed: int = 0):
    """Statistical covering check: samples points uniformly in B_delta(v)
    and looks for one farther than delta from every support point.  Returns
    (covered_estimate, witness): witness is an uncovered UnitVec4, or None
    if all samples were covered."""
    v4 = np.asarray([float(x) for x in inst.v.floats()])
    pts = np.asarray([[float(x) for x in p.floats()] for p in inst.points])
    delta = float(inst.delta)
    rng = np.random.default_rng(seed)
    cos_min = math.sqrt(max(0.0, 1.0 - delta * delta))
    chunk = 20_000
    remaining = n_samples
    while remaining > 0:
        m = min(chunk, remaining)
        remaining -= m
        samples = _cap_samples(v4, delta, m, rng)
        # covered iff |<u, u_j>| >= sqrt(1 - delta^2) for some j; demand a
        # clear margin before declaring a witness, to be float-proof
        best = np.abs(samples @ pts.T).max(axis=1)
        bad = np.nonzero(best < cos_min - 1e-12)[0]
        if bad.size:
            return False, UnitVec4(tuple(samples[bad[0]]))
    return True, None


# ---------------------------------------------------------------------------
# Four-square brute force
# ---------------------------------------------------------------------------


def brute_force_four_squares(m: ZRootTwo) -> int:
    """Exhaustive count of (a,b,c,d) in Z[sqrt2]^4 with a^2+b^2+c^2+d^2 = m,
    enumerating the box |x| <= sqrt(m), |x.conj| <= sqrt(m.conj) in both
    embeddings and meeting pairs in the middle."""
    if not m.is_totally_nonneg():
        raise ValueError("m must be totally nonnegative")
    if m.norm() > 10**6:
        raise ValueError("norm too large for brute force")
    s = math.sqrt(float(m)) + 1e-9
    sc = math.sqrt(float(m.conj())) + 1e-9
    cands: list[ZRootTwo] = []
    a_hi = int(math.floor((s + sc) / 2)) + 1
    b_hi = int(math.floor((s + sc) / (2 * math.sqrt(2)))) + 1
    for a in range(-a_hi, a_hi + 1):
        for b in range(-b_hi, b_hi + 1):
            x = a + b * math.sqrt(2)
            xc = a - b * math.sqrt(2)
            if abs(x) <= s and abs(xc) <= sc:
                cands.append(ZRootTwo(a, b))
    pair_counts: dict[ZRootTwo, int] = {}
    for i, x in enumerate(cands):
        x2 = x * x
        for y in cands:
            ssum = x2 + y * y
            pair_counts[ssum] = pair_counts.get(ssum, 0) + 1
    total = 0
    for ssum, cnt in pair_counts.items():
        rest = m - ssum
        other = pair_counts.get(rest)
        if other:
            total += cnt * other
    return total
