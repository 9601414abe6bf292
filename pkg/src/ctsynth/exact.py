"""Exact single-qubit Clifford+T unitaries and optimal normal forms.

A Clifford+T unitary is stored exactly by the first column of its matrix
(numerators in Z[z], z = exp(i*pi/4), over a joint power of sqrt(2)) together
with the determinant phase exponent:

    U = [[u1, -conj(u2) z^m],
         [u2,  conj(u1) z^m]],      u_i = x_i / sqrt(2)^k,  det U = z^m.

``exact_synthesize`` recovers the unique Matsumoto-Amano normal form

    z^p  T^a0  (HT | SHT)^m  C,      C one of the 24 Cliffords (mod phase),

whose T-count a0 + m is minimal over all {H,S,T} circuits for the unitary.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .rings import ZOmega, ZRootTwo, joint_reduce


class ExactUnitary:
    """Exact Clifford+T unitary (see module docstring for the encoding)."""

    __slots__ = ("_x1", "_x2", "_k", "_m", "_ckey")

    def __init__(self, x1: ZOmega, x2: ZOmega, k: int, m: int) -> None:
        (x1, x2), k = joint_reduce([x1, x2], k)
        self._x1 = x1
        self._x2 = x2
        self._k = k
        self._m = m % 8
        self._ckey: tuple | None = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_column(
        cls, x1: ZOmega, x2: ZOmega, k: int, m: int, validate: bool = True
    ) -> ExactUnitary:
        u = cls(x1, x2, k, m)
        if validate and not u.is_unit_norm():
            raise ValueError("column norm is not 1: not a unitary")
        return u

    @classmethod
    def identity(cls) -> ExactUnitary:
        return cls(ZOmega(1), ZOmega(0), 0, 0)

    # -- basic accessors ---------------------------------------------------

    @property
    def x1(self) -> ZOmega:
        return self._x1

    @property
    def x2(self) -> ZOmega:
        return self._x2

    @property
    def k(self) -> int:
        """Joint least denominator exponent of the matrix."""
        return self._k

    @property
    def m(self) -> int:
        """Determinant phase exponent: det U = z^m."""
        return self._m

    @property
    def l(self) -> int:
        """Parity class of the determinant exponent (0 or 1)."""
        return self._m % 2

    def is_unit_norm(self) -> bool:
        n = self._x1.norm_zroot2() + self._x2.norm_zroot2()
        return n == ZRootTwo(1 << self._k, 0)

    def __repr__(self) -> str:
        return f"ExactUnitary({self._x1!r}, {self._x2!r}, k={self._k}, m={self._m})"

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: ExactUnitary) -> ExactUnitary:
        if not isinstance(other, ExactUnitary):
            return NotImplemented
        a = self._x1.conj().mul_omega_pow(self._m)
        b = self._x2.conj().mul_omega_pow(self._m)
        z1 = self._x1 * other._x1 - b * other._x2
        z2 = self._x2 * other._x1 + a * other._x2
        return ExactUnitary(z1, z2, self._k + other._k, self._m + other._m)

    def adjoint(self) -> ExactUnitary:
        return ExactUnitary(
            self._x1.conj(),
            -self._x2.mul_omega_pow(-self._m),
            self._k,
            -self._m,
        )

    def phase_mult(self, j: int) -> ExactUnitary:
        """Multiply the whole matrix by the global phase z^j."""
        return ExactUnitary(
            self._x1.mul_omega_pow(j),
            self._x2.mul_omega_pow(j),
            self._k,
            self._m + 2 * j,
        )

    def __eq__(self, other: object) -> bool:
        """Exact matrix equality (including global phase)."""
        if isinstance(other, ExactUnitary):
            return (
                self._k == other._k
                and self._m == other._m
                and self._x1 == other._x1
                and self._x2 == other._x2
            )
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._k, self._m, self._x1.coeffs(), self._x2.coeffs()))

    @property
    def canonical_key(self) -> tuple:
        """Encoding of the projective class: lexicographically smallest of the
        8 global-phase variants."""
        if self._ckey is None:
            self._ckey = min(
                (v._m, v._x1.coeffs(), v._x2.coeffs())
                for v in (self.phase_mult(j) for j in range(8))
            ) + (self._k,)
        return self._ckey

    def same_projective(self, other: ExactUnitary) -> bool:
        return self.canonical_key == other.canonical_key

    # -- numerics ----------------------------------------------------------

    def entries_mpc(self, prec: int | None = None) -> list[list[mpmath.mpc]]:
        p = prec or mpmath.mp.prec
        with mpmath.workprec(p):
            scale = mpmath.sqrt(2) ** (-self._k)
            u1 = self._x1.to_mpc(p) * scale
            u2 = self._x2.to_mpc(p) * scale
            ph = mpmath.exp(mpmath.mpc(0, mpmath.pi * self._m / 4))
            return [
                [u1, -mpmath.conj(u2) * ph],
                [u2, mpmath.conj(u1) * ph],
            ]

    def uvec4(self, prec: int | None = None) -> tuple:
        """Projective point as a real 4-vector (Re u1, Im u1, Re u2, Im u2);
        global phase chosen so that det is 1 (phase z^{-m/2})."""
        p = prec or mpmath.mp.prec
        with mpmath.workprec(p):
            scale = mpmath.sqrt(2) ** (-self._k)
            u1 = self._x1.to_mpc(p) * scale
            u2 = self._x2.to_mpc(p) * scale
            ph = mpmath.exp(mpmath.mpc(0, -mpmath.pi * self._m / 8))
            u1 *= ph
            u2 *= ph
            return (u1.real, u1.imag, u2.real, u2.imag)


# ---------------------------------------------------------------------------
# Generators and the Clifford group
# ---------------------------------------------------------------------------

H_GATE = ExactUnitary(ZOmega(1), ZOmega(1), 1, 4)
S_GATE = ExactUnitary(ZOmega(1), ZOmega(0), 0, 2)
T_GATE = ExactUnitary(ZOmega(1), ZOmega(0), 0, 1)
IDENTITY = ExactUnitary.identity()

_LETTERS = {"H": H_GATE, "S": S_GATE, "T": T_GATE, "I": IDENTITY}


@lru_cache(maxsize=1)
def clifford_table() -> tuple[tuple[str, ExactUnitary], ...]:
    """The 24 Clifford classes (mod global phase) as (word, representative)
    pairs in deterministic BFS order over the generators H, S."""
    entries: list[tuple[str, ExactUnitary]] = [("", IDENTITY)]
    seen = {IDENTITY.canonical_key}
    frontier = [("", IDENTITY)]
    while frontier:
        nxt: list[tuple[str, ExactUnitary]] = []
        for word, u in frontier:
            for g_name in ("H", "S"):
                v = u * _LETTERS[g_name]
                key = v.canonical_key
                if key not in seen:
                    seen.add(key)
                    entry = (word + g_name, v)
                    entries.append(entry)
                    nxt.append(entry)
        frontier = nxt
    assert len(entries) == 24
    return tuple(entries)


@lru_cache(maxsize=1)
def _clifford_index() -> dict[tuple, int]:
    return {u.canonical_key: i for i, (_, u) in enumerate(clifford_table())}


# ---------------------------------------------------------------------------
# Gate words (Matsumoto-Amano normal form)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GateWord:
    """Normal form z^phase * T^a0 * prod_i (S^b_i H T) * C_clifford."""

    a0: int
    syllables: tuple[int, ...]
    clifford: int
    phase: int = 0

    @property
    def tcount(self) -> int:
        return self.a0 + len(self.syllables)

    def sort_key(self) -> tuple:
        return (self.a0, self.syllables, self.clifford)

    def to_string(self) -> str:
        parts = ["T"] * self.a0
        for b in self.syllables:
            parts.append("SHT" if b else "HT")
        parts.append(clifford_table()[self.clifford][0])
        s = "".join(parts) or "I"
        if self.phase % 8:
            s += f"@p{self.phase % 8}"
        return s


def evaluate(word: GateWord | str) -> ExactUnitary:
    """Exact unitary of a gate word (GateWord or ASCII over H/S/T/I with an
    optional trailing global-phase annotation ``@p<j>``)."""
    if isinstance(word, GateWord):
        u = IDENTITY
        if word.a0:
            u = T_GATE
        for b in word.syllables:
            if b:
                u = u * S_GATE
            u = u * H_GATE
            u = u * T_GATE
        u = u * clifford_table()[word.clifford][1]
        return u.phase_mult(word.phase)
    s = word.strip()
    phase = 0
    if "@p" in s:
        s, _, p = s.partition("@p")
        phase = int(p)
    u = IDENTITY
    for ch in s:
        try:
            u = u * _LETTERS[ch]
        except KeyError:
            raise ValueError(f"invalid gate letter {ch!r}") from None
    return u.phase_mult(phase)


# ---------------------------------------------------------------------------
# Exact synthesis (lde descent)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4)
def _peel_ops() -> tuple[ExactUnitary, ExactUnitary, ExactUnitary]:
    """Inverses of the syllables HT and SHT, and of the leading T."""
    t_dag = T_GATE.adjoint()
    s_dag = S_GATE.adjoint()
    p0 = t_dag * H_GATE  # (HT)^-1
    p1 = p0 * s_dag  # (SHT)^-1
    return p0, p1, t_dag


def _div2_bits(u: ExactUnitary) -> list[int]:
    """Bits b for which x1 - z^(-2b) x2 is divisible by 2 (the generic
    signature of a correct syllable peel)."""
    out = []
    for b in (0, 1):
        if (u.x1 - u.x2.mul_omega_pow(-2 * b)).is_div_int(2):
            out.append(b)
    return out


def _descend(
    u: ExactUnitary,
    allow_leading_t: bool,
    budget: int,
    table: dict[tuple, int],
) -> tuple[int, list[int], int, int] | None:
    """Depth-first peel of MA syllables; returns (a0, bits, clifford, phase)
    or None if this branch is dead."""
    key = u.canonical_key
    idx = table.get(key)
    if idx is not None:
        c = clifford_table()[idx][1]
        for j in range(8):
            if u == c.phase_mult(j):
                return (0, [], idx, j)
        raise AssertionError("projective match without exact phase match")
    if budget <= 0:
        return None
    p0, p1, t_dag = _peel_ops()
    passing = _div2_bits(u) if u.k >= 1 else []
    candidates: list[tuple[str, int]] = [("b", b) for b in passing]
    if allow_leading_t:
        candidates.append(("t", 0))
    if u.k >= 1:
        candidates.extend(("b", b) for b in (0, 1) if b not in passing)
    for kind, b in candidates:
        if kind == "t":
            res = _descend(t_dag * u, False, budget - 1, table)
            if res is not None:
                a0, bits, cliff, ph = res
                if a0:
                    return None  # two leading Ts is not a normal form
                return (1, bits, cliff, ph)
        else:
            w = (p1 if b else p0) * u
            if w.k > u.k:
                continue
            res = _descend(w, False, budget - 1, table)
            if res is not None:
                a0, bits, cliff, ph = res
                if a0:
                    continue
                return (0, [b] + bits, cliff, ph)
    return None


def exact_synthesize(u: ExactUnitary) -> GateWord:
    """Matsumoto-Amano normal form of an exact Clifford+T unitary; the word
    evaluates back to ``u`` exactly (including global phase), and its T-count
    is minimal.
    """
    if not u.is_unit_norm():
        raise ValueError("input is not a unitary (column norm is not 1)")
    table = _clifford_index()
    res = _descend(u, True, 2 * u.k + 4, table)
    if res is None:
        raise ArithmeticError("exact synthesis failed to terminate (invalid input?)")
    a0, bits, cliff, phase = res
    word = GateWord(a0, tuple(bits), cliff, phase)
    return word


def tcount(u: ExactUnitary) -> int:
    """Minimal T-count over all {H,S,T} circuits realizing ``u`` (projectively)."""
    return _tcount_cached(u.canonical_key, u)


def _tcount_cached(key: tuple, u: ExactUnitary) -> int:
    t = _TCOUNT_CACHE.get(key)
    if t is None:
        t = exact_synthesize(u).tcount
        if len(_TCOUNT_CACHE) > 1 << 18:
            _TCOUNT_CACHE.clear()
        _TCOUNT_CACHE[key] = t
    return t


_TCOUNT_CACHE: dict[tuple, int] = {}


# ---------------------------------------------------------------------------
# Coset representatives for divide-and-conquer enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosetRep:
    """A prefix T^a0 (S^b H T)^j of a Matsumoto-Amano word with n T gates."""

    a0: int
    bits: tuple[int, ...]
    unitary: ExactUnitary


def coset_reps(n: int) -> list[CosetRep]:
    """The Matsumoto-Amano prefix set L_n containing n T gates: all words
    (S^b H T)^n plus T (S^b H T)^(n-1); |L_n| = 3 * 2^(n-1) for n >= 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return [CosetRep(0, (), IDENTITY)]
    return list(iter_coset_reps(n))


def iter_coset_reps(n: int):
    """Generator over L_n (memory-friendly for large n)."""
    if n == 0:
        yield CosetRep(0, (), IDENTITY)
        return
    syl = (H_GATE * T_GATE, S_GATE * H_GATE * T_GATE)

    def rec(prefix_u: ExactUnitary, bits: tuple[int, ...], a0: int, remaining: int):
        if remaining == 0:
            yield CosetRep(a0, bits, prefix_u)
            return
        for b in (0, 1):
            yield from rec(prefix_u * syl[b], bits + (b,), a0, remaining - 1)

    yield from rec(IDENTITY, (), 0, n)
    yield from rec(T_GATE, (), 1, n - 1)
