"""Deterministic synthesis: smallest-T-count Clifford+T approximation.

Ascends the T-count t from 0, enumerating C+T_t within the target ball via
the grid module, and returns the first (hence minimum-T-count) hit.  Among
equally good circuits the lexicographically smallest normal-form word is
returned, so output is fully deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .exact import ExactUnitary, GateWord, IDENTITY, exact_synthesize
from .grid import divide_and_conquer_enum
from .unitary import TargetUnitary, UnitVec4, diamond_distance, precision_bits


class SynthesisCapExceeded(RuntimeError):
    """The T-count cap was hit without finding a solution (indicates a bug or
    an adversarial input; the cap is far above the covering bound)."""


@dataclass
class DetResult:
    word: GateWord
    unitary: ExactUnitary
    tcount: int
    distance: object  # mpf
    candidates_visited: int
    raw_points: int
    t_final: int

    def word_str(self) -> str:
        return self.word.to_string()


def tcount_cap(eps: float) -> int:
    return math.ceil(3 * math.log2(1.0 / eps)) + 40


def _as_uvec(v) -> UnitVec4:
    if isinstance(v, TargetUnitary):
        return v.uvec
    return v


def synth_deterministic(v, eps, tprime: int | None = None) -> DetResult:
    """Minimum-T-count Clifford+T word within diamond distance eps of v.

    v: TargetUnitary or UnitVec4.  eps > 1 returns the identity immediately.
    """
    eps = float(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    uvec = _as_uvec(v)
    prec = precision_bits(min(eps, 1.0))
    if eps > 1:
        d = diamond_distance(UnitVec4(IDENTITY.uvec4(prec), prec), uvec)
        return DetResult(exact_synthesize(IDENTITY), IDENTITY, 0, d, 0, 0, 0)
    nodes = 0
    raw = 0
    for t in range(tcount_cap(eps) + 1):
        res = divide_and_conquer_enum(uvec, eps, t, prec, tprime=tprime)
        nodes += res.nodes
        raw += res.raw_points
        if res.entries:
            u, word = res.entries[0]
            with mpmath.workprec(prec):
                d = diamond_distance(UnitVec4(u.uvec4(prec), prec), uvec)
            return DetResult(word, u, word.tcount, d, nodes, raw, t)
    raise SynthesisCapExceeded(
        f"no Clifford+T circuit within {eps} found up to the T-count cap "
        f"{tcount_cap(eps)}"
    )
