"""Choi representations and the semidefinite programs of the synthesis
pipeline: diamond distance between channels, and the optimal mixing
distribution over a candidate support.

All optimal values are certified by explicit feasible primal/dual pairs.
Solver outputs are repaired (eigenvalue shifts, support projection, spectral
clipping) into exactly feasible points whose objective values bracket the
optimum by weak duality, then polished: for a fixed input state rho both the
primal and the dual of the diamond-norm SDP admit closed-form optimizers, so
the bounds reduce to smooth functions over the Bloch ball which a local
search drives to the duality gap floor (~1e-12).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

try:
    import cvxpy as cp
except ImportError as _e:  # pragma: no cover - hard dependency
    raise ImportError("ctsynth.sdp requires cvxpy") from _e

from .unitary import TargetUnitary, UnitVec4

_EIG_SLACK = 1e-13

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

_TIGHT = dict(tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12,
              tol_ktratio=1e-8, max_iter=500)


@dataclass
class ChoiMatrix:
    """Unnormalized Choi matrix J(Phi) = sum_ij |i><j| (x) Phi(|i><j|)
    on (input (x) output); trace 2 for qubit channels."""

    mat: np.ndarray

    def __post_init__(self):
        self.mat = np.asarray(self.mat, dtype=complex)
        if self.mat.shape != (4, 4):
            raise ValueError("Choi matrix must be 4x4")

    def check_psd(self, tol: float = 1e-9) -> None:
        h = (self.mat + self.mat.conj().T) / 2
        if np.linalg.eigvalsh(h)[0] < -tol:
            raise ValueError("matrix is not positive semidefinite")


def unitary_matrix(u) -> np.ndarray:
    """2x2 special-unitary matrix for a projective point."""
    if isinstance(u, TargetUnitary):
        u = u.uvec
    if isinstance(u, UnitVec4):
        a, b, c, d = u.floats()
    elif hasattr(u, "uvec4"):  # ExactUnitary
        a, b, c, d = (float(x) for x in u.uvec4(60))
    else:
        a, b, c, d = (float(x) for x in u)
    u1 = complex(a, b)
    u2 = complex(c, d)
    return np.array([[u1, -np.conj(u2)], [u2, np.conj(u1)]])


def choi_of_unitary(u) -> ChoiMatrix:
    """J(U . U^dag): rank one, trace 2, invariant under global phase."""
    m = unitary_matrix(u)
    w = np.array([m[0, 0], m[1, 0], m[0, 1], m[1, 1]])  # |i> (x) U|i>
    return ChoiMatrix(np.outer(w, w.conj()))


def choi_of_mixture(unitaries, probs) -> ChoiMatrix:
    j = np.zeros((4, 4), dtype=complex)
    for u, p in zip(unitaries, probs):
        j += p * choi_of_unitary(u).mat
    return ChoiMatrix(j)


def _tr_out(s: np.ndarray) -> np.ndarray:
    """Partial trace over the output (second) qubit factor."""
    r = np.empty((2, 2), dtype=complex)
    for i in range(2):
        for ip in range(2):
            r[i, ip] = s[2 * i, 2 * ip] + s[2 * i + 1, 2 * ip + 1]
    return r


def _herm(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def _psd_shift(m: np.ndarray) -> np.ndarray:
    """Smallest uniform shift making m exactly PSD (with slack)."""
    m = _herm(m)
    lo = np.linalg.eigvalsh(m)[0]
    if lo < _EIG_SLACK:
        m = m + (_EIG_SLACK - lo) * np.eye(m.shape[0])
    return m


def _cap_to(t: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Project t to satisfy 0 <= t' <= m exactly (m PSD): restrict to the
    support of m and clip the spectrum of m^{-1/2} t m^{-1/2} into [0, 1]."""
    t = _herm(t)
    m = _herm(m)
    w, v = np.linalg.eigh(m)
    keep = w > max(1e-14, 1e-14 * w[-1])
    if not keep.any():
        return np.zeros_like(m)
    vs = v[:, keep]
    ws = w[keep]
    isq = np.diag(1.0 / np.sqrt(ws))
    sq = np.diag(np.sqrt(ws))
    g = _herm(isq @ (vs.conj().T @ t @ vs) @ isq)
    gw, gv = np.linalg.eigh(g)
    g = gv @ np.diag(np.clip(gw, 0.0, 1.0 - _EIG_SLACK)) @ gv.conj().T
    return vs @ (sq @ g @ sq) @ vs.conj().T


def _bloch_state(xyz) -> np.ndarray:
    """Density matrix for a Bloch vector, pulled inside the ball."""
    xyz = np.asarray(xyz, dtype=float)
    r = np.linalg.norm(xyz)
    cap = 1.0 - 1e-9
    if r > cap:
        xyz = xyz * (cap / r)
    x, y, z = xyz
    return (np.eye(2) + x * _SX + y * _SY + z * _SZ) / 2


def _bloch_of(rho: np.ndarray) -> np.ndarray:
    return np.array([np.real(np.trace(rho @ s)) for s in (_SX, _SY, _SZ)])


def _sqrt_pair(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(_herm(m))
    w = np.clip(w, 1e-18, None)
    sq = v @ np.diag(np.sqrt(w)) @ v.conj().T
    isq = v @ np.diag(1.0 / np.sqrt(w)) @ v.conj().T
    return sq, isq


def _lower_eval(jd: np.ndarray, rho: np.ndarray) -> float:
    """Certified lower bound from any density matrix rho: for fixed rho the
    optimal primal point 0 <= T <= rho (x) I is T = sqrt(m) P+ sqrt(m) with
    m = rho (x) I and P+ the positive eigenprojector of sqrt(m) jd sqrt(m),
    so the bound is the sum of positive eigenvalues."""
    sq, _ = _sqrt_pair(np.kron(rho, np.eye(2)))
    ev = np.linalg.eigvalsh(_herm(sq @ jd @ sq))
    return float(ev[ev > 0].sum()) - _EIG_SLACK


def _upper_eval(jd: np.ndarray, rho: np.ndarray) -> float:
    """Certified upper bound from any full-rank density matrix rho: the dual
    point S = sqrt(m)^-1 M+ sqrt(m)^-1 (M+ the positive part of
    sqrt(m) jd sqrt(m)) satisfies S >= jd, S >= 0 by construction and meets
    the KKT conditions at the optimal rho."""
    m = np.kron(rho, np.eye(2))
    sq, isq = _sqrt_pair(m)
    mw, mv = np.linalg.eigh(_herm(sq @ jd @ sq))
    mp = mv @ np.diag(np.clip(mw, 0.0, None)) @ mv.conj().T
    s = _herm(isq @ mp @ isq)
    gap = min(np.linalg.eigvalsh(_herm(s - jd))[0], np.linalg.eigvalsh(s)[0])
    if gap < 0.0:
        s = s + (_EIG_SLACK - gap) * np.eye(4)
    return float(np.linalg.eigvalsh(_herm(_tr_out(s)))[-1]) + _EIG_SLACK


def _regular(rho: np.ndarray) -> np.ndarray:
    rho = _psd_shift(np.asarray(rho))
    rho = rho / np.real(np.trace(rho))
    return (1.0 - 4e-12) * rho + 1e-12 * np.eye(2)


def _polish(fun, x0: np.ndarray, sign: float) -> float:
    """Local optimization of a certified bound over the Bloch ball."""
    res = minimize(lambda x: sign * fun(x), x0, method="Nelder-Mead",
                   options=dict(xatol=1e-10, fatol=1e-14, maxiter=600))
    return sign * float(res.fun)


def _solve(prob, tight: bool) -> None:
    prob.solve(solver=cp.CLARABEL, **(_TIGHT if tight else {}))
    if prob.status not in ("optimal", "optimal_inaccurate"):
        raise RuntimeError(f"SDP solve failed: {prob.status}")


def _bracket(jd: np.ndarray, rho0: np.ndarray,
             polish: bool = True) -> tuple[float, float]:
    """Certified [lo, hi] for max tr(jd T), 0 <= T <= rho (x) I, tr rho = 1,
    starting the Bloch-ball polish from rho0."""
    rho0 = _regular(rho0)
    x0 = _bloch_of(rho0)
    lo = _lower_eval(jd, rho0)
    hi = _upper_eval(jd, rho0)
    if polish:
        lo = max(lo, _polish(
            lambda x: _lower_eval(jd, _regular(_bloch_state(x))), x0, -1.0))
        hi = min(hi, _polish(
            lambda x: _upper_eval(jd, _regular(_bloch_state(x))), x0, +1.0))
    hi = max(hi, lo)
    return max(lo, 0.0), max(hi, 0.0)


def _solve_rho(jd: np.ndarray, tight: bool) -> np.ndarray:
    """Interior-point solve of the primal, keeping only the input state."""
    t_var = cp.Variable((4, 4), hermitian=True)
    rho_var = cp.Variable((2, 2), hermitian=True)
    prob = cp.Problem(cp.Maximize(cp.real(cp.trace(jd @ t_var))), [
        t_var >> 0,
        rho_var >> 0,
        cp.real(cp.trace(rho_var)) == 1,
        cp.kron(rho_var, np.eye(2)) - t_var >> 0,
    ])
    _solve(prob, tight)
    return np.asarray(rho_var.value)


def diamond_distance_channel(a: ChoiMatrix, b: ChoiMatrix,
                             tight: bool = True) -> tuple[float, float]:
    """Certified interval for (1/2)||A - B||_diamond from the Choi matrices.

    Solves the primal SDP (max tr[J(A-B) T] over 0 <= T <= rho (x) I) for the
    optimal input state, then brackets the value with matched closed-form
    primal/dual points polished over the Bloch ball.
    """
    a.check_psd()
    b.check_psd()
    jd = _herm(a.mat - b.mat)
    if np.linalg.norm(jd) < 1e-15:
        return (0.0, _EIG_SLACK)
    rho0 = _solve_rho(jd, tight)
    return _bracket(jd, rho0, polish=tight)


@dataclass
class MixtureSolution:
    """An optimal (or certified near-optimal) mixture over a support."""

    support: list = field(default_factory=list)   # caller-defined entries
    probs: list[float] = field(default_factory=list)
    eps_star: tuple[float, float] = (0.0, 0.0)
    tcount: int = 0

    @property
    def eps_star_lo(self) -> float:
        return self.eps_star[0]

    @property
    def eps_star_hi(self) -> float:
        return self.eps_star[1]


def _mixing_solve(jv, jxs, scale: float, tight: bool):
    """One scaled pass of the joint mixing SDP; returns (probs, S value)."""
    m = len(jxs)
    p = cp.Variable(m, nonneg=True)
    s_var = cp.Variable((4, 4), hermitian=True)
    r = cp.Variable()
    jmix = sum(p[i] * (jxs[i] * scale) for i in range(m))
    prob = cp.Problem(cp.Minimize(r), [
        s_var - (jv * scale - jmix) >> 0,
        s_var >> 0,
        r * np.eye(2) - cp.partial_trace(s_var, [2, 2], 1) >> 0,
        cp.sum(p) == 1,
    ])
    _solve(prob, tight)
    probs = np.clip(np.asarray(p.value, dtype=float), 0.0, None)
    return probs / probs.sum(), float(r.value) / scale


def _mixing_lower(jv, jxs, scale: float, tight: bool) -> float:
    """Certified lower bound valid for every distribution, from the dual

        max  tr(A J_V) - w   s.t.  0 <= A <= rho (x) I, tr rho = 1,
                                   tr(A J_x) <= w  for all x,

    solved in scaled units and repaired to exact feasibility."""
    a_var = cp.Variable((4, 4), hermitian=True)
    rho_var = cp.Variable((2, 2), hermitian=True)
    w_var = cp.Variable()
    cons = [
        a_var >> 0,
        rho_var >> 0,
        cp.real(cp.trace(rho_var)) == 1,
        cp.kron(rho_var, np.eye(2)) - a_var >> 0,
    ]
    cons += [cp.real(cp.trace(a_var @ (jx * scale))) <= w_var for jx in jxs]
    prob = cp.Problem(
        cp.Maximize(cp.real(cp.trace(a_var @ (jv * scale))) - w_var), cons)
    _solve(prob, tight)
    rho = _regular(rho_var.value)
    a_fix = _cap_to(np.asarray(a_var.value), np.kron(rho, np.eye(2)))
    w = max(float(np.real(np.trace(a_fix @ (jx * scale)))) for jx in jxs)
    lo = float(np.real(np.trace(a_fix @ (jv * scale)))) - w - _EIG_SLACK
    return lo / scale


def solve_mixing(v, support_unitaries, eps_target: float | None = None,
                 tight: bool = True) -> MixtureSolution:
    """Probability distribution over the support minimizing the diamond
    distance of the mixed channel to the target unitary v.

    Returns probabilities and a certified interval for the optimal value:
    the upper end from the achieved mixture's polished dual point, the lower
    end from a repaired feasible point of the joint problem's dual, which
    bounds the optimum over *every* distribution.  When the first pass is
    too coarse (relative to eps_target if given), the SDPs are re-solved in
    rescaled units so the interior-point tolerances apply at the scale of
    the optimum.
    """
    if not support_unitaries:
        raise ValueError("support must be nonempty")
    jv = choi_of_unitary(v).mat
    jxs = [choi_of_unitary(u).mat for u in support_unitaries]

    probs, r_est = _mixing_solve(jv, jxs, 1.0, tight)

    def upper_of(pv):
        jd = _herm(jv - sum(pi * jx for pi, jx in zip(pv, jxs)))
        rho0 = _solve_rho(jd, tight) if np.linalg.norm(jd) > 1e-14 \
            else np.eye(2) / 2
        return _bracket(jd, rho0, polish=tight)[1]

    hi = upper_of(probs)
    lo = _mixing_lower(jv, jxs, 1.0, tight)

    tol = 1e-3 * eps_target if eps_target is not None else 1e-9
    if hi - lo > tol and hi > 1e-14:
        # refine in rescaled units centered on the first-pass value
        scale = 1.0 / max(min(hi, max(r_est, 0.0) + 1e-15), 1e-12)
        probs2, _ = _mixing_solve(jv, jxs, scale, tight)
        hi2 = upper_of(probs2)
        if hi2 < hi:
            probs, hi = probs2, hi2
        lo = max(lo, _mixing_lower(jv, jxs, scale, tight))

    lo = min(max(lo, 0.0), hi)
    return MixtureSolution(
        support=list(support_unitaries),
        probs=[float(x) for x in probs],
        eps_star=(lo, max(hi, 0.0)),
    )
