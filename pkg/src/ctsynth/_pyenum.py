"""Pure-Python lattice-point enumeration backend.

Reference implementation of the region enumeration used by the grid module:
find all integer points n in Z^8 whose image u = 2^(-k/2) * Sigma * n lies in
the cap-times-ball region R_eps(v) x D (exact unit norm enforced with integer
arithmetic; the cap inequality is checked with a conservative slack so the
output is a superset including boundary-ambiguous points).

The compiled kernel (_kernel.pyx) implements the same algorithm with
double-double arithmetic; this module is the import-time fallback and the
cross-check oracle for it.
"""

from __future__ import annotations

import math

import mpmath


def sigma_rows(rt2_inv) -> list[list]:
    """Rows of the 8x8 matrix Sigma mapping (a1,b1,c1,d1,a2,b2,c2,d2) to
    (Re u1, Im u1, Re u2, Im u2, Re u1*, Im u1*, Re u2*, Im u2*) (bullet)."""
    r = rt2_inv
    z = 0 * r
    one = z + 1
    return [
        [one, r, z, -r, z, z, z, z],
        [z, r, one, r, z, z, z, z],
        [z, z, z, z, one, r, z, -r],
        [z, z, z, z, z, r, one, r],
        [one, -r, z, r, z, z, z, z],
        [z, -r, one, -r, z, z, z, z],
        [z, z, z, z, one, -r, z, r],
        [z, z, z, z, z, -r, one, -r],
    ]


def _orthonormal_completion(v: list) -> list[list]:
    """Three vectors completing the unit 4-vector v to an orthonormal basis."""
    basis = [list(v)]
    pivot = max(range(4), key=lambda i: abs(v[i]))
    for i in range(4):
        if i == pivot:
            continue
        w = [mpmath.mpf(1) if j == i else mpmath.mpf(0) for j in range(4)]
        for b in basis:
            c = sum(x * y for x, y in zip(w, b))
            w = [x - c * y for x, y in zip(w, b)]
        nrm = mpmath.sqrt(sum(x * x for x in w))
        basis.append([x / nrm for x in w])
    return basis[1:]


def lll_reduce(cols: list[list], delta=None) -> tuple[list[list], list[list]]:
    """LLL reduction of the column set; returns (reduced columns, unimodular
    transform U with reduced = original * U)."""
    n = len(cols)
    b = [list(c) for c in cols]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if delta is None:
        delta = mpmath.mpf("0.99")

    def gso():
        star = []
        mu = [[mpmath.mpf(0)] * n for _ in range(n)]
        norms = []
        for i in range(n):
            w = list(b[i])
            for j in range(i):
                mu[i][j] = sum(x * y for x, y in zip(b[i], star[j])) / norms[j]
                w = [x - mu[i][j] * y for x, y in zip(w, star[j])]
            star.append(w)
            norms.append(sum(x * x for x in w))
        return star, mu, norms

    star, mu, norms = gso()
    i = 1
    while i < n:
        # size-reduce column i against j < i
        for j in range(i - 1, -1, -1):
            q = int(mpmath.nint(mu[i][j]))
            if q:
                b[i] = [x - q * y for x, y in zip(b[i], b[j])]
                for r in range(n):
                    u[r][i] -= q * u[r][j]
                star, mu, norms = gso()
        if i >= 1 and norms[i] < (delta - mu[i][i - 1] ** 2) * norms[i - 1]:
            b[i], b[i - 1] = b[i - 1], b[i]
            for r in range(n):
                u[r][i], u[r][i - 1] = u[r][i - 1], u[r][i]
            star, mu, norms = gso()
            i = max(i - 1, 1)
        else:
            i += 1
    return b, u


def fp_enumerate(cols: list[list], w: list, r2):
    """All integer coefficient vectors x with ||cols * x - w||^2 <= r2
    (Fincke-Pohst / Schnorr-Euchner over the given basis)."""
    n = len(cols)
    # GSO
    star = []
    mu = [[mpmath.mpf(0)] * n for _ in range(n)]
    norms = []
    for i in range(n):
        v = list(cols[i])
        for j in range(i):
            mu[i][j] = sum(x * y for x, y in zip(cols[i], star[j])) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
        norms.append(sum(x * x for x in v))
    y = [sum(a * b for a, b in zip(w, star[i])) / norms[i] for i in range(n)]

    x = [0] * n
    out = []
    nodes = 0
    slack = mpmath.mpf(2) ** -20

    def rec(level, partial):
        nonlocal nodes
        if level < 0:
            out.append(tuple(x))
            return
        c = y[level] - sum(mu[j][level] * x[j] for j in range(level + 1, n))
        budget = (r2 - partial) / norms[level] + slack
        if budget < 0:
            return
        half = mpmath.sqrt(budget)
        lo = int(mpmath.ceil(c - half - slack))
        hi = int(mpmath.floor(c + half + slack))
        for xi in range(lo, hi + 1):
            nodes += 1
            x[level] = xi
            term = (xi - c) ** 2 * norms[level]
            if term <= r2 - partial + slack:
                rec(level - 1, partial + term)

    rec(n - 1, mpmath.mpf(0))
    return out, nodes


def enumerate_region_py(k: int, eps, v4, prec: int):
    """Integer points of the scaled synthesis region (see module docstring).

    Returns (points, nodes): points is a list of 8-tuples
    (a1,b1,c1,d1,a2,b2,c2,d2), nodes the lattice nodes visited.
    """
    # The whitened basis condition is ~4/eps^2 and its Gram matrix squares
    # it, so the GSO inside LLL needs ~4*log2(1/eps) bits regardless of the
    # precision the caller asked for the target itself.
    eps_f = float(eps)
    if 0.0 < eps_f < 1.0:
        prec = max(prec, int(4 * math.log2(1.0 / eps_f)) + 80)
    with mpmath.workprec(prec):
        eps = mpmath.mpf(eps)
        v = [mpmath.mpf(x) for x in v4]
        theta2 = 1 - eps * eps
        theta = mpmath.sqrt(theta2) if theta2 > 0 else mpmath.mpf(0)
        a_slab = (1 - theta) / 2
        c0 = (1 + theta) / 2
        scale = mpmath.mpf(2) ** (mpmath.mpf(-k) / 2)
        rt2inv = 1 / mpmath.sqrt(2)
        sig = sigma_rows(rt2inv)
        comp = _orthonormal_completion(v)
        # whitened rows: slab row, 3 perpendicular rows, 4 bullet rows
        rows = []
        slab_row = [
            sum(v[i] * sig[i][j] for i in range(4)) * scale for j in range(8)
        ]
        rows.append([x / a_slab for x in slab_row])
        for e in comp:
            rows.append(
                [
                    sum(e[i] * sig[i][j] for i in range(4)) * scale / eps
                    for j in range(8)
                ]
            )
        for i in range(4, 8):
            rows.append([sig[i][j] * scale for j in range(8)])
        cols = [[rows[r][c] for r in range(8)] for c in range(8)]
        w = [c0 / a_slab] + [mpmath.mpf(0)] * 7
        r2 = mpmath.mpf(3) * (1 + mpmath.mpf(2) ** -24)

        red, umat = lll_reduce(cols)
        sols, nodes = fp_enumerate(red, w, r2)

        points = []
        target_norm = 1 << k
        slab_slack = theta * mpmath.mpf(2) ** (-min(prec // 2, 48))
        for xvec in sols:
            n = tuple(
                sum(umat[r][c] * xvec[c] for c in range(8)) for r in range(8)
            )
            a1, b1, c1, d1, a2, b2, c2, d2 = n
            p = sum(t * t for t in n)
            if p != target_norm:
                continue
            q1 = a1 * b1 + b1 * c1 + c1 * d1 - d1 * a1
            q2 = a2 * b2 + b2 * c2 + c2 * d2 - d2 * a2
            if q1 + q2 != 0:
                continue
            s = sum(slab_row[j] * n[j] for j in range(8))
            if s < 0:
                n = tuple(-t for t in n)
                s = -s
            if s >= theta - slab_slack:
                points.append(n)
        return points, nodes
