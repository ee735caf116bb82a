#!/usr/bin/env python3
"""Offline derivation of the two hermitian-d3 input forms shipped as fixtures.

Both forms are weakly holomorphic vector-valued forms of weight -1 for the
discriminant module of the Eisenstein integers (order 3).  They are built as
holomorphic weight 12k-1 forms divided by Delta^k, where the holomorphic forms
come from the A2 theta components multiplied by level-one forms:

    weight 11 (k = 1):  Theta * E4^2,  D(Theta) * E6
    weight 23 (k = 2):  Theta * E4^5,  Theta * E4^2 * Delta,
                        D(Theta) * E6 * E4^3,  D(Theta) * E6 * Delta

D is the Serre derivative.  The linear combination is fixed by the requested
principal part:

    phi45:  F_0 = q^-1 + O(1),  F_{+-1} = O(1)
    delta9: F_0 = q^-2 + O(1),  F_{+-1} = O(1)

Everything is computed in integer arithmetic in the variable Q = q^(1/3).

Usage:  python3 derive_fixtures.py OUTDIR
"""

import json
import os
import sys
from fractions import Fraction

import numpy as np


def conv(a, b, n):
    """Truncated product of two integer series of length n."""
    r = np.convolve(np.array(a[:n], dtype=object), np.array(b[:n], dtype=object))
    return [int(x) for x in r[:n]]


def lin(*pairs):
    n = len(pairs[0][1])
    out = [0] * n
    for s, f in pairs:
        for i, x in enumerate(f):
            if x:
                out[i] += s * x
    return out


def sigma(n, k):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def spread(c, n):
    r = [0] * n
    for i, x in enumerate(c):
        if 3 * i < n:
            r[3 * i] = x
    return r


def build(prec):
    n = 3 * (prec + 8)
    m = n // 3 + 1
    e2 = spread([1] + [-24 * sigma(k, 1) for k in range(1, m)], n)
    e4 = spread([1] + [240 * sigma(k, 3) for k in range(1, m)], n)
    e6 = spread([1] + [-504 * sigma(k, 5) for k in range(1, m)], n)

    eta = [0] * m
    eta[0] = 1
    for k in range(1, m):
        for _ in range(24):
            for j in range(m - 1, k - 1, -1):
                eta[j] -= eta[j - k]
    eta24 = spread(eta, n)
    delta = spread([0] + eta[: m - 1], n)

    # 1/prod(1-q^k)^24, integral since the leading coefficient is 1
    inv = [0] * n
    inv[0] = 1
    nz = [(j, e) for j, e in enumerate(eta24) if j and e]
    for i in range(1, n):
        inv[i] = -sum(e * inv[i - j] for j, e in nz if j <= i)

    th0 = [0] * n
    th1 = [0] * n
    r = int((4 * n) ** 0.5) + 4
    for b1 in range(-3 * r, 3 * r + 1):
        for b2 in range(-2 * r, 2 * r + 1):
            v = b1 * b1 - 3 * b1 * b2 + 3 * b2 * b2
            if v < n:
                if b1 % 3 == 0:
                    th0[v] += 1
                elif b1 % 3 == 1:
                    th1[v] += 1

    t0 = lin((1, conv(conv(th0, th0, n), th0, n)), (2, conv(conv(th1, th1, n), th1, n)))
    t1 = lin((3, conv(conv(th0, th1, n), th1, n)))

    def serre12(f):
        # 12 * (q d/dq - 1/4 E2) f, with q d/dq = (1/3) Q d/dQ
        return lin((1, [4 * i * x for i, x in enumerate(f)]), (-3, conv(e2, f, n)))

    return dict(n=n, e4=e4, e6=e6, delta=delta, inv=inv, t=(t0, t1), dt=(serre12(t0), serre12(t1)))


def solve_rational(mat, rhs):
    k = len(rhs)
    a = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(mat, rhs)]
    for col in range(k):
        piv = next(r for r in range(col, k) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        for r in range(k):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][k] / a[i][i] for i in range(k)]


def derive(prec, k):
    s = build(prec)
    n, e4, e6, dl = s["n"], s["e4"], s["e6"], s["delta"]
    t, dt = s["t"], s["dt"]
    if k == 1:
        w = [conv(e4, e4, n)]
        basis = [(t, w[0]), (dt, e6)]
    else:
        e42 = conv(e4, e4, n)
        e43 = conv(e42, e4, n)
        basis = [
            (t, conv(e43, e42, n)),
            (t, conv(e42, dl, n)),
            (dt, conv(e6, e43, n)),
            (dt, conv(e6, dl, n)),
        ]
    forms = []
    for (c0, c1), scalar in basis:
        comps = []
        for c in (c0, c1):
            g = conv(c, scalar, n)
            for _ in range(k):
                g = conv(g, s["inv"], n)
            comps.append(g)
        forms.append(comps)
    # Q-index i of a divided form corresponds to exponent (i - 3k)/3
    pp = [(0, e) for e in range(-3 * k, 0) if e % 3 == 0] + [(1, e) for e in range(-3 * k, 0) if e % 3 == 2]
    mat = [[f[c][e + 3 * k] for f in forms] for c, e in pp]
    rhs = [1 if (c, e) == (0, -3 * k) else 0 for c, e in pp]
    sol = solve_rational(mat, rhs)
    limit = 3 * prec + 3 * k + 1
    out = []
    for c in (0, 1):
        terms = []
        for i in range(limit):
            v = sum(x * f[c][i] for x, f in zip(sol, forms))
            if v == 0:
                continue
            if v.denominator != 1:
                raise SystemExit("non-integral coefficient at Q^%d" % (i - 3 * k))
            e = Fraction(i - 3 * k, 3)
            if (c == 0 and e.denominator != 1) or (c == 1 and (e - Fraction(2, 3)).denominator != 1):
                raise SystemExit("coefficient outside the expected residue class")
            terms.append((e, int(v)))
        out.append(terms)
    return out


def fmt(e):
    return str(e.numerator) if e.denominator == 1 else "%d/%d" % (e.numerator, e.denominator)


def document(comps, d_min, prec):
    def terms(ts):
        return [{"exp": fmt(e), "coeff": str(v)} for e, v in ts]

    return {
        "D": -3,
        "weight": "-1",
        "d_min": d_min,
        "precision": str(prec),
        "components": [
            {"key": [0, 0], "terms": terms(comps[0])},
            {"key": [1, 0], "terms": terms(comps[1])},
            {"key": [-1, 0], "terms": terms(comps[1])},
        ],
    }


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "."
    os.makedirs(outdir, exist_ok=True)
    for name, k, d_min, prec in (("phi45_input.json", 1, "-4/3", 200), ("delta9_input.json", 2, "-7/3", 400)):
        comps = derive(prec, k)
        with open(os.path.join(outdir, name), "w") as fh:
            json.dump(document(comps, d_min, prec), fh, indent=1)
            fh.write("\n")
        print(name, comps[0][:3], comps[1][:2])


if __name__ == "__main__":
    main()
