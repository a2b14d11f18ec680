"""Compiled inner loops for large complexes.

Monomials are packed into int64 keys, fields (b1, a1, b2, a2, ...) most
significant first with ``bits`` bits each, so that numeric order of keys is
the basis order.  These routines mirror the pure-Python path in
``coordinate.py``; the two are cross-checked in the test suite.
"""

from __future__ import annotations

import numpy as np
from numba import njit

STACK = 4096

ERR_MISSING = 1    # non-degenerate term absent from the target basis
ERR_SUPPORT = 2    # rewriting changed the set of touched points
ERR_OVERFLOW = 3   # rewrite stack exhausted


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def enumerate_normalized(npts, t, cov, full, maxcov, bits):
    """Sorted keys of admissible monomials whose touched points cover every bit of ``full``."""
    out = np.empty(1024, np.int64)
    cnt = 0
    if t == 0:
        if full == 0:
            out[0] = 0
            cnt = 1
        return out[:cnt]
    b = np.zeros(t, np.int64)
    a = np.zeros(t, np.int64)
    mk = np.zeros(t + 1, np.int64)
    k = 0
    b[0] = 2
    a[0] = 0
    while k >= 0:
        a[k] += 1
        if a[k] >= b[k]:
            b[k] += 1
            a[k] = 1
        if b[k] > npts - (t - 1 - k):
            k -= 1
            continue
        m = mk[k] | cov[a[k]] | cov[b[k]]
        r = t - 1 - k
        unc = _popcount(full & ~m)
        if unc > 2 * r * maxcov:
            continue
        if r == 0:
            if unc == 0:
                key = 0
                for q in range(t):
                    key = (key << bits) | b[q]
                    key = (key << bits) | a[q]
                if cnt == out.shape[0]:
                    grown = np.empty(2 * cnt, np.int64)
                    grown[:cnt] = out
                    out = grown
                out[cnt] = key
                cnt += 1
            continue
        mk[k + 1] = m
        k += 1
        b[k] = b[k - 1] + 1
        a[k] = 0
    return out[:cnt]


@njit(cache=True)
def _normal_form(raw, t, odd, stack, scoef, outp, ocoef, cur):
    """Expand a product of t generators; returns the number of terms or -1 on overflow."""
    flip = 1 if odd else -1
    # fast path: already admissible up to orientation
    ok = True
    c = 1
    for q in range(t):
        x = raw[q, 0]
        y = raw[q, 1]
        if x == y or x == 0 or y == 0:
            return 0
        if q > 0 and max(raw[q - 1, 0], raw[q - 1, 1]) >= max(x, y):
            ok = False
            break
    if ok:
        for q in range(t):
            x = raw[q, 0]
            y = raw[q, 1]
            if x > y:
                outp[0, q, 0] = y
                outp[0, q, 1] = x
                c *= flip
            else:
                outp[0, q, 0] = x
                outp[0, q, 1] = y
        ocoef[0] = c
        return 1
    stack[0, :, :] = raw
    scoef[0] = 1
    top = 1
    nout = 0
    while top > 0:
        top -= 1
        c = scoef[top]
        cur[:, :] = stack[top]
        zero = False
        for q in range(t):
            x = cur[q, 0]
            y = cur[q, 1]
            if x == y or x == 0 or y == 0:
                zero = True
                break
            if x > y:
                cur[q, 0] = y
                cur[q, 1] = x
                c *= flip
        if zero:
            continue
        for q in range(1, t):
            j = q
            while j > 0 and (cur[j - 1, 1] > cur[j, 1] or (cur[j - 1, 1] == cur[j, 1] and cur[j - 1, 0] > cur[j, 0])):
                x0 = cur[j, 0]
                x1 = cur[j, 1]
                cur[j, 0] = cur[j - 1, 0]
                cur[j, 1] = cur[j - 1, 1]
                cur[j - 1, 0] = x0
                cur[j - 1, 1] = x1
                if odd:
                    c = -c
                j -= 1
        dup = False
        rep = -1
        for q in range(t - 1):
            if cur[q, 1] == cur[q + 1, 1]:
                if cur[q, 0] == cur[q + 1, 0]:
                    dup = True
                    break
                rep = q
        if dup:
            continue
        if rep < 0:
            if nout == outp.shape[0]:
                return -1
            outp[nout, :, :] = cur
            ocoef[nout] = c
            nout += 1
            continue
        if top + 2 > stack.shape[0]:
            return -1
        a1 = cur[rep, 0]
        a2 = cur[rep + 1, 0]
        bb = cur[rep, 1]
        # w(a1,b) w(a2,b) = w(a1,a2) w(a2,b) - w(a1,a2) w(a1,b)
        stack[top, :, :] = cur
        stack[top, rep, 0] = a1
        stack[top, rep, 1] = a2
        stack[top, rep + 1, 0] = a2
        stack[top, rep + 1, 1] = bb
        scoef[top] = c
        top += 1
        stack[top, :, :] = cur
        stack[top, rep, 0] = a1
        stack[top, rep, 1] = a2
        stack[top, rep + 1, 0] = a1
        stack[top, rep + 1, 1] = bb
        scoef[top] = -c
        top += 1
    return nout


@njit(cache=True)
def apply_table(keys, t, bits, table, odd, tkeys, tcov, tfull, skip_degenerate=False):
    """Apply a pointed map to every monomial in ``keys``.

    Returns COO arrays (row in ``tkeys``, column in ``keys``, coefficient)
    for the terms that land in the target basis, plus an error code.
    Terms outside the target basis must be degenerate (coverage != tfull).
    With ``skip_degenerate`` an image whose touched points already fail to
    cover is dropped before rewriting; this relies on rewriting preserving
    the touched set, which the default mode asserts.
    """
    mask = (1 << bits) - 1
    cap = max(16, 2 * keys.shape[0])
    rows = np.empty(cap, np.int64)
    cols = np.empty(cap, np.int64)
    vals = np.empty(cap, np.int64)
    cnt = 0
    raw = np.empty((t, 2), np.int64)
    stack = np.empty((STACK, t, 2), np.int64)
    scoef = np.empty(STACK, np.int64)
    outp = np.empty((STACK, t, 2), np.int64)
    ocoef = np.empty(STACK, np.int64)
    cur = np.empty((t, 2), np.int64)
    for col in range(keys.shape[0]):
        key = keys[col]
        for q in range(t - 1, -1, -1):
            raw[q, 0] = key & mask
            key >>= bits
            raw[q, 1] = key & mask
            key >>= bits
        dead = False
        lo = 0
        hi = 0
        scov = 0
        for q in range(t):
            x = table[raw[q, 0]]
            y = table[raw[q, 1]]
            if x == 0 or y == 0 or x == y:
                dead = True
                break
            raw[q, 0] = x
            raw[q, 1] = y
            scov |= tcov[x] | tcov[y]
            for z in (x, y):
                if z < 64:
                    lo |= 1 << z
                else:
                    hi |= 1 << (z - 64)
        if dead or (skip_degenerate and scov != tfull):
            continue
        nout = _normal_form(raw, t, odd, stack, scoef, outp, ocoef, cur) if t > 0 else 1
        if nout < 0:
            return rows[:cnt], cols[:cnt], vals[:cnt], ERR_OVERFLOW
        if t == 0:
            ocoef[0] = 1
        for o in range(nout):
            tk = 0
            tlo = 0
            thi = 0
            cover = 0
            for q in range(t):
                x = outp[o, q, 0]
                y = outp[o, q, 1]
                tk = (tk << bits) | y
                tk = (tk << bits) | x
                for z in (x, y):
                    cover |= tcov[z]
                    if z < 64:
                        tlo |= 1 << z
                    else:
                        thi |= 1 << (z - 64)
            if tlo != lo or thi != hi:
                return rows[:cnt], cols[:cnt], vals[:cnt], ERR_SUPPORT
            if cover != tfull:
                continue  # degenerate: dropped in the normalized quotient
            pos = np.searchsorted(tkeys, tk)
            if pos < tkeys.shape[0] and tkeys[pos] == tk:
                if cnt == rows.shape[0]:
                    r2 = np.empty(2 * cnt, np.int64)
                    c2 = np.empty(2 * cnt, np.int64)
                    v2 = np.empty(2 * cnt, np.int64)
                    r2[:cnt] = rows
                    c2[:cnt] = cols
                    v2[:cnt] = vals
                    rows = r2
                    cols = c2
                    vals = v2
                rows[cnt] = pos
                cols[cnt] = col
                vals[cnt] = ocoef[o]
                cnt += 1
            else:
                return rows[:cnt], cols[:cnt], vals[:cnt], ERR_MISSING
    return rows[:cnt], cols[:cnt], vals[:cnt], 0
