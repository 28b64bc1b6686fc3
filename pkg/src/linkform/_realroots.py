"""Dense real-coefficient polynomial toolkit: Euclid, Yun, Sturm, isolation.

Polynomials are lists of coefficients in ascending degree order.  The
coefficient type is duck-typed: anything with exact ``+ - * /``, ``sign()``
and ``abs_upper()`` works (in practice the real subfield elements of
:mod:`linkform.field`).  Interval endpoints are ``fractions.Fraction``.

Everything here is exact; floats never appear.
"""

from __future__ import annotations

from fractions import Fraction


def normalize(p: list) -> list:
    """Strip high-degree zero coefficients."""
    n = len(p)
    while n > 0 and p[n - 1].is_zero():
        n -= 1
    return p[:n]


def degree(p: list) -> int:
    """Degree of ``p``; -1 for the zero polynomial."""
    return len(p) - 1


def peval(p: list, x):
    """Evaluate by Horner's rule.  ``p`` must be non-empty."""
    assert p, "cannot evaluate an empty coefficient list"
    acc = p[-1]
    for c in reversed(p[:-1]):
        acc = acc * x + c
    return acc


def pmul(p: list, q: list) -> list:
    if not p or not q:
        return []
    out = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = a * b if out[i + j] is None else out[i + j] + a * b
    return normalize(out)


def psub(p: list, q: list) -> list:
    n = max(len(p), len(q))
    out = []
    for k in range(n):
        if k < len(p) and k < len(q):
            out.append(p[k] - q[k])
        elif k < len(p):
            out.append(p[k])
        else:
            out.append(-q[k])
    return normalize(out)


def pdivmod(p: list, q: list) -> tuple[list, list]:
    """Field division: ``p = quo*q + rem`` with deg rem < deg q."""
    assert q, "division by the zero polynomial"
    rem = list(p)
    dq = degree(q)
    lead = q[-1]
    quo = [None] * max(0, len(rem) - dq)
    while degree(normalize(rem)) >= dq:
        rem = normalize(rem)
        k = degree(rem) - dq
        c = rem[-1] / lead
        quo[k] = c
        for j in range(dq + 1):
            rem[k + j] = rem[k + j] - c * q[j]
    qn = [c for c in quo]
    zero = q[0] - q[0]
    out_q = [zero if c is None else c for c in qn]
    return normalize(out_q), normalize(rem)


def pmonic(p: list) -> list:
    """Divide by the leading coefficient."""
    assert p
    lead = p[-1]
    return [c / lead for c in p]


def pderiv(p: list) -> list:
    return normalize([p[k] * k for k in range(1, len(p))])


def pgcd(p: list, q: list) -> list:
    """Monic gcd by the Euclidean algorithm (monic-normalizing each step)."""
    a, b = normalize(p), normalize(q)
    while b:
        a, b = b, pdivmod(a, b)[1]
        if b:
            b = pmonic(b)
    return pmonic(a) if a else []


def pexact_div(p: list, q: list) -> list:
    quo, rem = pdivmod(p, q)
    assert not rem, "division was expected to be exact"
    return quo


def yun(p: list) -> list[tuple[list, int]]:
    """Squarefree decomposition (Yun): ``p = lc * prod f_k^k`` with the
    ``f_k`` monic, squarefree and pairwise coprime.  Returns [(f_k, k), ...]
    for the k with deg f_k >= 1."""
    p = normalize(p)
    assert p
    if degree(p) == 0:
        return []
    dp = pderiv(p)
    g = pgcd(p, dp)
    if degree(g) == 0:
        return [(pmonic(p), 1)]
    out: list[tuple[list, int]] = []
    w = pexact_div(p, g)
    y = pexact_div(dp, g)
    k = 1
    while degree(w) > 0:
        z = psub(y, pderiv(w))
        f = pgcd(w, z)
        if degree(f) > 0:
            out.append((f, k))
        w = pexact_div(w, f) if degree(f) > 0 else w
        y = pexact_div(z, f) if degree(f) > 0 else z
        k += 1
    return out


def _positive_normalize(p: list) -> list:
    """Scale by a positive constant so the leading coefficient is +1 or -1
    becomes +1; sign structure of evaluations is preserved only for positive
    scalars, so divide by |leading coefficient|."""
    lead = p[-1]
    s = lead.sign()
    assert s != 0
    scale = lead if s > 0 else -lead
    return [c / scale for c in p]


def sturm_chain(p: list) -> list[list]:
    """Sturm chain of ``p`` (positive-constant normalized for size control)."""
    p = normalize(p)
    assert p
    chain = [_positive_normalize(p)]
    d = pderiv(p)
    if d:
        chain.append(_positive_normalize(d))
        while True:
            rem = pdivmod(chain[-2], chain[-1])[1]
            if not rem:
                break
            chain.append(_positive_normalize([-c for c in rem]))
    return chain


def _variations(signs: list[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def variations_at(chain: list[list], x: Fraction) -> int:
    return _variations([peval(q, x).sign() for q in chain])


def variations_at_inf(chain: list[list], direction: int) -> int:
    """Sign variations at +infinity (direction=+1) or -infinity (-1)."""
    signs = []
    for q in chain:
        s = q[-1].sign()
        if direction < 0 and degree(q) % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_roots(chain: list[list], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi).  Endpoints must not be
    roots of chain[0]."""
    return variations_at(chain, lo) - variations_at(chain, hi)


def count_roots_below(chain: list[list], x: Fraction) -> int:
    """Number of distinct real roots in (-inf, x); x must not be a root."""
    return variations_at_inf(chain, -1) - variations_at(chain, x)


def root_bound(p: list) -> Fraction:
    """A rational B with every real root strictly inside (-B, B) (Cauchy)."""
    m = pmonic(normalize(p))
    worst = Fraction(0)
    for c in m[:-1]:
        u = c.abs_upper()
        if u > worst:
            worst = u
    return worst + 1


def _split_points(lo: Fraction, hi: Fraction):
    """Candidate interior split points, roughly central, all distinct."""
    width = hi - lo
    j = 1
    while True:
        yield lo + width * Fraction(j, 2 * j + 1)
        yield lo + width * Fraction(j + 1, 2 * j + 1)
        j += 1


def isolate_roots(p: list) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for all real roots of squarefree ``p``.

    Returns disjoint open intervals (lo, hi), sorted ascending, each
    containing exactly one root, with p(lo) != 0 != p(hi).
    """
    p = normalize(p)
    assert degree(p) >= 1
    chain = sturm_chain(p)
    bound = root_bound(p)
    out: list[tuple[Fraction, Fraction]] = []

    def rec(lo: Fraction, hi: Fraction, n: int) -> None:
        if n == 0:
            return
        if n == 1:
            out.append((lo, hi))
            return
        for mid in _split_points(lo, hi):
            if peval(p, mid).sign() != 0:
                break
        n_left = count_roots(chain, lo, mid)
        rec(lo, mid, n_left)
        rec(mid, hi, n - n_left)

    total = count_roots(chain, -bound, bound)
    rec(-bound, bound, total)
    return out


def refine_interval(p: list, lo: Fraction, hi: Fraction,
                    target_width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink a sign-change interval of ``p`` below ``target_width`` by
    bisection.  If a bisection point is hit exactly, returns (m, m)."""
    sl = peval(p, lo).sign()
    assert sl != 0 and peval(p, hi).sign() == -sl, "not a sign-change interval"
    while hi - lo >= target_width:
        mid = (lo + hi) / 2
        sm = peval(p, mid).sign()
        if sm == 0:
            return mid, mid
        if sm == sl:
            lo = mid
        else:
            hi = mid
    return lo, hi


def simplest_in_interval(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in the closed interval
    [lo, hi] (continued-fraction walk)."""
    assert lo <= hi
    lo, hi = Fraction(lo), Fraction(hi)
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_in_interval(-hi, -lo)
    # now 0 < lo <= hi
    fl = lo.numerator // lo.denominator
    if fl + 1 <= hi:
        return Fraction(fl + 1) if lo > fl else Fraction(fl)
    if lo == fl:
        return Fraction(fl)
    sub = simplest_in_interval(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / sub
