"""Exact linear algebra over the Laurent polynomial ring.

Matrices are plain ``list[list[LaurentPoly]]``.  Everything here is exact:
determinants via fraction-free (Bareiss) elimination, Smith normal form
with recorded row/column transforms, kernels, and Cramer-style solving.
The ring is a principal ideal domain (units are the monomials ``c t^k``),
with ``span`` as Euclidean size, which is what the Smith reduction uses.
"""

from __future__ import annotations

from .errors import PreconditionError
from .laurent import LaurentPoly, divmod_span, exact_div

Matrix = "list[list[LaurentPoly]]"

_ZERO = LaurentPoly.zero()
_ONE = LaurentPoly.one()


def _coerce_matrix(rows) -> list[list[LaurentPoly]]:
    out = []
    width = None
    for row in rows:
        coerced = []
        for x in row:
            p = LaurentPoly._coerce(x)
            if p is None:
                raise TypeError(f"cannot use {x!r} as a matrix entry")
            coerced.append(p)
        if width is None:
            width = len(coerced)
        elif width != len(coerced):
            raise PreconditionError("ragged matrix")
        out.append(coerced)
    return out


def identity(n: int) -> list[list[LaurentPoly]]:
    return [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list[list[LaurentPoly]]:
    return [[_ZERO] * n for _ in range(m)]


def mat_mul(a, b) -> list[list[LaurentPoly]]:
    if a and b and len(a[0]) != len(b):
        raise PreconditionError("inner dimensions do not match")
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = _ZERO
            for k, x in enumerate(row):
                if not x.is_zero() and not b[k][j].is_zero():
                    acc = acc + x * b[k][j]
            new.append(acc)
        out.append(new)
    return out


def mat_vec(a, v) -> list[LaurentPoly]:
    return [col[0] for col in mat_mul(a, [[x] for x in v])]


def involve_transpose(a) -> list[list[LaurentPoly]]:
    """Conjugate transpose: (A^#)_{ij} = (A_{ji})^#."""
    m, n = len(a), (len(a[0]) if a else 0)
    return [[a[i][j].involve() for i in range(m)] for j in range(n)]


def is_hermitian(a) -> bool:
    n = len(a)
    if any(len(row) != n for row in a):
        return False
    return all(a[i][j] == a[j][i].involve() for i in range(n) for j in range(i, n))


def det(a) -> LaurentPoly:
    """Determinant by fraction-free elimination.

    Bareiss' algorithm keeps every intermediate entry a genuine ring
    element (each division is exact), so no fractions ever appear.
    """
    a = _coerce_matrix(a)
    n = len(a)
    if any(len(row) != n for row in a):
        raise PreconditionError("determinant needs a square matrix")
    if n == 0:
        return _ONE
    m = [row[:] for row in a]
    sign = 1
    prev = _ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return _ZERO
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = exact_div(num, prev)
            m[i][k] = _ZERO
        prev = pivot
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, dst, src, q):
    """row[dst] += q * row[src]."""
    if q.is_zero():
        return
    m[dst] = [x + q * y for x, y in zip(m[dst], m[src])]


def _add_col(m, dst, src, q):
    if q.is_zero():
        return
    for row in m:
        row[dst] = row[dst] + q * row[src]


def _scale_row(m, i, u):
    m[i] = [u * x for x in m[i]]


def _min_span_entry(a, k, rows, cols):
    best = None
    for i in range(k, rows):
        for j in range(k, cols):
            if a[i][j].is_zero():
                continue
            if best is None or a[i][j].span < a[best[0]][best[1]].span:
                best = (i, j)
    return best


def snf(a):
    """Smith normal form with transforms.

    Returns ``(d, u, v)`` where ``u`` (square, unimodular) and ``v``
    (square, unimodular) satisfy ``u a v = diag(d)`` padded with zeros,
    and ``d`` is the list of nonzero invariant factors, each monic with
    lowest exponent 0, each dividing the next.
    """
    a = [row[:] for row in _coerce_matrix(a)]
    rows = len(a)
    cols = len(a[0]) if a else 0
    u = identity(rows)
    v = identity(cols)
    k = 0
    while True:
        pos = _min_span_entry(a, k, rows, cols)
        if pos is None:
            break
        _swap_rows(a, k, pos[0]); _swap_rows(u, k, pos[0])
        _swap_cols(a, k, pos[1]); _swap_cols(v, k, pos[1])
        while True:
            # clear column k below the pivot
            dirty = False
            for i in range(k + 1, rows):
                if a[i][k].is_zero():
                    continue
                q, r = divmod_span(a[i][k], a[k][k])
                _add_row(a, i, k, -q); _add_row(u, i, k, -q)
                if not r.is_zero():
                    _swap_rows(a, k, i); _swap_rows(u, k, i)
                    dirty = True
            if dirty:
                continue
            for j in range(k + 1, cols):
                if a[k][j].is_zero():
                    continue
                q, r = divmod_span(a[k][j], a[k][k])
                _add_col(a, j, k, -q); _add_col(v, j, k, -q)
                if not r.is_zero():
                    _swap_cols(a, k, j); _swap_cols(v, k, j)
                    dirty = True
            if not dirty:
                break
        # make the pivot divide everything that remains
        offender = None
        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                if not divmod_span(a[i][j], a[k][k])[1].is_zero():
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            _add_row(a, k, offender, _ONE); _add_row(u, k, offender, _ONE)
            continue
        k += 1
        if k >= rows or k >= cols:
            break
    d = []
    for i in range(k):
        unit, q = a[i][i].unit_normalize()
        inv = exact_div(_ONE, unit)
        _scale_row(a, i, inv); _scale_row(u, i, inv)
        d.append(q)
    assert all(divmod_span(d[i + 1], d[i])[1].is_zero() for i in range(len(d) - 1))
    return d, u, v


def kernel(a) -> list[list[LaurentPoly]]:
    """A spanning set of column vectors x with a x = 0.

    The vectors are the columns of the Smith column transform past the
    rank, so they are part of a basis of the free column space; in
    particular they are linearly independent.
    """
    a = _coerce_matrix(a)
    cols = len(a[0]) if a else 0
    if not a or cols == 0:
        return [[_ONE if i == j else _ZERO for i in range(cols)] for j in range(cols)]
    d, _, v = snf(a)
    rank = len(d)
    return [[v[i][j] for i in range(cols)] for j in range(rank, cols)]


def kernel_mod(a, mods) -> list[list[LaurentPoly]]:
    """Spanning set of x with (a x)_i divisible by mods[i] for every row i.

    Zero moduli mean the corresponding row must vanish exactly.
    """
    a = _coerce_matrix(a)
    rows = len(a)
    cols = len(a[0]) if a else 0
    if len(mods) != rows:
        raise PreconditionError("one modulus per row is required")
    aug = [row[:] for row in a]
    extra = []
    for i, m in enumerate(mods):
        m = LaurentPoly._coerce(m)
        if m is None:
            raise TypeError("modulus must be a polynomial")
        if not m.is_zero():
            col = [_ZERO] * rows
            col[i] = m
            extra.append(col)
    for i, row in enumerate(aug):
        for col in extra:
            row.append(col[i])
    sols = kernel(aug)
    out = []
    for s in sols:
        head = s[:cols]
        if any(not x.is_zero() for x in head):
            out.append(head)
    return out


def solve_scaled(a, b):
    """Solve a scaled linear system by Cramer's rule.

    Returns ``(x, delta)`` with ``a x = delta b`` where ``delta = det a``
    (required nonzero) and ``x`` is a column vector over the ring.
    """
    a = _coerce_matrix(a)
    n = len(a)
    if len(b) != n:
        raise PreconditionError("dimension mismatch")
    delta = det(a)
    if delta.is_zero():
        raise PreconditionError("singular system")
    x = []
    for i in range(n):
        m = [row[:] for row in a]
        for r in range(n):
            m[r][i] = b[r]
        x.append(det(m))
    return x, delta


def inv_unimodular(a) -> list[list[LaurentPoly]]:
    """Inverse of a matrix whose determinant is a unit."""
    a = _coerce_matrix(a)
    n = len(a)
    delta = det(a)
    if delta.is_zero() or not delta.is_unit():
        raise PreconditionError("matrix is not invertible over the ring")
    inv_delta = exact_div(_ONE, delta)
    out = zeros(n, n)
    basis = identity(n)
    for j in range(n):
        col, _ = solve_scaled(a, [basis[i][j] for i in range(n)])
        for i in range(n):
            out[i][j] = col[i] * inv_delta
    return out
