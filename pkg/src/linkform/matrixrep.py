"""Matrix-represented linking forms.

A square Hermitian matrix A over the Laurent ring (A equal to its
involve-transpose, det A nonzero) presents the torsion module
coker(A) together with the pairing ([x], [y]) -> x^T A^{-1} y^#, and
every invariant of the structured world has a matrix-side counterpart
computed here:

  - sign_at evaluates A on the unit circle and takes exact signatures;
  - signature_step_function samples those signatures between the circle
    roots of det A, giving the raw step function, its normalized form
    (anchored so the first arc equals the jump at 1) and the averaged
    form (one-sided means relative to the mean at 1);
  - local jets at an exact circle root diagonalize A over the truncated
    local ring and read off the E-summands, while the Smith normal form
    carries the off-circle content;
  - classify_matrix assembles the structured form and cross-checks it
    against the step function: the jump at every breakpoint must match
    the odd-layer sign count, and value minus left limit must match
    jump plus local correction.  A failure raises IdentityError, never
    a silently wrong answer.

The local sign conventions: a diagonal jet entry b = b_v u^v + ... at
xi (u = t - xi) carries the pairing class 1/b, so for even v the sign
is that of the real number b_v (-xi^2)^{v/2}, and for odd v the class
is positive exactly when im(conj(xi) (-conj(xi)^2)^((v-1)/2) / b_v) is
negative -- the residue criterion applied to the reciprocal.
"""

from __future__ import annotations

from fractions import Fraction

from . import _linalg
from ._realroots import simplest_in_interval
from .errors import (
    ExactnessError,
    IdentityError,
    PreconditionError,
    RefinementLimitError,
    TruncationError,
)
from .field import (
    POINT_MINUS_ONE,
    POINT_ONE,
    CirclePoint,
    FieldElem,
    IsolatedPoint,
    arg_compare,
    cayley,
    cayley_param,
    hermitian_signature,
    same_point,
)
from .forms import (
    EForm,
    FForm,
    PresentedForm,
    QuotientClass,
    StructuredForm,
    _canonical_chain,
    _interior_layers,
)
from .laurent import LaurentPoly, circle_roots, val_at
from .signature import (
    _complex_hodge,
    _reduce_presentation,
    averaged_signature,
    signature_function,
)

_ZERO = FieldElem(0)
_ONE = FieldElem(1)
_I = FieldElem(0, 1)

# Process-wide floor for the default jet truncation order used by
# local_diagonalize when no explicit order is passed (the CLI's
# --truncation flag).  None leaves the multiplicity-based default alone.
DEFAULT_TRUNCATION: int | None = None


def _matrix(rows) -> list[list[LaurentPoly]]:
    m = _linalg._coerce_matrix(rows)
    if len(m) and len(m[0]) != len(m):
        raise PreconditionError("matrix must be square")
    return m


def check_hermitian(a) -> bool:
    """Whether the square matrix equals its involve-transpose."""
    return _linalg.is_hermitian(_matrix(a))


def _require_hermitian(m) -> None:
    if not _linalg.is_hermitian(m):
        raise PreconditionError("matrix is not Hermitian under the involution")


def _nonzero_det(m) -> LaurentPoly:
    d = _linalg.det(m)
    if d.is_zero():
        raise PreconditionError("matrix determinant vanishes identically")
    return d


# ---------------------------------------------------------------------------
# Smith normal form wrapper
# ---------------------------------------------------------------------------


class PresentedModule:
    """Invariant factors d_1 | ... | d_n of a nonsingular presentation
    matrix, with the unimodular transforms: left A right = diag(factors)."""

    __slots__ = ("factors", "left", "right")

    def __init__(self, factors, left, right):
        self.factors = tuple(factors)
        self.left = left
        self.right = right

    def __repr__(self):
        inner = ", ".join(repr(f) for f in self.factors)
        return f"PresentedModule(({inner}))"


def snf(a) -> PresentedModule:
    """Smith normal form of a square matrix with nonzero determinant."""
    m = _matrix(a)
    det = _nonzero_det(m)
    d, u, v = _linalg.snf(m)
    assert len(d) == len(m), "nonsingular matrix must have full invariant rank"
    prod = LaurentPoly.one()
    for f in d:
        prod = prod * f
    assert prod.monic_associate() == det.monic_associate()
    return PresentedModule(d, u, v)


# ---------------------------------------------------------------------------
# Exact pointwise signatures and the step function
# ---------------------------------------------------------------------------


def sign_at(a, omega: CirclePoint) -> int:
    """Exact signature of A(omega) at an exact circle point (singular
    values allowed; radical directions contribute zero)."""
    m = _matrix(a)
    v = omega.value()
    return hermitian_signature([[p(v) for p in row] for row in m])


_REFINE_STEPS = 64


def _s_bounds(pt: CirclePoint, prec: int) -> tuple[Fraction, Fraction]:
    """Rational bounds on the Cayley parameter of a point other than -1."""
    if isinstance(pt, IsolatedPoint) and pt._resolved is None:
        return pt.s_bounds()
    s = cayley_param(pt)
    if s.is_rational():
        f = s.as_fraction()
        return f, f
    return s.real_bounds(prec)


def _shrink(pt: CirclePoint) -> None:
    if isinstance(pt, IsolatedPoint) and pt._resolved is None:
        pt.refine()


def _inside(a: CirclePoint, pt: CirclePoint, b: CirclePoint) -> bool:
    """Whether pt lies strictly inside the counterclockwise arc (a, b);
    a == b reads as the full punctured circle."""
    if same_point(pt, a) or same_point(pt, b):
        return False
    if arg_compare(a, b) < 0:
        return arg_compare(a, pt) < 0 < arg_compare(b, pt)
    return arg_compare(pt, a) > 0 or arg_compare(pt, b) < 0


def _candidate_s(a: CirclePoint, b: CirclePoint, prec: int):
    """A rational Cayley parameter aimed strictly between a and b."""
    pa = a._position()[0]
    pb = b._position()[0]
    if pa == 1 and pb == 1:
        return Fraction(1)
    if pb == 1 or (pa == 0 and pb == 2):
        # arc ends at -1, or crosses it: anything beyond a on the upper side
        return _s_bounds(a, prec)[1] + 1
    if pa == 1:
        return _s_bounds(b, prec)[0] - 1
    hi_a = _s_bounds(a, prec)[1]
    lo_b = _s_bounds(b, prec)[0]
    if not hi_a < lo_b:
        # same-sector wrap through -1 (anything beyond a works), or two
        # isolated points whose intervals still overlap -- then the exact
        # inside-check below rejects the guess and the loop refines
        return hi_a + 1
    # middle half keeps clear of both endpoint parameters
    quarter = (lo_b - hi_a) / 4
    return simplest_in_interval(hi_a + quarter, lo_b - quarter)


def _arc_sample(a: CirclePoint, b: CirclePoint) -> CirclePoint:
    """An exact circle point strictly inside the counterclockwise arc
    from a to b, found by refining the breakpoints' Cayley intervals."""
    prec = 16
    for _ in range(_REFINE_STEPS):
        cand = _candidate_s(a, b, prec)
        if cand is not None:
            pt = cayley(cand)
            if _inside(a, pt, b):
                return pt
        _shrink(a)
        _shrink(b)
        prec *= 2
    raise RefinementLimitError(
        "could not place an exact sample between two breakpoints")


class MatrixStepFunction:
    """The raw signature step data of a Hermitian matrix on the circle.

    ``points`` are the circle roots of det A counterclockwise from 1;
    ``point_values[i]`` is sign A(points[i]) when the breakpoint is
    exact and None when it is only isolated; ``arc_values[i]`` is the
    signature on the open arc after ``points[i]``; ``base`` is the value
    just after 1; ``arc_samples`` records the exact points at which the
    arcs were evaluated.

    ``normalized_value`` shifts so the first arc carries the jump at 1
    (making the function comparable with a structural signature
    function); ``averaged_value`` takes one-sided means relative to the
    mean at 1.
    """

    __slots__ = ("points", "point_values", "arc_values", "base", "arc_samples")

    def __init__(self, points, point_values, arc_values, base, arc_samples=()):
        self.points = tuple(points)
        self.point_values = tuple(
            None if v is None else int(v) for v in point_values)
        self.arc_values = tuple(int(v) for v in arc_values)
        self.base = int(base)
        self.arc_samples = tuple(arc_samples)

    def breakpoints(self) -> tuple[CirclePoint, ...]:
        return self.points

    def _index(self, xi: CirclePoint):
        for i, p in enumerate(self.points):
            if same_point(p, xi):
                return i
        return None

    def value(self, xi: CirclePoint):
        """sign A(xi): None at a breakpoint that is only isolated."""
        i = self._index(xi)
        if i is not None:
            return self.point_values[i]
        if same_point(xi, POINT_ONE):
            return self.base
        cur = self.base
        for p, a in zip(self.points, self.arc_values):
            if arg_compare(p, xi) < 0:
                cur = a
            else:
                break
        return cur

    def right_limit(self, xi: CirclePoint) -> int:
        i = self._index(xi)
        if i is not None:
            return self.arc_values[i]
        return self.value(xi)

    def left_limit(self, xi: CirclePoint) -> int:
        i = self._index(xi)
        if i is not None:
            return self.arc_values[i - 1] if self.points else self.base
        return self.value(xi)

    def jump(self, xi: CirclePoint) -> int:
        diff = self.right_limit(xi) - self.left_limit(xi)
        if diff % 2:
            raise IdentityError(
                f"odd one-sided signature difference {diff} at {xi!r}")
        return diff // 2

    def jumps(self) -> dict:
        out = {}
        for p in self.points:
            j = self.jump(p)
            if j:
                out[p] = j
        return out

    def _jump_at_one(self) -> int:
        left = self.arc_values[-1] if self.points else self.base
        diff = self.base - left
        if diff % 2:
            raise IdentityError(
                f"odd one-sided signature difference {diff} at 1")
        return diff // 2

    def normalized_value(self, xi: CirclePoint):
        """The step function shifted by jump(1) - lim_{+}(1), anchoring
        the first arc at the jump at 1; None where the raw value is."""
        v = self.value(xi)
        if v is None:
            return None
        return v - self.base + self._jump_at_one()

    def averaged_value(self, xi: CirclePoint) -> int:
        """Mean of the one-sided limits at xi, minus the mean at 1."""
        left_one = self.arc_values[-1] if self.points else self.base
        num = (self.left_limit(xi) + self.right_limit(xi)
               - left_one - self.base)
        assert num % 2 == 0, "one-sided limits of matched parity"
        return num // 2

    def __repr__(self):
        segs = [f"({self.base}) after 1"]
        for p, pv, a in zip(self.points, self.point_values, self.arc_values):
            shown = "?" if pv is None else f"{pv}"
            segs.append(f"[{shown}] at {p!r}, ({a}) after")
        return "MatrixStepFunction<" + "; ".join(segs) + ">"


def signature_step_function(a) -> MatrixStepFunction:
    """Sample sign A(omega) on every arc between circle roots of det A,
    and at every exact breakpoint."""
    m = _matrix(a)
    _require_hermitian(m)
    det = _nonzero_det(m)
    points = circle_roots(det).points()
    if not points:
        return MatrixStepFunction((), (), (), sign_at(m, POINT_ONE))
    one_first = same_point(points[0], POINT_ONE)
    k = len(points)
    samples = []
    for i in range(k):
        p, q = points[i], points[(i + 1) % k]
        if i == k - 1 and not one_first:
            samples.append(POINT_ONE)
        elif i == k - 1 and k == 1:
            samples.append(cayley(1))  # lone breakpoint at 1
        else:
            samples.append(_arc_sample(p, q))
    arc_values = [sign_at(m, s) for s in samples]
    point_values = [sign_at(m, p) if p.is_exact else None for p in points]
    base = arc_values[0] if one_first else arc_values[-1]
    return MatrixStepFunction(points, point_values, arc_values, base, samples)


def jumps_from_matrix(a) -> dict:
    """Half the one-sided signature differences at each breakpoint,
    zero jumps dropped."""
    return signature_step_function(a).jumps()


# ---------------------------------------------------------------------------
# Truncated jets at a circle point
# ---------------------------------------------------------------------------


def _elem(x) -> FieldElem:
    c = FieldElem._coerce(x)
    if c is None:
        raise TypeError(f"cannot use {x!r} as a jet coefficient")
    return c


class Jet:
    """A truncated expansion sum c_m u^m, 0 <= m < prec, in u = t - xi.

    ``prec`` is the number of certified coefficients; products track the
    sharpened precision min(pa + val b, pb + val a), so symmetric
    elimination loses nothing as long as the pivot has minimal valuation.
    """

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs, prec: int):
        prec = int(prec)
        assert prec >= 1, "jets need at least one coefficient"
        cs = [_elem(c) for c in list(coeffs)[:prec]]
        cs.extend([_ZERO] * (prec - len(cs)))
        self.coeffs = tuple(cs)
        self.prec = prec

    @classmethod
    def zero(cls, prec: int) -> "Jet":
        return cls((), prec)

    def val(self) -> int:
        """Order of vanishing; ``prec`` when no coefficient is nonzero
        (meaning only "at least prec")."""
        for m, c in enumerate(self.coeffs):
            if not c.is_zero():
                return m
        return self.prec

    def leading(self) -> tuple[int, FieldElem]:
        v = self.val()
        if v >= self.prec:
            raise TruncationError(
                "valuation not certified below the truncation order")
        return v, self.coeffs[v]

    def __add__(self, other: "Jet") -> "Jet":
        p = min(self.prec, other.prec)
        return Jet([self.coeffs[m] + other.coeffs[m] for m in range(p)], p)

    def __sub__(self, other: "Jet") -> "Jet":
        p = min(self.prec, other.prec)
        return Jet([self.coeffs[m] - other.coeffs[m] for m in range(p)], p)

    def __neg__(self) -> "Jet":
        return Jet([-c for c in self.coeffs], self.prec)

    def scale(self, c) -> "Jet":
        c = _elem(c)
        return Jet([c * x for x in self.coeffs], self.prec)

    def __mul__(self, other: "Jet") -> "Jet":
        p = min(self.prec + other.val(), other.prec + self.val())
        out = [_ZERO] * p
        for i, ci in enumerate(self.coeffs):
            if ci.is_zero():
                continue
            for j, cj in enumerate(other.coeffs):
                if i + j >= p:
                    break
                if not cj.is_zero():
                    out[i + j] = out[i + j] + ci * cj
        return Jet(out, p)

    def inverse(self) -> "Jet":
        assert not self.coeffs[0].is_zero(), "only unit jets invert"
        inv0 = self.coeffs[0].inverse()
        out = [inv0]
        for k in range(1, self.prec):
            acc = _ZERO
            for i in range(1, k + 1):
                if i < len(self.coeffs) and not self.coeffs[i].is_zero():
                    acc = acc + self.coeffs[i] * out[k - i]
            out.append(-inv0 * acc)
        return Jet(out, self.prec)

    def divide(self, other: "Jet") -> "Jet":
        """Quotient by a jet of certified valuation; requires the
        dividend to vanish at least as much."""
        v = other.val()
        if v >= other.prec:
            raise TruncationError(
                "division by a jet with uncertified valuation")
        assert self.val() >= v, "non-integral jet quotient"
        num = Jet(self.coeffs[v:], self.prec - v)
        den = Jet(other.coeffs[v:], other.prec - v)
        return num * den.inverse()

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        p = min(self.prec, other.prec)
        return all((self.coeffs[m] - other.coeffs[m]).is_zero()
                   for m in range(p))

    def __hash__(self):
        raise TypeError("jets are unhashable (precision-dependent equality)")

    def __repr__(self):
        terms = [f"{c!r}*u^{m}" for m, c in enumerate(self.coeffs)
                 if not c.is_zero()]
        body = " + ".join(terms) if terms else "0"
        return f"Jet<{body} mod u^{self.prec}>"


def _jet_t_inverse(xi: FieldElem, prec: int) -> Jet:
    """t^{-1} = conj(xi) - conj(xi)^2 u + conj(xi)^3 u^2 - ... at u = t - xi."""
    xb = xi.conj()
    out, cur = [], xb
    for m in range(prec):
        out.append(cur if m % 2 == 0 else -cur)
        cur = cur * xb
    return Jet(out, prec)


def jet_of_poly(p: LaurentPoly, xi: CirclePoint, prec: int) -> Jet:
    """The jet of a Laurent polynomial at an exact circle point."""
    p = LaurentPoly._coerce(p)
    if p is None:
        raise TypeError("expected a Laurent polynomial")
    v = xi.value()
    if p.is_zero():
        return Jet.zero(prec)
    t_pos = Jet([v, _ONE], prec)
    t_neg = _jet_t_inverse(v, prec)
    acc = Jet.zero(prec)
    cur = Jet([_ONE], prec)
    e = 0
    for exp in sorted(p.coeffs, key=abs):
        step = t_pos if exp > e else t_neg
        while e != exp:
            cur = cur * step
            e += 1 if exp > e else -1
        acc = acc + cur.scale(p.coeffs[exp])
    return acc


def jet_involve(f: Jet, xi: FieldElem) -> Jet:
    """The involution in local coordinates: u^m goes to (t^{-1} - conj xi)^m
    with conjugated coefficients."""
    w = _jet_t_inverse(xi, f.prec) - Jet([xi.conj()], f.prec)
    acc = Jet([f.coeffs[0].conj()], f.prec)
    wp = Jet([_ONE], f.prec)
    for m in range(1, f.prec):
        wp = wp * w
        c = f.coeffs[m].conj()
        if not c.is_zero():
            acc = acc + wp.scale(c)
    return acc


# ---------------------------------------------------------------------------
# Local diagonalization and classification
# ---------------------------------------------------------------------------


def _diagonalize_attempt(m, xi_val: FieldElem, prec: int, mult: int):
    n = len(m)
    jets = [[jet_of_poly(m[i][j], _ExactCarrier(xi_val), prec)
             for j in range(n)] for i in range(n)]
    active = list(range(n))
    out = []
    guard = 0
    while active:
        guard += 1
        assert guard <= 4 * n + 4, "diagonalization failed to make progress"
        best = None
        for i in active:
            for j in active:
                v = jets[i][j].val()
                if v >= jets[i][j].prec:
                    continue
                key = (v, 0 if i == j else 1)
                if best is None or key < best[0]:
                    best = (key, i, j)
        if best is None:
            raise TruncationError(
                "all remaining entries vanish to the truncation order")
        (v, off), i, j = best
        if not off:
            piv = jets[i][i]
            rest = [r for r in active if r != i]
            quot = {r: jets[r][i].divide(piv) for r in rest}
            for r in rest:
                for c in rest:
                    jets[r][c] = jets[r][c] - quot[r] * jets[i][c]
            out.append(piv)
            active = rest
            continue
        # no diagonal entry reaches the minimal valuation: merge e_i + c e_j
        # (c = 1 or i); their leading terms x + x^# and -i(x - x^#) cannot
        # both vanish
        for c in (_ONE, _I):
            cand = (jets[i][i] + jets[j][j]
                    + jets[j][i].scale(c) + jets[i][j].scale(c.conj()))
            if cand.val() == v:
                break
        else:
            raise AssertionError("no merge recovers the minimal valuation")
        row = {x: jets[i][x] + jets[j][x].scale(c)
               for x in active if x != i}
        col = {x: jets[x][i] + jets[x][j].scale(c.conj())
               for x in active if x != i}
        for x, jx in row.items():
            jets[i][x] = jx
        for x, jx in col.items():
            jets[x][i] = jx
        jets[i][i] = cand
    if sum(b.val() for b in out) != mult:
        raise TruncationError(
            "diagonal valuations do not add up to the determinant multiplicity")
    for b in out:
        b.leading()  # certify every valuation strictly below the truncation
    return out


class _ExactCarrier:
    """Minimal stand-in exposing value() for jet construction."""

    __slots__ = ("_v",)

    def __init__(self, v: FieldElem):
        self._v = v

    def value(self) -> FieldElem:
        return self._v


def local_diagonalize(a, xi: CirclePoint, n: int | None = None):
    """Diagonalize A over the truncated local ring at an exact circle
    point; returns jet diagonal entries whose valuations sum to the
    multiplicity of xi in det A.

    With n omitted the truncation defaults to multiplicity + 2 (raised
    to the process-wide ``DEFAULT_TRUNCATION`` floor when that is set)
    and retries once at twice that before giving up.
    """
    m = _matrix(a)
    _require_hermitian(m)
    if not isinstance(xi, CirclePoint) or not xi.is_exact:
        raise ExactnessError("local diagonalization needs an exact circle point")
    det = _nonzero_det(m)
    v = xi.value()
    mult, _ = val_at(det, v)
    if n is not None:
        n = int(n)
        if n < mult + 1:
            raise PreconditionError(
                f"truncation order {n} is below multiplicity {mult} + 1")
        return _diagonalize_attempt(m, v, n, mult)
    first = max(mult + 2, DEFAULT_TRUNCATION or 0)
    try:
        return _diagonalize_attempt(m, v, first, mult)
    except TruncationError:
        return _diagonalize_attempt(m, v, 2 * first, mult)


def classify_local(entries, xi: CirclePoint):
    """E-summands at xi from diagonal jet entries (pairing class 1/b per
    entry); valuation-zero entries carry nothing."""
    v = xi.value()
    out = []
    for b in entries:
        n, lead = b.leading()
        if n == 0:
            continue
        if n % 2 == 0:
            w = lead * (-(v * v)) ** (n // 2)
            assert w.is_real() and w.sign() != 0, \
                "even-layer leading coefficient must be real up to the twist"
            eps = w.sign()
        else:
            vb = v.conj()
            q = vb * (-(vb * vb)) ** ((n - 1) // 2) * lead.conj()
            assert q.real().is_zero() and not q.imag().is_zero(), \
                "odd-layer rotated residue must be purely imaginary"
            eps = 1 if q.imag().sign() < 0 else -1
        out.append(EForm(n, eps, xi, "C"))
    return out


def _lookup(table: dict, pt: CirclePoint) -> int:
    for q, v in table.items():
        if same_point(q, pt):
            return v
    return 0


def _check_jump_identities(result: StructuredForm, step: MatrixStepFunction):
    jumps, locs = _complex_hodge(result)
    for p in step.breakpoints():
        mj = step.jump(p)
        sj = _lookup(jumps, p)
        if mj != sj:
            raise IdentityError(
                f"jump mismatch at {p!r}: step function {mj}, structure {sj}")
    for q, v in jumps.items():
        if v and step._index(q) is None:
            raise IdentityError(f"structural jump at non-breakpoint {q!r}")
    for i, p in enumerate(step.points):
        pv = step.point_values[i]
        if pv is None:
            continue
        expect = _lookup(jumps, p) + _lookup(locs, p)
        if pv - step.left_limit(p) != expect:
            raise IdentityError(
                f"half-jump identity fails at {p!r}: "
                f"{pv - step.left_limit(p)} vs {expect}")


def _classify_with_step(m, field: str):
    _require_hermitian(m)
    if field not in ("R", "C"):
        raise PreconditionError(f"field must be 'R' or 'C', got {field!r}")
    if field == "R":
        for row in m:
            for p in row:
                if any(not c.is_real() for c in p.coeffs.values()):
                    raise PreconditionError(
                        "real classification needs real matrix entries")
    det = _nonzero_det(m)
    roots = circle_roots(det)
    parts = []
    root_values = []
    for pt, mult in roots:
        if not pt.is_exact:
            raise ExactnessError(
                f"circle root {pt!r} of the determinant is not exactly "
                "identified; only jump data is available (jumps_from_matrix)")
        root_values.append(pt.value())
        if field == "R" and pt._position()[0] == 2:
            # mirror of an upper-semicircle point
            assert roots.multiplicity(pt.conj()) == mult
            continue
        local = classify_local(local_diagonalize(m, pt), pt)
        assert sum(p.n for p in local) == mult
        if field == "C":
            parts.extend(local)
        elif not (same_point(pt, POINT_ONE) or same_point(pt, POINT_MINUS_ONE)):
            parts.extend(EForm(p.n, p.eps, pt, "R") for p in local)
        else:
            odd: dict[int, list[int]] = {}
            for p in local:
                if p.n % 2 == 0:
                    parts.append(EForm(p.n, p.eps, pt, "R"))
                else:
                    odd.setdefault(p.n, []).append(p.eps)
            for layer, signs in odd.items():
                plus = signs.count(1)
                if plus * 2 != len(signs):
                    raise IdentityError(
                        "odd local content at +-1 does not pair off; "
                        "no real form is presented")
                parts.extend(FForm(layer, pt, "R") for _ in range(plus))
    stripped = []
    for f in snf(m).factors:
        q = f
        for v in root_values:
            _, q = val_at(q, v)
        q = q.monic_associate()
        if not q.is_unit():
            stripped.append(q)
    for o in _canonical_chain(stripped):
        parts.extend(_interior_layers(o, field))
    result = StructuredForm(field, parts)
    step = signature_step_function(m)
    _check_jump_identities(result, step)
    return result, step


def classify_matrix(a, field: str = "C") -> StructuredForm:
    """The structured form presented by a Hermitian matrix, with the
    step-function identities verified along the way."""
    return _classify_with_step(_matrix(a), field)[0]


def verify_identities(a, field: str = "C") -> dict:
    """Full cross-pipeline report: breakpoints, jump map, and the three
    step-function identities, each checked exactly."""
    m = _matrix(a)
    result, step = _classify_with_step(m, field)
    sf = signature_function(result)
    at = list(step.breakpoints()) + list(step.arc_samples) + [POINT_ONE]
    for p in at:
        if step.averaged_value(p) != averaged_signature(result, p):
            raise IdentityError(f"averaged-signature identity fails at {p!r}")
        nv = step.normalized_value(p)
        if nv is not None and nv != sf.value(p):
            raise IdentityError(f"normalized-value identity fails at {p!r}")
    return {
        "breakpoints": list(step.breakpoints()),
        "jumps": step.jumps(),
        "identities": {
            "jumpisjump": "ok",
            "jumpisjump_half": "ok",
            "sigissig2": "ok",
        },
    }


# ---------------------------------------------------------------------------
# Congruence moves and the presented pairing
# ---------------------------------------------------------------------------


def congruence_transform(a, p) -> list[list[LaurentPoly]]:
    """P A P^{#T} for unimodular P: the same linking form in a new basis."""
    m = _matrix(a)
    q = _matrix(p)
    if len(q) != len(m):
        raise PreconditionError("transform size does not match the matrix")
    if not _linalg.det(q).is_unit():
        raise PreconditionError("transform must be unimodular")
    return _linalg.mat_mul(_linalg.mat_mul(q, m), _linalg.involve_transpose(q))


def stabilize(a, d) -> list[list[LaurentPoly]]:
    """Block sum with a unit-determinant Hermitian block (which presents
    the trivial module, so the form is unchanged)."""
    m = _matrix(a)
    b = _matrix(d)
    if not _linalg.is_hermitian(b):
        raise PreconditionError("stabilization block must be Hermitian")
    if not _linalg.det(b).is_unit():
        raise PreconditionError("stabilization block must have unit determinant")
    n, k = len(m), len(b)
    zero = LaurentPoly.zero()
    out = []
    for i in range(n):
        out.append(list(m[i]) + [zero] * k)
    for i in range(k):
        out.append([zero] * n + list(b[i]))
    return out


def lambda_eval(a, x, y) -> QuotientClass:
    """The presented pairing x^T A^{-1} y^# as a canonical fraction class."""
    m = _matrix(a)
    _nonzero_det(m)
    vx = [LaurentPoly._coerce(c) for c in x]
    vy = [LaurentPoly._coerce(c) for c in y]
    if len(vx) != len(m) or len(vy) != len(m) or None in vx or None in vy:
        raise PreconditionError(
            f"vectors must have {len(m)} ring coordinates")
    z, delta = _linalg.solve_scaled(m, vx)
    num = LaurentPoly.zero()
    for zj, yj in zip(z, vy):
        if not (zj.is_zero() or yj.is_zero()):
            num = num + zj * yj.involve()
    return QuotientClass(num, delta)


def presented_form(a, field: str = "C") -> PresentedForm:
    """The cokernel presentation with its pairing: Smith generators,
    their invariant-factor orders, and the Gram matrix of lambda_eval."""
    m = _matrix(a)
    _require_hermitian(m)
    pm = snf(m)
    uinv = _linalg.inv_unimodular(pm.left)
    n = len(m)
    keep = [i for i in range(n) if not pm.factors[i].is_unit()]
    gens = [[uinv[r][i] for r in range(n)] for i in keep]
    orders = [pm.factors[i] for i in keep]
    gram = [[lambda_eval(m, gi, gj) for gj in gens] for gi in gens]
    return PresentedForm(field, orders, gram)


def sublagrangian_reduce_presented(a, vectors, field: str = "C") -> StructuredForm:
    """Classify (L-perp / L) for an isotropic family of ambient
    coordinate vectors of coker(A)."""
    m = _matrix(a)
    _require_hermitian(m)
    pm = snf(m)
    n = len(m)
    keep = [i for i in range(n) if not pm.factors[i].is_unit()]
    p = presented_form(m, field)
    vecs = []
    for v in vectors:
        vv = [LaurentPoly._coerce(c) for c in v]
        if len(vv) != n or None in vv:
            raise PreconditionError(
                f"sublattice vectors must have {n} ring coordinates")
        # Smith coordinates: x = sum_i (left x)_i g_i
        coords = _linalg.mat_vec(pm.left, vv)
        vecs.append([coords[i] for i in keep])
    for u in vecs:
        for w in vecs:
            if not p.pair_eval(u, w).is_zero():
                raise PreconditionError("the given sublattice is not isotropic")
    if not vecs:
        return p.classify()
    reduced = _reduce_presentation(field, list(p.orders),
                                   [list(row) for row in p.gram],
                                   p.pair_eval, vecs)
    return reduced.classify()
