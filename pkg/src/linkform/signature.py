"""Signature invariants of linking forms.

The complexified Hodge numbers of a form determine a step function on
the unit circle: the signature function.  Its jump data is normalized so
that it matches the signature behaviour of a representing matrix family
on the circle ("matrix-jump" convention):

  - the jump at xi is        delta(xi) = -sum of eps over odd-n summands,
  - the local correction is  loc(xi)   = -sum of eps over even-n summands,

both over the complexified decomposition, and the function walks
counterclockwise from 1 with first-arc value delta(1), gaining
2*delta(xi) across each breakpoint; the value at a breakpoint is the arc
average plus loc(xi).

The Witt class keeps only the odd-n sign sums of the original
(non-complexified) decomposition; it vanishes exactly for metabolic
forms, and sublagrangian reduction computes the quotient form that
witnesses this.
"""

from __future__ import annotations

from . import _linalg
from .errors import PreconditionError
from .field import CirclePoint, RootOfUnity, arg_compare, same_point
from .forms import (
    EForm,
    PresentedForm,
    QuotientClass,
    StructuredForm,
)
from .laurent import LaurentPoly, divides, exact_div, lcm

JUMP_CONVENTION = "matrix-jump"

_ONE_PT = RootOfUnity(0, 1)


def _complex_hodge(s: StructuredForm):
    """(jumps, locs): point -> delta sigma and point -> sigma_loc over
    the complexified decomposition.  Zero totals are kept out."""
    if not isinstance(s, StructuredForm):
        raise TypeError("expected a structured form")
    jumps: dict[CirclePoint, int] = {}
    locs: dict[CirclePoint, int] = {}
    for p in s.complexify().e_parts():
        table = jumps if p.n % 2 else locs
        table[p.xi] = table.get(p.xi, 0) - p.eps
    jumps = {pt: v for pt, v in jumps.items() if v}
    locs = {pt: v for pt, v in locs.items() if v}
    return jumps, locs


def signature_jump(s: StructuredForm, xi: CirclePoint) -> int:
    """delta sigma at xi: half the difference of the one-sided limits of
    the signature function."""
    jumps, _ = _complex_hodge(s)
    return jumps.get(xi, 0)


def sigma_loc(s: StructuredForm, xi: CirclePoint) -> int:
    """The local correction at xi: value minus arc average."""
    _, locs = _complex_hodge(s)
    return locs.get(xi, 0)


class SignatureFunction:
    """The signature step function, stored as breakpoints with point
    values and the arc values between them.

    ``points`` are the breakpoints counterclockwise starting at 1 (1 is
    a breakpoint only when it carries content or the total jump does not
    close up); ``arc_values[i]`` is the value on the open arc after
    ``points[i]``, and ``base`` is the value just after 1 (the whole
    circle when there are no breakpoints).
    """

    __slots__ = ("field", "points", "point_values", "arc_values", "base")

    def __init__(self, field, points, point_values, arc_values, base):
        self.field = field
        self.points = tuple(points)
        self.point_values = tuple(int(v) for v in point_values)
        self.arc_values = tuple(int(v) for v in arc_values)
        self.base = int(base)

    def breakpoints(self) -> tuple[CirclePoint, ...]:
        return self.points

    def _index(self, xi: CirclePoint):
        for i, p in enumerate(self.points):
            if same_point(p, xi):
                return i
        return None

    def value(self, xi: CirclePoint) -> int:
        i = self._index(xi)
        if i is not None:
            return self.point_values[i]
        if same_point(xi, _ONE_PT):
            # 1 without content: the function is continuous through it
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
            # for i = 0 this wraps to the final arc, also when points[0]
            # is the seam at 1
            return self.arc_values[i - 1] if self.points else self.base
        return self.value(xi)

    def __eq__(self, other):
        if not isinstance(other, SignatureFunction):
            return NotImplemented
        return (self.field == other.field and self.points == other.points
                and self.point_values == other.point_values
                and self.arc_values == other.arc_values
                and self.base == other.base)

    def __repr__(self):
        segs = [f"({self.base}) after 1"]
        for p, pv, a in zip(self.points, self.point_values, self.arc_values):
            segs.append(f"[{pv}] at {p!r}, ({a}) after")
        return "SignatureFunction<" + "; ".join(segs) + ">"


def signature_function(s: StructuredForm) -> SignatureFunction:
    """Walk the circle counterclockwise from 1 and accumulate jumps."""
    jumps, locs = _complex_hodge(s)
    total = sum(jumps.values())
    j1 = jumps.get(_ONE_PT, 0)
    l1 = locs.get(_ONE_PT, 0)
    support = set(jumps) | set(locs)
    support.discard(_ONE_PT)
    ordered = sorted(support)
    include_one = bool(j1 or l1 or total)
    points, pvals, arcs = [], [], []
    cur = j1
    if include_one:
        points.append(_ONE_PT)
        pvals.append(l1 + 2 * j1)
        arcs.append(cur)
    for p in ordered:
        dj = jumps.get(p, 0)
        dl = locs.get(p, 0)
        points.append(p)
        pvals.append(cur + dj + dl)
        cur += 2 * dj
        arcs.append(cur)
    if not include_one:
        # real forms close up; over C the seam at 1 was added above
        assert cur == j1, "signature walk failed to close"
    return SignatureFunction(s.field, points, pvals, arcs, j1)


def averaged_signature(s: StructuredForm, xi: CirclePoint) -> int:
    """The average of the one-sided limits of the signature function.

    Away from breakpoints this is the signature itself; at a breakpoint
    it drops the local correction; at 1 it equals the total jump.
    """
    jumps, _ = _complex_hodge(s)
    if same_point(xi, _ONE_PT):
        return sum(jumps.values())
    acc = jumps.get(_ONE_PT, 0)
    for p, v in jumps.items():
        if same_point(p, _ONE_PT):
            continue
        if arg_compare(p, xi) < 0:
            acc += 2 * v
    return acc + jumps.get(xi, 0)


# ---------------------------------------------------------------------------
# Witt classes
# ---------------------------------------------------------------------------


class WittClass:
    """The Witt invariant: odd-layer sign sums per circle point, over
    the original (non-complexified) decomposition.  Zero entries are
    dropped, so ``jumps`` is empty exactly for metabolic forms."""

    __slots__ = ("field", "jumps")

    def __init__(self, field: str, jumps):
        if field not in ("R", "C"):
            raise PreconditionError(f"field must be 'R' or 'C', got {field!r}")
        clean: dict[CirclePoint, int] = {}
        for pt, v in dict(jumps).items():
            if not isinstance(pt, CirclePoint) or not pt.is_exact:
                raise PreconditionError(
                    "Witt support must consist of exact circle points")
            if int(v) == 0:
                continue
            if field == "R" and pt._position()[0] != 0:
                raise PreconditionError(
                    "real Witt support lies on the closed upper semicircle")
            if field == "R" and (pt.is_one() or pt.is_minus_one()):
                raise PreconditionError(
                    "real forms carry no odd content at +-1")
            clean[pt] = int(v)
        self.field = field
        self.jumps = clean

    def is_zero(self) -> bool:
        return not self.jumps

    def __eq__(self, other):
        if not isinstance(other, WittClass):
            return NotImplemented
        return self.field == other.field and self.jumps == other.jumps

    def __repr__(self):
        if self.is_zero():
            return f"WittClass({self.field}, 0)"
        items = ", ".join(f"{pt!r}: {v:+d}"
                          for pt, v in sorted(self.jumps.items()))
        return f"WittClass({self.field}, {{{items}}})"


def witt_class(s: StructuredForm) -> WittClass:
    if not isinstance(s, StructuredForm):
        raise TypeError("expected a structured form")
    acc: dict[CirclePoint, int] = {}
    for p in s.e_parts():
        if p.n % 2:
            acc[p.xi] = acc.get(p.xi, 0) + p.eps
    return WittClass(s.field, acc)


def is_witt_equivalent(a: StructuredForm, b: StructuredForm) -> bool:
    if a.field != b.field:
        raise PreconditionError("Witt comparison needs a common field")
    return witt_class(a) == witt_class(b)


def witt_normal_form(w: WittClass) -> StructuredForm:
    """The minimal representative of a Witt class: one-layer E-forms
    with repeated signs."""
    if not isinstance(w, WittClass):
        raise TypeError("expected a Witt class")
    parts = []
    for pt, v in w.jumps.items():
        eps = 1 if v > 0 else -1
        parts.extend(EForm(1, eps, pt, w.field) for _ in range(abs(v)))
    return StructuredForm(w.field, parts)


def is_metabolic(s: StructuredForm) -> bool:
    return witt_class(s).is_zero()


# ---------------------------------------------------------------------------
# Sublagrangian reduction
# ---------------------------------------------------------------------------


def sublagrangian_reduce(s: StructuredForm, L) -> StructuredForm:
    """The reduced form (L-perp / L) for an isotropic family L of
    coordinate vectors, classified into basic summands.

    The sublattice generated by L must be isotropic (all pairings are
    the zero class); the reduction preserves the Witt class and every
    averaged-signature value.
    """
    if not isinstance(s, StructuredForm):
        raise TypeError("expected a structured form")
    g = s.rank
    vecs = []
    for v in L:
        vv = [LaurentPoly._coerce(c) for c in v]
        if len(vv) != g or None in vv:
            raise PreconditionError(
                f"sublattice vectors must have {g} ring coordinates")
        vecs.append(vv)
    if not vecs:
        return s
    for u in vecs:
        for v in vecs:
            if not s.pair_eval(u, v).is_zero():
                raise PreconditionError("the given sublattice is not isotropic")
    return _reduce_presentation(s.field, s.generator_orders(), s.gram(),
                                s.pair_eval, vecs).classify()


def _reduce_presentation(field, orders, gram, pair_eval, vecs) -> PresentedForm:
    """Presentation of (L-perp / L) from pre-validated isotropic vectors
    given in generator coordinates; shared by the structured and the
    matrix-presented entry points."""
    g = len(orders)
    den = LaurentPoly.one()
    for row in gram:
        for cl in row:
            den = lcm(den, cl.den)
    nums = [[cl.num * exact_div(den, cl.den) for cl in row] for row in gram]
    # x lies in L-perp iff den | sum_ij x_i nums[i][j] u_j^# for every u
    conditions = []
    for u in vecs:
        row = []
        for i in range(g):
            acc = LaurentPoly.zero()
            for j in range(g):
                if u[j].is_zero() or nums[i][j].is_zero():
                    continue
                acc = acc + nums[i][j] * u[j].involve()
            row.append(acc)
        conditions.append(row)
    span = _linalg.kernel_mod(conditions, [den] * len(vecs))
    # a basis of the orthogonal sublattice from the column span
    H = [[span[c][i] for c in range(len(span))] for i in range(g)]
    d, ut, _ = _linalg.snf(H)
    assert len(d) == g, "the orthogonal sublattice must have full rank"
    uinv = _linalg.inv_unimodular(ut)
    basis = [[uinv[i][r] * d[r] for r in range(g)] for i in range(g)]
    # relations: the isotropic vectors and the ambient lattice, in
    # basis coordinates
    rels = []
    for idx, o in enumerate(orders):
        lat = [LaurentPoly.zero()] * g
        lat[idx] = o
        rels.append(lat)
    rels.extend(vecs)
    Y = []
    for rel in rels:
        x, delta = _linalg.solve_scaled(basis, rel)
        Y.append([exact_div(c, delta) for c in x])
    Ymat = [[Y[r][i] for r in range(len(Y))] for i in range(g)]
    d2, u2, _ = _linalg.snf(Ymat)
    assert len(d2) == g, "the reduced module must be torsion"
    u2inv = _linalg.inv_unimodular(u2)
    new_gens = []
    for c in range(g):
        w = _linalg.mat_vec(basis, [u2inv[i][c] for i in range(g)])
        new_gens.append(w)
    gram2 = [[pair_eval(new_gens[i], new_gens[j]) for j in range(g)]
             for i in range(g)]
    return PresentedForm(field, d2, gram2)


def check_order_condition(ord_m: LaurentPoly, ord_m1: LaurentPoly,
                          ord_m2: LaurentPoly) -> dict:
    """Order bookkeeping for a reduction M -> M': with M'' the reduced
    complement, ord(M) ord(M)^# must divide ord(M') ord(M''), with
    equality up to units exactly when nothing degenerate was dropped.
    """
    ord_m = LaurentPoly._coerce(ord_m)
    ord_m1 = LaurentPoly._coerce(ord_m1)
    ord_m2 = LaurentPoly._coerce(ord_m2)
    if any(p is None or p.is_zero() for p in (ord_m, ord_m1, ord_m2)):
        raise PreconditionError("orders must be nonzero ring elements")
    lhs = ord_m * ord_m.involve()
    rhs = ord_m1 * ord_m2
    return {
        "divides": divides(lhs, rhs),
        "equality": lhs.monic_associate() == rhs.monic_associate(),
    }
