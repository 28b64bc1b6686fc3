"""Linking forms: basic forms, direct sums, cyclic forms, classification.

A linking form is a Hermitian pairing M x M -> F(t)/Lambda on a finitely
generated torsion module over the Laurent ring (F = R or C).  Every
non-degenerate form decomposes uniquely into basic summands: E-forms
living over unit-circle points (carrying a sign) and F-forms living over
off-circle orbits (plus doubled forms at +-1 over R, odd exponent only).
This module holds the value types for that decomposition, the Hodge-number
invariants, and the classification algorithms for cyclic and presented
input.
"""

from __future__ import annotations

from fractions import Fraction

from . import _linalg
from ._realroots import yun as _yun
from .errors import (
    DegenerateFormError,
    ExactnessError,
    IdentityError,
    PreconditionError,
)
from .field import (
    CirclePoint,
    ExactPoint,
    FieldElem,
    RootOfUnity,
    hermitian_signature,
    same_point,
)
from .laurent import (
    LaurentPoly,
    basic_poly,
    circle_roots,
    divides,
    divmod_span,
    eval_cancel,
    exact_div,
    gcd,
    inverse_mod,
    is_xi_positive,
    lcm,
    poly_from_dict,
    reduce_mod,
    symmetric_representative,
)

_ONE = LaurentPoly.one()
_ZERO = LaurentPoly.zero()
_HALF = LaurentPoly.constant(Fraction(1, 2))
_I = FieldElem(0, 1)

_FIELDS = ("R", "C")


def _check_field(field: str) -> str:
    if field not in _FIELDS:
        raise PreconditionError(f"field must be 'R' or 'C', got {field!r}")
    return field


def _is_real_poly(p: LaurentPoly) -> bool:
    return all(c.is_real() for c in p.coeffs.values())


# ---------------------------------------------------------------------------
# Values of pairings: classes in F(t)/Lambda
# ---------------------------------------------------------------------------


class QuotientClass:
    """An element of F(t)/Lambda in canonical form.

    Stored as num/den with gcd(num, den) = 1, den monic with lowest
    exponent 0, and num reduced mod den (exponents within [0, deg den)).
    Two fractions represent the same class iff their canonical data
    agree, so ``__eq__`` is semantic equality in F(t)/Lambda.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=_ONE):
        num = LaurentPoly._coerce(num)
        den = LaurentPoly._coerce(den)
        if num is None or den is None:
            raise TypeError("numerator and denominator must be ring elements")
        if den.is_zero():
            raise PreconditionError("zero denominator")
        if num.is_zero():
            self.num, self.den = _ZERO, _ONE
            return
        g = gcd(num, den)
        if not g.is_unit():
            num = exact_div(num, g)
            den = exact_div(den, g)
        unit, dmon = den.unit_normalize()
        num = exact_div(num, unit)
        num = reduce_mod(num, dmon)
        self.num = num
        self.den = _ONE if num.is_zero() else dmon

    @classmethod
    def zero(cls) -> "QuotientClass":
        return cls(_ZERO)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        if not isinstance(other, QuotientClass):
            return NotImplemented
        den = lcm(self.den, other.den)
        num = (self.num * exact_div(den, self.den)
               + other.num * exact_div(den, other.den))
        return QuotientClass(num, den)

    def __neg__(self):
        return QuotientClass(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, QuotientClass):
            return NotImplemented
        return self + (-other)

    def scale(self, p) -> "QuotientClass":
        """The class of p * (num/den) for a ring element p."""
        p = LaurentPoly._coerce(p)
        if p is None:
            raise TypeError("scale expects a ring element")
        return QuotientClass(self.num * p, self.den)

    def involve(self) -> "QuotientClass":
        return QuotientClass(self.num.involve(), self.den.involve())

    def __eq__(self, other):
        if not isinstance(other, QuotientClass):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_zero():
            return "QuotientClass(0)"
        return f"QuotientClass(({self.num}) / ({self.den}))"


# ---------------------------------------------------------------------------
# Basic forms
# ---------------------------------------------------------------------------


def canonical_r(xi: CirclePoint) -> LaurentPoly:
    """The canonical linear xi-positive polynomial stored in odd complex
    E-forms: 1 - xi*t above the real axis, -(1 - xi*t) below, and
    -i(t + xi) at +-1.  The isometry class never depends on the choice;
    this one is used for printing and for residue evaluation.
    """
    v = xi.value()
    if xi.is_one() or xi.is_minus_one():
        c = FieldElem(0, -1)
        r = LaurentPoly({1: c, 0: c * v})
    elif xi._position()[0] == 0:
        r = LaurentPoly({0: 1, 1: -v})
    else:
        r = -LaurentPoly({0: 1, 1: -v})
    assert is_xi_positive(r, xi)
    return r


def _require_exact(xi: CirclePoint) -> CirclePoint:
    if not isinstance(xi, CirclePoint):
        raise TypeError("a circle point is required")
    if not xi.is_exact:
        raise ExactnessError(
            "this operation needs an exactly identified circle point")
    return xi


class EForm:
    """Basic form e(n, eps, xi) on Lambda/F_xi^n for a circle point xi."""

    __slots__ = ("n", "eps", "xi", "field")

    def __init__(self, n: int, eps: int, xi: CirclePoint, field: str):
        field = _check_field(field)
        if not isinstance(n, int) or n < 1:
            raise PreconditionError("the exponent n must be a positive integer")
        if eps not in (1, -1):
            raise PreconditionError("eps must be +1 or -1")
        xi = _require_exact(xi)
        if field == "R":
            if xi._position()[0] == 2:
                raise PreconditionError(
                    "real E-forms live on the closed upper semicircle")
            if (xi.is_one() or xi.is_minus_one()) and n % 2:
                raise PreconditionError(
                    "no non-degenerate real form exists at +-1 with odd n")
        self.n = n
        self.eps = eps
        self.xi = xi
        self.field = field

    @property
    def rank(self) -> int:
        return 1

    def basic(self) -> LaurentPoly:
        return basic_poly(self.xi, self.field)

    def order(self) -> LaurentPoly:
        """Monic generator of the annihilator of the underlying module."""
        return (self.basic() ** self.n).monic_associate()

    def _fraction(self) -> tuple[LaurentPoly, LaurentPoly]:
        """(h, f) with lambda(1,1) = h/f exactly symmetric as a fraction."""
        v = self.xi.value()
        n, eps = self.n, self.eps
        if self.field == "R" and not (self.xi.is_one() or self.xi.is_minus_one()):
            return LaurentPoly.constant(eps), self.basic() ** n
        u = LaurentPoly({1: 1, 0: -v})           # t - xi
        w = LaurentPoly({-1: 1, 0: -v.conj()})   # t^-1 - conj(xi)
        if n % 2 == 0:
            return LaurentPoly.constant(eps), (u * w) ** (n // 2)
        r = canonical_r(self.xi)
        return (r * LaurentPoly.constant(eps),
                u ** ((n + 1) // 2) * w ** ((n - 1) // 2))

    def gram(self) -> list[list[QuotientClass]]:
        h, f = self._fraction()
        return [[QuotientClass(h, f)]]

    def complexify(self) -> "list[EForm]":
        if self.field == "C":
            return [self]
        if self.xi.is_one() or self.xi.is_minus_one():
            return [EForm(self.n, self.eps, self.xi, "C")]
        mirror = self.eps if self.n % 2 == 0 else -self.eps
        return [EForm(self.n, self.eps, self.xi, "C"),
                EForm(self.n, mirror, self.xi.conj(), "C")]

    def sort_key(self):
        return (0, self.xi, self.n, -self.eps)

    def __eq__(self, other):
        if not isinstance(other, EForm):
            return NotImplemented
        return (self.field == other.field and self.n == other.n
                and self.eps == other.eps and self.xi == other.xi)

    def __hash__(self):
        return hash((self.field, self.n, self.eps, self.xi))

    def __repr__(self):
        sign = "+1" if self.eps > 0 else "-1"
        return f"E{{{self.n}, {sign}, {self.xi!r}, {self.field}}}"


class FForm:
    """Basic form f(n, xi): off-circle orbits, or +-1 over R with odd n.

    Off the circle only the module structure matters, so the summand is
    stored by its descriptor polynomial (monic, weakly symmetric,
    squarefree, no circle or zero roots); composite descriptors are
    allowed and mean the direct sum over their root orbits.  At +-1 over
    R (odd n only) the form is the doubled hyperbolic-like pairing on
    (Lambda/(t -+ 1)^n)^2.
    """

    __slots__ = ("n", "poly", "xi", "field")

    def __init__(self, n: int, xi, field: str):
        field = _check_field(field)
        if not isinstance(n, int) or n < 1:
            raise PreconditionError("the exponent n must be a positive integer")
        self.n = n
        self.field = field
        if isinstance(xi, CirclePoint):
            if not (xi.is_one() or xi.is_minus_one()):
                raise PreconditionError(
                    "circle points other than +-1 carry E-forms, not F-forms")
            if field != "R" or n % 2 == 0:
                raise PreconditionError(
                    "doubled forms at +-1 exist over R with odd n only")
            self.xi = xi
            self.poly = basic_poly(xi, field).monic_associate()
            return
        v = FieldElem._coerce(xi)
        if v is not None:
            # normalize to the orbit representative inside the disk
            if v.is_zero():
                raise PreconditionError("zero is not an off-circle point")
            radial = v.abs2() - FieldElem(1)
            if radial.is_zero():
                raise PreconditionError(
                    "unit-circle points carry E-forms, not F-forms")
            if radial.sign() > 0:
                v = v.inverse().conj()
            if field == "R" and v.imag().sign() < 0:
                v = v.conj()
            self.xi = None
            self.poly = basic_poly(v, field).monic_associate()
            return
        p = LaurentPoly._coerce(xi)
        if p is None:
            raise TypeError("xi must be a circle point, a field element, "
                            "or a descriptor polynomial")
        self.xi = None
        self.poly = _check_descriptor(p, field)

    @property
    def rank(self) -> int:
        return 2 if self.xi is not None else 1

    def is_circle(self) -> bool:
        return self.xi is not None

    def order(self) -> LaurentPoly:
        return (self.poly ** self.n).monic_associate()

    def gram(self) -> list[list[QuotientClass]]:
        if self.xi is not None:
            v = self.xi.value()
            u = LaurentPoly({1: 1, 0: -v}) ** self.n
            z = QuotientClass(_ONE, u)
            return [[QuotientClass.zero(), z],
                    [z.involve(), QuotientClass.zero()]]
        _, sym = symmetric_representative(self.poly ** self.n)
        return [[QuotientClass(_ONE, sym)]]

    def complexify(self) -> "list":
        if self.field == "C":
            return [self]
        if self.xi is not None:
            return [EForm(self.n, +1, self.xi, "C"),
                    EForm(self.n, -1, self.xi, "C")]
        return [FForm(self.n, self.poly, "C")]

    def sort_key(self):
        if self.xi is not None:
            return (1, self.xi, self.n, 0)
        pk = tuple(sorted((e, c.sort_key()) for e, c in self.poly.coeffs.items()))
        return (2, self.n, pk, 0)

    def __eq__(self, other):
        if not isinstance(other, FForm):
            return NotImplemented
        return (self.field == other.field and self.n == other.n
                and self.xi == other.xi and self.poly == other.poly)

    def __hash__(self):
        return hash((self.field, self.n, self.xi, self.poly))

    def __repr__(self):
        if self.xi is not None:
            return f"F{{{self.n}, {self.xi!r}, {self.field}}}"
        return f"F{{{self.n}, {self.poly}, {self.field}}}"


def _check_descriptor(p: LaurentPoly, field: str) -> LaurentPoly:
    if p.is_zero() or p.is_unit():
        raise PreconditionError("descriptor must be a non-unit polynomial")
    p = p.monic_associate()
    if not p.is_weakly_symmetric()[0]:
        raise PreconditionError("descriptor must have a #-invariant root set")
    if field == "R" and not _is_real_poly(p):
        raise PreconditionError("real descriptors need real coefficients")
    if not gcd(p, p.derivative()).is_unit():
        raise PreconditionError("descriptor must be squarefree")
    if len(circle_roots(p)) != 0:
        raise PreconditionError("descriptor must have no roots on the circle")
    return p


# ---------------------------------------------------------------------------
# Structured forms (canonical direct sums)
# ---------------------------------------------------------------------------


class StructuredForm:
    """A direct sum of basic forms, kept canonically sorted."""

    __slots__ = ("field", "parts")

    def __init__(self, field: str, parts=()):
        field = _check_field(field)
        parts = list(parts)
        for p in parts:
            if not isinstance(p, (EForm, FForm)):
                raise TypeError(f"not a basic form: {p!r}")
            if p.field != field:
                raise PreconditionError("mixed fields in a direct sum")
        parts.sort(key=lambda p: p.sort_key())
        self.field = field
        self.parts = tuple(parts)

    @classmethod
    def empty(cls, field: str) -> "StructuredForm":
        return cls(field)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def direct_sum(self, other: "StructuredForm") -> "StructuredForm":
        if self.field != other.field:
            raise PreconditionError("mixed fields in a direct sum")
        return StructuredForm(self.field, self.parts + other.parts)

    def e_parts(self) -> tuple[EForm, ...]:
        return tuple(p for p in self.parts if isinstance(p, EForm))

    def f_parts(self) -> tuple[FForm, ...]:
        return tuple(p for p in self.parts if isinstance(p, FForm))

    @property
    def rank(self) -> int:
        return sum(p.rank for p in self.parts)

    def order(self) -> LaurentPoly:
        out = _ONE
        for o in self.generator_orders():
            out = out * o
        return out.monic_associate()

    def generator_orders(self) -> list[LaurentPoly]:
        out = []
        for p in self.parts:
            if isinstance(p, FForm) and p.is_circle():
                o = p.order()
                out.extend([o, o])
            else:
                out.append(p.order())
        return out

    def gram(self) -> list[list[QuotientClass]]:
        n = self.rank
        out = [[QuotientClass.zero() for _ in range(n)] for _ in range(n)]
        at = 0
        for p in self.parts:
            block = p.gram()
            r = len(block)
            for i in range(r):
                for j in range(r):
                    out[at + i][at + j] = block[i][j]
            at += r
        return out

    def pair_eval(self, x, y) -> QuotientClass:
        """lambda(x, y) for coordinate vectors over the ring."""
        g = self.gram()
        n = self.rank
        x = [LaurentPoly._coerce(v) for v in x]
        y = [LaurentPoly._coerce(v) for v in y]
        if len(x) != n or len(y) != n or None in x or None in y:
            raise PreconditionError(
                f"coordinates must be {n} ring elements for this form")
        acc = QuotientClass.zero()
        for i in range(n):
            if x[i].is_zero():
                continue
            for j in range(n):
                if y[j].is_zero() or g[i][j].is_zero():
                    continue
                acc = acc + g[i][j].scale(x[i] * y[j].involve())
        return acc

    def complexify(self) -> "StructuredForm":
        out = []
        for p in self.parts:
            out.extend(p.complexify())
        return StructuredForm("C", out)

    def hodge_numbers(self) -> "HodgeNumbers":
        return HodgeNumbers.from_form(self)

    def is_isometric(self, other: "StructuredForm") -> bool:
        if not isinstance(other, StructuredForm):
            raise TypeError("expected a structured form")
        if self.field != other.field:
            raise PreconditionError("isometry only compares same-field forms")
        return self.hodge_numbers() == other.hodge_numbers()

    def as_cyclic(self) -> "CyclicForm":
        """Join into a single cyclic form; orders must be pairwise coprime."""
        pieces = []
        for p in self.parts:
            if isinstance(p, FForm) and p.is_circle():
                raise PreconditionError("doubled forms at +-1 are not cyclic")
            if isinstance(p, EForm):
                h, f = p._fraction()
            else:
                _, f = symmetric_representative(p.poly ** p.n)
                h = _ONE
            pieces.append((h, f))
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                if not gcd(pieces[i][1], pieces[j][1]).is_unit():
                    raise PreconditionError(
                        "summand orders are not pairwise coprime")
        f = _ONE
        for _, fi in pieces:
            f = f * fi
        h = _ZERO
        for hi, fi in pieces:
            h = h + hi * exact_div(f, fi)
        return CyclicForm(h, f, self.field)

    def __eq__(self, other):
        if not isinstance(other, StructuredForm):
            return NotImplemented
        return self.field == other.field and self.parts == other.parts

    def __hash__(self):
        return hash((self.field, self.parts))

    def __repr__(self):
        if not self.parts:
            return f"StructuredForm({self.field}, empty)"
        return " (+) ".join(repr(p) for p in self.parts)


# ---------------------------------------------------------------------------
# Hodge numbers
# ---------------------------------------------------------------------------


def _canonical_chain(polys) -> tuple[LaurentPoly, ...]:
    """Replace a multiset of monic polynomials by the equivalent
    divisibility chain (repeated gcd/lcm exchange), dropping units.
    The chain only depends on the product module, so content sliced
    into different summand shapes still compares equal."""
    chain = [p for p in polys if not p.is_unit()]
    changed = True
    while changed:
        changed = False
        for i in range(len(chain)):
            for j in range(len(chain)):
                if i == j:
                    continue
                a, b = chain[i], chain[j]
                if divides(a, b) or divides(b, a):
                    continue
                chain[i], chain[j] = gcd(a, b), lcm(a, b)
                changed = True
        chain = [p for p in chain if not p.is_unit()]
    chain.sort(key=lambda p: (p.span,
                              tuple(sorted((e, c.sort_key())
                                           for e, c in p.coeffs.items()))))
    return tuple(chain)


class HodgeNumbers:
    """Complete isometry invariants: multiplicities of basic summands.

    ``p`` counts E{n, eps, xi}; ``q_circle`` counts the doubled forms at
    +-1 (real field only); ``q_interior`` holds, for each exponent n,
    the canonical divisibility chain of off-circle descriptors, so
    composite descriptors compare correctly no matter how the content
    was sliced into summands.
    """

    __slots__ = ("field", "p", "q_circle", "q_interior")

    def __init__(self, field, p, q_circle, q_interior):
        self.field = field
        self.p = dict(p)
        self.q_circle = dict(q_circle)
        self.q_interior = dict(q_interior)

    @classmethod
    def from_form(cls, s: StructuredForm) -> "HodgeNumbers":
        p: dict = {}
        qc: dict = {}
        layers: dict = {}
        for part in s.parts:
            if isinstance(part, EForm):
                key = (part.n, part.eps, part.xi)
                p[key] = p.get(key, 0) + 1
            elif part.is_circle():
                key = (part.n, part.xi)
                qc[key] = qc.get(key, 0) + 1
            else:
                layers.setdefault(part.n, []).append(part.poly)
        qi = {n: _canonical_chain(ps) for n, ps in layers.items()}
        qi = {n: chain for n, chain in qi.items() if chain}
        return cls(s.field, p, qc, qi)

    def e_count(self, n: int, eps: int, xi: CirclePoint) -> int:
        for (m, e, pt), c in self.p.items():
            if m == n and e == eps and same_point(pt, xi):
                return c
        return 0

    def support(self) -> list[CirclePoint]:
        """Circle points carrying E-content, sorted counterclockwise."""
        seen: list[CirclePoint] = []
        for (_, _, pt) in self.p:
            if not any(same_point(pt, q) for q in seen):
                seen.append(pt)
        seen.sort()
        return seen

    def __eq__(self, other):
        if not isinstance(other, HodgeNumbers):
            return NotImplemented
        return (self.field == other.field and self.p == other.p
                and self.q_circle == other.q_circle
                and self.q_interior == other.q_interior)

    def __repr__(self):
        return (f"HodgeNumbers({self.field}, P={self.p}, "
                f"Q_circle={self.q_circle}, Q_interior={self.q_interior})")


def hodge_numbers(s: StructuredForm) -> HodgeNumbers:
    return s.hodge_numbers()


def is_isometric(a: StructuredForm, b: StructuredForm) -> bool:
    return a.is_isometric(b)


# ---------------------------------------------------------------------------
# Cyclic forms
# ---------------------------------------------------------------------------


def symmetrize_rep(h: LaurentPoly, f: LaurentPoly) -> LaurentPoly:
    """Replace h by the representative h' = h + f*g/2 of the same class
    mod f, chosen so that h'/f is exactly symmetric (g is the integral
    antisymmetric defect h^#/f^# - h/f).

    Requires f weakly symmetric and the pairing h/f Hermitian, i.e. the
    defect integral; otherwise PreconditionError.
    """
    h = LaurentPoly._coerce(h)
    f = LaurentPoly._coerce(f)
    if f is None or h is None or f.is_zero():
        raise PreconditionError("a nonzero order polynomial is required")
    if not f.is_weakly_symmetric()[0]:
        raise PreconditionError("the order polynomial must be weakly symmetric")
    ff = f * f.involve()
    defect = h.involve() * f - h * f.involve()
    if not divides(ff, defect):
        raise PreconditionError(
            "the pairing h/f is not Hermitian (h^#/f^# - h/f is not integral)")
    g = exact_div(defect, ff)
    assert g.involve() == -g
    return h + _HALF * f * g


class CyclicForm:
    """The cyclic linking form (Lambda/f, (x,y) -> h x y^# / f).

    The stored fraction h/f is exactly symmetric (the constructor
    re-symmetrizes the given representative) and non-degenerate, i.e.
    gcd(h, f) is a unit.
    """

    __slots__ = ("h", "f", "field")

    def __init__(self, h, f, field: str):
        field = _check_field(field)
        h = LaurentPoly._coerce(h)
        f = LaurentPoly._coerce(f)
        if h is None or f is None or f.is_zero():
            raise PreconditionError("a nonzero order polynomial is required")
        if field == "R" and not (_is_real_poly(h) and _is_real_poly(f)):
            raise PreconditionError("real cyclic forms need real coefficients")
        if not gcd(h, f).is_unit():
            raise DegenerateFormError(
                "gcd(h, f) is not a unit: the pairing h/f is degenerate "
                "on Lambda/f")
        h = symmetrize_rep(h, f)
        assert h.involve() * f == h * f.involve()
        self.h = h
        self.f = f
        self.field = field

    def order(self) -> LaurentPoly:
        return self.f.monic_associate()

    def pair_eval(self, x, y) -> QuotientClass:
        x = LaurentPoly._coerce(x)
        y = LaurentPoly._coerce(y)
        if x is None or y is None:
            raise PreconditionError("coordinates must be ring elements")
        return QuotientClass(self.h * x * y.involve(), self.f)

    def classify(self) -> StructuredForm:
        return classify_cyclic(self)

    def __eq__(self, other):
        if not isinstance(other, CyclicForm):
            return NotImplemented
        return (self.field == other.field
                and QuotientClass(self.h, self.f) == QuotientClass(other.h, other.f)
                and self.order() == other.order())

    def __repr__(self):
        return f"CyclicForm(h={self.h}, f={self.f}, field={self.field})"


def _poly_val(p: LaurentPoly, base: LaurentPoly) -> tuple[int, LaurentPoly]:
    """Largest k with base^k | p, together with p / base^k."""
    k = 0
    while True:
        q, r = divmod_span(p, base)
        if not r.is_zero():
            return k, p
        p = q
        k += 1


def _interior_layers(p: LaurentPoly, field: str) -> list[FForm]:
    """Squarefree layer decomposition of an off-circle order polynomial."""
    if p.is_unit():
        return []
    dense, _ = p.to_ordinary()
    out = []
    for factor, mult in _yun(dense):
        lp = LaurentPoly.from_ordinary(factor).monic_associate()
        out.append(FForm(mult, lp, field))
    return out


def _classify_circle_class(num: LaurentPoly, den: LaurentPoly, n: int,
                           xi: CirclePoint, field: str) -> int:
    """The sign eps of the E{n, eps, xi} summand whose pairing class is
    num/den on the order-n component at xi.

    All formulas evaluate a product that vanishes to order >= n at xi,
    so they are insensitive to the choice of representative.  For even n
    the sign is the (real, nonzero) value of num*(F F^#)^(n/2)/den at
    xi; for odd n (complex case and +-1) the class is positive iff
    num*(t-xi)^((n+1)/2)*(t^-1-conj xi)^((n-1)/2)/den is xi-positive,
    read off the purely imaginary rotated residue.
    """
    v = xi.value()
    if field == "R" and not (xi.is_one() or xi.is_minus_one()):
        F = basic_poly(xi, "R")
        val = eval_cancel(num * F ** n, den, v)
        if not val.is_real() or val.is_zero():
            raise IdentityError(
                "expected a nonzero real residue; the pairing is not a "
                "Hermitian class of full order")
        return val.sign()
    u = LaurentPoly({1: 1, 0: -v})
    w = LaurentPoly({-1: 1, 0: -v.conj()})
    if n % 2 == 0:
        val = eval_cancel(num * (u * w) ** (n // 2), den, v)
        if not val.is_real() or val.is_zero():
            raise IdentityError(
                "expected a nonzero real residue; the pairing is not a "
                "Hermitian class of full order")
        return val.sign()
    val = eval_cancel(num * u ** ((n + 1) // 2) * w ** ((n - 1) // 2), den, v)
    scaled = v.conj() * val
    if not scaled.real().is_zero() or scaled.imag().is_zero():
        raise IdentityError(
            "the rotated odd residue must be purely imaginary and nonzero; "
            "the pairing is not a Hermitian class of full order")
    return 1 if scaled.imag().sign() < 0 else -1


def classify_cyclic(c: CyclicForm) -> StructuredForm:
    """Canonical decomposition of a cyclic form into basic summands."""
    if not isinstance(c, CyclicForm):
        raise TypeError("expected a cyclic form")
    f, h, field = c.f, c.h, c.field
    roots = circle_roots(f)
    parts: list = []
    stripped = f
    for xi, n in roots:
        if field == "R" and xi._position()[0] == 2:
            continue
        if not xi.is_exact:
            raise ExactnessError(
                f"circle root {xi!r} of the order polynomial cannot be "
                "identified exactly in the session field")
        if field == "R" and (xi.is_one() or xi.is_minus_one()) and n % 2:
            raise PreconditionError(
                "a real cyclic form cannot have odd order at +-1 "
                "(no non-degenerate form exists there)")
        eps = _classify_circle_class(h, f, n, xi, field)
        parts.append(EForm(n, eps, xi, field))
        base = basic_poly(xi, field)
        k, stripped = _poly_val(stripped, base)
        if k != n:
            raise IdentityError(
                "circle multiplicity mismatch while splitting the order")
    parts.extend(_interior_layers(stripped, field))
    return StructuredForm(field, parts)


def primary_decompose(obj):
    """Group a form into coprime primary pieces, keyed by the monic
    squarefree polynomial of the orbit.

    For a StructuredForm the values are sub-forms; for a CyclicForm the
    (h, f) data is split by the Chinese remainder theorem into coprime
    cyclic pieces with adjusted numerators.
    """
    if isinstance(obj, StructuredForm):
        groups: dict[LaurentPoly, list] = {}
        for p in obj.parts:
            key = (p.basic().monic_associate() if isinstance(p, EForm)
                   else p.poly)
            groups.setdefault(key, []).append(p)
        return {k: StructuredForm(obj.field, ps) for k, ps in groups.items()}
    if not isinstance(obj, CyclicForm):
        raise TypeError("expected a structured or cyclic form")
    f, h, field = obj.f, obj.h, obj.field
    powers: list[LaurentPoly] = []
    stripped = f
    for xi, n in circle_roots(f):
        if field == "R" and xi._position()[0] == 2:
            continue
        if not xi.is_exact:
            raise ExactnessError(
                f"circle root {xi!r} cannot be identified exactly")
        base = basic_poly(xi, field)
        k, stripped = _poly_val(stripped, base)
        assert k == n
        powers.append((base ** n).monic_associate())
    if not stripped.is_unit():
        dense, _ = stripped.to_ordinary()
        for factor, mult in _yun(dense):
            lp = LaurentPoly.from_ordinary(factor).monic_associate()
            powers.append((lp ** mult).monic_associate())
    out: dict[LaurentPoly, CyclicForm] = {}
    for q in powers:
        cof = exact_div(f, q)
        num = reduce_mod(h * cof.involve(), q)
        out[_primary_key(q)] = CyclicForm(num, q, field)
    return out


def _primary_key(q: LaurentPoly) -> LaurentPoly:
    """Monic squarefree key of a primary power."""
    dense, _ = q.to_ordinary()
    layers = _yun(dense)
    assert len(layers) == 1
    return LaurentPoly.from_ordinary(layers[0][0]).monic_associate()


# ---------------------------------------------------------------------------
# Hermitian residue forms
# ---------------------------------------------------------------------------


def hermitian_residue_form(s: StructuredForm, xi: CirclePoint,
                           n: int) -> tuple[int, int]:
    """(dimension, signature) of the residue Hermitian form on the
    order-n part at xi, computed by genuine residue evaluation of the
    stored pairings.  The signature then agrees with the sum of eps over
    the matching E-summands (that redundancy is a deliberate
    cross-check, not how the value is produced).
    """
    xi = _require_exact(xi)
    if not isinstance(n, int) or n < 1:
        raise PreconditionError("n must be a positive integer")
    v = xi.value()
    u = LaurentPoly({1: 1, 0: -v})
    w = LaurentPoly({-1: 1, 0: -v.conj()})
    entries: list[FieldElem] = []
    blocks: list[list[list[FieldElem]]] = []
    for part in s.parts:
        if isinstance(part, EForm):
            if part.n != n or not same_point(part.xi, xi):
                continue
            h, f = part._fraction()
            if s.field == "R" and not (xi.is_one() or xi.is_minus_one()):
                F = basic_poly(xi, "R")
                val = eval_cancel(h * F ** n, f, v)
            elif n % 2 == 0:
                val = eval_cancel(h * (u * w) ** (n // 2), f, v)
            else:
                raw = eval_cancel(
                    h * u ** ((n + 1) // 2) * w ** ((n - 1) // 2), f, v)
                val = _I * v.conj() * raw
            entries.append(val)
        elif part.is_circle() and part.n == n and same_point(part.xi, xi):
            # doubled block at +-1 (odd n): the corrected residue of the
            # 2x2 pairing is Hermitian with zero diagonal, signature 0
            mult = u ** ((n + 1) // 2) * w ** ((n - 1) // 2)
            g = part.gram()
            block = [[FieldElem(0)] * 2 for _ in range(2)]
            for i in range(2):
                for j in range(2):
                    cl = g[i][j]
                    if cl.is_zero():
                        continue
                    block[i][j] = _I * v.conj() * eval_cancel(
                        cl.num * mult, cl.den, v)
            blocks.append(block)
    dim = len(entries) + 2 * len(blocks)
    rows = [[FieldElem(0)] * dim for _ in range(dim)]
    for i, e in enumerate(entries):
        rows[i][i] = e
    at = len(entries)
    for b in blocks:
        for i in range(2):
            for j in range(2):
                rows[at + i][at + j] = b[i][j]
        at += 2
    return dim, hermitian_signature(rows)


# ---------------------------------------------------------------------------
# Presented forms and the general splitting algorithm
# ---------------------------------------------------------------------------


class PresentedForm:
    """A linking form given by generator orders and a Gram matrix.

    The module is the direct sum of Lambda/(orders[i]); gram[i][j] is
    lambda(g_i, g_j) as a class in F(t)/Lambda.  The constructor checks
    shape, Hermitian symmetry, and that denominators divide the orders;
    degeneracy is only detected when classification is requested.
    """

    __slots__ = ("field", "orders", "gram")

    def __init__(self, field: str, orders, gram):
        field = _check_field(field)
        orders = [LaurentPoly._coerce(o) for o in orders]
        if any(o is None or o.is_zero() for o in orders):
            raise PreconditionError("orders must be nonzero ring elements")
        orders = [o.monic_associate() for o in orders]
        n = len(orders)
        if len(gram) != n or any(len(row) != n for row in gram):
            raise PreconditionError("Gram matrix shape must match the orders")
        gram = [[_as_class(entry) for entry in row] for row in gram]
        for i in range(n):
            for j in range(n):
                if gram[j][i] != gram[i][j].involve():
                    raise PreconditionError("the Gram matrix is not Hermitian")
                # annihilation on both slots: orders[i] kills the class
                # directly, orders[j] through the involution
                if not divides(gram[i][j].den, orders[i]) or \
                        not divides(gram[i][j].den, orders[j].involve()):
                    raise PreconditionError(
                        "pairing denominators must divide the generator orders")
        keep = [i for i in range(n) if not orders[i].is_unit()]
        self.field = field
        self.orders = tuple(orders[i] for i in keep)
        self.gram = tuple(tuple(gram[i][j] for j in keep) for i in keep)

    @property
    def rank(self) -> int:
        return len(self.orders)

    def order(self) -> LaurentPoly:
        out = _ONE
        for o in self.orders:
            out = out * o
        return out.monic_associate()

    def pair_eval(self, x, y) -> QuotientClass:
        n = self.rank
        x = [LaurentPoly._coerce(v) for v in x]
        y = [LaurentPoly._coerce(v) for v in y]
        if len(x) != n or len(y) != n or None in x or None in y:
            raise PreconditionError(f"coordinates must be {n} ring elements")
        acc = QuotientClass.zero()
        for i in range(n):
            if x[i].is_zero():
                continue
            for j in range(n):
                if y[j].is_zero() or self.gram[i][j].is_zero():
                    continue
                acc = acc + self.gram[i][j].scale(x[i] * y[j].involve())
        return acc

    # -- degeneracy ----------------------------------------------------------

    def check_nondegenerate(self) -> None:
        """Raise DegenerateFormError unless the adjoint map is bijective."""
        n = self.rank
        if n == 0:
            return
        mod_ann = _ONE
        pair_ann = _ONE
        for o in self.orders:
            mod_ann = lcm(mod_ann, o)
        for row in self.gram:
            for cl in row:
                pair_ann = lcm(pair_ann, cl.den)
        if pair_ann != mod_ann:
            raise DegenerateFormError(
                f"the pairing is annihilated by {pair_ann} but the module "
                f"by {mod_ann}: the adjoint map cannot be bijective")
        den = pair_ann
        nums = [[cl.num * exact_div(den, cl.den) for cl in row]
                for row in self.gram]
        # x is a radical vector iff den | sum_i x_i N_ij for every j
        conditions = [[nums[i][j] for i in range(n)] for j in range(n)]
        for x in _linalg.kernel_mod(conditions, [den] * n):
            if any(not divides(self.orders[i], x[i]) for i in range(n)):
                raise DegenerateFormError(
                    "the pairing has a nonzero radical vector")

    # -- classification ------------------------------------------------------

    def classify(self) -> StructuredForm:
        self.check_nondegenerate()
        roots = circle_roots(self.order())
        parts: list = []
        stripped = list(self.orders)
        for xi, _ in roots:
            if self.field == "R" and xi._position()[0] == 2:
                continue
            if not xi.is_exact:
                raise ExactnessError(
                    f"circle root {xi!r} of the order cannot be identified "
                    "exactly in the session field")
            base = basic_poly(xi, self.field).monic_associate()
            parts.extend(self._classify_local(xi, base))
            stripped = [_poly_val(o, base)[1] for o in stripped]
        # user-supplied orders need not be individually #-closed (e.g.
        # (q, q^#) with a hyperbolic pairing), so re-slice the interior
        # content into its invariant-factor chain before layering
        for o in _canonical_chain(stripped):
            parts.extend(_interior_layers(o, self.field))
        return StructuredForm(self.field, parts)

    def _classify_local(self, xi: CirclePoint, base: LaurentPoly) -> list:
        """Split the base-primary component at the circle point xi into
        basic summands by symmetric pivoting on the Gram classes."""
        field = self.field
        n = self.rank
        # project onto the primary component: generators cof[i]*g_i of
        # order base^{k_i}; the projected Gram entries then have
        # denominators that are powers of base only.
        k, cof = [], []
        for o in self.orders:
            ki, mi = _poly_val(o, base)
            k.append(ki)
            cof.append(mi)
        gens = [i for i in range(n) if k[i] > 0]
        if not gens:
            return []
        gram: dict[tuple[int, int], QuotientClass] = {}
        for a in gens:
            for b in gens:
                cl = self.gram[a][b].scale(cof[a] * cof[b].involve())
                e = _poly_val(cl.den, base)[0]
                assert cl.is_zero() or cl.den == (base ** e).monic_associate()
                gram[(a, b)] = cl
        labels = list(gens)
        at_pm1 = xi.is_one() or xi.is_minus_one()
        out: list = []
        extracted = 0
        while labels:
            K = 0
            for a in labels:
                for b in labels:
                    K = max(K, _poly_val(gram[(a, b)].den, base)[0])
            if K == 0:
                break
            pivot = self._find_pivot(labels, gram, base, K, xi)
            if pivot is None:
                if not (field == "R" and at_pm1 and K % 2 == 1):
                    raise IdentityError(
                        "no splitting pivot at the top layer; the input is "
                        "not a non-degenerate Hermitian form")
                x, y = self._find_offdiag(labels, gram, base, K)
                out.append(FForm(K, xi, field))
                self._orthogonalize_pair(labels, gram, base, K, x, y)
                labels.remove(x)
                labels.remove(y)
                extracted += 2 * K
                continue
            z, zclass = pivot
            eps = _classify_circle_class(zclass.num, zclass.den, K, xi, field)
            out.append(EForm(K, eps, xi, field))
            self._orthogonalize(labels, gram, base, K, z, zclass)
            labels.remove(z)
            extracted += K
        assert extracted == sum(k[a] for a in gens), \
            "primary splitting lost content"
        return out

    def _find_pivot(self, labels, gram, base, K, xi):
        """A generator with diagonal class of exact level K, materializing
        a combination x + c*y first if no plain diagonal works."""
        def level(cl):
            return _poly_val(cl.den, base)[0]

        for a in labels:
            if level(gram[(a, a)]) == K:
                return (a, gram[(a, a)])
        for a in labels:
            for b in labels:
                if a == b or level(gram[(a, b)]) != K:
                    continue
                cands = [_ONE]
                if self.field == "C":
                    cands.append(LaurentPoly.constant(_I))
                elif not (xi.is_one() or xi.is_minus_one()):
                    cands.append(_hensel_i(xi, base, K))
                for c in cands:
                    cl = (gram[(a, a)]
                          + gram[(a, b)].scale(c.involve())
                          + gram[(b, a)].scale(c)
                          + gram[(b, b)].scale(c * c.involve()))
                    if level(cl) == K:
                        return self._materialize(labels, gram, a, b, c, cl)
        return None

    def _materialize(self, labels, gram, a, b, c, cl):
        """Replace generator a by a + c*b in the Gram data and return the
        new diagonal pivot at a."""
        for e in labels:
            if e in (a, b):
                continue
            gram[(e, a)] = gram[(e, a)] + gram[(e, b)].scale(c.involve())
            gram[(a, e)] = gram[(a, e)] + gram[(b, e)].scale(c)
        new_ab = gram[(a, b)] + gram[(b, b)].scale(c)
        gram[(a, b)] = new_ab
        gram[(b, a)] = new_ab.involve()
        gram[(a, a)] = cl
        return (a, cl)

    def _find_offdiag(self, labels, gram, base, K):
        for a in labels:
            for b in labels:
                if a != b and _poly_val(gram[(a, b)].den, base)[0] == K:
                    return (a, b)
        raise IdentityError(
            "odd top layer at +-1 without an off-diagonal partner")

    def _orthogonalize(self, labels, gram, base, K, z, zclass):
        basK = (base ** K).monic_associate()
        inv = inverse_mod(zclass.num, basK)
        for e in labels:
            if e == z:
                continue
            cl_ez = gram[(e, z)]
            num_ez = cl_ez.num * exact_div(basK, cl_ez.den)
            if num_ez.is_zero():
                continue
            c = reduce_mod(num_ez * inv, basK)
            # e' = e - c z pairs integrally with z by construction
            for w in labels:
                if w in (e, z):
                    continue
                gram[(e, w)] = gram[(e, w)] - gram[(z, w)].scale(c)
                gram[(w, e)] = gram[(e, w)].involve()
            gram[(e, e)] = (gram[(e, e)]
                            - gram[(z, e)].scale(c)
                            - gram[(e, z)].scale(c.involve())
                            + gram[(z, z)].scale(c * c.involve()))
            gram[(e, z)] = QuotientClass.zero()
            gram[(z, e)] = QuotientClass.zero()

    def _orthogonalize_pair(self, labels, gram, base, K, x, y):
        basK = (base ** K).monic_associate()

        def lift(cl):
            return reduce_mod(cl.num * exact_div(basK, cl.den), basK)

        bxx, bxy = lift(gram[(x, x)]), lift(gram[(x, y)])
        byx, byy = lift(gram[(y, x)]), lift(gram[(y, y)])
        det = reduce_mod(bxx * byy - bxy * byx, basK)
        det_inv = inverse_mod(det, basK)
        for e in labels:
            if e in (x, y):
                continue
            rx, ry = lift(gram[(e, x)]), lift(gram[(e, y)])
            if rx.is_zero() and ry.is_zero():
                continue
            # e' = e - alpha x - beta y with
            # alpha*bxx + beta*byx = rx, alpha*bxy + beta*byy = ry
            alpha = reduce_mod((rx * byy - ry * byx) * det_inv, basK)
            beta = reduce_mod((ry * bxx - rx * bxy) * det_inv, basK)
            for w in labels:
                if w in (e, x, y):
                    continue
                gram[(e, w)] = (gram[(e, w)] - gram[(x, w)].scale(alpha)
                                - gram[(y, w)].scale(beta))
                gram[(w, e)] = gram[(e, w)].involve()
            gram[(e, e)] = (gram[(e, e)]
                            - gram[(x, e)].scale(alpha)
                            - gram[(y, e)].scale(beta)
                            - gram[(e, x)].scale(alpha.involve())
                            - gram[(e, y)].scale(beta.involve())
                            + gram[(x, x)].scale(alpha * alpha.involve())
                            + gram[(x, y)].scale(alpha * beta.involve())
                            + gram[(y, x)].scale(beta * alpha.involve())
                            + gram[(y, y)].scale(beta * beta.involve()))
            for w in (x, y):
                gram[(e, w)] = QuotientClass.zero()
                gram[(w, e)] = QuotientClass.zero()

    def __repr__(self):
        return (f"PresentedForm({self.field}, orders="
                f"{[str(o) for o in self.orders]})")


def _as_class(entry) -> QuotientClass:
    if isinstance(entry, QuotientClass):
        return entry
    if isinstance(entry, tuple):
        return QuotientClass(*entry)
    return QuotientClass(entry)


def _hensel_i(xi: CirclePoint, base: LaurentPoly, K: int) -> LaurentPoly:
    """A polynomial j with j^2 = -1 and j^# = -j mod base^K, where base
    is the real basic polynomial of a non-real circle point.  The local
    ring is then a C-algebra, which the pivot search needs over R."""
    v = xi.value()
    a, b = v.real(), v.imag()
    assert not b.is_zero()
    modulus = (base ** K).monic_associate()
    j = reduce_mod(LaurentPoly({1: FieldElem(1) / b, 0: -a / b}), modulus)
    while True:
        err = reduce_mod(j * j + _ONE, modulus)
        if err.is_zero():
            break
        j = reduce_mod(j - err * inverse_mod(j + j, modulus), modulus)
    assert reduce_mod(j + j.involve(), modulus).is_zero()
    return j


# ---------------------------------------------------------------------------
# JSON conversion helpers (shared by the CLI and the tests)
# ---------------------------------------------------------------------------


def point_to_json(p: CirclePoint) -> dict:
    if isinstance(p, RootOfUnity):
        return {"root_of_unity": [p.k, p.n]}
    if isinstance(p, ExactPoint):
        return {"xi": [str(p.x), str(p.y)],
                "approx_turn": round(p.approx_turn(), 9)}
    return {"isolated": True, "approx_turn": round(p.approx_turn(), 9)}


def poly_to_json(p: LaurentPoly) -> dict:
    return {"coeffs": {str(e): str(c) for e, c in sorted(p.coeffs.items())}}


def form_to_json(s: StructuredForm) -> dict:
    basic = []
    for part in s.parts:
        if isinstance(part, EForm):
            basic.append({"type": "e", "n": part.n, "eps": part.eps,
                          "xi": point_to_json(part.xi)})
        elif part.is_circle():
            basic.append({"type": "f", "n": part.n,
                          "xi": point_to_json(part.xi)})
        else:
            basic.append({"type": "f", "n": part.n,
                          "poly": poly_to_json(part.poly)})
    return {"field": s.field, "basic": basic}


def _poly_from_obj(obj, d: int = 0) -> LaurentPoly:
    data = obj["coeffs"] if isinstance(obj, dict) and "coeffs" in obj else obj
    return poly_from_dict(data, d)


def point_from_json(data: dict, d: int = 0) -> CirclePoint:
    from .field import cayley
    if "root_of_unity" in data:
        k, n = data["root_of_unity"]
        return RootOfUnity(int(k), int(n))
    if "s" in data:
        return cayley(Fraction(data["s"]))
    if "xi" in data:
        x, y = data["xi"]
        return ExactPoint(FieldElem.from_string(str(x), d),
                          FieldElem.from_string(str(y), d))
    raise PreconditionError(f"unrecognized point object: {data!r}")


def form_from_json(data: dict, d: int = 0):
    """Parse a structured, cyclic, or presented form from JSON data."""
    field = data.get("field")
    if field not in _FIELDS:
        raise PreconditionError("input must carry field 'R' or 'C'")
    if "cyclic" in data:
        c = data["cyclic"]
        return CyclicForm(_poly_from_obj(c["h"], d), _poly_from_obj(c["f"], d),
                          field)
    if "basic" in data:
        parts = []
        for item in data["basic"]:
            n = int(item["n"])
            kind = item.get("type")
            if kind == "e":
                parts.append(EForm(n, int(item["eps"]),
                                   point_from_json(item["xi"], d), field))
            elif kind == "f":
                if "xi" in item:
                    parts.append(FForm(n, point_from_json(item["xi"], d),
                                       field))
                elif "interior" in item:
                    x, y = item["interior"]
                    val = (FieldElem.from_string(str(x), d)
                           + _I * FieldElem.from_string(str(y), d))
                    parts.append(FForm(n, val, field))
                else:
                    parts.append(FForm(n, _poly_from_obj(item["poly"], d),
                                       field))
            else:
                raise PreconditionError(f"unknown summand type in {item!r}")
        return StructuredForm(field, parts)
    if "presented" in data:
        pr = data["presented"]
        orders = [_poly_from_obj(o, d) for o in pr["orders"]]
        gram = [[QuotientClass(_poly_from_obj(cell["num"], d),
                               _poly_from_obj(cell["den"], d))
                 for cell in row] for row in pr["gram"]]
        return PresentedForm(field, orders, gram)
    raise PreconditionError(
        "input must contain 'basic', 'cyclic', or 'presented'")
