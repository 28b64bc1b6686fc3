"""Laurent polynomials over the session field, with the circle involution.

A Laurent polynomial p = sum_e c_e t^e is stored sparsely as a zero-free
``dict[int, FieldElem]``.  The involution # sends p to p^#(t) = sum
conj(c_e) t^-e; on the unit circle p^#(xi) = conj(p(xi)), so symmetric
polynomials (p = p^#) are exactly the ones with real values there.
``p`` is *weakly symmetric* when p = u p^# for a unit u = c t^k.

Division theory uses the span (hi - lo) as the Euclidean size: units are the
monomials, and every nonzero p factors as unit * (monic ordinary polynomial
with nonzero constant term), which is the canonical associate used for gcds
and moduli.

``circle_roots`` finds all unit-circle roots exactly: the Cayley transform
t = (1+is)/(1-is) turns a symmetric p into a real polynomial P(s) (degree
drop at s = oo accounts for the point -1, which is handled separately), Yun
decomposition splits P into squarefree layers carrying the multiplicities,
Sturm isolation brackets the real roots, and an upgrade pass identifies
rational-parameter points and supported roots of unity; everything else is
returned as an :class:`~linkform.field.IsolatedPoint`.
"""

from __future__ import annotations

from fractions import Fraction

from . import _realroots
from .errors import IdentityError, ParseError, PreconditionError
from .field import (
    CirclePoint,
    ExactPoint,
    FieldElem,
    IsolatedPoint,
    RootOfUnity,
    arg_compare,
    cayley,
    rou_cayley_params,
)

_ZERO = FieldElem(0)
_ONE = FieldElem(1)
_I = FieldElem(0, 1)


class LaurentPoly:
    """A Laurent polynomial with exact field coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        out: dict[int, FieldElem] = {}
        if coeffs:
            for e, c in coeffs.items():
                fe = FieldElem._coerce(c)
                if fe is None:
                    raise TypeError(f"coefficient {c!r} is not a field element")
                if not fe.is_zero():
                    out[int(e)] = fe
        self.coeffs = out

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def t(cls, e: int = 1) -> "LaurentPoly":
        return cls({e: 1})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def from_ordinary(cls, dense: list[FieldElem], lo: int = 0) -> "LaurentPoly":
        return cls({lo + k: c for k, c in enumerate(dense)})

    # -- basic structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lo(self) -> int:
        if not self.coeffs:
            raise PreconditionError("the zero polynomial has no degree range")
        return min(self.coeffs)

    @property
    def hi(self) -> int:
        if not self.coeffs:
            raise PreconditionError("the zero polynomial has no degree range")
        return max(self.coeffs)

    @property
    def span(self) -> int:
        return self.hi - self.lo

    def coeff(self, e: int) -> FieldElem:
        return self.coeffs.get(e, _ZERO)

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def is_constant(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def to_ordinary(self) -> tuple[list[FieldElem], int]:
        """Dense ascending coefficients of t^-lo * p, plus lo."""
        lo, hi = self.lo, self.hi
        return [self.coeff(e) for e in range(lo, hi + 1)], lo

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    # -- ring operations ----------------------------------------------------

    @staticmethod
    def _coerce(x) -> "LaurentPoly | None":
        if isinstance(x, LaurentPoly):
            return x
        fe = FieldElem._coerce(x)
        if fe is not None:
            return LaurentPoly({0: fe})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            s = out.get(e, _ZERO) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        res = LaurentPoly()
        res.coeffs = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = LaurentPoly()
        res.coeffs = {e: -c for e, c in self.coeffs.items()}
        return res

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[int, FieldElem] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in o.coeffs.items():
                e = e1 + e2
                prod = c1 * c2
                s = out.get(e)
                s = prod if s is None else s + prod
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        res = LaurentPoly()
        res.coeffs = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_unit():
                raise PreconditionError("negative powers need a unit")
            e, c = next(iter(self.coeffs.items()))
            return LaurentPoly({-e: c.inverse()}) ** (-n)
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, x) -> FieldElem:
        xe = FieldElem._coerce(x)
        if xe is None:
            raise TypeError("evaluation point must be a field element")
        if self.is_zero():
            return _ZERO
        dense, lo = self.to_ordinary()
        if lo < 0 and xe.is_zero():
            raise ZeroDivisionError("evaluation at 0 with negative exponents")
        val = _realroots.peval(dense, xe)
        if lo:
            val = val * xe ** lo
        return val

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(tuple(sorted((e, hash(c)) for e, c in self.coeffs.items())))

    # -- involution ---------------------------------------------------------

    def involve(self) -> "LaurentPoly":
        """p^#: coefficients conjugated, t replaced by t^-1."""
        res = LaurentPoly()
        res.coeffs = {-e: c.conj() for e, c in self.coeffs.items()}
        return res

    def is_symmetric(self) -> bool:
        return self.coeffs == self.involve().coeffs

    def is_weakly_symmetric(self) -> "tuple[bool, LaurentPoly | None]":
        """Is p = u p^# for a unit u = c t^k?  Returns (flag, u)."""
        if self.is_zero():
            return True, LaurentPoly.one()
        k = self.lo + self.hi
        c = self.coeff(self.hi) / self.coeff(self.lo).conj()
        for e in range(self.lo, self.hi + 1):
            if not (self.coeff(e) - c * self.coeff(k - e).conj()).is_zero():
                return False, None
        return True, LaurentPoly({k: c})

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({e - 1: e * c for e, c in self.coeffs.items() if e != 0})

    # -- canonical associate -------------------------------------------------

    def unit_normalize(self) -> "tuple[LaurentPoly, LaurentPoly]":
        """Return (u, q) with p = u q, u a unit and q monic with lo = 0."""
        if self.is_zero():
            raise PreconditionError("cannot normalize the zero polynomial")
        lead = self.coeff(self.hi)
        u = LaurentPoly({self.lo: lead})
        inv = lead.inverse()
        q = LaurentPoly({e - self.lo: c * inv for e, c in self.coeffs.items()})
        return u, q

    def monic_associate(self) -> "LaurentPoly":
        return self.unit_normalize()[1]

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                term = f"({c})"
            elif e == 1:
                term = f"({c})*t"
            else:
                term = f"({c})*t^{e}"
            parts.append(term)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


# ---------------------------------------------------------------------------
# Euclidean utilities
# ---------------------------------------------------------------------------


def divmod_span(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """a = q b + r with r = 0 or span(r) < span(b)."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return LaurentPoly.zero(), LaurentPoly.zero()
    da, la = a.to_ordinary()
    db, lb = b.to_ordinary()
    q, r = _realroots.pdivmod(da, db)
    return (LaurentPoly.from_ordinary(q, la - lb),
            LaurentPoly.from_ordinary(r, la))


def exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    q, r = divmod_span(a, b)
    if not r.is_zero():
        raise PreconditionError(f"{a} is not divisible by {b}")
    return q


def divides(b: LaurentPoly, a: LaurentPoly) -> bool:
    if a.is_zero():
        return True
    if b.is_zero():
        return False
    return divmod_span(a, b)[1].is_zero()


def gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Canonical gcd (monic, lo = 0, nonzero constant term)."""
    if a.is_zero() and b.is_zero():
        return LaurentPoly.zero()
    if a.is_zero():
        return b.monic_associate()
    if b.is_zero():
        return a.monic_associate()
    da, _ = a.to_ordinary()
    db, _ = b.to_ordinary()
    g = _realroots.pgcd(da, db)
    return LaurentPoly.from_ordinary(g).monic_associate()


def lcm(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.is_zero() or b.is_zero():
        return LaurentPoly.zero()
    g = gcd(a, b)
    return exact_div(a * b, g).monic_associate()


def _xgcd_dense(a: list[FieldElem], b: list[FieldElem]):
    """Extended Euclid on dense ordinary polynomials: g, u, v with ua+vb=g."""
    r0, r1 = _realroots.normalize(a), _realroots.normalize(b)
    s0, s1 = [_ONE], []
    t0, t1 = [], [_ONE]
    while r1:
        q, r = _realroots.pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _realroots.psub(s0, _realroots.pmul(q, s1))
        t0, t1 = t1, _realroots.psub(t0, _realroots.pmul(q, t1))
    return r0, s0, t0


def inverse_mod(p: LaurentPoly, m: LaurentPoly) -> LaurentPoly:
    """u with u p = 1 mod m; requires gcd(p, m) to be a unit.

    ``m`` is taken up to units (its canonical associate is used)."""
    m = m.monic_associate()
    if m.is_constant():
        raise PreconditionError("modulus must be nonconstant")
    r = divmod_span(p, m)[1]
    if r.is_zero():
        raise PreconditionError("p is zero mod m; not invertible")
    dense, lo = r.to_ordinary()
    mdense, _ = m.to_ordinary()
    g, u, _ = _xgcd_dense(dense, mdense)
    if _realroots.degree(g) != 0:
        raise PreconditionError("element is not invertible modulo m")
    ginv = g[0].inverse()
    inv_ord = LaurentPoly.from_ordinary([c * ginv for c in u])
    # now divide by the unit t^lo modulo m: t^-1 = -R / m(0) where m = m0 + t R
    if lo > 0:
        m0 = m.coeff(0)
        rest = LaurentPoly({e - 1: c for e, c in m.coeffs.items() if e != 0})
        tinv = rest * (-(m0.inverse()))
        for _ in range(lo):
            inv_ord = reduce_mod(inv_ord * tinv, m)
    elif lo < 0:
        for _ in range(-lo):
            inv_ord = reduce_mod(inv_ord * LaurentPoly.t(), m)
    return reduce_mod(inv_ord, m)


def reduce_mod(p: LaurentPoly, m: LaurentPoly) -> LaurentPoly:
    """Canonical representative of p modulo m, with exponents in [0, deg m).

    ``m`` is used through its canonical associate (monic, lo = 0, nonzero
    constant term), so t is invertible mod m and negative exponents reduce.
    """
    m = m.monic_associate()
    if m.is_constant():
        return LaurentPoly.zero()
    if p.is_zero():
        return p
    lo = p.lo
    if lo >= 0:
        dense, plo = p.to_ordinary()
        dense = [_ZERO] * plo + dense
        mdense, _ = m.to_ordinary()
        _, r = _realroots.pdivmod(dense, mdense)
        return LaurentPoly.from_ordinary(r)
    # strip t^lo, reduce, then multiply back by (t^-1 mod m)^-lo
    shifted = reduce_mod(p.shift(-lo), m)
    m0 = m.coeff(0)
    rest = LaurentPoly({e - 1: c for e, c in m.coeffs.items() if e != 0})
    tinv = rest * (-(m0.inverse()))
    out = shifted
    for _ in range(-lo):
        out = reduce_mod(out * tinv, m)
    return out


def val_at(p: LaurentPoly, xi: FieldElem) -> tuple[int, LaurentPoly]:
    """Multiplicity of (t - xi) in p and the exact cofactor (xi != 0)."""
    xe = FieldElem._coerce(xi)
    if xe is None or xe.is_zero():
        raise PreconditionError("valuation point must be a nonzero field element")
    if p.is_zero():
        raise PreconditionError("the zero polynomial has infinite valuation")
    dense, lo = p.to_ordinary()
    mult = 0
    while True:
        # synthetic division of dense by (t - xi)
        n = len(dense)
        if n == 1:
            break
        b = [None] * (n - 1)
        acc = dense[-1]
        for k in range(n - 2, -1, -1):
            b[k] = acc
            acc = dense[k] + xe * acc
        if not acc.is_zero():  # remainder = p(xi)
            break
        mult += 1
        dense = b
    return mult, LaurentPoly.from_ordinary(dense, lo)


def eval_cancel(num: LaurentPoly, den: LaurentPoly, xi: FieldElem) -> FieldElem:
    """Exact value of num/den at xi after cancelling common (t - xi) factors.

    Raises if a genuine pole remains."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return _ZERO
    mn, cn = val_at(num, xi)
    md, cd = val_at(den, xi)
    if mn < md:
        raise PreconditionError(f"pole of order {md - mn} at the evaluation point")
    if mn > md:
        return _ZERO
    return cn(xi) / cd(xi)


def symmetric_representative(p: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Return (w, q) with q = w p symmetric and w a unit, when possible.

    Exists iff p = c t^k p^# with k even and |c| = 1; otherwise raises."""
    flag, u = p.is_weakly_symmetric()
    if not flag:
        raise PreconditionError("polynomial is not weakly symmetric")
    if p.is_zero():
        return LaurentPoly.one(), p
    k = u.lo
    c = u.coeff(k)
    if k % 2 or not (c * c.conj() - _ONE).is_zero():
        raise PreconditionError("no symmetric associate exists "
                                "(unit is not of the form c t^{2j} with |c| = 1)")
    mu = _ONE + c.conj()
    if mu.is_zero():  # c = -1: mu/conj(mu) must be -1, so take i
        mu = _I
    w = LaurentPoly({-k // 2: mu})
    q = w * p
    assert q.is_symmetric()
    return w, q


# ---------------------------------------------------------------------------
# circle geometry of polynomials
# ---------------------------------------------------------------------------


def basic_poly(xi, field: str) -> LaurentPoly:
    """The basic (weakly irreducible symmetric) polynomial attached to xi.

    ``xi`` is a :class:`CirclePoint` for circle points or a field element
    with 0 < |xi| < 1 for interior points.  ``field`` is "R" or "C"; real
    basics see the pair {xi, conj xi} (and {xi, 1/xi} off the circle) as one
    point.
    """
    if field not in ("R", "C"):
        raise PreconditionError(f"field must be 'R' or 'C', not {field!r}")
    if isinstance(xi, CirclePoint):
        v = xi.value()  # ExactnessError for isolated points
        if field == "C":
            return LaurentPoly({1: 1, 0: -v})
        if xi.is_one() or xi.is_minus_one():
            return LaurentPoly({1: 1, 0: -v})
        re2 = v + v.conj()
        if not re2.is_real():
            raise IdentityError("circle point with non-real 2*Re")
        return LaurentPoly({1: 1, 0: -re2, -1: 1})
    v = FieldElem._coerce(xi)
    if v is None:
        raise TypeError("xi must be a circle point or a field element")
    a2 = v.abs2()
    if v.is_zero() or (a2 - _ONE).sign() >= 0:
        raise PreconditionError("interior point must satisfy 0 < |xi| < 1")
    if field == "C":
        return LaurentPoly({0: _ONE + a2, 1: -v.conj(), -1: -v})
    if v.is_real():
        return LaurentPoly({1: 1, -1: 1, 0: -(v + v.inverse())})
    beta = v + v.inverse()
    re2 = beta + beta.conj()
    n2 = beta.abs2()
    return LaurentPoly({2: 1, -2: 1,
                        1: -re2, -1: -re2,
                        0: FieldElem(2) + n2})


def is_xi_positive(r: LaurentPoly, xi: CirclePoint) -> bool:
    """Whether r is xi-positive: (t^-1 - conj(xi)) r is symmetric and changes
    sign from + to - when crossing xi counterclockwise; equivalently
    Im(conj(xi) r(xi)) < 0."""
    v = xi.value()
    probe = (LaurentPoly({-1: 1}) - v.conj()) * r
    if not probe.is_symmetric():
        raise PreconditionError("(t^-1 - conj(xi)) r must be symmetric")
    r0 = r(v)
    if r0.is_zero():
        raise PreconditionError("r must not vanish at xi")
    c = v.conj() * r0
    assert c.real().is_zero(), "residue criterion: Re(conj(xi) r(xi)) must vanish"
    return c.imag().sign() < 0


class CircleRootSet:
    """Unit-circle roots of a Laurent polynomial, with multiplicities,
    sorted by circle position."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = tuple(entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def points(self):
        return [p for p, _ in self.entries]

    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity(self, point: CirclePoint) -> int:
        for p, m in self.entries:
            if arg_compare(p, point) == 0:
                return m
        return 0

    def __repr__(self):
        inner = ", ".join(f"{p!r}: {m}" for p, m in self.entries)
        return f"CircleRootSet({inner})"


def cayley_transform(p: LaurentPoly) -> list[FieldElem]:
    """P(s) = (1+s^2)^N p((1+is)/(1-is)) as a dense real polynomial, where
    N = max(hi, -lo).  Requires symmetric p; real roots of P correspond to
    circle roots of p other than -1, with multiplicity."""
    assert p.is_symmetric(), "Cayley transform route needs a symmetric input"
    if p.is_zero():
        return []
    n_pow = max(p.hi, -p.lo, 0)
    # powers of (1 + i s) and (1 - i s)
    plus: list[list[FieldElem]] = [[_ONE]]
    minus: list[list[FieldElem]] = [[_ONE]]
    for _ in range(2 * n_pow):
        plus.append(_realroots.pmul(plus[-1], [_ONE, _I]))
        minus.append(_realroots.pmul(minus[-1], [_ONE, -_I]))
    acc: list[FieldElem] = []
    for e, c in p.coeffs.items():
        term = _realroots.pmul(plus[n_pow + e], minus[n_pow - e])
        acc = _realroots.psub(acc, [-(c * x) for x in term])
    out = []
    for x in acc:
        assert x.imag().is_zero(), "symmetric input must give a real transform"
        out.append(x.real())
    return _realroots.normalize(out)


def _try_upgrade(factor: list[FieldElem], lo: Fraction, hi: Fraction,
                 height: int) -> CirclePoint:
    """Identify the single root of ``factor`` in (lo, hi) exactly if it is a
    small rational or a supported root of unity; otherwise isolate it."""
    # Two distinct rationals of denominator <= height differ by at least
    # 1/height^2, so below that width the interval holds at most one small
    # rational and simplest_in_interval is guaranteed to surface it.
    width = Fraction(1, 2 * height * height)
    lo2, hi2 = _realroots.refine_interval(factor, lo, hi, width)
    if lo2 == hi2:  # bisection landed exactly on a rational root
        return cayley(lo2)
    cand = _realroots.simplest_in_interval(lo2, hi2)
    if max(abs(cand.numerator), cand.denominator) <= height and \
            _realroots.peval(factor, cand).sign() == 0:
        return cayley(cand)
    for s, k, n in rou_cayley_params():
        try:
            inside = (s - lo2).sign() > 0 and (s - hi2).sign() < 0
            if inside and _realroots.peval(factor, s).is_zero():
                return RootOfUnity(k, n)
        except PreconditionError:
            continue  # incompatible field extension: cannot be this root
    return IsolatedPoint(factor, lo2, hi2)


def circle_roots(p: LaurentPoly, upgrade_height: int = 64) -> CircleRootSet:
    """All roots of p on the unit circle, with multiplicities, exactly.

    Rational-Cayley-parameter roots of height <= upgrade_height and the
    supported roots of unity come back exact; other roots come back as
    isolated points.  Works for arbitrary nonzero p (not necessarily
    symmetric) via p p^#, whose circle multiplicities are doubled.
    """
    if p.is_zero():
        raise PreconditionError("the zero polynomial vanishes everywhere")
    if p.is_unit():
        return CircleRootSet(())
    if p.is_symmetric():
        q, halver = p, 1
    else:
        q, halver = p * p.involve(), 2
    entries: list[tuple[CirclePoint, int]] = []
    m_minus1, _ = val_at(q, FieldElem(-1))
    if m_minus1:
        if m_minus1 % halver:
            raise IdentityError("odd doubled multiplicity at -1")
        entries.append((ExactPoint(-1, 0), m_minus1 // halver))
    pd = cayley_transform(q)
    if _realroots.degree(pd) >= 1:
        for factor, mult in _realroots.yun(pd):
            intervals = _realroots.isolate_roots(factor)
            # Layers without real roots never touch the circle, so the
            # doubled-multiplicity invariant only binds when roots exist.
            if intervals and mult % halver:
                raise IdentityError("odd doubled circle multiplicity")
            for lo, hi in intervals:
                point = _try_upgrade(factor, lo, hi, upgrade_height)
                entries.append((point, mult // halver))
    entries.sort(key=lambda pm: _SortWrapper(pm[0]))
    return CircleRootSet(entries)


class _SortWrapper:
    """Adapter so list.sort uses exact position comparison."""

    __slots__ = ("p",)

    def __init__(self, p: CirclePoint):
        self.p = p

    def __lt__(self, other: "_SortWrapper") -> bool:
        return arg_compare(self.p, other.p) < 0


# -- parsing -----------------------------------------------------------------


def poly_from_dict(data: dict, d: int = 0) -> LaurentPoly:
    """Build a polynomial from a JSON-style {exponent: coefficient-string}
    mapping (both stringly or numeric)."""
    out = {}
    if not isinstance(data, dict):
        raise ParseError("polynomial coefficients must be a mapping")
    for e, c in data.items():
        try:
            exp = int(e)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad exponent {e!r}") from exc
        if isinstance(c, str):
            out[exp] = FieldElem.from_string(c, d)
        elif isinstance(c, (int, Fraction)):
            out[exp] = FieldElem(c)
        else:
            raise ParseError(f"bad coefficient {c!r}")
    return LaurentPoly(out)
