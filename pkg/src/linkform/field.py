"""Exact coefficient fields Q(i) / Q(i, sqrt(d)) and exact unit-circle points.

Scalars (:class:`FieldElem`) are stored as four rational coordinates
(a + b*sqrt(d)) + (c + e*sqrt(d))*i over a fixed squarefree radicand d >= 2
(d = 0 marks purely Gaussian-rational values, which mix freely with any d).
All arithmetic, sign tests and comparisons are exact; floats appear only in
the convenience conversions.

Circle points come in three flavours sharing one interface:

* :class:`ExactPoint` -- coordinates (x, y) in the field, x^2 + y^2 = 1;
* :class:`RootOfUnity` -- e^(2*pi*i*k/n) for the small n whose coordinates
  stay inside a single quadratic extension (n in {1, 2, 3, 4, 6, 8});
* :class:`IsolatedPoint` -- a root certified only by a squarefree defining
  polynomial in the Cayley parameter s together with a sign-definite
  isolating interval.

Points are ordered by circle position starting at 1 and moving
counterclockwise: the closed upper semicircle (parameterized by
s = y/(1+x) in [0, oo)), then -1, then the open lower semicircle
(s in (-oo, 0)).  ``arg_compare`` decides that order exactly for any mix of
flavours.  Structural equality (``==``/hashing) identifies ExactPoint with
RootOfUnity at the same coordinates but keeps IsolatedPoint separate even
when it happens to denote the same point; use ``same_point`` for the
semantic test.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering

from . import _realroots
from .errors import (
    ExactnessError,
    FieldExtensionError,
    ParseError,
    PreconditionError,
    RefinementLimitError,
)

_REFINE_CAP = 4096

_SQUAREFREE_OK: set[int] = set()


def _check_radicand(d: int) -> int:
    d = int(d)
    if d == 0:
        return 0
    if d < 2:
        raise ValueError(f"radicand must be 0 or a squarefree integer >= 2, got {d}")
    if d not in _SQUAREFREE_OK:
        k = 2
        while k * k <= d:
            if d % (k * k) == 0:
                raise ValueError(f"radicand {d} is not squarefree")
            k += 1
        _SQUAREFREE_OK.add(d)
    return d


def _sqrt_upper(d: int) -> Fraction:
    """A rational upper bound for sqrt(d)."""
    r = math.isqrt(d)
    return Fraction(r if r * r == d else r + 1)


@total_ordering
class FieldElem:
    """An element (a + b*sqrt(d)) + (c + e*sqrt(d))*i with rational a,b,c,e.

    Construction: ``FieldElem(a, c, b=..., e=..., d=...)`` builds a + c*i
    plus the optional sqrt(d) parts.  Values with b = e = 0 normalize to
    d = 0 and are field-agnostic; mixing two different nonzero radicands
    raises :class:`FieldExtensionError`.
    """

    __slots__ = ("a", "b", "c", "e", "d")

    def __init__(self, a=0, c=0, *, b=0, e=0, d=0):
        self.a = Fraction(a)
        self.c = Fraction(c)
        self.b = Fraction(b)
        self.e = Fraction(e)
        if self.b == 0 and self.e == 0:
            self.d = 0
        else:
            self.d = _check_radicand(d)
            if self.d == 0:
                raise ValueError("sqrt coordinate given without a radicand d")

    # -- coercion ---------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "FieldElem | None":
        if isinstance(x, FieldElem):
            return x
        if isinstance(x, (int, Fraction)):
            return FieldElem(x)
        return None

    def _join(self, other: "FieldElem") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise FieldExtensionError(
            f"cannot mix sqrt({self.d}) and sqrt({other.d}) values"
        )

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join(o)
        return FieldElem(self.a + o.a, self.c + o.c,
                         b=self.b + o.b, e=self.e + o.e, d=d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.a, -self.c, b=-self.b, e=-self.e, d=self.d)

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
        d = self._join(o)
        # (A + B i)(A' + B' i) with A = a + b sqrt(d) etc.
        ra, rb, ia, ib = self.a, self.b, self.c, self.e
        sa, sb, ja, jb = o.a, o.b, o.c, o.e

        def qmul(x1, y1, x2, y2):
            return x1 * x2 + y1 * y2 * d, x1 * y2 + x2 * y1

        re_a1, re_b1 = qmul(ra, rb, sa, sb)
        re_a2, re_b2 = qmul(ia, ib, ja, jb)
        im_a1, im_b1 = qmul(ra, rb, ja, jb)
        im_a2, im_b2 = qmul(ia, ib, sa, sb)
        return FieldElem(re_a1 - re_a2, im_a1 + im_a2,
                         b=re_b1 - re_b2, e=im_b1 + im_b2, d=d)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        n2 = self.abs2()  # real and positive
        x, y, d = n2.a, n2.b, n2.d
        denom = x * x - y * y * d  # nonzero: sqrt(d) is irrational
        inv_n2 = FieldElem(x / denom, b=-y / denom, d=d)
        return self.conj() * inv_n2

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldElem(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure --------------------------------------------------------

    def conj(self) -> "FieldElem":
        return FieldElem(self.a, -self.c, b=self.b, e=-self.e, d=self.d)

    def real(self) -> "FieldElem":
        return FieldElem(self.a, b=self.b, d=self.d)

    def imag(self) -> "FieldElem":
        return FieldElem(self.c, b=self.e, d=self.d)

    def abs2(self) -> "FieldElem":
        return self * self.conj()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.e == 0

    def is_real(self) -> bool:
        return self.c == 0 and self.e == 0

    def is_rational(self) -> bool:
        return self.is_real() and self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise PreconditionError(f"{self} is not rational")
        return self.a

    def sign(self) -> int:
        """Exact sign of a real element (-1, 0, +1)."""
        if not self.is_real():
            raise PreconditionError(f"sign of a non-real element {self}")
        a, b, d = self.a, self.b, self.d
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        sa = 1 if a > 0 else -1
        sb = 1 if b > 0 else -1
        if sa == sb:
            return sa
        # opposite signs: compare a^2 with b^2 d (equality impossible)
        diff = a * a - b * b * d
        assert diff != 0, "sqrt(d) cannot be rational for squarefree d >= 2"
        return sa if diff > 0 else sb

    # -- comparisons ------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.a, self.b, self.c, self.e, self.d) == (o.a, o.b, o.c, o.e, o.d)

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.e, self.d))

    def sort_key(self):
        """An arbitrary-but-deterministic total-order key (not the numeric
        order; use comparisons for that)."""
        return (self.d, self.a, self.b, self.c, self.e)

    # -- bounds and conversions -------------------------------------------

    def abs_upper(self) -> Fraction:
        """A rational upper bound for |self|."""
        su = _sqrt_upper(self.d) if self.d else Fraction(0)
        re_u = abs(self.a) + abs(self.b) * su
        im_u = abs(self.c) + abs(self.e) * su
        return re_u + im_u

    def real_bounds(self, prec: int) -> tuple[Fraction, Fraction]:
        """Rational lo <= self <= hi with hi - lo <= 2^-prec (real only)."""
        if not self.is_real():
            raise PreconditionError("real_bounds of a non-real element")
        if self.b == 0:
            return self.a, self.a
        k = max(prec, 0)
        while True:
            scale = 1 << k
            r = math.isqrt(self.d * scale * scale)
            slo, shi = Fraction(r, scale), Fraction(r + 1, scale)
            if self.b > 0:
                lo, hi = self.a + self.b * slo, self.a + self.b * shi
            else:
                lo, hi = self.a + self.b * shi, self.a + self.b * slo
            if hi - lo <= Fraction(1, 1 << prec):
                return lo, hi
            k += 1

    def to_complex(self) -> complex:
        s = math.sqrt(self.d) if self.d else 0.0
        return complex(float(self.a) + float(self.b) * s,
                       float(self.c) + float(self.e) * s)

    # -- text form ---------------------------------------------------------

    def __str__(self) -> str:
        terms = []
        for coeff, tag in ((self.a, ""), (self.b, "*r"),
                           (self.c, "*i"), (self.e, "*r*i")):
            if coeff != 0:
                terms.append((coeff, tag))
        if not terms:
            return "0"
        parts = []
        for idx, (coeff, tag) in enumerate(terms):
            body = f"{abs(coeff)}{tag}"
            if idx == 0:
                parts.append(body if coeff > 0 else "-" + body)
            else:
                parts.append(("+" if coeff > 0 else "-") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        if self.d:
            return f"FieldElem({self}, d={self.d})"
        return f"FieldElem({self})"

    @classmethod
    def from_string(cls, text: str, d: int = 0) -> "FieldElem":
        """Parse the textual form, e.g. ``"3/5+4/5*i"`` or ``"1/2*r-2*r*i"``.

        ``d`` is the session radicand; it is required as soon as a ``*r``
        term appears.
        """
        s = text.strip().replace(" ", "")
        if not s:
            raise ParseError("empty field element")
        # split into signed terms
        terms: list[str] = []
        cur = ""
        for ch in s:
            if ch in "+-" and cur and cur[-1] not in "+-/*":
                terms.append(cur)
                cur = ch
            else:
                cur += ch
        terms.append(cur)
        a = b = c = e = Fraction(0)
        for term in terms:
            tags = term.split("*")
            body = tags[0]
            flags = tags[1:]
            if body in ("", "+", "-"):
                # bare i / r (e.g. "i", "-r*i") -- treat missing rational as 1
                coeff = Fraction(body + "1")
            else:
                try:
                    coeff = Fraction(body)
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad rational {body!r} in {text!r}") from exc
            has_i = flags.count("i")
            has_r = flags.count("r")
            if has_i > 1 or has_r > 1 or len(flags) != has_i + has_r:
                raise ParseError(f"bad term {term!r} in {text!r}")
            if has_r and not d:
                raise ParseError(
                    f"term {term!r} needs the session field sqrt(d); none given"
                )
            if has_i and has_r:
                e += coeff
            elif has_i:
                c += coeff
            elif has_r:
                b += coeff
            else:
                a += coeff
        try:
            return cls(a, c, b=b, e=e, d=d if (b or e) else 0)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


ZERO = FieldElem(0)
ONE = FieldElem(1)
I_UNIT = FieldElem(0, 1)


def hermitian_signature(rows: list[list[FieldElem]]) -> int:
    """Exact signature of a Hermitian matrix over the field.

    Singular matrices are fine: radical directions contribute 0.  Uses LDL*
    with symmetric pivoting; when the remaining diagonal vanishes entirely, a
    nonzero off-diagonal entry spans a hyperbolic plane (signature 0).
    """
    n = len(rows)
    m = [[rows[i][j] for j in range(n)] for i in range(n)]
    for i in range(n):
        assert len(rows[i]) == n, "matrix must be square"
        for j in range(i, n):
            if not (m[i][j].conj() - m[j][i]).is_zero():
                raise PreconditionError("matrix is not Hermitian")
    active = list(range(n))
    sig = 0
    while active:
        pivot = next((k for k in active if not m[k][k].is_zero()), None)
        if pivot is not None:
            p = m[pivot][pivot]
            sig += p.sign()
            rest = [k for k in active if k != pivot]
            pinv = p.inverse()
            for r in rest:
                for c in rest:
                    m[r][c] = m[r][c] - m[r][pivot] * pinv * m[pivot][c]
            active = rest
            continue
        pair = next(((i, j) for i in active for j in active
                     if i != j and not m[i][j].is_zero()), None)
        if pair is None:
            break  # zero block
        i, j = pair
        z = m[i][j]
        zinv = z.inverse()
        zcinv = z.conj().inverse()
        rest = [k for k in active if k not in (i, j)]
        for r in rest:
            for c in rest:
                m[r][c] = (m[r][c]
                           - m[r][i] * zcinv * m[j][c]
                           - m[r][j] * zinv * m[i][c])
        active = rest
    return sig


# ---------------------------------------------------------------------------
# circle points
# ---------------------------------------------------------------------------


class CirclePoint:
    """Common interface of the three circle-point flavours."""

    __slots__ = ()

    # position classes: 0 = closed upper semicircle (incl. 1), 1 = {-1},
    # 2 = open lower semicircle
    def _position(self):
        raise NotImplementedError

    def conj(self) -> "CirclePoint":
        raise NotImplementedError

    def value(self) -> FieldElem:
        """The point as a field element x + i*y (exact flavours only)."""
        raise NotImplementedError

    def approx_turn(self) -> float:
        """Approximate argument as a fraction of a full turn, in [0, 1)."""
        raise NotImplementedError

    def canonical_key(self):
        raise NotImplementedError

    @property
    def is_exact(self) -> bool:
        return not isinstance(self, IsolatedPoint)

    def is_one(self) -> bool:
        return False

    def is_minus_one(self) -> bool:
        return False

    def __lt__(self, other):
        if not isinstance(other, CirclePoint):
            return NotImplemented
        return arg_compare(self, other) < 0

    def __le__(self, other):
        if not isinstance(other, CirclePoint):
            return NotImplemented
        return arg_compare(self, other) <= 0

    def __gt__(self, other):
        if not isinstance(other, CirclePoint):
            return NotImplemented
        return arg_compare(self, other) > 0

    def __ge__(self, other):
        if not isinstance(other, CirclePoint):
            return NotImplemented
        return arg_compare(self, other) >= 0

    def __eq__(self, other):
        if not isinstance(other, CirclePoint):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())


class ExactPoint(CirclePoint):
    """A circle point with exact coordinates x + i*y in the field."""

    __slots__ = ("x", "y", "_conj")

    def __init__(self, x, y):
        x = FieldElem._coerce(x)
        y = FieldElem._coerce(y)
        if x is None or y is None:
            raise TypeError("coordinates must be field elements or rationals")
        if not (x.is_real() and y.is_real()):
            raise PreconditionError("circle point coordinates must be real")
        if not (x * x + y * y - ONE).is_zero():
            raise PreconditionError(f"({x}, {y}) is not on the unit circle")
        x._join(y)
        self.x = x
        self.y = y
        self._conj = None

    def conj(self) -> "ExactPoint":
        if self._conj is None:
            self._conj = ExactPoint(self.x, -self.y)
        return self._conj

    def value(self) -> FieldElem:
        return self.x + I_UNIT * self.y

    def is_one(self) -> bool:
        return self.y.is_zero() and (self.x - ONE).is_zero()

    def is_minus_one(self) -> bool:
        return self.y.is_zero() and (self.x + ONE).is_zero()

    def is_real_point(self) -> bool:
        return self.y.is_zero()

    def _position(self):
        if self.is_minus_one():
            return (1, None)
        s = self.y / (ONE + self.x)
        return (0 if s.sign() >= 0 else 2, s)

    def approx_turn(self) -> float:
        z = self.value().to_complex()
        return (math.atan2(z.imag, z.real) / (2 * math.pi)) % 1.0

    def canonical_key(self):
        return ("xi", self.x.sort_key(), self.y.sort_key())

    def __repr__(self):
        return f"ExactPoint({self.x}, {self.y})"


# s = tan(theta/2) for the supported roots of unity (all but -1)
_ROU_COORDS: dict[tuple[int, int], tuple] = {}


def _rou_table():
    if _ROU_COORDS:
        return _ROU_COORDS
    h = Fraction(1, 2)
    s3 = FieldElem(0, b=h, d=3)          # sqrt(3)/2
    s2 = FieldElem(0, b=h, d=2)          # sqrt(2)/2
    one, zero = FieldElem(1), FieldElem(0)
    half = FieldElem(h)
    table = {
        (0, 1): (one, zero),
        (1, 2): (-one, zero),
        (1, 4): (zero, one),
        (3, 4): (zero, -one),
        (1, 3): (-half, s3),
        (2, 3): (-half, -s3),
        (1, 6): (half, s3),
        (5, 6): (half, -s3),
        (1, 8): (s2, s2),
        (3, 8): (-s2, s2),
        (5, 8): (-s2, -s2),
        (7, 8): (s2, -s2),
    }
    _ROU_COORDS.update(table)
    return _ROU_COORDS


SUPPORTED_ROU_ORDERS = (1, 2, 3, 4, 6, 8)


class RootOfUnity(CirclePoint):
    """The exact point e^(2*pi*i*k/n) for small n.

    Supported reduced orders: n in {1, 2, 3, 4, 6, 8} (those whose
    coordinates live in a single quadratic extension).  Equal to the
    corresponding :class:`ExactPoint` under ``==`` and hashing.
    """

    __slots__ = ("k", "n", "_exact")

    def __init__(self, k: int, n: int):
        if n <= 0:
            raise PreconditionError("root-of-unity order must be positive")
        k %= n
        g = math.gcd(k, n) if k else n
        k, n = k // g, n // g
        if n not in SUPPORTED_ROU_ORDERS:
            raise PreconditionError(
                f"root-of-unity order {n} not supported (need n in "
                f"{SUPPORTED_ROU_ORDERS}); pass exact coordinates instead"
            )
        self.k = k
        self.n = n
        self._exact = None

    def to_exact(self) -> ExactPoint:
        if self._exact is None:
            x, y = _rou_table()[(self.k, self.n)]
            self._exact = ExactPoint(x, y)
        return self._exact

    def conj(self) -> "RootOfUnity":
        return RootOfUnity((self.n - self.k) % self.n, self.n)

    def value(self) -> FieldElem:
        return self.to_exact().value()

    def is_one(self) -> bool:
        return self.n == 1

    def is_minus_one(self) -> bool:
        return (self.k, self.n) == (1, 2)

    def is_real_point(self) -> bool:
        return self.n in (1, 2)

    def _position(self):
        return self.to_exact()._position()

    def approx_turn(self) -> float:
        return self.k / self.n

    def canonical_key(self):
        return self.to_exact().canonical_key()

    def __repr__(self):
        return f"RootOfUnity({self.k}, {self.n})"


class IsolatedPoint(CirclePoint):
    """A circle root known only through a defining polynomial in the Cayley
    parameter and a sign-definite isolating interval.

    ``poly`` is squarefree with real field coefficients; exactly one real
    root lies in (lo, hi), and the interval avoids s = 0 so the position
    class is determined.  The interval may shrink in place during
    comparisons; the defining data (monic polynomial, root index) is frozen
    and provides hashing/structural equality.
    """

    __slots__ = ("poly", "lo", "hi", "index", "_chain", "_conj", "_resolved")

    def __init__(self, poly, lo, hi):
        coeffs = _realroots.normalize([FieldElem._coerce(c) for c in poly])
        if len(coeffs) < 2:
            raise PreconditionError("defining polynomial must be nonconstant")
        for c in coeffs:
            if c is None or not c.is_real():
                raise PreconditionError("defining polynomial must have real coefficients")
        coeffs = _realroots.pmonic(coeffs)
        lo, hi = Fraction(lo), Fraction(hi)
        if not lo < hi:
            raise PreconditionError("isolating interval must be nontrivial")
        if _realroots.degree(_realroots.pgcd(coeffs, _realroots.pderiv(coeffs))) > 0:
            raise PreconditionError("defining polynomial must be squarefree")
        if _realroots.peval(coeffs, lo).sign() == 0 or \
           _realroots.peval(coeffs, hi).sign() == 0:
            raise PreconditionError("isolating interval endpoints must not be roots")
        chain = _realroots.sturm_chain(coeffs)
        if _realroots.count_roots(chain, lo, hi) != 1:
            raise PreconditionError("interval must isolate exactly one root")
        # make the interval sign-definite in s (avoid s = 0)
        if lo < 0 < hi:
            s0 = _realroots.peval(coeffs, Fraction(0)).sign()
            if s0 == 0:
                raise PreconditionError(
                    "the root is s = 0, i.e. the exact point 1; use ExactPoint"
                )
            if s0 == _realroots.peval(coeffs, lo).sign():
                lo = Fraction(0)
            else:
                hi = Fraction(0)
        self.poly = tuple(coeffs)
        self.lo = lo
        self.hi = hi
        self._chain = chain
        self.index = _realroots.count_roots_below(chain, lo)
        self._conj = None
        self._resolved: ExactPoint | None = None

    # -- refinement --------------------------------------------------------

    def refine(self) -> None:
        """Halve the isolating interval (resolving to an exact point if the
        bisection lands on the root)."""
        if self._resolved is not None:
            return
        mid = (self.lo + self.hi) / 2
        sm = _realroots.peval(list(self.poly), mid).sign()
        if sm == 0:
            self._resolved = cayley(mid)
            self.lo = self.hi = mid
            return
        if sm == _realroots.peval(list(self.poly), self.lo).sign():
            self.lo = mid
        else:
            self.hi = mid

    def s_bounds(self) -> tuple[Fraction, Fraction]:
        return self.lo, self.hi

    # -- interface ---------------------------------------------------------

    def conj(self) -> "CirclePoint":
        if self._resolved is not None:
            return self._resolved.conj()
        if self._conj is None:
            flipped = [(-1) ** k * c for k, c in enumerate(self.poly)]
            self._conj = IsolatedPoint(flipped, -self.hi, -self.lo)
        return self._conj

    def value(self) -> FieldElem:
        if self._resolved is not None:
            return self._resolved.value()
        raise ExactnessError(
            f"point is only isolated (s in ({self.lo}, {self.hi})); "
            "an exactly identified circle point is required here"
        )

    def _position(self):
        if self._resolved is not None:
            return self._resolved._position()
        return (0 if self.lo >= 0 else 2, self)

    def approx_turn(self) -> float:
        if self._resolved is not None:
            return self._resolved.approx_turn()
        s = float((self.lo + self.hi) / 2)
        return (2 * math.atan(s) / (2 * math.pi)) % 1.0

    def canonical_key(self):
        return ("isolated", tuple(c.sort_key() for c in self.poly), self.index)

    def __repr__(self):
        return (f"IsolatedPoint(deg {len(self.poly) - 1} poly, "
                f"s in ({self.lo}, {self.hi}))")


def cayley(s) -> ExactPoint:
    """The circle point with Cayley parameter s: t = (1+is)/(1-is), i.e.
    x = (1-s^2)/(1+s^2), y = 2s/(1+s^2).  Rational s gives Gaussian-rational
    coordinates; -1 is not in the image."""
    s = Fraction(s)
    den = 1 + s * s
    return ExactPoint(Fraction(1 - s * s, 1) / den, 2 * s / den)


def cayley_param(p: CirclePoint) -> FieldElem:
    """The Cayley parameter s = y/(1+x) of an exact point other than -1."""
    if isinstance(p, RootOfUnity):
        p = p.to_exact()
    if isinstance(p, IsolatedPoint):
        if p._resolved is None:
            raise ExactnessError("cayley_param needs an exact point")
        p = p._resolved
    if p.is_minus_one():
        raise PreconditionError("the point -1 has no Cayley parameter")
    return p.y / (ONE + p.x)


# Cayley parameters of the supported roots of unity (excluding 1 and -1),
# used by the root-upgrade pass.
def rou_cayley_params() -> list[tuple[FieldElem, int, int]]:
    """[(s, k, n)] for every supported non-real root of unity and +-i."""
    out = []
    for (k, n) in list(_rou_table()):
        if n in (1, 2):
            continue
        p = RootOfUnity(k, n)
        s = cayley_param(p)
        out.append((s, k, n))
    return out


# -- exact ordering ----------------------------------------------------------


def _cmp_exact_s(s1: FieldElem, s2: FieldElem) -> int:
    """Compare two exact Cayley parameters, falling back to rational bounds
    when they live in incompatible quadratic extensions (in which case they
    are never equal)."""
    try:
        return (s1 - s2).sign()
    except FieldExtensionError:
        prec = 8
        for _ in range(_REFINE_CAP):
            lo1, hi1 = s1.real_bounds(prec)
            lo2, hi2 = s2.real_bounds(prec)
            if hi1 < lo2:
                return -1
            if hi2 < lo1:
                return 1
            prec *= 2
        raise RefinementLimitError(
            "could not separate two circle points across field extensions"
        )


def _cmp_exact_isolated(s: FieldElem, iso: IsolatedPoint) -> int:
    """Compare an exact Cayley parameter with an isolated root."""
    if iso._resolved is not None:
        return _cmp_exact_s(s, cayley_param(iso._resolved))
    # Equality: s is the isolated root iff poly(s) = 0 and s lies inside the
    # interval.  Incompatible field extensions can only share rational
    # values, and rational s never raises, so the except-branch means "no".
    try:
        is_root = _realroots.peval(list(iso.poly), s).sign() == 0
    except FieldExtensionError:
        is_root = False
    if is_root and (s - iso.lo).sign() > 0 and (s - iso.hi).sign() < 0:
        return 0
    # Not this root: shrink the interval until it excludes s.  Comparisons
    # against the rational endpoints are always inside one extension.
    for _ in range(_REFINE_CAP):
        if iso._resolved is not None:
            return _cmp_exact_s(s, cayley_param(iso._resolved))
        if (s - iso.lo).sign() <= 0:
            return -1
        if (s - iso.hi).sign() >= 0:
            return 1
        iso.refine()
    raise RefinementLimitError("could not separate an exact point from an isolated one")


def _cmp_isolated(p1: IsolatedPoint, p2: IsolatedPoint) -> int:
    if p1.poly == p2.poly and p1.index == p2.index:
        return 0
    # gcd decision: the points are equal iff some common root of the two
    # defining polynomials lies in both intervals, i.e. in the intersection
    # (whose endpoints are interval endpoints, hence never roots).
    try:
        g = _realroots.pgcd(list(p1.poly), list(p2.poly))
    except FieldExtensionError:
        g = []  # polynomials over incompatible extensions share no factor
    if _realroots.degree(g) >= 1:
        lo = max(p1.lo, p2.lo)
        hi = min(p1.hi, p2.hi)
        if lo < hi:
            assert _realroots.peval(g, lo).sign() != 0
            assert _realroots.peval(g, hi).sign() != 0
            chain = _realroots.sturm_chain(g)
            if _realroots.count_roots(chain, lo, hi) >= 1:
                return 0
    for _ in range(_REFINE_CAP):
        if p1._resolved is not None:
            return -_cmp_exact_isolated(cayley_param(p1._resolved), p2)
        if p2._resolved is not None:
            return _cmp_exact_isolated(cayley_param(p2._resolved), p1)
        if p1.hi <= p2.lo:
            return -1
        if p2.hi <= p1.lo:
            return 1
        p1.refine()
        p2.refine()
    raise RefinementLimitError("could not separate two isolated circle points")


def arg_compare(p: CirclePoint, q: CirclePoint) -> int:
    """Exact circle-position comparison: -1, 0, or +1.

    Order: argument increasing counterclockwise from 1 (inclusive), so the
    closed upper semicircle comes first, then -1, then the lower semicircle.
    """
    c1, s1 = p._position()
    c2, s2 = q._position()
    if c1 != c2:
        return -1 if c1 < c2 else 1
    if c1 == 1:
        return 0
    iso1 = isinstance(s1, IsolatedPoint)
    iso2 = isinstance(s2, IsolatedPoint)
    if not iso1 and not iso2:
        return _cmp_exact_s(s1, s2)
    if not iso1:
        return _cmp_exact_isolated(s1, s2)
    if not iso2:
        return -_cmp_exact_isolated(s2, s1)
    return _cmp_isolated(s1, s2)


def same_point(p: CirclePoint, q: CirclePoint) -> bool:
    """Semantic equality of circle points (structural flavours may differ)."""
    return arg_compare(p, q) == 0


POINT_ONE = ExactPoint(1, 0)
POINT_MINUS_ONE = ExactPoint(-1, 0)
