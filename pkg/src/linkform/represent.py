"""Constructing Hermitian matrix representatives of structured forms.

Over R every non-degenerate structured form is presented by a
block-diagonal Hermitian matrix.  Over C there is exactly one
obstruction: the jumps of a matrix step function sum to zero around the
circle, so the total signature jump (equivalently -sum of eps over odd
layers of the complexified form) must vanish.  ``is_representable``
decides this and ``build_representative`` constructs a witness:

  - even layers and off-circle content become single 1x1 blocks;
  - doubled forms at +-1 over R become hyperbolic 2x2 blocks;
  - odd complex layers are paired (+1 against -1, preferring the same
    point and then the same order) and each pair becomes one block: a
    1x1 symmetric product vanishing at both points when they differ,
    or a 2x2 block scaled from a unit-determinant core when they agree;
  - every paired block is oriented by classifying it and flipping the
    global sign when the +1 landed on the wrong layer, and the
    assembled matrix must classify back isometric to the input
    (IdentityError otherwise, never a silently wrong witness).

The 2x2 cores: with phi(x) = x t^{-1} - conj(x) conj(xi), the matrix
(t - xi) [[phi(a), d t^{-1} + c], [-(conj(c) t^{-1} + conj(d)) conj(xi),
phi(b)]] is Hermitian for any coefficients, and under the constraint
a b = -d conj(c xi) its core determinant is the unit
conj(xi) (2 re(a conj b) - |c|^2 - |d|^2) t^{-1}.  The nested variant
spreads ((t - xi))^k across the off-diagonal so the cokernel picks up
orders n and n' instead of n and n.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import IdentityError, PreconditionError
from .field import CirclePoint, FieldElem, same_point
from .forms import EForm, FForm, StructuredForm
from .laurent import LaurentPoly, basic_poly, symmetric_representative
from .matrixrep import check_hermitian, classify_matrix
from .signature import _complex_hodge

_ONE = FieldElem(1)
_I = FieldElem(0, 1)
_ZERO_POLY = LaurentPoly.zero()


def total_jump(s: StructuredForm) -> int:
    """Sum of all signature jumps of the (complexified) form: the one
    obstruction to matrix representability over C."""
    if not isinstance(s, StructuredForm):
        raise TypeError("expected a structured form")
    jumps, _ = _complex_hodge(s)
    return sum(jumps.values())


class RepresentabilityVerdict:
    """Outcome of a representability decision.

    ``certificate`` explains the verdict: "real-always" (over R nothing
    obstructs), "total-jump-nonzero" (the complex obstruction fired),
    "total-jump-zero" (representable, decision only), or "constructed"
    (a witness matrix is attached).
    """

    __slots__ = ("representable", "total_jump", "certificate", "matrix")

    def __init__(self, representable: bool, total_jump: int,
                 certificate: str, matrix=None):
        self.representable = bool(representable)
        self.total_jump = int(total_jump)
        self.certificate = certificate
        self.matrix = matrix

    def __repr__(self):
        tail = "" if self.matrix is None else f", {len(self.matrix)}x{len(self.matrix)} matrix"
        return (f"RepresentabilityVerdict({self.representable}, "
                f"total_jump={self.total_jump}, {self.certificate}{tail})")


def is_representable(s: StructuredForm, build: bool = False) -> RepresentabilityVerdict:
    """Decide whether a structured form is presented by some Hermitian
    matrix; with ``build`` a witness matrix is constructed and attached."""
    tj = total_jump(s)
    if s.field == "C" and tj != 0:
        return RepresentabilityVerdict(False, tj, "total-jump-nonzero")
    if build:
        return RepresentabilityVerdict(True, tj, "constructed",
                                       build_representative(s))
    tag = "real-always" if s.field == "R" else "total-jump-zero"
    return RepresentabilityVerdict(True, tj, tag)


# ---------------------------------------------------------------------------
# coefficient and polynomial choices for the paired blocks
# ---------------------------------------------------------------------------


def choose_pair_coeffs(xi: CirclePoint, nonreal_b: bool = False):
    """Deterministic core coefficients (a, b, c, d) at an exact circle
    point: a b = -d conj(c xi) with 2 re(a conj b) != |c|^2 + |d|^2.

    The seed a = b = c = 1, d = -xi always fails the inequality (both
    sides are 2 on the circle), so (c, d) moves to (c/2, 2d), which
    preserves the constraint.  With ``nonreal_b`` the choice b = 1 + i
    keeps the lower-right core entry a unit of the local ring at every
    circle point, as the nested block needs.
    """
    if not isinstance(xi, CirclePoint) or not xi.is_exact:
        raise PreconditionError("pair coefficients need an exact circle point")
    v = xi.value()
    a = _ONE
    b = _ONE + _I if nonreal_b else _ONE
    c = _ONE
    d = -(a * b * v) * c.conj().inverse()
    two_re = a * b.conj() + (a * b.conj()).conj()
    if (two_re - (c.abs2() + d.abs2())).is_zero():
        c = c * FieldElem(Fraction(1, 2))
        d = d * FieldElem(2)
    assert (a * b + d * (c * v).conj()).is_zero(), \
        "pair coefficients must satisfy the determinant constraint"
    two_re = a * b.conj() + (a * b.conj()).conj()
    assert not (two_re - (c.abs2() + d.abs2())).is_zero(), \
        "pair coefficients must keep the core determinant nonzero"
    return a, b, c, d


def pair_polynomial(x1: CirclePoint, x2: CirclePoint) -> LaurentPoly:
    """A symmetric polynomial a t - 2b + conj(a) t^{-1} (b real) whose
    circle roots are exactly x1 and x2, derived and then verified by
    evaluation."""
    for xi in (x1, x2):
        if not isinstance(xi, CirclePoint) or not xi.is_exact:
            raise PreconditionError("pair polynomials need exact circle points")
    v1, v2 = x1.value(), x2.value()
    if same_point(x1, x2):
        a, b = v1.conj(), _ONE
    else:
        # p(xi) = 0 on the circle reads re(a xi) = b; this choice makes
        # re(a x1) and re(a x2) both equal to im(conj(x1) x2)
        a = _I * (v1.conj() - v2.conj())
        b = -((v1.conj() * v2).imag())
    p = LaurentPoly({1: a, 0: -(b + b), -1: a.conj()})
    assert p.involve() == p, "pair polynomial must be symmetric"
    assert p(v1).is_zero() and p(v2).is_zero(), \
        "pair polynomial must vanish at both points"
    return p


# ---------------------------------------------------------------------------
# block constructions
# ---------------------------------------------------------------------------


def _t_minus(v: FieldElem) -> LaurentPoly:
    return LaurentPoly({1: 1, 0: -v})


def _even_block(v: FieldElem) -> LaurentPoly:
    """(t - xi)(t^{-1} - conj xi)."""
    p = _t_minus(v)
    return p * p.involve()


def _phi(x: FieldElem, v: FieldElem) -> LaurentPoly:
    """x t^{-1} - conj(x) conj(xi): (t - xi) phi(x) is Hermitian."""
    return LaurentPoly({-1: x, 0: -(x.conj() * v.conj())})


def _core_pair(v: FieldElem, a, b, c, d):
    """The unit-determinant 2x2 core at xi; (t - xi) times it presents
    two order-one summands of opposite sign."""
    xb = v.conj()
    return [[_phi(a, v), LaurentPoly({-1: d, 0: c})],
            [LaurentPoly({-1: -(c.conj() * xb), 0: -(d.conj() * xb)}),
             _phi(b, v)]]


def _core_nested(v: FieldElem, k: int, a, b, c, d):
    """The core with (t - xi)^k spread over the off-diagonal, so the
    cokernel orders differ by 2k; needs b outside the reals to keep the
    lower-right entry out of the maximal ideal everywhere on the circle."""
    xb = v.conj()
    p = _t_minus(v)
    return [[(p * p.involve()) ** k * _phi(a, v),
             p ** k * LaurentPoly({-1: d, 0: c})],
            [p.involve() ** k
             * LaurentPoly({-1: -(c.conj() * xb), 0: -(d.conj() * xb)}),
             _phi(b, v)]]


def _scale_block(core, factor: LaurentPoly):
    return [[factor * e for e in row] for row in core]


def _negate(m):
    return [[-e for e in row] for row in m]


def _oriented(block, plus: EForm, minus: EForm):
    """Fix the global sign of a paired block so the +1 summand lands on
    the intended layer, exactly by classification."""
    want = StructuredForm("C", [plus, minus])
    got = classify_matrix(block, "C")
    if got == want:
        return block
    flipped = _negate(block)
    if classify_matrix(flipped, "C") == want:
        return flipped
    raise IdentityError(
        f"paired block classifies to {got!r} and cannot be oriented to "
        f"{want!r}")


def _paired_block(plus: EForm, minus: EForm):
    """One block presenting E{n,+1,xi} (+) E{n',-1,xi'} (n, n' odd)."""
    if same_point(plus.xi, minus.xi):
        v = plus.xi.value()
        if plus.n == minus.n:
            coeffs = choose_pair_coeffs(plus.xi)
            core = _core_pair(v, *coeffs)
            m = (plus.n - 1) // 2
        else:
            hi, lo = max(plus.n, minus.n), min(plus.n, minus.n)
            coeffs = choose_pair_coeffs(plus.xi, nonreal_b=True)
            core = _core_nested(v, (hi - lo) // 2, *coeffs)
            m = (lo - 1) // 2
        block = _scale_block(core, _t_minus(v) * _even_block(v) ** m)
    else:
        hi, lo = plus, minus
        if hi.n < lo.n:
            hi, lo = lo, hi
        q = (_even_block(hi.xi.value()) ** ((hi.n - lo.n) // 2)
             * pair_polynomial(hi.xi, lo.xi) ** lo.n)
        block = [[q]]
    assert check_hermitian(block), "paired blocks must come out Hermitian"
    return _oriented(block, plus, minus)


def _match_odd_pairs(plus, minus):
    """Greedy deterministic matching of +1 layers against -1 layers:
    same point and same order first, then same point, then anything."""
    plus = sorted(plus, key=lambda p: p.sort_key())
    minus = sorted(minus, key=lambda p: p.sort_key())
    pairs = []
    for p in plus:
        best = None
        for i, q in enumerate(minus):
            same = same_point(q.xi, p.xi)
            rank = (0 if same and q.n == p.n else (1 if same else 2),
                    abs(q.n - p.n), i)
            if best is None or rank < best[0]:
                best = (rank, i)
        pairs.append((p, minus.pop(best[1])))
    return pairs


def _block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = [[_ZERO_POLY] * n for _ in range(n)]
    at = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[at + i][at:at + len(b)] = list(row)
        at += len(b)
    return out


def build_representative(s: StructuredForm):
    """A Hermitian matrix presenting the given structured form; the
    result is classified and checked isometric to the input before it
    is returned."""
    if not isinstance(s, StructuredForm):
        raise TypeError("expected a structured form")
    tj = total_jump(s)
    if s.field == "C" and tj != 0:
        raise PreconditionError(
            f"not representable: the total signature jump is {tj}, not 0")
    blocks = []
    odd_plus: list[EForm] = []
    odd_minus: list[EForm] = []
    for part in s.parts:
        if isinstance(part, FForm):
            if part.is_circle():
                g = _t_minus(part.xi.value()) ** part.n
                blocks.append([[_ZERO_POLY, g.involve()], [g, _ZERO_POLY]])
            else:
                _, sym = symmetric_representative(part.poly ** part.n)
                blocks.append([[sym]])
            continue
        sign = LaurentPoly.constant(part.eps)
        if s.field == "R" and not (part.xi.is_one() or part.xi.is_minus_one()):
            blocks.append([[sign * basic_poly(part.xi, "R") ** part.n]])
        elif part.n % 2 == 0:
            blocks.append([[sign * _even_block(part.xi.value()) ** (part.n // 2)]])
        else:
            (odd_plus if part.eps > 0 else odd_minus).append(part)
    assert len(odd_plus) == len(odd_minus), \
        "a vanishing total jump balances the odd layers"
    for p, q in _match_odd_pairs(odd_plus, odd_minus):
        blocks.append(_paired_block(p, q))
    if not blocks:
        blocks.append([[LaurentPoly.one()]])
    out = _block_diag(blocks)
    if not classify_matrix(out, s.field).is_isometric(s):
        raise IdentityError(
            "the assembled representative does not classify back to the "
            "input form")
    return out
