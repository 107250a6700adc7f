"""The field Q(a, b, c, x) with canonically represented elements.

A RatFunc is a quotient num/den of MultiPolys with

  * gcd(num, den) = 1 (polynomial part and content),
  * den having coprime integer coefficients and a positive leading
    coefficient under graded-lex order,
  * zero represented as 0/1,

so equal values get identical representations and equality is structural.
"""

from __future__ import annotations

from . import moebius
from .multipoly import MultiPoly, poly_gcd
from .rationals import as_q

__all__ = ["RatFunc", "VAR_A", "VAR_B", "VAR_C", "VAR_X", "rf"]


class RatFunc:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None,
                 _normalized=False):
        if den is None:
            den = MultiPoly.one()
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_rational(value) -> "RatFunc":
        return RatFunc(MultiPoly.const(as_q(value)))

    @staticmethod
    def var(name: str) -> "RatFunc":
        return RatFunc(MultiPoly.var(name), MultiPoly.one(), _normalized=True)

    @staticmethod
    def zero() -> "RatFunc":
        return RatFunc(MultiPoly.zero(), MultiPoly.one(), _normalized=True)

    @staticmethod
    def one() -> "RatFunc":
        return RatFunc(MultiPoly.one(), MultiPoly.one(), _normalized=True)

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def as_rational(self):
        return self.num.as_const() / self.den.as_const()

    # -- field operations ------------------------------------------------------

    def __add__(self, other: "RatFunc") -> "RatFunc":
        other = _coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            num = self.num + other.num
            if num.is_zero():
                return RatFunc.zero()
            g = poly_gcd(num, self.den)
            den = self.den
            if not g.is_const():
                num = num.divide_exact(g)
                den = den.divide_exact(g)
            return RatFunc(*_content_fix(num, den), _normalized=True)
        # Henrici: with g = gcd(d1, d2) the sum's gcd against the new
        # denominator divides g, so only small gcds are ever taken.
        g = poly_gcd(self.den, other.den)
        if g.is_const():
            num = self.num * other.den + other.num * self.den
            if num.is_zero():
                return RatFunc.zero()
            return RatFunc(*_content_fix(num, self.den * other.den),
                           _normalized=True)
        d1r = self.den.divide_exact(g)
        d2r = other.den.divide_exact(g)
        num = self.num * d2r + other.num * d1r
        if num.is_zero():
            return RatFunc.zero()
        h = poly_gcd(num, g)
        if not h.is_const():
            num = num.divide_exact(h)
            g = g.divide_exact(h)
        return RatFunc(*_content_fix(num, g * d1r * d2r), _normalized=True)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return _coerce(other) + (-self)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return RatFunc.zero()
        # Cross-cancel so the final pair is coprime without another gcd.
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1 = self.num if g1.is_const() else self.num.divide_exact(g1)
        d2 = other.den if g1.is_const() else other.den.divide_exact(g1)
        n2 = other.num if g2.is_const() else other.num.divide_exact(g2)
        d1 = self.den if g2.is_const() else self.den.divide_exact(g2)
        num = n1 * n2
        den = d1 * d2
        cont = den.content()
        if cont != 1:
            num = num.scale(1 / cont)
            den = den.scale(1 / cont)
        return RatFunc(num, den, _normalized=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        num, den = self.den, self.num
        cont = den.content()
        if cont != 1:
            num = num.scale(1 / cont)
            den = den.scale(1 / cont)
        return RatFunc(num, den, _normalized=True)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        result = RatFunc.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            if isinstance(other, int):
                other = RatFunc.from_rational(other)
            else:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- calculus ----------------------------------------------------------

    def d_dx(self) -> "RatFunc":
        """Quotient-rule derivative with respect to x.

        Splitting off g = gcd(den, den') keeps the result's denominator at
        den * (den/g) instead of den squared.
        """
        dden = self.den.deriv_x()
        if dden.is_zero():
            return RatFunc(self.num.deriv_x(), self.den)
        g = poly_gcd(self.den, dden)
        e = self.den if g.is_const() else self.den.divide_exact(g)
        h = dden if g.is_const() else dden.divide_exact(g)
        num = self.num.deriv_x() * e - self.num * h
        return RatFunc(num, self.den * e)

    # -- substitution --------------------------------------------------------

    def substitute(self, param_map=None, xmap: int | str = moebius.IDENTITY
                   ) -> "RatFunc":
        """Simultaneous substitution a,b,c -> affine forms, x -> Moebius map.

        param_map is None (identity) or a triple of integer 4-tuples
        (coeff_a, coeff_b, coeff_c, const), one for each of a, b, c.
        xmap is a moebius tag index or tag string.
        """
        if isinstance(xmap, str):
            xmap = moebius.tag_index(xmap)
        num, den = self.num, self.den
        if param_map is not None and not _is_identity_params(param_map):
            replacements = {}
            for var, row in enumerate(param_map):
                ca, cb, cc, c1 = (int(v) for v in row)
                terms = {}
                if ca:
                    terms[(1, 0, 0, 0)] = ca
                if cb:
                    terms[(0, 1, 0, 0)] = cb
                if cc:
                    terms[(0, 0, 1, 0)] = cc
                if c1:
                    terms[(0, 0, 0, 0)] = c1
                replacements[var] = MultiPoly(terms)
            num = num.substitute_polys(replacements)
            den = den.substitute_polys(replacements)
        if xmap != moebius.IDENTITY:
            num, den = _moebius_substitute(num, den, xmap)
        if den.is_zero():
            raise ZeroDivisionError("substitution produced a zero denominator")
        return RatFunc(num, den)

    # -- rendering -----------------------------------------------------------

    def __str__(self) -> str:
        if self.den == MultiPoly.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def to_latex(self) -> str:
        if self.den == MultiPoly.one():
            return self.num.to_latex()
        return f"\\frac{{{self.num.to_latex()}}}{{{self.den.to_latex()}}}"

    def to_json_dict(self) -> dict:
        return {"num": self.num.to_json_terms(), "den": self.den.to_json_terms()}

    @staticmethod
    def from_json_dict(data) -> "RatFunc":
        return RatFunc(MultiPoly.from_json_terms(data["num"]),
                       MultiPoly.from_json_terms(data["den"]))

    # -- evaluation ----------------------------------------------------------

    def eval_rational(self, a, b, c, x):
        """Exact evaluation at rational points; raises on a denominator zero."""
        num = _eval_poly(self.num, a, b, c, x)
        den = _eval_poly(self.den, a, b, c, x)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the sample")
        return num / den


def _eval_poly(poly: MultiPoly, a, b, c, x):
    total = as_q(0)
    vals = (as_q(a), as_q(b), as_q(c), as_q(x))
    for exp, coeff in poly.terms.items():
        term = coeff
        for v, e in zip(vals, exp):
            if e:
                term = term * v ** e
        total += term
    return total


def _coerce(value) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    return RatFunc.from_rational(value)


def _content_fix(num: MultiPoly, den: MultiPoly):
    cont = den.content()
    if cont != 1:
        num = num.scale(1 / cont)
        den = den.scale(1 / cont)
    return num, den


def _is_identity_params(param_map) -> bool:
    ident = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
    return tuple(tuple(int(v) for v in row) for row in param_map) == ident


def _normalize(num: MultiPoly, den: MultiPoly):
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return MultiPoly.zero(), MultiPoly.one()
    g = poly_gcd(num, den)
    if not g.is_const():
        num = num.divide_exact(g)
        den = den.divide_exact(g)
    cont = den.content()
    if cont != 1:
        num = num.scale(1 / cont)
        den = den.scale(1 / cont)
    return num, den


def _moebius_substitute(num: MultiPoly, den: MultiPoly, xmap: int):
    p, q, r, s = moebius.MATRICES[xmap]
    lin_num = MultiPoly({(0, 0, 0, 1): p, (0, 0, 0, 0): q})
    lin_den = MultiPoly({(0, 0, 0, 1): r, (0, 0, 0, 0): s})
    dn = max(num.degree(3), 0)
    dd = max(den.degree(3), 0)
    num_sub = _compose_x(num, lin_num, lin_den, dn)
    den_sub = _compose_x(den, lin_num, lin_den, dd)
    # num/den -> (num_sub/lin_den^dn)/(den_sub/lin_den^dd)
    if dd > dn:
        num_sub = num_sub * lin_den ** (dd - dn)
    elif dn > dd:
        den_sub = den_sub * lin_den ** (dn - dd)
    return num_sub, den_sub


def _compose_x(poly: MultiPoly, lin_num: MultiPoly, lin_den: MultiPoly,
               dmax: int) -> MultiPoly:
    """poly with x -> lin_num/lin_den, cleared by lin_den**dmax."""
    by_deg: dict[int, MultiPoly] = {}
    for exp, coeff in poly.terms.items():
        e = exp[3]
        rest = (exp[0], exp[1], exp[2], 0)
        by_deg.setdefault(e, {})[rest] = coeff
    num_pows = [MultiPoly.one()]
    den_pows = [MultiPoly.one()]
    for _ in range(dmax):
        num_pows.append(num_pows[-1] * lin_num)
        den_pows.append(den_pows[-1] * lin_den)
    result = MultiPoly.zero()
    for e, terms in by_deg.items():
        piece = MultiPoly(terms, _internal=True) * num_pows[e] * den_pows[dmax - e]
        result = result + piece
    return result


VAR_A = RatFunc.var("a")
VAR_B = RatFunc.var("b")
VAR_C = RatFunc.var("c")
VAR_X = RatFunc.var("x")


def rf(value) -> RatFunc:
    """Shorthand: coerce a rational number to a RatFunc."""
    return _coerce(value)
