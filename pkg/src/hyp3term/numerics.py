"""Arbitrary-precision checks of everything the exact layer computes.

All operations take the working precision P (decimal digits) explicitly and
compute inside a private mpmath context at P plus guard digits; nothing
touches mpmath's global state, so everything here is reentrant.  Returned
values are mpmath floats carrying at least P accurate digits under the
stated contracts.

The series evaluator sums the hypergeometric series directly with a
geometric tail bound (|x| < 1/2 for the public entry point; the solution
family needs arguments up to 1-x < 1 and uses a ratio test with a term
cap).  Everything downstream (the four solutions y1, y2, y5, y6, the
Wronskian and its closed form, the two determinant expressions for q) is
built from that evaluator plus the Gamma function.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import ladder
from .symmetry import SymFactor

GUARD_DIGITS = 10
SERIES_TERM_CAP = 10 ** 6


def context(precision: int):
    """Private mpmath context at the working precision plus guard digits."""
    if precision < 30:
        raise ValueError("working precision must be at least 30 digits")
    ctx = mpmath.mp.clone()
    ctx.dps = precision + GUARD_DIGITS
    return ctx


def to_mpf(ctx, value):
    """Exact conversion of ints, Fractions and mpq-like rationals."""
    if isinstance(value, int):
        return ctx.mpf(value)
    num = int(value.numerator)
    den = int(value.denominator)
    return ctx.mpf(num) / den if den != 1 else ctx.mpf(num)


# -- Pochhammer symbols, exactly over the rationals -----------------------------

def poch(alpha: Fraction, n: int) -> Fraction:
    """(alpha)_n for any integer n, with (alpha)_{-n} = 1/(alpha-n)_n."""
    alpha = Fraction(alpha)
    if n >= 0:
        out = Fraction(1)
        for i in range(n):
            out *= alpha + i
        return out
    out = Fraction(1)
    for i in range(1, -n + 1):
        out *= alpha - i
    return 1 / out


# -- the series evaluator --------------------------------------------------------

def _series_2f1(ctx, a, b, c, x, tol, cap=SERIES_TERM_CAP):
    """Partial sums of sum (a)_n (b)_n / ((c)_n n!) x^n with a tail bound.

    Stops once the geometric bound term*rho/(1-rho) drops under tol, where
    rho bounds every later term ratio; requires |x| < 1 (caller enforces
    the tighter public domain).
    """
    af, bf, cf, xf = (to_mpf(ctx, v) for v in (a, b, c, x))
    ax = abs(xf)
    total = ctx.mpf(1)
    term = ctx.mpf(1)
    n = 0
    burn_in = 10 + 2 * int(abs(af) + abs(bf) + abs(cf))
    while True:
        term = term * (af + n) * (bf + n) / ((cf + n) * (n + 1)) * xf
        total += term
        n += 1
        if term == 0:
            break
        if n >= burn_in:
            rho = ax * (n + 1 + abs(af)) * (n + 1 + abs(bf)) / \
                ((n + 1 - abs(cf)) * (n + 2))
            if rho < 1 and abs(term) * rho / (1 - rho) < tol:
                break
        if n > cap:
            raise ArithmeticError(
                f"series did not converge within {cap} terms at x={x}")
    return total


def hyp2f1(a, b, c, x, precision: int):
    """F(a, b, c; x) with absolute error below 10^-precision; |x| < 1/2."""
    c = Fraction(c)
    if c.denominator == 1 and c <= 0:
        raise ValueError("c must not be a non-positive integer")
    x = Fraction(x)
    if abs(x) >= Fraction(1, 2):
        raise ValueError("series evaluator requires |x| < 1/2")
    ctx = context(precision)
    return _series_2f1(ctx, a, b, c, x, ctx.mpf(10) ** (-(precision + 5)))


def gamma_value(z, precision: int):
    """Gamma(z) with relative error below 10^-(precision-2)."""
    if isinstance(z, (int, Fraction)):
        z = Fraction(z)
        if z.denominator == 1 and z <= 0:
            raise ValueError("Gamma pole at non-positive integers")
    ctx = context(precision)
    return ctx.gamma(to_mpf(ctx, z) if isinstance(z, Fraction) else z)


# -- admissible parameter samples -------------------------------------------------

@dataclass(frozen=True)
class ParamSample:
    a: Fraction
    b: Fraction
    c: Fraction
    x: Fraction

    def admissible(self) -> bool:
        vals = (self.a, self.b, self.c - self.a, self.c - self.b, self.c,
                self.c - self.a - self.b, self.a - self.b)
        return all(v.denominator > 1 for v in vals) \
            and Fraction(1, 10) <= self.x <= Fraction(9, 20)

    def to_json_dict(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c),
                "x": str(self.x)}


def sample_params(seed: int, count: int) -> list[ParamSample]:
    """Deterministic admissible samples: rationals with denominators <= 64,
    |a|,|b|,|c| <= 4, x in [1/10, 9/20], all seven non-integrality
    constraints checked exactly."""
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 10 ** 4:
            raise RuntimeError("rejection sampling exhausted its retries")
        den = rng.randint(2, 64)
        a = Fraction(rng.randint(-4 * den + 1, 4 * den - 1), den)
        den = rng.randint(2, 64)
        b = Fraction(rng.randint(-4 * den + 1, 4 * den - 1), den)
        den = rng.randint(2, 64)
        c = Fraction(rng.randint(-4 * den + 1, 4 * den - 1), den)
        xden = rng.randint(10, 64)
        lo = -(-xden // 10)              # ceil(den/10)
        hi = 9 * xden // 20
        if lo > hi:
            continue
        x = Fraction(rng.randint(lo, hi), xden)
        sample = ParamSample(a, b, c, x)
        if sample.admissible():
            out.append(sample)
    return out


# -- the solution family ----------------------------------------------------------

def f_scaled(ctx, a, b, c, x, tol):
    """f(a,b,c;x) = Gamma(a)Gamma(b)/Gamma(c) * F(a,b,c;x)."""
    scale = ctx.gamma(to_mpf(ctx, a)) * ctx.gamma(to_mpf(ctx, b)) \
        / ctx.gamma(to_mpf(ctx, c))
    return scale * _series_2f1(ctx, a, b, c, x, tol)


def solution_y(i: int, a, b, c, x, precision: int):
    """The solutions y1, y2, y5, y6 built from f; x must lie in (0, 1/2)."""
    a, b, c, x = (Fraction(v) for v in (a, b, c, x))
    if not 0 < x < Fraction(1, 2):
        raise ValueError("solutions are evaluated on the real segment (0, 1/2)")
    ctx = context(precision)
    tol = ctx.mpf(10) ** (-(precision + 5))
    return _solution_y(ctx, i, a, b, c, x, tol)


def _solution_y(ctx, i, a, b, c, x, tol):
    if i == 1:
        return f_scaled(ctx, a, b, c, x, tol)
    if i == 2:
        return f_scaled(ctx, a, b, a + b + 1 - c, 1 - x, tol)
    if i == 5:
        power = ctx.power(to_mpf(ctx, x), to_mpf(ctx, 1 - c))
        return power * f_scaled(ctx, a + 1 - c, b + 1 - c, 2 - c, x, tol)
    if i == 6:
        power = ctx.power(to_mpf(ctx, 1 - x), to_mpf(ctx, c - a - b))
        return power * f_scaled(ctx, c - a, c - b, c + 1 - a - b, 1 - x, tol)
    raise ValueError("solution index must be one of 1, 2, 5, 6")


def lbc_residual(i: int, sample: ParamSample, precision: int):
    """|L_abc y_i| via fourth-order central differences at step 10^-(P/4).

    Values are computed at doubled working precision so the h^4 truncation
    term dominates; the contract tolerance is 10^-(P-15).
    """
    a, b, c, x = sample.a, sample.b, sample.c, sample.x
    ctx = context(2 * precision)
    tol = ctx.mpf(10) ** (-(2 * precision))
    h = Fraction(1, 10 ** (precision // 4))
    ys = [_solution_y(ctx, i, a, b, c, x + j * h, tol) for j in (-2, -1, 0, 1, 2)]
    hf = to_mpf(ctx, h)
    d1 = (ys[0] - 8 * ys[1] + 8 * ys[3] - ys[4]) / (12 * hf)
    d2 = (-ys[0] + 16 * ys[1] - 30 * ys[2] + 16 * ys[3] - ys[4]) / (12 * hf ** 2)
    xf = to_mpf(ctx, x)
    drift = (to_mpf(ctx, c) - (to_mpf(ctx, a) + to_mpf(ctx, b) + 1) * xf) \
        / (xf * (1 - xf))
    ab = to_mpf(ctx, a) * to_mpf(ctx, b) / (xf * (1 - xf))
    return abs(d2 + drift * d1 - ab * ys[2])


# -- the Wronskian ---------------------------------------------------------------

def wronskian(a, b, c, x, precision: int):
    """(direct, closed): y5*y1(+1) - y1*y5(+1) against the Gamma closed form."""
    a, b, c, x = (Fraction(v) for v in (a, b, c, x))
    ctx = context(precision + 10)
    tol = ctx.mpf(10) ** (-(precision + 12))
    direct = (_solution_y(ctx, 5, a, b, c, x, tol)
              * _solution_y(ctx, 1, a + 1, b + 1, c + 1, x, tol)
              - _solution_y(ctx, 1, a, b, c, x, tol)
              * _solution_y(ctx, 5, a + 1, b + 1, c + 1, x, tol))
    g = ctx.gamma
    closed = -(g(to_mpf(ctx, a)) * g(to_mpf(ctx, b))
               * g(to_mpf(ctx, a + 1 - c)) * g(to_mpf(ctx, b + 1 - c))
               / (g(to_mpf(ctx, c)) * g(to_mpf(ctx, 1 - c)))) \
        * ctx.power(to_mpf(ctx, x), to_mpf(ctx, -c)) \
        * ctx.power(to_mpf(ctx, 1 - x), to_mpf(ctx, c - a - b - 1))
    return direct, closed


_W_RATIO_LHS = SymFactor.build(
    num=[("c", "m"), ("1-c", "-m")],
    den=[("a", "k"), ("b", "l"), ("a+1-c", "k-m"), ("b+1-c", "l-m")],
    x="m", omx="k+l-m")
_W_RATIO_RHS = SymFactor.build(
    num=[("c-a", "m-k"), ("c-b", "m-l")],
    den=[("a", "k"), ("b", "l")],
    sign="k+l-m", x="m", omx="k+l-m")


def wronskian_ratio_symbolic(shift) -> bool:
    """W(a,b,c;x)/W(a+k,b+l,c+m;x) from the Gamma closed form equals the
    printed Pochhammer expression, exactly over Q(a,b,c,x)."""
    shift = tuple(shift)
    return _W_RATIO_LHS.equivalent(_W_RATIO_RHS) or \
        _W_RATIO_LHS.expand(shift) == _W_RATIO_RHS.expand(shift)


# -- the two expressions for q ------------------------------------------------------

def q_via(expr: str, shift, sample: ParamSample, precision: int):
    """Evaluate q from (q1) (y1/y5 determinants) or (q2) (y2/y6 with its
    Pochhammer prefactor)."""
    k, l, m = shift
    a, b, c, x = sample.a, sample.b, sample.c, sample.x
    ctx = context(precision + 10)
    tol = ctx.mpf(10) ** (-(precision + 12))
    sh = (a + k, b + l, c + m)
    p1 = (a + 1, b + 1, c + 1)
    if expr == "q1":
        y1 = _solution_y(ctx, 1, a, b, c, x, tol)
        y5 = _solution_y(ctx, 5, a, b, c, x, tol)
        num = y5 * _solution_y(ctx, 1, *sh, x, tol) \
            - y1 * _solution_y(ctx, 5, *sh, x, tol)
        den = y5 * _solution_y(ctx, 1, *p1, x, tol) \
            - y1 * _solution_y(ctx, 5, *p1, x, tol)
        return num / den
    if expr == "q2":
        y2 = _solution_y(ctx, 2, a, b, c, x, tol)
        y6 = _solution_y(ctx, 6, a, b, c, x, tol)
        num = y6 * _solution_y(ctx, 2, *sh, x, tol) \
            - y2 * _solution_y(ctx, 6, *sh, x, tol)
        den = y6 * _solution_y(ctx, 2, *p1, x, tol) \
            - y2 * _solution_y(ctx, 6, *p1, x, tol)
        pref = Fraction(-1) ** ((m + 1 - k - l) % 2) \
            / (poch(c - a, m - k) * poch(c - b, m - l))
        return to_mpf(ctx, pref) * num / den
    raise ValueError("expr must be 'q1' or 'q2'")


def q_to_Q(expr: str, shift, sample: ParamSample, precision: int):
    """Q = a b (c)_m / (c (a)_k (b)_l) * q, with the prefactor exact."""
    k, l, m = shift
    a, b, c = sample.a, sample.b, sample.c
    pref = a * b * poch(c, m) / (c * poch(a, k) * poch(b, l))
    q = q_via(expr, shift, sample, precision)
    ctx = context(precision + 10)
    return to_mpf(ctx, pref) * q


# -- residual checks against the exact layer -----------------------------------------

def qr_at_sample(shift, sample: ParamSample):
    """Exact rational values of (Q, R) at the sample."""
    pair = ladder.compute_qr(tuple(shift))
    args = (sample.a, sample.b, sample.c, sample.x)
    from .rationals import to_fraction
    return (to_fraction(pair.Q.eval_rational(*args)),
            to_fraction(pair.R.eval_rational(*args)))


def three_term_residual(shift, sample: ParamSample, precision: int,
                        family: str = "F"):
    """|F(a+k,b+l,c+m) - Q F(a+1,b+1,c+1) - R F| at the sample.

    family='y5' checks the second-solution family: the f-scaled pair
    q = Q c (a)_k (b)_l / (a b (c)_m), r = R (a)_k (b)_l / (c)_m
    annihilates y5 the same way (this is what expression (q1) solves for).
    """
    k, l, m = (int(v) for v in shift)
    a, b, c, x = sample.a, sample.b, sample.c, sample.x
    qv, rv = qr_at_sample((k, l, m), sample)
    ctx = context(precision)
    tol = ctx.mpf(10) ** (-(precision + 5))
    if family == "F":
        f_sh = _series_2f1(ctx, a + k, b + l, c + m, x, tol)
        f_p1 = _series_2f1(ctx, a + 1, b + 1, c + 1, x, tol)
        f_00 = _series_2f1(ctx, a, b, c, x, tol)
        return abs(f_sh - to_mpf(ctx, qv) * f_p1 - to_mpf(ctx, rv) * f_00)
    if family == "y5":
        scale = poch(a, k) * poch(b, l) / poch(c, m)
        qs = qv * c * scale / (a * b)
        rs = rv * scale
        y_sh = _solution_y(ctx, 5, a + k, b + l, c + m, x, tol)
        y_p1 = _solution_y(ctx, 5, a + 1, b + 1, c + 1, x, tol)
        y_00 = _solution_y(ctx, 5, a, b, c, x, tol)
        return abs(y_sh - to_mpf(ctx, qs) * y_p1 - to_mpf(ctx, rs) * y_00)
    raise ValueError("family must be 'F' or 'y5'")


# -- the five stand-alone identities --------------------------------------------------

def identity_checks(sample: ParamSample, shift, precision: int) -> dict:
    """Pfaff, the (0,1,1) relation, the derivative relation, the printed
    (2,2,2) coefficients, and the argument swap; report-only."""
    a, b, c, x = sample.a, sample.b, sample.c, sample.x
    ctx = context(precision)
    tol = ctx.mpf(10) ** (-(precision + 5))
    tolerance = mpmath.mpf(10) ** (-(precision - 10))
    xr = x / (x - 1)
    checks = []

    def f(ctx_, aa, bb, cc, xx, tt):
        return _series_2f1(ctx_, aa, bb, cc, xx, tt)

    # Pfaff: F(a,b,c;x) = (1-x)^(-b) F(c-a,b,c;x/(x-1))
    lhs = f(ctx, a, b, c, x, tol)
    rhs = ctx.power(to_mpf(ctx, 1 - x), to_mpf(ctx, -b)) \
        * f(ctx, c - a, b, c, xr, tol)
    checks.append(("pfaff", abs(lhs - rhs)))

    # (0,1,1): F(c-a,b+1,c+1;X) = (a-c)/(a(1-x)) F(c-a+1,b+1,c+1;X)
    #          + (c/a) F(c-a,b,c;X) at X = x/(x-1)
    lhs = f(ctx, c - a, b + 1, c + 1, xr, tol)
    rhs = to_mpf(ctx, (a - c) / a) / to_mpf(ctx, 1 - x) \
        * f(ctx, c - a + 1, b + 1, c + 1, xr, tol) \
        + to_mpf(ctx, c / a) * f(ctx, c - a, b, c, xr, tol)
    checks.append(("contiguous_011", abs(lhs - rhs)))

    # derivative relation: F'(a,b,c;x) = (ab/c) F(a+1,b+1,c+1;x),
    # fourth-order central difference at doubled internal precision
    ctx2 = context(2 * precision)
    tol2 = ctx2.mpf(10) ** (-(2 * precision))
    h = Fraction(1, 10 ** (precision // 4))
    ys = [f(ctx2, a, b, c, x + j * h, tol2) for j in (-2, -1, 1, 2)]
    d1 = (ys[0] - 8 * ys[1] + 8 * ys[2] - ys[3]) / (12 * to_mpf(ctx2, h))
    rhs = to_mpf(ctx2, a * b / c) * f(ctx2, a + 1, b + 1, c + 1, x, tol2)
    checks.append(("derivative", abs(d1 - rhs)))

    # printed (2,2,2) coefficients
    q222 = -(c + 1) * (c - (a + b + 1) * x) / ((a + 1) * (b + 1) * x * (1 - x))
    r222 = c * (c + 1) / ((a + 1) * (b + 1) * x * (1 - x))
    lhs = f(ctx, a + 2, b + 2, c + 2, x, tol)
    rhs = to_mpf(ctx, q222) * f(ctx, a + 1, b + 1, c + 1, x, tol) \
        + to_mpf(ctx, r222) * f(ctx, a, b, c, x, tol)
    checks.append(("three_term_222", abs(lhs - rhs)))

    # argument swap
    checks.append(("argument_swap",
                   abs(f(ctx, a, b, c, x, tol) - f(ctx, b, a, c, x, tol))))

    results = [{"identity": name,
                "shift": list(shift),
                "sample": sample.to_json_dict(),
                "residual": mpmath.nstr(res, 8),
                "tolerance": mpmath.nstr(tolerance, 3),
                "pass": bool(res < tolerance)}
               for name, res in checks]
    return {"checks": results, "pass": all(r["pass"] for r in results)}
