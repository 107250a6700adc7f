"""Three-term relation coefficients by composing unit contiguous steps.

Any contiguous function F(a+k, b+l, c+m; x) equals r*F + s*F' with rational
function coefficients, F = F(a,b,c;x).  Walking unit steps (all m first,
then k, then l) from (1, 0) builds that pair; converting the basis via
F' = (ab/c) F(a+1,b+1,c+1) yields the unique (Q, R) with

    F(a+k,b+l,c+m) = Q*F(a+1,b+1,c+1) + R*F(a,b,c).

The six unit-step formulas are external mathematical inputs; before first
use they are verified against truncated power series with exact rational
coefficients at random parameter points (see _run_step_oracle).

Internally the walk keeps both numerators over one denominator held as a
multiset of linear factors (every denominator the steps can produce is a
product of linear forms), so no polynomial gcd is ever taken: cancellation
is trial division by known irreducible factors.  The public `step` works on
plain BasisReps through the ordinary field operations; both paths share the
same step-coefficient table and are tested against each other.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from fractions import Fraction

from .factored import FactoredRF, reduce_factored
from .multipoly import MultiPoly
from .ratfield import RatFunc, VAR_A, VAR_B, VAR_C, VAR_X, rf

_A, _B, _C, _X = VAR_A, VAR_B, VAR_C, VAR_X
_ONE = RatFunc.one()

DIRECTIONS = ("a+", "a-", "b+", "b-", "c+", "c-")

_PA = MultiPoly.var("a")
_PB = MultiPoly.var("b")
_PC = MultiPoly.var("c")
_PX = MultiPoly.var("x")
_PXM1 = _PX - MultiPoly.one()          # canonical factor for 1-x (= -(1-x))
_P_ONE = MultiPoly.one()
_PAB = _PA * _PB
_PDRIFT = _PC - (_PA + _PB + _P_ONE) * _PX   # c - (a+b+1)x


@dataclass(frozen=True)
class BasisRep:
    """Coefficients (r, s) meaning r*F + s*F' in the contiguous 2-space."""

    r: RatFunc
    s: RatFunc


@dataclass(frozen=True)
class QRPair:
    Q: RatFunc
    R: RatFunc


# -- step coefficient table ----------------------------------------------------
#
# Every step is  new = cg * G + cp * G'  with cg, cp simple rational
# functions of the current parameters (alpha, beta, gamma) = (a+k, b+l, c+m).
# Coefficients are returned as (numerator poly, denominator factor multiset);
# factors are primitive polynomials with positive leading coefficient, signs
# folded into numerators.

def _lin(pa: int, pb: int, pc: int, const: int) -> MultiPoly:
    return MultiPoly({(1, 0, 0, 0): pa, (0, 1, 0, 0): pb,
                      (0, 0, 1, 0): pc, (0, 0, 0, 0): const})


def _as_factor(poly: MultiPoly):
    """(scale, canonical factor): poly = scale * factor, factor primitive
    with positive leading coefficient."""
    cont, prim = poly.primitive()
    return cont, prim


def _step_coeffs(at: tuple[int, int, int], direction: str):
    k, l, m = at
    alpha = _lin(1, 0, 0, k)
    beta = _lin(0, 1, 0, l)
    if direction == "a+":
        return _P_ONE, {}, _PX, {alpha: 1}
    if direction == "b+":
        return _P_ONE, {}, _PX, {beta: 1}
    if direction == "c-":
        return _P_ONE, {}, _PX, {_lin(0, 0, 1, m - 1): 1}
    if direction == "a-":
        sc, d = _as_factor(_lin(-1, 0, 1, m - k))          # gamma - alpha
        inv = 1 / sc
        num_g = _lin(-1, 0, 1, m - k) - beta * _PX          # gamma-alpha-beta*x
        return num_g.scale(inv), {d: 1}, (_PX * _PXM1).scale(-inv), {d: 1}
    if direction == "b-":
        sc, d = _as_factor(_lin(0, -1, 1, m - l))          # gamma - beta
        inv = 1 / sc
        num_g = _lin(0, -1, 1, m - l) - alpha * _PX
        return num_g.scale(inv), {d: 1}, (_PX * _PXM1).scale(-inv), {d: 1}
    if direction == "c+":
        gamma = _lin(0, 0, 1, m)
        sa, da = _as_factor(_lin(-1, 0, 1, m - k))
        sb, db = _as_factor(_lin(0, -1, 1, m - l))
        inv = 1 / (sa * sb)
        num_g = gamma * _lin(-1, -1, 1, m - k - l)          # gamma(g-a-b)
        return (num_g.scale(inv), {da: 1, db: 1},
                (gamma * _PXM1).scale(-inv), {da: 1, db: 1})
    raise ValueError(f"unknown step direction {direction!r}")


# -- public, RatFunc-level operations -------------------------------------------

def deriv(rep: BasisRep) -> BasisRep:
    """d/dx of r*F + s*F', with F'' rewritten through the ODE for F."""
    ab_over = RatFunc(_PAB, _PX * (_P_ONE - _PX))
    drift_over = RatFunc(_PDRIFT, _PX * (_P_ONE - _PX))
    return BasisRep(
        r=rep.r.d_dx() + rep.s * ab_over,
        s=rep.r + rep.s.d_dx() - rep.s * drift_over,
    )


def step(rep: BasisRep, at: tuple[int, int, int], direction: str) -> BasisRep:
    """One unit contiguous move applied to the function at shift `at`."""
    _ensure_oracle()
    ng, dg, np_, dp = _step_coeffs(tuple(at), direction)
    cg = RatFunc(ng, _expand_factors(dg))
    cp = RatFunc(np_, _expand_factors(dp))
    gp = deriv(rep)
    return BasisRep(r=cg * rep.r + cp * gp.r, s=cg * rep.s + cp * gp.s)


def _expand_factors(factors: dict) -> MultiPoly:
    den = _P_ONE
    for poly, mult in factors.items():
        den = den * poly ** mult
    return den


# -- factored-denominator walk ---------------------------------------------------

class _FRep:
    """nr, ns over a shared denominator given as {linear factor: multiplicity}."""

    __slots__ = ("nr", "ns", "den")

    def __init__(self, nr: MultiPoly, ns: MultiPoly, den: dict):
        self.nr = nr
        self.ns = ns
        self.den = den


def _fderiv(rep: _FRep) -> _FRep:
    """Derivative in the factored representation.

    With D = x^p (x-1)^q E (E free of x), (n/D)' has denominator D*x*(x-1)
    and numerator n'*x*(x-1) - n*(p*(x-1) + q*x).
    """
    p = rep.den.get(_PX, 0)
    q = rep.den.get(_PXM1, 0)
    xxm1 = _PX * _PXM1
    lin = _PX.scale(p + q) - MultiPoly.const(p)    # p(x-1) + qx
    dnr = rep.nr.deriv_x() * xxm1 - rep.nr * lin
    dns = rep.ns.deriv_x() * xxm1 - rep.ns * lin
    # F'' elimination: r <- r' + s*ab/(x(1-x)),  s <- r + s' - s*drift/(x(1-x))
    # and 1/(x(1-x)) = -1/(x(x-1)).
    new_nr = dnr - rep.ns * _PAB
    new_ns = rep.nr * xxm1 + dns + rep.ns * _PDRIFT
    den = dict(rep.den)
    den[_PX] = den.get(_PX, 0) + 1
    den[_PXM1] = den.get(_PXM1, 0) + 1
    return _FRep(new_nr, new_ns, den)


def _den_mul(d1: dict, d2: dict) -> dict:
    out = dict(d1)
    for f, e in d2.items():
        out[f] = out.get(f, 0) + e
    return out


def _den_lcm(d1: dict, d2: dict):
    """lcm and the two complements (factors are irreducible, so per-factor max)."""
    lcm = dict(d1)
    for f, e in d2.items():
        lcm[f] = max(lcm.get(f, 0), e)
    c1 = {f: e - d1.get(f, 0) for f, e in lcm.items() if e - d1.get(f, 0) > 0}
    c2 = {f: e - d2.get(f, 0) for f, e in lcm.items() if e - d2.get(f, 0) > 0}
    return lcm, c1, c2


def _fstep(rep: _FRep, at: tuple[int, int, int], direction: str) -> _FRep:
    ng, dg, np_, dp = _step_coeffs(at, direction)
    gp = _fderiv(rep)
    den1 = _den_mul(rep.den, dg)
    den2 = _den_mul(gp.den, dp)
    lcm, c1, c2 = _den_lcm(den1, den2)
    m1 = ng * _expand_factors(c1)
    m2 = np_ * _expand_factors(c2)
    nr = rep.nr * m1 + gp.nr * m2
    ns = rep.ns * m1 + gp.ns * m2
    return _cancel(_FRep(nr, ns, lcm))


def _cancel(rep: _FRep) -> _FRep:
    """Divide out denominator factors dividing both numerators."""
    nr, ns = rep.nr, rep.ns
    den = dict(rep.den)
    for factor in list(den):
        while den[factor] > 0:
            if nr.is_zero():
                qs = ns.divide_exact(factor)
                if qs is None:
                    break
                ns = qs
            elif ns.is_zero():
                qr = nr.divide_exact(factor)
                if qr is None:
                    break
                nr = qr
            else:
                qr = nr.divide_exact(factor)
                if qr is None:
                    break
                qs = ns.divide_exact(factor)
                if qs is None:
                    break
                nr, ns = qr, qs
            den[factor] -= 1
        if den[factor] == 0:
            del den[factor]
    return _FRep(nr, ns, den)


_MOVE_DELTA = {"a+": (1, 0, 0), "a-": (-1, 0, 0), "b+": (0, 1, 0),
               "b-": (0, -1, 0), "c+": (0, 0, 1), "c-": (0, 0, -1)}


def moves_for(shift: tuple[int, int, int]) -> list[str]:
    """Canonical move list: all m-steps, then k-steps, then l-steps."""
    k, l, m = shift
    moves = ["c+" if m > 0 else "c-"] * abs(m)
    moves += ["a+" if k > 0 else "a-"] * abs(k)
    moves += ["b+" if l > 0 else "b-"] * abs(l)
    return moves


def _canonical_parent(shift):
    k, l, m = shift
    if l:
        d = 1 if l > 0 else -1
        return (k, l - d, m), ("b+" if d > 0 else "b-")
    if k:
        d = 1 if k > 0 else -1
        return (k - d, 0, m), ("a+" if d > 0 else "a-")
    d = 1 if m > 0 else -1
    return (0, 0, m - d), ("c+" if d > 0 else "c-")


_FREP_CACHE: dict[tuple[int, int, int], _FRep] = {}
_REP_CACHE: dict[tuple[int, int, int], BasisRep] = {}
_QR_CACHE: dict[tuple[int, int, int], QRPair] = {}
_CACHE_LOCK = threading.RLock()


def _frep(shift: tuple[int, int, int]) -> _FRep:
    if shift == (0, 0, 0):
        return _FRep(_P_ONE, MultiPoly.zero(), {})
    with _CACHE_LOCK:
        cached = _FREP_CACHE.get(shift)
    if cached is not None:
        return cached
    parent, move = _canonical_parent(shift)
    rep = _fstep(_frep(parent), parent, move)
    # Prefix states (l == 0) are shared across many shifts; keep only those
    # to bound the cache.
    if shift[1] == 0:
        with _CACHE_LOCK:
            _FREP_CACHE.setdefault(shift, rep)
    return rep


def rep_from_moves(moves) -> BasisRep:
    """Walk an explicit move list from (0,0,0); used for path independence."""
    _ensure_oracle()
    rep = _FRep(_P_ONE, MultiPoly.zero(), {})
    at = (0, 0, 0)
    for move in moves:
        rep = _fstep(rep, at, move)
        d = _MOVE_DELTA[move]
        at = (at[0] + d[0], at[1] + d[1], at[2] + d[2])
    return BasisRep(r=_quotient(rep.nr, rep.den), s=_quotient(rep.ns, rep.den))


def _quotient(num: MultiPoly, den_factors: dict) -> RatFunc:
    """num / prod(factors) as a canonical RatFunc via trial division only.

    Factors are irreducible (linear), so dividing out each one as long as it
    divides the numerator leaves a coprime pair.
    """
    if num.is_zero():
        return RatFunc.zero()
    remaining = []
    for factor, mult in sorted(den_factors.items(),
                               key=lambda fm: sorted(fm[0].terms.items())):
        while mult > 0:
            q = num.divide_exact(factor)
            if q is None:
                break
            num = q
            mult -= 1
        if mult:
            remaining.append((factor, mult))
    den = _P_ONE
    for factor, mult in remaining:
        den = den * factor ** mult
    cont = den.content()
    if cont != 1:
        num = num.scale(1 / cont)
        den = den.scale(1 / cont)
    return RatFunc(num, den, _normalized=True)


def compute_rep(shift: tuple[int, int, int]) -> BasisRep:
    """(r, s) with F(a+k,b+l,c+m) = r*F + s*F'; memoized by shift."""
    shift = tuple(int(v) for v in shift)
    with _CACHE_LOCK:
        cached = _REP_CACHE.get(shift)
    if cached is not None:
        return cached
    _ensure_oracle()
    frep = _frep(shift)
    rep = BasisRep(r=_quotient(frep.nr, frep.den),
                   s=_quotient(frep.ns, frep.den))
    with _CACHE_LOCK:
        _REP_CACHE.setdefault(shift, rep)
    return rep


def compute_qr(shift: tuple[int, int, int]) -> QRPair:
    """The unique (Q, R) of the three-term relation at an integer shift."""
    shift = tuple(int(v) for v in shift)
    with _CACHE_LOCK:
        cached = _QR_CACHE.get(shift)
    if cached is not None:
        return cached
    _ensure_oracle()
    frep = _frep(shift)
    den = dict(frep.den)
    den[_PC] = den.get(_PC, 0) + 1
    qr = QRPair(Q=_quotient(frep.ns * _PAB, den),
                R=_quotient(frep.nr, frep.den))
    with _CACHE_LOCK:
        _QR_CACHE.setdefault(shift, qr)
    return qr


_QRF_CACHE: dict[tuple[int, int, int], tuple[FactoredRF, FactoredRF]] = {}


def qr_factored(shift: tuple[int, int, int]) -> tuple[FactoredRF, FactoredRF]:
    """(Q, R) in factored-denominator form, for gcd-free exact comparisons."""
    shift = tuple(int(v) for v in shift)
    with _CACHE_LOCK:
        cached = _QRF_CACHE.get(shift)
    if cached is not None:
        return cached
    _ensure_oracle()
    frep = _frep(shift)
    qden = dict(frep.den)
    qden[_PC] = qden.get(_PC, 0) + 1
    qnum, qden = reduce_factored(frep.ns * _PAB, qden)
    rnum, rden = reduce_factored(frep.nr, frep.den)
    pair = (FactoredRF(qnum, qden), FactoredRF(rnum, rden))
    with _CACHE_LOCK:
        _QRF_CACHE.setdefault(shift, pair)
    return pair


def check_r_eq_qprime(shift: tuple[int, int, int]) -> bool:
    """R(k,l,m) = c(c+1)/((a+1)(b+1)x(1-x)) * Q(k-1,l-1,m-1)|_{a+1,b+1,c+1}."""
    k, l, m = shift
    r_here = compute_qr(shift).R
    q_prev = compute_qr((k - 1, l - 1, m - 1)).Q
    shifted = q_prev.substitute(((1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)))
    factor = (_C * (_C + _ONE)) / ((_A + _ONE) * (_B + _ONE) * _X * (_ONE - _X))
    return r_here == factor * shifted


# -- series oracle for the six step formulas -----------------------------------
#
# Exact truncated series of F(a,b,c;x) at random rational parameter points.
# Each formula below is checked coefficient-by-coefficient over the rationals;
# any transcription error in the step table would fail here, so the formulas
# never reach the rest of the build unverified.

_ORACLE_TERMS = 36
_ORACLE_POINTS = 5
_oracle_done = False
_oracle_lock = threading.Lock()


def _series_f(a: Fraction, b: Fraction, c: Fraction, n: int) -> list[Fraction]:
    coeffs = [Fraction(1)]
    t = Fraction(1)
    for i in range(n - 1):
        t = t * (a + i) * (b + i) / ((c + i) * (i + 1))
        coeffs.append(t)
    return coeffs


def _series_ddx(series: list[Fraction]) -> list[Fraction]:
    return [series[i] * i for i in range(1, len(series))] + [Fraction(0)]


def _series_mul_x(series, power: int = 1):
    return [Fraction(0)] * power + series[:-power] if power else list(series)


def _series_scale(series, factor: Fraction):
    return [v * factor for v in series]


def _series_add(u, v):
    return [x + y for x, y in zip(u, v)]


def _series_sub(u, v):
    return [x - y for x, y in zip(u, v)]


def _oracle_param_points(rng: random.Random):
    pts = []
    while len(pts) < _ORACLE_POINTS:
        den = rng.randint(3, 11)
        a = Fraction(rng.randint(-20, 20), den)
        b = Fraction(rng.randint(-20, 20), den + 1)
        c = Fraction(rng.randint(-20, 20), den + 2)
        ok = all(v.denominator > 1 for v in (a, b, c, c - a, c - b)) \
            and a != 0 and b != 0
        if ok:
            pts.append((a, b, c))
    return pts


def _run_step_oracle() -> None:
    rng = random.Random(33550336)
    n = _ORACLE_TERMS
    for a, b, c in _oracle_param_points(rng):
        # Two padding terms keep every compared derivative coefficient valid.
        f_long = _series_f(a, b, c, n + 2)
        fp_long = _series_ddx(f_long)
        f = f_long[:n]
        fp = fp_long[:n]
        xfp = _series_mul_x(fp_long)[:n]
        x2fp = _series_mul_x(fp_long, 2)[:n]
        cases = []
        # raising a:  F(a+1) = F + (x/a) F'
        cases.append(("a+", _series_f(a + 1, b, c, n),
                      _series_add(f, _series_scale(xfp, 1 / a))))
        # raising b
        cases.append(("b+", _series_f(a, b + 1, c, n),
                      _series_add(f, _series_scale(xfp, 1 / b))))
        # lowering c:  F(c-1) = F + (x/(c-1)) F'
        cases.append(("c-", _series_f(a, b, c - 1, n),
                      _series_add(f, _series_scale(xfp, 1 / (c - 1)))))
        # lowering a:  (c-a) F(a-1) = (c-a) F - b x F + x(1-x) F'
        lhs = _series_scale(_series_f(a - 1, b, c, n), c - a)
        rhs = _series_sub(_series_add(_series_scale(f, c - a),
                                      _series_sub(xfp, x2fp)),
                          _series_scale(_series_mul_x(f)[:n], b))
        cases.append(("a-", lhs, rhs))
        # lowering b
        lhs = _series_scale(_series_f(a, b - 1, c, n), c - b)
        rhs = _series_sub(_series_add(_series_scale(f, c - b),
                                      _series_sub(xfp, x2fp)),
                          _series_scale(_series_mul_x(f)[:n], a))
        cases.append(("b-", lhs, rhs))
        # raising c:  (c-a)(c-b) F(c+1) = c(c-a-b) F + c (1-x) F'
        lhs = _series_scale(_series_f(a, b, c + 1, n), (c - a) * (c - b))
        rhs = _series_add(_series_scale(f, c * (c - a - b)),
                          _series_scale(_series_sub(fp, xfp), c))
        cases.append(("c+", lhs, rhs))
        for name, left, right in cases:
            if left != right:
                raise AssertionError(
                    f"unit step formula {name!r} failed the series oracle "
                    f"at (a,b,c)=({a},{b},{c})")


def _ensure_oracle() -> None:
    global _oracle_done
    if _oracle_done:
        return
    with _oracle_lock:
        if not _oracle_done:
            _run_step_oracle()
            _oracle_done = True


def rep_series_residual(shift, a: Fraction, b: Fraction, c: Fraction,
                        terms: int = 30) -> bool:
    """Exact series check of a computed rep at one rational parameter point.

    Clears denominators, so it also exercises reps with x-poles:
    F_sh * den_r * den_s = num_r * den_s * F + num_s * den_r * F'.
    """
    rep = compute_rep(shift)
    k, l, m = shift
    pad = terms + 8
    f = _series_f(a, b, c, pad)
    fp = _series_ddx(f)
    fsh = _series_f(a + k, b + l, c + m, pad)

    def xpoly(poly):
        coeffs: dict[int, Fraction] = {}
        evaluated = poly.eval_var(0, a).eval_var(1, b).eval_var(2, c)
        for exp, coeff in evaluated.terms.items():
            coeffs[exp[3]] = coeffs.get(exp[3], Fraction(0)) + Fraction(
                int(coeff.numerator), int(coeff.denominator))
        deg = max(coeffs) if coeffs else 0
        return [coeffs.get(i, Fraction(0)) for i in range(deg + 1)]

    def mulpoly(series, poly):
        out = [Fraction(0)] * len(series)
        for i, cv in enumerate(poly):
            if cv:
                for j in range(len(series) - i):
                    out[i + j] += cv * series[j]
        return out

    nr, dr = xpoly(rep.r.num), xpoly(rep.r.den)
    ns, ds = xpoly(rep.s.num), xpoly(rep.s.den)
    lhs = mulpoly(mulpoly(fsh, dr), ds)
    rhs = _series_add(mulpoly(mulpoly(f, nr), ds), mulpoly(mulpoly(fp, ns), dr))
    return lhs[:terms] == rhs[:terms]


def clear_caches() -> None:
    with _CACHE_LOCK:
        _FREP_CACHE.clear()
        _REP_CACHE.clear()
        _QR_CACHE.clear()
        _QRF_CACHE.clear()
