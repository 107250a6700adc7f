"""Sparse exact polynomials in the four indeterminates a, b, c, x.

Terms live in a dict mapping exponent vectors (e_a, e_b, e_c, e_x) to nonzero
rational coefficients.  The monomial order everywhere (leading terms, canonical
serialization) is graded lexicographic on (e_a, e_b, e_c, e_x), descending.

GCDs use the integer-point heuristic (evaluate at a large integer, take the
integer gcd, reconstruct by balanced base-xi digits, verify by exact division)
with a primitive pseudo-remainder-sequence fallback, so the result is always
correct regardless of heuristic misses.
"""

from __future__ import annotations

from heapq import heapify, heappop, heappush
from math import gcd as _igcd, isqrt

from .rationals import Q, QONE, QZERO, as_q, q_str, qgcd, qlcm

NVARS = 4
VAR_NAMES = ("a", "b", "c", "x")
_ZEXP = (0, 0, 0, 0)


def grlex_key(exp):
    return (sum(exp), exp)


class MultiPoly:
    """Immutable sparse polynomial over the rationals in a, b, c, x."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None, _internal=False):
        if _internal:
            self.terms = terms
        else:
            clean = {}
            for exp, coeff in (terms or {}).items():
                coeff = as_q(coeff)
                if coeff != 0:
                    clean[tuple(exp)] = coeff
            self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "MultiPoly":
        return MultiPoly({}, _internal=True)

    @staticmethod
    def const(value) -> "MultiPoly":
        value = as_q(value)
        if value == 0:
            return MultiPoly.zero()
        return MultiPoly({_ZEXP: value}, _internal=True)

    @staticmethod
    def one() -> "MultiPoly":
        return MultiPoly.const(1)

    @staticmethod
    def var(name: str) -> "MultiPoly":
        exp = [0] * NVARS
        exp[VAR_NAMES.index(name)] = 1
        return MultiPoly({tuple(exp): QONE}, _internal=True)

    @staticmethod
    def monomial(exp, coeff=1) -> "MultiPoly":
        coeff = as_q(coeff)
        if coeff == 0:
            return MultiPoly.zero()
        return MultiPoly({tuple(exp): coeff}, _internal=True)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZEXP in self.terms)

    def as_const(self):
        if not self.terms:
            return QZERO
        if len(self.terms) == 1 and _ZEXP in self.terms:
            return self.terms[_ZEXP]
        raise ValueError("not a constant polynomial")

    def degree(self, var: int | None = None) -> int:
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        return max(e[var] for e in self.terms)

    def variables(self) -> tuple[int, ...]:
        present = [False] * NVARS
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    present[i] = True
        return tuple(i for i in range(NVARS) if present[i])

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            acc = terms.get(exp)
            if acc is None:
                terms[exp] = coeff
            else:
                acc = acc + coeff
                if acc == 0:
                    del terms[exp]
                else:
                    terms[exp] = acc
        return MultiPoly(terms, _internal=True)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({e: -c for e, c in self.terms.items()}, _internal=True)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        if not other.terms:
            return self
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        if not self.terms or not other.terms:
            return MultiPoly.zero()
        if other.is_const():
            return self.scale(other.terms[_ZEXP])
        if self.is_const():
            return other.scale(self.terms[_ZEXP])
        small, large = self.terms, other.terms
        if len(small) > len(large):
            small, large = large, small
        terms: dict = {}
        for e1, c1 in small.items():
            a1, b1, c1_, d1 = e1
            for e2, c2 in large.items():
                exp = (a1 + e2[0], b1 + e2[1], c1_ + e2[2], d1 + e2[3])
                acc = terms.get(exp)
                if acc is None:
                    terms[exp] = c1 * c2
                else:
                    acc = acc + c1 * c2
                    if acc == 0:
                        del terms[exp]
                    else:
                        terms[exp] = acc
        return MultiPoly(terms, _internal=True)

    def scale(self, coeff) -> "MultiPoly":
        coeff = as_q(coeff)
        if coeff == 0:
            return MultiPoly.zero()
        if coeff == 1:
            return self
        return MultiPoly({e: c * coeff for e, c in self.terms.items()},
                         _internal=True)

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def shift_exp(self, dexp) -> "MultiPoly":
        """Multiply by the monomial with exponent vector dexp (entries >= 0)."""
        if all(d == 0 for d in dexp):
            return self
        return MultiPoly(
            {tuple(e + d for e, d in zip(exp, dexp)): c
             for exp, c in self.terms.items()},
            _internal=True)

    def deriv_x(self) -> "MultiPoly":
        terms = {}
        for exp, coeff in self.terms.items():
            ex = exp[3]
            if ex:
                terms[(exp[0], exp[1], exp[2], ex - 1)] = coeff * ex
        return MultiPoly(terms, _internal=True)

    # -- order, comparison -------------------------------------------------

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        exp = max(self.terms, key=grlex_key)
        return exp, self.terms[exp]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]),
                      reverse=True)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.terms.items())))
        return self._hash

    # -- content and normalization ------------------------------------------

    def content(self):
        """Signed rational content: poly/content has coprime integer
        coefficients and a positive graded-lex leading coefficient."""
        if not self.terms:
            return QZERO
        num_gcd = 0
        den_lcm = 1
        for coeff in self.terms.values():
            num_gcd = qgcd(num_gcd, coeff.numerator)
            den_lcm = qlcm(den_lcm, coeff.denominator)
        cont = Q(num_gcd, den_lcm)
        _, lead = self.leading()
        if lead < 0:
            cont = -cont
        return cont

    def primitive(self):
        """(content, primitive part)."""
        if not self.terms:
            return QZERO, self
        cont = self.content()
        return cont, self.scale(1 / cont)

    def max_abs_int_coeff(self) -> int:
        """Max |coefficient| for integer-coefficient polynomials."""
        return max(abs(int(c.numerator)) for c in self.terms.values())

    # -- substitution --------------------------------------------------------

    def eval_var(self, var: int, value) -> "MultiPoly":
        """Substitute one variable by a rational value."""
        value = as_q(value)
        powers = {0: QONE}
        terms: dict = {}
        for exp, coeff in self.terms.items():
            e = exp[var]
            p = powers.get(e)
            if p is None:
                p = value ** e
                powers[e] = p
            new = list(exp)
            new[var] = 0
            new = tuple(new)
            acc = terms.get(new)
            if acc is None:
                acc = coeff * p
            else:
                acc = acc + coeff * p
            if acc == 0:
                terms.pop(new, None)
            else:
                terms[new] = acc
        return MultiPoly(terms, _internal=True)

    def substitute_polys(self, replacements: dict) -> "MultiPoly":
        """Simultaneously substitute variables by polynomials.

        replacements maps the variable index to a MultiPoly; missing
        variables stay themselves.  Powers of each replacement are cached.
        """
        caches: dict[int, list] = {v: [MultiPoly.one(), p]
                                   for v, p in replacements.items()}

        def power(v: int, n: int) -> MultiPoly:
            cache = caches[v]
            while len(cache) <= n:
                cache.append(cache[-1] * cache[1])
            return cache[n]

        result = MultiPoly.zero()
        for exp, coeff in self.terms.items():
            rest = [0] * NVARS
            factor = None
            for v in range(NVARS):
                if exp[v] and v in caches:
                    p = power(v, exp[v])
                    factor = p if factor is None else factor * p
                else:
                    rest[v] = exp[v]
            term = MultiPoly.monomial(tuple(rest), coeff)
            result = result + (term if factor is None else term * factor)
        return result

    # -- exact division ------------------------------------------------------

    def divide_exact(self, divisor: "MultiPoly") -> "MultiPoly | None":
        """Return self / divisor if the division is exact, else None.

        Leading terms are tracked with a lazy-deletion max-heap on the
        graded-lex key, so each pass costs O(log n) instead of a dict scan.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return self
        if divisor.is_const():
            return self.scale(1 / divisor.terms[_ZEXP])
        d_exp, d_coeff = divisor.leading()
        rem = dict(self.terms)
        heap = [(-sum(e), tuple(-v for v in e)) for e in rem]
        heapify(heap)
        quot: dict = {}
        while rem:
            while True:
                neg_total, neg_exp = heap[0]
                r_exp = (-neg_exp[0], -neg_exp[1], -neg_exp[2], -neg_exp[3])
                if r_exp in rem:
                    break
                heappop(heap)
            q_exp = (r_exp[0] - d_exp[0], r_exp[1] - d_exp[1],
                     r_exp[2] - d_exp[2], r_exp[3] - d_exp[3])
            if q_exp[0] < 0 or q_exp[1] < 0 or q_exp[2] < 0 or q_exp[3] < 0:
                return None
            q_coeff = rem[r_exp] / d_coeff
            quot[q_exp] = q_coeff
            for exp, coeff in divisor.terms.items():
                t_exp = (exp[0] + q_exp[0], exp[1] + q_exp[1],
                         exp[2] + q_exp[2], exp[3] + q_exp[3])
                acc = rem.get(t_exp)
                if acc is None:
                    rem[t_exp] = -coeff * q_coeff
                    heappush(heap, (-sum(t_exp), tuple(-v for v in t_exp)))
                else:
                    acc = acc - coeff * q_coeff
                    if acc == 0:
                        del rem[t_exp]
                    else:
                        rem[t_exp] = acc
        return MultiPoly(quot, _internal=True)

    # -- rendering -----------------------------------------------------------

    def __str__(self) -> str:
        return render_terms(self, latex=False)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def to_latex(self) -> str:
        return render_terms(self, latex=True)

    def to_json_terms(self) -> list:
        return [[*exp, q_str(coeff)] for exp, coeff in self.sorted_terms()]

    @staticmethod
    def from_json_terms(data) -> "MultiPoly":
        return MultiPoly({tuple(row[:4]): as_q(row[4]) for row in data})


def render_terms(poly: MultiPoly, latex: bool) -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for exp, coeff in poly.sorted_terms():
        factors = []
        for name, e in zip(VAR_NAMES, exp):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{{{e}}}" if latex else f"{name}^{e}")
        num, den = coeff.numerator, coeff.denominator
        mag = f"{abs(num)}" if den == 1 else (
            f"\\frac{{{abs(num)}}}{{{den}}}" if latex else f"{abs(num)}/{den}")
        if factors and abs(num) == 1 and den == 1:
            body = " ".join(factors) if latex else "*".join(factors)
        elif factors:
            body = " ".join([mag] + factors) if latex else "*".join([mag] + factors)
        else:
            body = mag
        sign = "-" if num < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- greatest common divisors -------------------------------------------------


class HeuristicGCDFailed(Exception):
    pass


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Primitive gcd with positive leading coefficient (1 for coprime inputs)."""
    if f.is_zero():
        return g.primitive()[1] if not g.is_zero() else MultiPoly.zero()
    if g.is_zero():
        return f.primitive()[1]
    if f.terms == g.terms:
        return f.primitive()[1]

    # Common monomial factor first; it is both cheap and frequent here
    # (numerators and denominators carry powers of x).
    fmin = [min(exp[i] for exp in f.terms) for i in range(NVARS)]
    gmin = [min(exp[i] for exp in g.terms) for i in range(NVARS)]
    mon = tuple(min(a, b) for a, b in zip(fmin, gmin))
    if any(fmin):
        f = MultiPoly({tuple(e - d for e, d in zip(exp, fmin)): c
                       for exp, c in f.terms.items()}, _internal=True)
    if any(gmin):
        g = MultiPoly({tuple(e - d for e, d in zip(exp, gmin)): c
                       for exp, c in g.terms.items()}, _internal=True)
    mon_poly = MultiPoly.monomial(mon) if any(mon) else None

    f = f.primitive()[1]
    g = g.primitive()[1]
    if f.is_const() or g.is_const():
        core = MultiPoly.one()
    else:
        try:
            core = _heugcd(f, g)
        except HeuristicGCDFailed:
            core = _prs_gcd(f, g)
        core = core.primitive()[1]
    return core * mon_poly if mon_poly is not None else core


def _smod(value: int, xi: int) -> int:
    r = value % xi
    if 2 * r > xi:
        r -= xi
    return r


def _heugcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Heuristic gcd of integer-coefficient polynomials, up to integer content.

    Candidates are verified by exact division over the rationals, so a wrong
    reconstruction can only trigger a retry, never a wrong result.
    """
    fvars, gvars = f.variables(), g.variables()
    if not fvars and not gvars:
        return MultiPoly.const(_igcd(abs(int(f.as_const())),
                                     abs(int(g.as_const()))))
    if not fvars or not gvars:
        if fvars:
            f, g = g, f
        cg = abs(int(g.content().numerator))
        return MultiPoly.const(_igcd(abs(int(f.as_const())), cg))
    var = max(set(fvars) | set(gvars))
    fn, gn = f.max_abs_int_coeff(), g.max_abs_int_coeff()
    xi = 2 * min(fn, gn) + 29
    for _ in range(6):
        fe = f.eval_var(var, xi)
        ge = g.eval_var(var, xi)
        if not fe.is_zero() and not ge.is_zero():
            he = _heugcd(fe, ge)
            h = _interpolate(he, xi, var)
            if not h.is_zero() and f.divide_exact(h) is not None and \
                    g.divide_exact(h) is not None:
                return h
        xi = 73794 * xi * isqrt(isqrt(xi)) // 100000
    raise HeuristicGCDFailed


def _interpolate(he: MultiPoly, xi: int, var: int) -> MultiPoly:
    """Recover a polynomial in `var` from its value at xi by balanced digits."""
    result = MultiPoly.zero()
    power = 0
    cur = he
    while not cur.is_zero():
        digit_terms = {}
        next_terms = {}
        for exp, coeff in cur.terms.items():
            d = _smod(int(coeff.numerator), xi)
            if d:
                new = list(exp)
                new[var] += power
                digit_terms[tuple(new)] = Q(d)
            rest = (int(coeff.numerator) - d) // xi
            if rest:
                next_terms[exp] = Q(rest)
        result = result + MultiPoly(digit_terms, _internal=True)
        cur = MultiPoly(next_terms, _internal=True)
        power += 1
    return result


def _to_univar(f: MultiPoly, var: int) -> dict[int, MultiPoly]:
    coeffs: dict[int, dict] = {}
    for exp, coeff in f.terms.items():
        e = exp[var]
        rest = list(exp)
        rest[var] = 0
        coeffs.setdefault(e, {})[tuple(rest)] = coeff
    return {e: MultiPoly(t, _internal=True) for e, t in coeffs.items()}


def _from_univar(coeffs: dict[int, MultiPoly], var: int) -> MultiPoly:
    terms = {}
    for e, poly in coeffs.items():
        for exp, coeff in poly.terms.items():
            new = list(exp)
            new[var] = e
            terms[tuple(new)] = coeff
    return MultiPoly(terms, _internal=True)


def _uni_degree(u: dict[int, MultiPoly]) -> int:
    return max(u) if u else -1


def _uni_scale(u, poly):
    out = {}
    for e, c in u.items():
        p = c * poly
        if not p.is_zero():
            out[e] = p
    return out


def _uni_sub(u, v):
    out = dict(u)
    for e, c in v.items():
        if e in out:
            d = out[e] - c
            if d.is_zero():
                del out[e]
            else:
                out[e] = d
        else:
            out[e] = -c
    return out


def _uni_shift(u, n):
    return {e + n: c for e, c in u.items()}


def _pseudo_rem(u, v):
    """Pseudo-remainder of univariate-view polynomials (coefficients are polys)."""
    dv = _uni_degree(v)
    lc_v = v[dv]
    r = u
    while r and _uni_degree(r) >= dv:
        dr = _uni_degree(r)
        lc_r = r[dr]
        r = _uni_sub(_uni_scale(r, lc_v), _uni_shift(_uni_scale(v, lc_r), dr - dv))
    return r


def _prs_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Primitive PRS gcd; always correct, used when the heuristic fails."""
    fvars = set(f.variables()) | set(g.variables())
    if not fvars:
        return MultiPoly.one()
    var = max(fvars)
    uf, ug = _to_univar(f, var), _to_univar(g, var)
    cf = _multi_content(uf)
    cg = _multi_content(ug)
    cont = poly_gcd(cf, cg)
    uf = {e: c.divide_exact(cf) for e, c in uf.items()}
    ug = {e: c.divide_exact(cg) for e, c in ug.items()}
    if _uni_degree(uf) < _uni_degree(ug):
        uf, ug = ug, uf
    while True:
        if not ug:
            result = _from_univar(uf, var)
            break
        r = _pseudo_rem(uf, ug)
        if not r:
            result = _from_univar(ug, var)
            break
        rc = _multi_content(r)
        r = {e: c.divide_exact(rc) for e, c in r.items()}
        uf, ug = ug, r
    result = result.primitive()[1]
    return result * cont


def _multi_content(u: dict[int, MultiPoly]) -> MultiPoly:
    polys = list(u.values())
    acc = polys[0].primitive()[1]
    for p in polys[1:]:
        if acc.is_const():
            break
        acc = poly_gcd(acc, p)
    return acc
