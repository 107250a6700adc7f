"""Symmetry factors of the three-term coefficients under both 96-groups.

Each factor has the shape

    (alpha_1)_{n_1} ... (alpha_s)_{n_s} * (-1)^p * x^q * (1-x)^r

with the alpha_i integer affine forms in (a, b, c, k, l, m) and the
exponents integer affine forms in (k, l, m).  Four base factors per group
generate all 96 through the cocycle law

    lam_{st}(z) = lam_s(z) * lam_t(s^-1 z),

where substituting s^-1 pushes affine maps into the Pochhammer data and a
fractional-linear map into the x/(1-x) monomial.

Structured equality is decided on a formal Gamma ledger: each (alpha)_n
contributes +Gamma(alpha+n) -Gamma(alpha), which is invariant under exactly
the rewrites (alpha)_{m+n} = (alpha)_m (alpha+m)_n that relate equal
printed forms; golden comparisons additionally check expansions at fixed
shifts.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from . import ladder, moebius
from .affine import Affine
from .factored import FactoredRF, factored_equal, make_factored, \
    substitute_factored
from .group import GroupElement, canonical_word, generator, group_G, group_Gt
from .multipoly import MultiPoly
from .ratfield import RatFunc

_AFF_ZERO = Affine()
_AFF_ONE = Affine(const=1)


def _aff(text) -> Affine:
    return Affine.parse(text)


@dataclass(frozen=True)
class PochFactor:
    """(arg)_length, in the numerator (exp > 0) or denominator (exp < 0)."""

    arg: Affine
    length: Affine
    exp: int = 1

    def __post_init__(self):
        if not self.length.is_index_form():
            raise ValueError(f"Pochhammer length {self.length} involves a, b, c")


@dataclass(frozen=True)
class SymFactor:
    """Canonical structured factor: Pochhammers, sign, x and 1-x powers."""

    poch: tuple[PochFactor, ...] = ()
    sign: Affine = _AFF_ZERO
    xexp: Affine = _AFF_ZERO
    omxexp: Affine = _AFF_ZERO

    def __post_init__(self):
        for form in (self.sign, self.xexp, self.omxexp):
            if not form.is_index_form():
                raise ValueError(f"exponent {form} involves a, b or c")

    @staticmethod
    def one() -> "SymFactor":
        return SymFactor()

    @staticmethod
    def build(num=(), den=(), sign="0", x="0", omx="0") -> "SymFactor":
        """Atoms are (arg, length) affine-string pairs."""
        atoms = {}
        for seq, direction in ((num, 1), (den, -1)):
            for arg, length in seq:
                key = (_aff(arg), _aff(length))
                atoms[key] = atoms.get(key, 0) + direction
        poch = _canonical_poch(atoms)
        return SymFactor(poch, _aff(sign).mod2(), _aff(x), _aff(omx))

    # -- algebra ---------------------------------------------------------

    def mul(self, other: "SymFactor") -> "SymFactor":
        atoms: dict = {}
        for factor in self.poch + other.poch:
            key = (factor.arg, factor.length)
            atoms[key] = atoms.get(key, 0) + factor.exp
        return SymFactor(_canonical_poch(atoms),
                         (self.sign + other.sign).mod2(),
                         self.xexp + other.xexp,
                         self.omxexp + other.omxexp)

    def subst(self, element: GroupElement) -> "SymFactor":
        """The factor at element(z) instead of z."""
        mapping = {"k": element.index[0], "l": element.index[1],
                   "m": element.index[2], "a": element.params[0],
                   "b": element.params[1], "c": element.params[2]}
        idx_mapping = {"k": element.index[0], "l": element.index[1],
                       "m": element.index[2]}
        atoms = {}
        for factor in self.poch:
            key = (factor.arg.compose(mapping),
                   factor.length.compose(idx_mapping))
            atoms[key] = atoms.get(key, 0) + factor.exp
        sign = self.sign.compose(idx_mapping)
        xexp = self.xexp.compose(idx_mapping)
        omxexp = self.omxexp.compose(idx_mapping)
        dsign, xexp, omxexp = moebius.transport_monomial(element.xmap,
                                                         xexp, omxexp)
        return SymFactor(_canonical_poch(atoms), (sign + dsign).mod2(),
                         xexp, omxexp)

    # -- evaluation --------------------------------------------------------

    def expand_parts(self, shift):
        """(negate, [(factor, exp), ...]) at a fixed integer shift; the
        factors are linear polynomials, exponents signed."""
        k, l, m = shift
        negate = self.sign.eval_shift(k, l, m).as_int() % 2 == 1
        parts: list[tuple[MultiPoly, int]] = []
        for factor in self.poch:
            n = factor.length.eval_shift(k, l, m).as_int()
            if n == 0:
                continue
            ca, cb, cc, c0 = factor.arg.eval_shift(k, l, m).abc_tuple()
            base = {(1, 0, 0, 0): ca, (0, 1, 0, 0): cb, (0, 0, 1, 0): cc}
            rng = range(n) if n > 0 else range(-1, n - 1, -1)
            exp = factor.exp if n > 0 else -factor.exp
            for i in rng:
                parts.append((MultiPoly({**base, (0, 0, 0, 0): c0 + i}), exp))
        xe = self.xexp.eval_shift(k, l, m).as_int()
        if xe:
            parts.append((MultiPoly.var("x"), xe))
        oe = self.omxexp.eval_shift(k, l, m).as_int()
        if oe:
            # 1-x = -(x-1); fold the sign, keep the primitive factor
            parts.append((MultiPoly.var("x") - MultiPoly.one(), oe))
            if oe % 2:
                negate = not negate
        return negate, parts

    def expand(self, shift) -> RatFunc:
        """Exact rational-function value at a fixed integer shift."""
        negate, scale, nums, dens = self.expand_factored(shift)
        num = MultiPoly.one()
        for factor, exp in nums:
            num = num * factor ** exp
        if scale is not None:
            num = num.scale(scale)
        if negate:
            num = -num
        return make_factored(num, dens).to_ratfunc()

    def expand_factored(self, shift):
        """(negate, numerator factors, denominator factors) with positive
        exponents on both lists."""
        negate, parts = self.expand_parts(shift)
        powers: dict = {}
        scale = None
        for poly, exp in parts:
            cont, prim = poly.primitive()
            if cont != 1:
                piece = cont ** exp
                scale = piece if scale is None else scale * piece
            powers[prim] = powers.get(prim, 0) + exp
        nums = [(f, e) for f, e in powers.items() if e > 0]
        dens = [(f, -e) for f, e in powers.items() if e < 0]
        return negate, scale, nums, dens

    # -- equality ----------------------------------------------------------

    def gamma_ledger(self):
        ledger: dict[Affine, int] = {}
        for factor in self.poch:
            if not factor.length:
                continue
            top = factor.arg + factor.length
            ledger[top] = ledger.get(top, 0) + factor.exp
            ledger[factor.arg] = ledger.get(factor.arg, 0) - factor.exp
        return tuple(sorted(((f.key(), e) for f, e in ledger.items() if e)))

    def _oriented(self):
        """(sign, ledger) with every atom reflected to a fixed orientation.

        (alpha)_n = (-1)^n (1-alpha-n)_n brings mirror-image atoms (which
        different cocycle words produce) to one side before comparing.
        """
        sign = self.sign
        ledger: dict[Affine, int] = {}
        for factor in self.poch:
            arg, n, e = factor.arg, factor.length, factor.exp
            if not n:
                continue
            if _orientation(arg) < 0:
                sign = sign + n * e
                arg = _AFF_ONE - arg - n
            top = arg + n
            ledger[top] = ledger.get(top, 0) + e
            ledger[arg] = ledger.get(arg, 0) - e
        return sign.mod2(), tuple(sorted((f.key(), e)
                                         for f, e in ledger.items() if e))

    def equivalent(self, other: "SymFactor") -> bool:
        """Equality up to Pochhammer index-splitting and reflection rewrites."""
        s1, l1 = self._oriented()
        s2, l2 = other._oriented()
        return (s1 == s2 and l1 == l2
                and self.xexp == other.xexp
                and self.omxexp == other.omxexp)

    def simplify(self) -> "SymFactor":
        """Canonical minimal form: orient the atoms, then re-pair the Gamma
        ledger greedily within each direction class.  Value-preserving; falls
        back to self when a class is not a pure Pochhammer product."""
        sign, ledger = self._oriented()
        groups: dict[tuple, list] = {}
        for key, e in ledger:
            theta = Affine(key[0], key[1])
            groups.setdefault(theta.coeffs[:3], []).append((theta, e))
        atoms: dict = {}
        for entries in groups.values():
            if sum(e for _, e in entries) != 0:
                return self
            pos: list[Affine] = []
            neg: list[Affine] = []
            for theta, e in entries:
                (pos if e > 0 else neg).extend([theta] * abs(e))
            pos.sort(key=lambda f: f.key())
            neg.sort(key=lambda f: f.key())
            for bottom, top in zip(neg, pos):
                length = top - bottom
                if length:
                    key = (bottom, length)
                    atoms[key] = atoms.get(key, 0) + 1
        return SymFactor(_canonical_poch(atoms), sign, self.xexp, self.omxexp)

    # -- rendering -----------------------------------------------------------

    def _monomial_str(self, latex: bool) -> list[str]:
        out = []
        if self.sign:
            out.append(f"(-1)^{{{self.sign}}}" if latex else f"(-1)^({self.sign})")
        if self.xexp:
            out.append(f"x^{{{self.xexp}}}" if latex else f"x^({self.xexp})")
        if self.omxexp:
            out.append(f"(1-x)^{{{self.omxexp}}}" if latex
                       else f"(1-x)^({self.omxexp})")
        return out

    def to_str(self) -> str:
        num = [f"({f.arg})_({f.length})" + (f"^{f.exp}" if f.exp != 1 else "")
               for f in self.poch if f.exp > 0]
        den = [f"({f.arg})_({f.length})" + (f"^{-f.exp}" if f.exp != -1 else "")
               for f in self.poch if f.exp < 0]
        parts = self._monomial_str(latex=False) + num
        text = " ".join(parts) if parts else "1"
        if den:
            text += " / [" + " ".join(den) + "]"
        return text

    def to_latex(self) -> str:
        num = [f"({f.arg})_{{{f.length}}}" + (f"^{{{f.exp}}}" if f.exp != 1 else "")
               for f in self.poch if f.exp > 0]
        den = [f"({f.arg})_{{{f.length}}}"
               + (f"^{{{-f.exp}}}" if f.exp != -1 else "")
               for f in self.poch if f.exp < 0]
        mono = self._monomial_str(latex=True)
        if den:
            frac = "\\frac{" + (" ".join(num) or "1") + "}{" + " ".join(den) + "}"
            return " ".join([frac] + mono)
        return " ".join(num + mono) if (num or mono) else "1"

    def to_json_dict(self) -> dict:
        return {
            "poch": [{"arg": str(f.arg), "length": str(f.length), "exp": f.exp}
                     for f in self.poch],
            "sign": str(self.sign),
            "x": str(self.xexp),
            "one_minus_x": str(self.omxexp),
        }

    def __str__(self):
        return self.to_str()


def _canonical_poch(atoms: dict) -> tuple[PochFactor, ...]:
    factors = [PochFactor(arg, length, exp)
               for (arg, length), exp in atoms.items() if exp and length]
    factors.sort(key=lambda f: (0 if f.exp > 0 else 1, f.arg.key(),
                                f.length.key()))
    return tuple(factors)


def _orientation(arg: Affine) -> int:
    """Sign of the last nonzero coefficient (c before b before a).

    This keeps the prevailing printed orientations (c-a, c-a-b-1, b-a-1)
    unflipped; any fixed rule works for equality, this one reads best.
    """
    for coeff in reversed(arg.coeffs):
        if coeff:
            return 1 if coeff > 0 else -1
    return 1 if arg.const >= 0 else -1


# -- base factors ---------------------------------------------------------------

_BASE_Q = (
    SymFactor.build(num=[("c+1", "m"), ("c", "m")],
                    den=[("a+1", "k"), ("b+1", "l"),
                         ("c-a", "m-k"), ("c-b", "m-l")],
                    sign="m+1-k-l", x="-m", omx="m-k-l"),
    SymFactor.build(num=[("a", "1")], den=[("c-a", "1")],
                    sign="1", omx="2-l"),
    SymFactor.build(num=[("c+1", "m-1"), ("c-a-b-1", "m+1-k-l")],
                    den=[("c-a", "m-k"), ("c-b", "m-l")]),
    SymFactor.one(),
)

_BASE_R = (
    SymFactor.build(num=[("c+1", "m-1"), ("c", "m-1")],
                    den=[("a+1", "k-1"), ("b+1", "l-1"),
                         ("c-a", "m-k"), ("c-b", "m-l")],
                    sign="m-k-l", x="1-m", omx="m+1-k-l"),
    SymFactor.build(omx="-l"),
    SymFactor.build(num=[("c", "m"), ("c-a-b", "m-k-l")],
                    den=[("c-a", "m-k"), ("c-b", "m-l")]),
    SymFactor.one(),
)


def base_lambda(which: str, gen: int) -> SymFactor:
    """The printed factor for generator s0..s3 (Q) or s~0..s~3 (R)."""
    table = _BASE_Q if which == "Q" else _BASE_R
    return table[gen]


def cocycle_compose(which: str, lam1: SymFactor, sig1: GroupElement,
                    lam2: SymFactor) -> SymFactor:
    """lam for sig1*sig2 given lam1 = lam_{sig1} and lam2 = lam_{sig2}."""
    del which  # same law for both groups
    return lam1.mul(lam2.subst(sig1.inverse()))


_LAMBDA_CACHE: dict = {}
_LAMBDA_LOCK = threading.Lock()


def lambda_symfactor(which: str, element: GroupElement) -> SymFactor:
    """The symmetry factor of an element, by cocycle composition along its
    shortest generator word.  Raises if the element is outside the group."""
    tilde = which == "R"
    key = (which, element)
    with _LAMBDA_LOCK:
        cached = _LAMBDA_CACHE.get(key)
    if cached is not None:
        return cached
    word = canonical_word(element, tilde=tilde)
    lam = lambda_along_word(which, word).simplify()
    with _LAMBDA_LOCK:
        _LAMBDA_CACHE.setdefault(key, lam)
    return lam


def lambda_along_word(which: str, word) -> SymFactor:
    """Cocycle composition along an explicit generator-name word."""
    prefix = "s~" if which == "R" else "s"
    lam = SymFactor.one()
    acc = None
    for name in word:
        if isinstance(name, int) or name.isdigit():
            name = f"{prefix}{name}"
        idx = int(name.removeprefix(prefix))
        gen = generator(name)
        piece = base_lambda(which, idx) if idx <= 3 else \
            lambda_along_word(which, _EXPANSIONS[idx])
        if acc is None:
            lam, acc = piece, gen
        else:
            lam = lam.mul(piece.subst(acc.inverse()))
            acc = acc.compose(gen)
    return lam


_EXPANSIONS = {4: "1313", 5: "213132131"}


def expand_word_digits(word: str) -> str:
    """Rewrite digits 4 and 5 through their defining words over 0..3."""
    out = []
    for ch in word:
        out.append(_EXPANSIONS.get(int(ch), ch))
    return "".join(str(v) for v in out)


def lambda_for(which: str, element: GroupElement, shift) -> tuple[SymFactor, RatFunc]:
    """(structured factor, exact value at the shift) for a group element."""
    lam = lambda_symfactor(which, element)
    return lam, lam.expand(tuple(shift))


# -- symmetry verification -------------------------------------------------------

def _transformed_value(which: str, element: GroupElement, shift):
    """(sigma P)(z) = P(sigma^-1 z) in factored form, at a fixed shift."""
    inv = element.inverse()
    tshift = inv.apply_shift(shift)
    params = inv.params_at(shift)
    pair = ladder.qr_factored(tshift)
    value = pair[0] if which == "Q" else pair[1]
    return substitute_factored(value, params, inv.xmap)


def verify_with_factor(which: str, element: GroupElement, shift,
                       factor: SymFactor) -> bool:
    """Exact check of P(z) = factor(z) * P(element^-1 z)."""
    shift = tuple(shift)
    pair = ladder.qr_factored(shift)
    left = pair[0] if which == "Q" else pair[1]
    right = _transformed_value(which, element, shift)
    negate, scale, nums, dens = factor.expand_factored(shift)
    if scale is not None:
        nums = list(nums) + [(MultiPoly.const(scale), 1)]
    return factored_equal(left, right, extra_num=nums, extra_den=dens,
                          negate=negate)


def verify_symmetry(which: str, element: GroupElement, shift) -> bool:
    """P(z) = lam(z) * (element P)(z), exactly over Q(a,b,c,x)."""
    lam = lambda_symfactor(which, element)
    return verify_with_factor(which, element, shift, lam)


_VIDUNAS_FACTOR = SymFactor.build(
    num=[("c+1", "m-1"), ("c", "m+1")],
    den=[("a+1", "k"), ("b+1", "l"), ("c-a", "m-k"), ("c-b", "m-l")],
    sign="m+1-k-l", x="-m", omx="m-k-l")


def vidunas_identity(shift) -> bool:
    """Q(k,l,m) against Q(-k,-l,-m; a+k, b+l, c+m) with the printed factor."""
    return verify_with_factor("Q", generator("s0"), shift, _VIDUNAS_FACTOR)


# -- corollary tables --------------------------------------------------------------

@lru_cache(maxsize=None)
def _factor_tables() -> dict:
    return json.loads(resources.files("hyp3term.data")
                      .joinpath("factor_tables.json").read_text())


def _row_symfactor(row: dict, constants: dict) -> SymFactor:
    factor = SymFactor.build(num=row.get("num", ()), den=row.get("den", ()),
                             sign=row.get("sign", "0"), x=row.get("x", "0"),
                             omx=row.get("omx", "0"))
    name = row.get("const")
    if name:
        factor = factor.mul(constants[name])
    return factor


@lru_cache(maxsize=None)
def corollary_rows(which: str) -> tuple:
    """The 48 printed rows: (n, word, element, transcribed SymFactor)."""
    data = _factor_tables()[which]
    constants = {name: SymFactor.build(**spec)
                 for name, spec in data["constants"].items()}
    tilde = which == "R"
    prefix = "s~" if tilde else "s"
    rows = []
    for row in data["rows"]:
        elem = _word_to_element(row["word"], prefix)
        rows.append((row["n"], row["word"], elem,
                     _row_symfactor(row, constants)))
    return tuple(rows)


def _word_to_element(word: str, prefix: str) -> GroupElement:
    elem = None
    for ch in word:
        gen = generator(f"{prefix}{ch}")
        elem = gen if elem is None else elem.compose(gen)
    if elem is None:
        from .group import identity
        return identity()
    return elem


_GOLDEN_SHIFTS = ((0, 0, 0), (1, 1, 1), (2, -1, 0))


def corollary_table_check(which: str, rows=None,
                          shifts=_GOLDEN_SHIFTS) -> dict:
    """Regenerate the printed corollary factors and compare against the
    checked-in transcription: canonical (oriented Gamma-ledger) equality
    plus expansion equality at fixed shifts.

    A table row reads P(z) = factor * P(sigma_word z): the tuple is mapped
    by the word's element directly, so the factor is lam of its inverse.
    """
    results = []
    for n, word, elem, printed in corollary_rows(which):
        if rows is not None and n not in rows:
            continue
        regen = lambda_symfactor(which, elem.inverse())
        structural = regen.equivalent(printed)
        expansion = all(regen.expand(s) == printed.expand(s) for s in shifts)
        entry = {"row": n, "word": word, "structural_match": structural,
                 "expansion_match": expansion}
        if not (structural and expansion):
            entry["printed"] = printed.to_str()
            entry["regenerated"] = regen.to_str()
        results.append(entry)
    return {"which": which, "rows": results,
            "mismatches": [r for r in results
                           if not (r["structural_match"]
                                   and r["expansion_match"])],
            "pass": all(r["structural_match"] and r["expansion_match"]
                        for r in results)}


def corollary_tables(which: str):
    """48 regenerated rows of (word, SymFactor), in printed order.

    The factor attached to a word is lam of the inverse element, matching
    the table convention P(z) = factor * P(sigma_word z).
    """
    return [(word, lambda_symfactor(which, elem.inverse()))
            for _, word, elem, _ in corollary_rows(which)]
