"""Integer affine forms over the symbols a, b, c, k, l, m.

These encode everything the transformation groups act with: index maps
(forms in k, l, m), parameter maps (forms in a, b, c, k, l, m), Pochhammer
arguments, and the exponents of signs and of x and 1-x.  A form is a
coefficient vector plus a constant; all entries are integers.
"""

from __future__ import annotations

import re

SYMBOLS = ("a", "b", "c", "k", "l", "m")
_TERM_RE = re.compile(r"\s*([+-]?)\s*(\d+)?\s*([a-m]?)\s*")


class Affine:
    """Immutable n0 + n1*a + n2*b + n3*c + n4*k + n5*l + n6*m."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs=(0, 0, 0, 0, 0, 0), const=0):
        self.coeffs = tuple(int(v) for v in coeffs)
        self.const = int(const)

    @staticmethod
    def parse(text: str | int) -> "Affine":
        """Parse forms like 'm+1-k', 'c-a-1', '2-k', 'b+1-a+l-k', '-m'."""
        if isinstance(text, int):
            return Affine(const=text)
        coeffs = [0] * len(SYMBOLS)
        const = 0
        pos = 0
        text = text.strip()
        if not text:
            raise ValueError("empty affine form")
        while pos < len(text):
            match = _TERM_RE.match(text, pos)
            if not match or match.end() == pos:
                raise ValueError(f"cannot parse affine form {text!r} at {pos}")
            sign, digits, sym = match.groups()
            if not digits and not sym:
                raise ValueError(f"cannot parse affine form {text!r} at {pos}")
            value = int(digits) if digits else 1
            if sign == "-":
                value = -value
            if sym:
                coeffs[SYMBOLS.index(sym)] += value
            else:
                const += value
            pos = match.end()
        return Affine(coeffs, const)

    @staticmethod
    def sym(name: str) -> "Affine":
        coeffs = [0] * len(SYMBOLS)
        coeffs[SYMBOLS.index(name)] = 1
        return Affine(coeffs)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return Affine([u + v for u, v in zip(self.coeffs, other.coeffs)],
                      self.const + other.const)

    __radd__ = __add__

    def __neg__(self):
        return Affine([-v for v in self.coeffs], -self.const)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, scalar: int):
        return Affine([scalar * v for v in self.coeffs], scalar * self.const)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Affine) and self.coeffs == other.coeffs \
            and self.const == other.const

    def __hash__(self):
        return hash((self.coeffs, self.const))

    def __bool__(self):
        return self.const != 0 or any(self.coeffs)

    def key(self):
        return (self.coeffs, self.const)

    # -- structure -----------------------------------------------------------

    def is_index_form(self) -> bool:
        """True when only k, l, m (and the constant) appear."""
        return not any(self.coeffs[:3])

    def is_int(self) -> bool:
        return not any(self.coeffs)

    def as_int(self) -> int:
        if not self.is_int():
            raise ValueError(f"{self} is not constant")
        return self.const

    def mod2(self) -> "Affine":
        return Affine([v % 2 for v in self.coeffs], self.const % 2)

    def compose(self, mapping: dict) -> "Affine":
        """Substitute symbols by affine forms; missing symbols are unchanged."""
        result = Affine(const=self.const)
        for i, coeff in enumerate(self.coeffs):
            if coeff:
                replacement = mapping.get(SYMBOLS[i])
                if replacement is None:
                    replacement = Affine.sym(SYMBOLS[i])
                result = result + coeff * replacement
        return result

    def eval_shift(self, k: int, l: int, m: int) -> "Affine":
        """Fix the integers (k, l, m), leaving a form over a, b, c."""
        coeffs = list(self.coeffs)
        const = self.const + coeffs[3] * k + coeffs[4] * l + coeffs[5] * m
        coeffs[3] = coeffs[4] = coeffs[5] = 0
        return Affine(coeffs, const)

    def abc_tuple(self) -> tuple[int, int, int, int]:
        """(coeff_a, coeff_b, coeff_c, const) for a k,l,m-free form."""
        if any(self.coeffs[3:]):
            raise ValueError(f"{self} still contains k, l or m")
        return (*self.coeffs[:3], self.const)

    # -- rendering -----------------------------------------------------------

    def __str__(self) -> str:
        parts = []
        for name, coeff in zip(SYMBOLS, self.coeffs):
            if coeff == 0:
                continue
            if coeff == 1:
                parts.append(("+", name))
            elif coeff == -1:
                parts.append(("-", name))
            else:
                parts.append(("+" if coeff > 0 else "-", f"{abs(coeff)}{name}"))
        if self.const or not parts:
            parts.append(("+" if self.const >= 0 else "-", str(abs(self.const))))
        # positive terms first, e.g. "c - a" and "2 - k" over "-a + c"
        parts.sort(key=lambda sb: 0 if sb[0] == "+" else 1)
        out = ""
        for i, (sign, body) in enumerate(parts):
            if i == 0:
                out = body if sign == "+" else f"-{body}"
            else:
                out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Affine({self})"


def _coerce(value) -> Affine:
    if isinstance(value, Affine):
        return value
    if isinstance(value, int):
        return Affine(const=value)
    raise TypeError(f"cannot coerce {value!r} to Affine")


ZERO = Affine()
ONE = Affine(const=1)
