"""The six fractional-linear maps of x closed under composition.

These are the maps {x, x/(x-1), 1-x, (x-1)/x, 1/x, 1/(1-x)}, a group
isomorphic to S3.  Each is stored as an integer matrix (p, q, r, s) meaning
x -> (p*x + q)/(r*x + s); tags are indices into TAGS.  The composition table
is derived from matrix products and unit-tested elsewhere against direct
substitution into rational functions.
"""

from __future__ import annotations

TAGS = ("x", "x/(x-1)", "1-x", "(x-1)/x", "1/x", "1/(1-x)")

MATRICES = (
    (1, 0, 0, 1),    # x
    (1, 0, 1, -1),   # x/(x-1)
    (-1, 1, 0, 1),   # 1-x
    (1, -1, 1, 0),   # (x-1)/x
    (0, 1, 1, 0),    # 1/x
    (0, 1, -1, 1),   # 1/(1-x)
)

IDENTITY = 0


def tag_index(tag: str) -> int:
    return TAGS.index(tag)


def _norm(mat):
    p, q, r, s = mat
    for v in mat:
        if v != 0:
            if v < 0:
                return (-p, -q, -r, -s)
            return mat
    raise ValueError("zero matrix")


_BY_MATRIX = {_norm(m): i for i, m in enumerate(MATRICES)}


def _matmul(m1, m2):
    p1, q1, r1, s1 = m1
    p2, q2, r2, s2 = m2
    return (p1 * p2 + q1 * r2, p1 * q2 + q1 * s2,
            r1 * p2 + s1 * r2, r1 * q2 + s1 * s2)


def compose(t1: int, t2: int) -> int:
    """Tag of mu_[t1] after mu_[t2]:  x -> mu_[t1](mu_[t2](x))."""
    return _BY_MATRIX[_norm(_matmul(MATRICES[t1], MATRICES[t2]))]


def inverse(t: int) -> int:
    p, q, r, s = MATRICES[t]
    return _BY_MATRIX[_norm((s, -q, -r, p))]


COMPOSE_TABLE = tuple(tuple(compose(i, j) for j in range(6)) for i in range(6))

# Transport of the monomial x^p (1-x)^q under x -> mu(x), written as
# (-1)^(s1*p+s2*q) x^(a11*p+a12*q) (1-x)^(a21*p+a22*q).  Derived from
# mu = +-x^i(1-x)^j relations, e.g. x/(x-1) = -x/(1-x), 1 - x/(x-1) = 1/(1-x).
# Rows follow the TAGS order.
MONOMIAL_TRANSPORT = (
    ((0, 0), (1, 0), (0, 1)),     # x
    ((1, 0), (1, 0), (-1, -1)),   # x/(x-1)
    ((0, 0), (0, 1), (1, 0)),     # 1-x
    ((1, 0), (-1, -1), (1, 0)),   # (x-1)/x
    ((0, 1), (-1, -1), (0, 1)),   # 1/x
    ((0, 1), (0, 1), (-1, -1)),   # 1/(1-x)
)


def transport_monomial(t: int, p, q):
    """(sign_exponent, x_exponent, (1-x)_exponent) after substituting tag t.

    Works for ints and for any type supporting + and integer *, so affine
    exponent forms flow through unchanged.
    """
    (s1, s2), (a11, a12), (a21, a22) = MONOMIAL_TRANSPORT[t]
    return (s1 * p + s2 * q, a11 * p + a12 * q, a21 * p + a22 * q)
