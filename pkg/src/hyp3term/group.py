"""The transformation groups acting on tuples (k, l, m; a, b, c; x).

Each element is an invertible map made of an integer affine index map in
(k, l, m), an integer affine parameter map in (a, b, c, k, l, m), and one of
the six fractional-linear maps of x.  Composition is substitution; equality
is equality of actions, never of words.  The two groups of interest are
G = <s0, s1, s2, s3> and its tau-conjugate; both have 96 elements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from . import moebius
from .affine import Affine

K, L, M = Affine.sym("k"), Affine.sym("l"), Affine.sym("m")
A, B, C = Affine.sym("a"), Affine.sym("b"), Affine.sym("c")

GENERATOR_NAMES = ("s0", "s1", "s2", "s3", "s4", "s5",
                   "s~0", "s~1", "s~2", "s~3", "s~4", "s~5", "tau")


@dataclass(frozen=True)
class GroupElement:
    """index: new (k, l, m); params: new (a, b, c); xmap: moebius tag."""

    index: tuple[Affine, Affine, Affine]
    params: tuple[Affine, Affine, Affine]
    xmap: int
    word: tuple[str, ...] = field(default=(), compare=False, hash=False)

    def __post_init__(self):
        for form in self.index:
            if not form.is_index_form():
                raise ValueError(f"index map {form} involves a, b or c")

    def compose(self, other: "GroupElement") -> "GroupElement":
        """self after other: (self*other)(z) = self(other(z))."""
        mapping = {"k": other.index[0], "l": other.index[1],
                   "m": other.index[2], "a": other.params[0],
                   "b": other.params[1], "c": other.params[2]}
        return GroupElement(
            index=tuple(f.compose(mapping) for f in self.index),
            params=tuple(f.compose(mapping) for f in self.params),
            xmap=moebius.compose(self.xmap, other.xmap),
            word=self.word + other.word,
        )

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.compose(other)

    def inverse(self) -> "GroupElement":
        idx_mat = [[f.coeffs[3 + j] for j in range(3)] for f in self.index]
        idx_const = [f.const for f in self.index]
        par_mat = [[f.coeffs[j] for j in range(3)] for f in self.params]
        par_idx = [[f.coeffs[3 + j] for j in range(3)] for f in self.params]
        par_const = [f.const for f in self.params]
        m_inv = _invert3(idx_mat)
        p_inv = _invert3(par_mat)
        # i = M^-1 (i' - v);  p = P^-1 (p' - N i - w)
        klm = (K, L, M)
        abc = (A, B, C)
        new_index = []
        for i in range(3):
            form = Affine()
            for j in range(3):
                form = form + m_inv[i][j] * (klm[j] - idx_const[j])
            new_index.append(form)
        new_params = []
        for i in range(3):
            inner = []
            for j in range(3):
                back = abc[j] - par_const[j]
                for t in range(3):
                    back = back - par_idx[j][t] * new_index[t]
                inner.append(back)
            form = Affine()
            for j in range(3):
                form = form + p_inv[i][j] * inner[j]
            new_params.append(form)
        return GroupElement(tuple(new_index), tuple(new_params),
                            moebius.inverse(self.xmap),
                            word=tuple(f"{w}^-1" for w in reversed(self.word)))

    def is_identity(self) -> bool:
        return self == identity()

    def apply_shift(self, shift: tuple[int, int, int]) -> tuple[int, int, int]:
        """Image of a concrete (k, l, m) under the index map."""
        k, l, m = shift
        return tuple(f.eval_shift(k, l, m).as_int() for f in self.index)

    def params_at(self, shift: tuple[int, int, int]):
        """Parameter map at a fixed shift, as three (ca, cb, cc, const) rows."""
        k, l, m = shift
        return tuple(f.eval_shift(k, l, m).abc_tuple() for f in self.params)

    def index_determinant(self) -> int:
        mat = [[f.coeffs[3 + j] for j in range(3)] for f in self.index]
        return _det3(mat)

    def changes_x(self) -> bool:
        return self.xmap != moebius.IDENTITY

    def to_json_dict(self) -> dict:
        return {
            "index": [[*f.coeffs[3:], f.const] for f in self.index],
            "params": [[*f.coeffs[:3], *f.coeffs[3:], f.const]
                       for f in self.params],
            "xmap": moebius.TAGS[self.xmap],
            "word": list(self.word),
        }

    def describe(self) -> str:
        idx = ", ".join(str(f) for f in self.index)
        par = ", ".join(str(f) for f in self.params)
        return f"({idx}; {par}; {moebius.TAGS[self.xmap]})"

    def __str__(self):
        return self.describe()


def _det3(m) -> int:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _invert3(m):
    det = _det3(m)
    if det not in (1, -1):
        raise ValueError(f"index/parameter matrix not invertible over Z: det={det}")
    cof = [[(m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3]
             - m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3])
            for i in range(3)] for j in range(3)]
    return [[cof[i][j] * det for j in range(3)] for i in range(3)]


def identity() -> GroupElement:
    return GroupElement((K, L, M), (A, B, C), moebius.IDENTITY, word=())


_GENERATORS = {
    "s0": ((-K, -L, -M), (A + K, B + L, C + M), "x"),
    "s1": ((M - K, L, M), (C - A, B, C), "x/(x-1)"),
    "s2": ((K, L, K + L - M), (A, B, A + B + 1 - C), "1-x"),
    "s3": ((L, K, M), (B, A, C), "x"),
    "s4": ((M - K, M - L, M), (C - A, C - B, C), "x"),
    "s5": ((-K, -L, -M), (1 - A, 1 - B, 2 - C), "x"),
    "tau": ((K + 1, L + 1, M + 1), (A - 1, B - 1, C - 1), "x"),
    "s~0": ((2 - K, 2 - L, 2 - M), (A + K - 1, B + L - 1, C + M - 1), "x"),
    "s~1": ((M + 1 - K, L, M), (C - A - 1, B, C), "x/(x-1)"),
    "s~2": ((K, L, K + L - M), (A, B, A + B + 1 - C), "1-x"),
    "s~3": ((L, K, M), (B, A, C), "x"),
    "s~4": ((M + 1 - K, M + 1 - L, M), (C - A - 1, C - B - 1, C), "x"),
    "s~5": ((2 - K, 2 - L, 2 - M), (-1 - A, -1 - B, -C), "x"),
}


@lru_cache(maxsize=None)
def generator(name: str) -> GroupElement:
    """One of s0..s5, s~0..s~5, tau, exactly as displayed in the source."""
    try:
        index, params, xtag = _GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown generator {name!r}") from None
    return GroupElement(index, params, moebius.tag_index(xtag), word=(name,))


def word_element(word: str, tilde: bool = False) -> GroupElement:
    """Element for a digit word like '1313'; composition is right-to-left,
    matching juxtaposition (the rightmost generator acts first)."""
    elem = identity()
    prefix = "s~" if tilde else "s"
    for ch in word:
        elem = elem.compose(generator(f"{prefix}{ch}"))
    return elem


def enumerate_group(generators, cap: int = 10000):
    """Breadth-first closure; returns {element: shortest word (tuple of names)}."""
    gens = list(generators)
    found: dict[GroupElement, tuple[str, ...]] = {identity(): ()}
    frontier = [identity()]
    while frontier:
        new_frontier = []
        for elem in frontier:
            for gen in gens:
                child = elem.compose(gen)
                if child not in found:
                    found[child] = found[elem] + gen.word
                    new_frontier.append(child)
                    if len(found) > cap:
                        raise RuntimeError(
                            f"group closure exceeded {cap} elements; "
                            "a generator is probably wrong")
        frontier = new_frontier
    return found


@lru_cache(maxsize=None)
def group_G() -> dict:
    return enumerate_group([generator(f"s{i}") for i in range(4)])


@lru_cache(maxsize=None)
def group_Gt() -> dict:
    return enumerate_group([generator(f"s~{i}") for i in range(4)])


def canonical_word(elem: GroupElement, tilde: bool = False) -> tuple[str, ...]:
    """Shortest generator word from the cached enumeration; raises if the
    element is not in the group."""
    table = group_Gt() if tilde else group_G()
    try:
        return table[elem]
    except KeyError:
        which = "G~" if tilde else "G"
        raise ValueError(f"element {elem} is not in {which}") from None


# -- structure verification ---------------------------------------------------

def verify_structure() -> dict:
    """Check every relation in the structure proposition, for G and its twin."""
    s = [generator(f"s{i}") for i in range(6)]
    st = [generator(f"s~{i}") for i in range(6)]
    tau = generator("tau")
    tau_inv = tau.inverse()
    checks = []

    def add(name, ok):
        checks.append({"relation": name, "pass": bool(ok)})

    add("s4 = s1 s3 s1 s3", s[4] == word_element("1313"))
    add("s5 = s2 s1 s3 s1 s3 s2 s1 s3 s1", s[5] == word_element("213132131"))
    for i in range(6):
        add(f"s{i}^2 = Id", (s[i] * s[i]).is_identity())
        add(f"s~{i}^2 = Id", (st[i] * st[i]).is_identity())
    for i in (1, 2, 3):
        add(f"s0 s{i} = s{i} s0", s[0] * s[i] == s[i] * s[0])
    add("s1 s3 = s3 s4 s1", s[1] * s[3] == s[3] * s[4] * s[1])
    for i in (4, 5):
        add(f"s1 s{i} = s{i} s1", s[1] * s[i] == s[i] * s[1])
    for i in (3, 5):
        add(f"s2 s{i} = s{i} s2", s[2] * s[i] == s[i] * s[2])
    add("s2 s4 = s3 s4 s5 s2", s[2] * s[4] == s[3] * s[4] * s[5] * s[2])
    add("s1 s2 = s2 s1 s2 s1", s[1] * s[2] == s[2] * s[1] * s[2] * s[1])
    for i in (3, 4, 5):
        for j in (3, 4, 5):
            if i < j:
                add(f"s{i} s{j} = s{j} s{i}", s[i] * s[j] == s[j] * s[i])

    h_sub = enumerate_group([s[1], s[2]])
    n_sub = enumerate_group([s[3], s[4], s[5]])
    add("|<s1,s2>| = 6", len(h_sub) == 6)
    add("|<s3,s4,s5>| = 8", len(n_sub) == 8)
    inter = set(h_sub) & set(n_sub)
    add("H intersect N = {Id}", inter == {identity()})
    add("H \\ {Id} all change x",
        all(e.changes_x() for e in h_sub if not e.is_identity()))
    add("N fixes x", all(not e.changes_x() for e in n_sub))

    g_all = group_G()
    gt_all = group_Gt()
    add("|G| = 96", len(g_all) == 96)
    add("|G~| = 96", len(gt_all) == 96)
    for i in range(6):
        add(f"s~{i} = tau s{i} tau^-1", st[i] == tau * s[i] * tau_inv)
    conj = {tau * e * tau_inv for e in g_all}
    add("tau G tau^-1 = G~ (bijection)",
        conj == set(gt_all) and len(conj) == 96)
    add("index determinants are +-1",
        all(e.index_determinant() in (1, -1) for e in g_all)
        and all(e.index_determinant() in (1, -1) for e in gt_all))
    add("x-maps stay in the six-element set",
        all(0 <= e.xmap < 6 for e in g_all))

    return {"checks": checks, "pass": all(ch["pass"] for ch in checks),
            "order_G": len(g_all), "order_Gt": len(gt_all)}


# -- golden action tables ------------------------------------------------------

def _load_table(which: str) -> list[dict]:
    data = json.loads(resources.files("hyp3term.data")
                      .joinpath("group_tables.json").read_text())
    return data[which]


def _parse_printed(row: dict) -> GroupElement:
    return GroupElement(
        index=tuple(Affine.parse(t) for t in row["idx"]),
        params=tuple(Affine.parse(t) for t in row["par"]),
        xmap=moebius.tag_index(row["x"]),
    )


def golden_table_check(which: str = "G") -> dict:
    """Compare the printed 48-row action table against composed words.

    Discrepancies are reported verbatim, never corrected; the composed
    action is authoritative downstream.
    """
    tilde = which in ("Gt", "G~")
    rows = _load_table("Gt" if tilde else "G")
    s3 = generator("s~3" if tilde else "s3")
    table = group_Gt() if tilde else group_G()
    seen = set()
    results = []
    for row in rows:
        composed = word_element(row["word"], tilde=tilde)
        printed = _parse_printed(row)
        ok_action = composed == printed
        primed = composed * s3
        ok_prime = word_element(row["wordp"], tilde=tilde) == primed
        seen.add(composed)
        seen.add(primed)
        entry = {"row": row["n"], "word": row["word"],
                 "action_matches": ok_action,
                 "sigma3_column_matches": ok_prime}
        if not ok_action:
            entry["printed"] = printed.describe()
            entry["computed"] = composed.describe()
        results.append(entry)
    covers = seen == set(table)
    return {
        "which": "Gt" if tilde else "G",
        "rows": results,
        "covers_group": covers,
        "discrepancies": [r for r in results
                          if not (r["action_matches"]
                                  and r["sigma3_column_matches"])],
        "pass": covers and all(r["action_matches"] and r["sigma3_column_matches"]
                               for r in results),
    }
