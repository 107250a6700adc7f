"""Verification suites tying the exact and numeric layers together.

Each suite returns a JSON-serializable report {"schema": 1, "suite": ...,
"checks": [...], "pass": bool}; failures carry up to ten counterexamples.
All suites are deterministic under a fixed seed.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import group, ladder, numerics, symmetry

SCHEMA_VERSION = 1

DEFAULT_SHIFTS_10 = (
    (0, 0, 0), (1, 1, 1), (2, 2, 2), (1, 0, 0), (0, 1, 0),
    (0, 0, 1), (-1, -1, -1), (2, -1, 0), (-2, 3, 1), (3, 3, -2),
)


@dataclass
class RunConfig:
    seed: int = 20240
    samples: int = 100
    precision: int = 50
    shift_set: tuple = DEFAULT_SHIFTS_10
    output_format: str = "text"
    jobs: int = 1

    def __post_init__(self):
        if self.precision < 30:
            raise ValueError("precision must be at least 30 digits")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")


def parse_shift_set(text: str, seed: int = 0) -> tuple:
    """'default10', 'default20', or an explicit 'k,l,m;k,l,m;...' list."""
    if text == "default10":
        return DEFAULT_SHIFTS_10
    if text == "default20":
        rng = random.Random(seed ^ 0x5F3759DF)
        extra = []
        while len(extra) < 10:
            cand = (rng.randint(-3, 4), rng.randint(-3, 4), rng.randint(-3, 4))
            if cand not in DEFAULT_SHIFTS_10 and cand not in extra:
                extra.append(cand)
        return DEFAULT_SHIFTS_10 + tuple(extra)
    shifts = []
    for chunk in text.split(";"):
        parts = [int(v) for v in chunk.split(",")]
        if len(parts) != 3:
            raise ValueError(f"bad shift triple {chunk!r}")
        shifts.append(tuple(parts))
    return tuple(shifts)


def _map_jobs(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _report(suite: str, checks: list, t0: float, extra=None) -> dict:
    rep = {"schema": SCHEMA_VERSION, "suite": suite, "checks": checks,
           "pass": all(c["pass"] for c in checks),
           "elapsed_seconds": round(time.time() - t0, 3)}
    if extra:
        rep.update(extra)
    return rep


# -- ladder ---------------------------------------------------------------------

def suite_ladder(config: RunConfig) -> dict:
    t0 = time.time()
    checks = []
    rng = random.Random(config.seed)

    # printed (2,2,2) coefficients
    from .ratfield import RatFunc, VAR_A as a, VAR_B as b, VAR_C as c, VAR_X as x
    one = RatFunc.one()
    qr = ladder.compute_qr((2, 2, 2))
    expected_q = -(c + one) * (c - (a + b + one) * x) \
        / ((a + one) * (b + one) * x * (one - x))
    expected_r = c * (c + one) / ((a + one) * (b + one) * x * (one - x))
    checks.append({"check": "printed (2,2,2) pair reproduced",
                   "pass": qr.Q == expected_q and qr.R == expected_r})

    # path independence on random shifts, two shuffled orders each
    failures = []
    for _ in range(10):
        shift = (rng.randint(-3, 4), rng.randint(-3, 4), rng.randint(-3, 4))
        moves = ladder.moves_for(shift)
        first = list(moves)
        second = list(moves)
        rng.shuffle(first)
        rng.shuffle(second)
        r0 = ladder.compute_rep(shift)
        r1 = ladder.rep_from_moves(first)
        r2 = ladder.rep_from_moves(second)
        if not (r0 == r1 == r2):
            failures.append({"shift": list(shift)})
    checks.append({"check": "path independence (10 random shifts, shuffled)",
                   "pass": not failures, "counterexamples": failures[:10]})

    # R = Q' on the full cube {-2..3}^3
    failures = []
    cube = [(k, l, m) for k in range(-2, 4) for l in range(-2, 4)
            for m in range(-2, 4)]
    results = _map_jobs(lambda s: (s, ladder.check_r_eq_qprime(s)), cube,
                        config.jobs)
    failures = [{"shift": list(s)} for s, ok in results if not ok]
    checks.append({"check": "R equals shifted Q' on {-2..3}^3 (216 shifts)",
                   "pass": not failures, "counterexamples": failures[:10]})

    # exact series residuals at random parameter points
    failures = []
    for shift in ((1, 1, 1), (2, -1, 0), (-2, 3, 1)):
        a0 = Fraction(rng.randint(1, 40), 7)
        b0 = Fraction(rng.randint(1, 40), 9)
        c0 = Fraction(rng.randint(1, 40), 11)
        if not ladder.rep_series_residual(shift, a0, b0, c0):
            failures.append({"shift": list(shift)})
    checks.append({"check": "truncated-series identity of computed reps",
                   "pass": not failures, "counterexamples": failures[:10]})
    return _report("ladder", checks, t0)


# -- symmetry sweeps ---------------------------------------------------------------

def _sym_sweep(which: str, config: RunConfig) -> dict:
    t0 = time.time()
    elements = sorted(group.group_Gt() if which == "R" else group.group_G(),
                      key=lambda e: (len(e.word), e.word))
    cases = [(elem, shift) for shift in config.shift_set for elem in elements]

    def run(case):
        elem, shift = case
        return (elem, shift, symmetry.verify_symmetry(which, elem, shift))

    results = _map_jobs(run, cases, config.jobs)
    failures = [{"word": "".join(w.removeprefix("s").removeprefix("~")
                                 for w in elem.word) or "Id",
                 "element": elem.describe(), "shift": list(shift)}
                for elem, shift, ok in results if not ok]
    checks = [{"check": f"exact symmetry of {which} under all 96 elements "
                        f"x {len(config.shift_set)} shifts",
               "cases": len(cases), "pass": not failures,
               "counterexamples": failures[:10]}]
    return _report(f"sym{which}", checks, t0)


def suite_symQ(config: RunConfig) -> dict:
    return _sym_sweep("Q", config)


def suite_symR(config: RunConfig) -> dict:
    return _sym_sweep("R", config)


# -- numeric suite -------------------------------------------------------------------

def suite_numeric(config: RunConfig) -> dict:
    t0 = time.time()
    checks = []
    P = config.precision
    rng = random.Random(config.seed)
    samples = numerics.sample_params(config.seed, config.samples)
    tol_3term = mpmath.mpf(10) ** (-(P - 10))
    tol_rel = mpmath.mpf(10) ** (-(P - 15))

    shifts = []
    while len(shifts) < 40:
        cand = (rng.randint(-2, 3), rng.randint(-2, 3), rng.randint(-2, 3))
        if cand not in shifts:
            shifts.append(cand)

    def residual_case(case):
        shift, sample = case
        return numerics.three_term_residual(shift, sample, P)

    cases = [(shift, sample) for shift in shifts for sample in samples]
    residuals = _map_jobs(residual_case, cases, config.jobs)
    worst = max(residuals)
    checks.append({"check": f"three-term residual on {len(samples)} samples "
                            f"x {len(shifts)} shifts at P={P}",
                   "max_residual": mpmath.nstr(worst, 8),
                   "tolerance": mpmath.nstr(tol_3term, 3),
                   "pass": bool(worst < tol_3term)})

    y5_cases = [(shift, sample) for shift in shifts[:8]
                for sample in samples[:10]]
    y5_residuals = [numerics.three_term_residual(s, p, P, family="y5")
                    for s, p in y5_cases]
    worst5 = max(y5_residuals)
    checks.append({"check": "same (Q,R) on the second-solution family",
                   "max_residual": mpmath.nstr(worst5, 8),
                   "tolerance": mpmath.nstr(tol_3term, 3),
                   "pass": bool(worst5 < tol_3term)})

    # q1 vs q2 and q1-derived Q vs ladder Q: 25 samples x 10 shifts
    q_samples = samples[:25] if len(samples) >= 25 else samples
    q_shifts = []
    while len(q_shifts) < 10:
        cand = (rng.randint(-1, 2), rng.randint(-1, 2), rng.randint(-1, 2))
        if cand not in q_shifts:
            q_shifts.append(cand)
    worst_qq = mpmath.mpf(0)
    worst_ql = mpmath.mpf(0)
    ctx = numerics.context(P)
    for shift in q_shifts:
        for sample in q_samples:
            q1 = numerics.q_via("q1", shift, sample, P)
            q2 = numerics.q_via("q2", shift, sample, P)
            worst_qq = max(worst_qq, abs(q1 - q2) / abs(q1))
            qv, _ = numerics.qr_at_sample(shift, sample)
            if qv != 0:
                q_ladder = numerics.to_mpf(ctx, qv)
                q_from = numerics.q_to_Q("q1", shift, sample, P)
                worst_ql = max(worst_ql,
                               abs(q_from - q_ladder) / abs(q_ladder))
    checks.append({"check": "q1 == q2 (25 samples x 10 shifts)",
                   "max_relative": mpmath.nstr(worst_qq, 8),
                   "tolerance": mpmath.nstr(tol_rel, 3),
                   "pass": bool(worst_qq < tol_rel)})
    checks.append({"check": "Q from q1 == ladder Q",
                   "max_relative": mpmath.nstr(worst_ql, 8),
                   "tolerance": mpmath.nstr(tol_rel, 3),
                   "pass": bool(worst_ql < tol_rel)})

    # Wronskian: direct vs closed form, and the symbolic ratio identity
    worst_w = mpmath.mpf(0)
    for sample in samples[:10]:
        direct, closed = numerics.wronskian(sample.a, sample.b, sample.c,
                                            sample.x, P)
        worst_w = max(worst_w, abs(direct - closed) / abs(closed))
    checks.append({"check": "Wronskian direct vs Gamma closed form (10 samples)",
                   "max_relative": mpmath.nstr(worst_w, 8),
                   "tolerance": mpmath.nstr(tol_rel, 3),
                   "pass": bool(worst_w < tol_rel)})
    ratio_shifts = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, -1, 3), (-2, 1, -1),
                    (1, 1, 1), (0, 0, 0), (3, -2, 2)]
    ratio_ok = all(numerics.wronskian_ratio_symbolic(s) for s in ratio_shifts)
    checks.append({"check": "Wronskian ratio matches the Pochhammer form "
                            "symbolically", "pass": ratio_ok})

    # five stand-alone identities on 10 samples
    id_failures = []
    for sample in samples[:10]:
        rep = numerics.identity_checks(sample, (2, 2, 2), P)
        if not rep["pass"]:
            id_failures.extend([c for c in rep["checks"] if not c["pass"]])
    checks.append({"check": "identity smoke tests (Pfaff, (0,1,1), "
                            "derivative, (2,2,2), swap) on 10 samples",
                   "pass": not id_failures,
                   "counterexamples": id_failures[:10]})
    return _report("numeric", checks, t0,
                   extra={"precision": P, "samples": len(samples)})


# -- golden tables ---------------------------------------------------------------------

def suite_tables(config: RunConfig) -> dict:
    t0 = time.time()
    checks = []
    structure = group.verify_structure()
    checks.append({"check": "group structure relations",
                   "pass": structure["pass"],
                   "counterexamples": [c for c in structure["checks"]
                                       if not c["pass"]][:10]})
    for which in ("G", "Gt"):
        rep = group.golden_table_check(which)
        checks.append({"check": f"printed action table {which} (48 rows)",
                       "pass": rep["pass"],
                       "discrepancies": rep["discrepancies"][:10]})
    for which in ("Q", "R"):
        rep = symmetry.corollary_table_check(which)
        checks.append({"check": f"printed corollary factors for {which} "
                                f"(48 rows)",
                       "pass": rep["pass"],
                       "discrepancies": rep["mismatches"][:10]})
    vid_ok = all(symmetry.vidunas_identity(s)
                 for s in ((0, 0, 0), (1, 1, 1), (2, 0, 1), (-1, 2, 1)))
    checks.append({"check": "Vidunas symmetry at four shifts", "pass": vid_ok})
    return _report("tables", checks, t0)


SUITES = {
    "ladder": suite_ladder,
    "symQ": suite_symQ,
    "symR": suite_symR,
    "numeric": suite_numeric,
    "tables": suite_tables,
}


def run_suites(names, config: RunConfig) -> dict:
    if "all" in names:
        names = list(SUITES)
    reports = [SUITES[name](config) for name in names]
    return {"schema": SCHEMA_VERSION, "suites": reports,
            "pass": all(r["pass"] for r in reports),
            "config": {"seed": config.seed, "samples": config.samples,
                       "precision": config.precision,
                       "shifts": [list(s) for s in config.shift_set],
                       "jobs": config.jobs}}
