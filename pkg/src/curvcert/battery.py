"""Seeded acceptance batteries.

Each battery returns a `CriterionResult`; the CLI `selfcheck`, the scripts and
the acceptance tests all go through here.  Instance seeds are derived from the
battery seed so any failing instance can be replayed on its own.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .curvature import decompose, higher_curvature_operator, weyl
from .errors import CertificateViolation
from .exterior import ExtOperator, Isometry, ScalarSpace, hodge_star_operator
from .generators import (
    chi_sigma,
    fubini_study_cp2,
    minkowski_fs_block,
    p1_integral,
    random_curvature,
    random_parity,
    verdict,
    weyl_of_petrov_type,
)
from .petrov import classify, pontryagin_vanishing_for_type
from .pontryagin import (
    F_pairing,
    F_pairing_permutation,
    higher_curvature_operator_expansion,
    pontryagin_form,
    pontryagin_form_det,
    pontryagin_form_op,
    pontryagin_product,
    sigma_poly,
    sigma_poly_signed_sum,
)
from .symmetry import EVEN, ODD, commutation_check, parity, reflection, vanishing_certificate, weyl_parity_descends


@dataclass(frozen=True)
class BatteryConfig:
    seed: int = 42
    route_count: int = 104        # tensors for the route and Weyl equalities
    cert_n4: int = 100            # per parity, alpha = (1)
    cert_n8: int = 25             # per parity, alpha = (2) and (1, 1)
    structural_count: int = 100   # commutation, descent, reconstruction
    minor_count: int = 50         # 5x5 matrices for the sigma oracle
    expansion_count: int = 6      # tensors per dimension for the basis-expansion oracle
    pairing_count: int = 6        # operator pairs for the F oracle
    jobs: int = 1


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    instances: int
    seconds: float
    detail: str = ""
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.name} ({self.instances} instances, {self.seconds:.1f}s){' - ' + self.detail if self.detail else ''}"


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _sub_seed(seed: int, tag: int, i: int) -> int:
    return seed * 1_000_003 + tag * 10_007 + i


def random_signature(n: int, rng: random.Random) -> tuple[int, ...]:
    q = rng.randint(0, n // 2)
    neg = set(rng.sample(range(n), q))
    return tuple(-1 if i in neg else 1 for i in range(n))


def random_axis(space: ScalarSpace, rng: random.Random) -> list[int]:
    while True:
        u = [rng.randint(-2, 2) for _ in range(space.n)]
        if space.inner(space.asarray(u), space.asarray(u)) != 0:
            return u


def random_reflection(space: ScalarSpace, rng: random.Random) -> Isometry:
    return reflection(space, random_axis(space, rng))


# --- criteria 1 and 2 ----------------------------------------------------------------

ROUTE_DIMENSIONS = (4, 5, 6, 8)


def _route_instance(seed: int) -> tuple[int, bool, bool]:
    rng = random.Random(seed)
    n = ROUTE_DIMENSIONS[seed % len(ROUTE_DIMENSIONS)]
    space = ScalarSpace(random_signature(n, rng))
    C = random_curvature(space, seed)
    W = weyl(C)
    route_ok = weyl_ok = True
    for k in (1, 2):
        if 4 * k > n:
            continue
        a = pontryagin_form_det(C, k)
        route_ok &= a == pontryagin_form_op(C, k)
        weyl_ok &= a == pontryagin_form_det(W, k)
    return seed, route_ok, weyl_ok


def route_and_weyl(cfg: BatteryConfig) -> tuple[CriterionResult, CriterionResult]:
    t0 = time.perf_counter()
    seeds = [_sub_seed(cfg.seed, 1, i) for i in range(cfg.route_count)]
    out = _map(_route_instance, seeds, cfg.jobs)
    dt = time.perf_counter() - t0
    bad_route = [s for s, r, _ in out if not r]
    bad_weyl = [s for s, _, w in out if not w]
    return (
        CriterionResult(1, "route equality det = op", not bad_route, len(out), dt, f"n in {ROUTE_DIMENSIONS}, k in (1, 2)", bad_route),
        CriterionResult(2, "Weyl equality varpi_k(C) = varpi_k(W)", not bad_weyl, len(out), dt, "same battery", bad_weyl),
    )


# --- criterion 3 -------------------------------------------------------------------------

def _cert_instance(args) -> tuple:
    seed, n, par = args
    rng = random.Random(seed)
    space = ScalarSpace(random_signature(n, rng))
    theta = random_reflection(space, rng)
    C = random_parity(space, theta, par, seed)
    alphas = [(1,)] if n == 4 else [(2,), (1, 1)]
    witnesses = []
    for alpha in alphas:
        try:
            cert = vanishing_certificate(C, theta, alpha)
            witnesses.append((alpha, cert.witness))
        except CertificateViolation as exc:
            witnesses.append((alpha, exc.certificate.witness))
    return seed, n, par, witnesses


def certificates(cfg: BatteryConfig) -> CriterionResult:
    t0 = time.perf_counter()
    jobs = []
    for par_tag, par in ((0, EVEN), (1, ODD)):
        jobs += [(_sub_seed(cfg.seed, 30 + par_tag, i), 4, par) for i in range(cfg.cert_n4)]
        jobs += [(_sub_seed(cfg.seed, 40 + par_tag, i), 8, par) for i in range(cfg.cert_n8)]
    out = _map(_cert_instance, jobs, cfg.jobs)
    bad = [(s, n, p, w) for s, n, p, ws in out for w in ws if w[1] != 0]
    certs = sum(len(ws) for *_, ws in out)
    detail = f"{cfg.cert_n4}+{cfg.cert_n4} in n=4, {cfg.cert_n8}+{cfg.cert_n8} in n=8 x 2 alphas; {certs} certificates"
    return CriterionResult(3, "vanishing certificates", not bad, len(out), time.perf_counter() - t0, detail, bad)


# --- criterion 4 -------------------------------------------------------------------------

def non_vacuity(cfg: BatteryConfig) -> CriterionResult:
    t0 = time.perf_counter()
    checks = {}
    FS = fubini_study_cp2()
    fs_det, fs_op = pontryagin_form_det(FS, 1), pontryagin_form_op(FS, 1)
    checks["FS varpi_1 != 0 (both routes)"] = fs_det == fs_op and fs_det.top_coefficient() != 0
    B = minkowski_fs_block()
    theta = reflection(B.space, [1] + [0] * 7)
    checks["block is PE for e_0"] = parity(B, theta) == EVEN
    checks["block varpi_1 != 0"] = not pontryagin_form(B, 1).is_zero()
    checks["block varpi_2 = 0"] = pontryagin_form(B, 2).top_coefficient() == 0
    checks["block varpi_1^2 = 0"] = pontryagin_product(B, (1, 1)).top_coefficient() == 0
    bad = [k for k, v in checks.items() if not v]
    detail = f"FS top coefficient (2 pi)^2 varpi_1 = {fs_det.top_coefficient()}"
    return CriterionResult(4, "non-vacuity control", not bad, len(checks), time.perf_counter() - t0, detail, bad)


# --- criterion 5 -------------------------------------------------------------------------

PETROV_CASES = (
    ("O", None, "allReal", True),
    ("N", None, "allReal", True),
    ("III", None, "allReal", True),
    ("I", (1, 2, -3), "allReal", True),
    ("I", ((0, 1), (0, 2), (0, -3)), "allImaginary", True),
    ("D", 1, "allReal", True),
    ("D", (0, 1), "allImaginary", True),
    ("II", 1, "allReal", True),
    ("II", (0, 1), "allImaginary", True),
    ("I", ((1, 1), 2, (-3, -1)), "generic", False),
)


def petrov_battery(cfg: BatteryConfig) -> CriterionResult:
    t0 = time.perf_counter()
    bad = []
    for ptype, data, subtype, applies in PETROV_CASES:
        W = weyl_of_petrov_type(ptype, data)
        rep = classify(W)
        res = pontryagin_vanishing_for_type(rep, W)
        ok = rep.type == ptype and rep.subtype == subtype and res.applicable == applies
        if applies:
            ok = ok and res.vanishes
        if not ok:
            bad.append((ptype, data, rep.type, rep.subtype, res))
    return CriterionResult(5, "Petrov battery", not bad, len(PETROV_CASES), time.perf_counter() - t0, "", bad)


# --- criterion 6 -------------------------------------------------------------------------

EXAMPLE_MANIFOLD = "T4#T4#CP2#CP2"


def topology(cfg: BatteryConfig) -> CriterionResult:
    t0 = time.perf_counter()
    chi, sig = chi_sigma(EXAMPLE_MANIFOLD)
    p1 = p1_integral(sig)
    v = verdict(chi, sig)
    ok = (chi, sig) == (0, 2) and p1 == 6 and v == "Lorentzian yes; globally PE/PM no"
    return CriterionResult(6, "topology integers", ok, 1, time.perf_counter() - t0, f"{EXAMPLE_MANIFOLD}: chi={chi}, sigma={sig}, int p1={p1}, {v}")


# --- criterion 7 -------------------------------------------------------------------------

def random_rational_matrix(rows: int, cols: int, rng: random.Random) -> np.ndarray:
    m = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            m[i, j] = Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3, 4)))
    return m


def appendix(cfg: BatteryConfig) -> CriterionResult:
    t0 = time.perf_counter()
    bad = []
    count = 0
    for i in range(cfg.minor_count):
        X = random_rational_matrix(5, 5, random.Random(_sub_seed(cfg.seed, 70, i)))
        for k in range(6):
            if sigma_poly(X, k) != sigma_poly_signed_sum(X, k):
                bad.append(("sigma", i, k))
        count += 1
    for n in (4, 5):
        for i in range(cfg.expansion_count):
            seed = _sub_seed(cfg.seed, 71 + n, i)
            space = ScalarSpace(random_signature(n, random.Random(seed)))
            C = random_curvature(space, seed)
            for k in (1, 2):
                if higher_curvature_operator(C, k) != higher_curvature_operator_expansion(C, k):
                    bad.append(("star", n, i, k))
            count += 1
    for i in range(cfg.pairing_count):
        rng = random.Random(_sub_seed(cfg.seed, 79, i))
        space = ScalarSpace(random_signature(4, rng))
        A = ExtOperator(space, 2, random_rational_matrix(6, 6, rng))
        B = ExtOperator(space, 2, random_rational_matrix(6, 6, rng))
        if F_pairing(A, B) != F_pairing_permutation(A, B):
            bad.append(("F", i))
        count += 1
    return CriterionResult(7, "appendix cross-checks", not bad, count, time.perf_counter() - t0, "sigma minors, star expansion, F pairing", bad)


# --- criterion 8 -------------------------------------------------------------------------

def _structural_instance(seed: int) -> tuple:
    rng = random.Random(seed)
    n = rng.choice((4, 5, 6))
    space = ScalarSpace(random_signature(n, rng))
    theta = random_reflection(space, rng)
    par = EVEN if seed % 2 == 0 else ODD
    C = random_parity(space, theta, par, seed)
    sign_ok = commutation_check(C, theta) == (1 if par == EVEN else -1)
    descent_ok = weyl_parity_descends(C, theta)
    D = random_curvature(ScalarSpace(random_signature(rng.choice((3, 4, 5, 6)), rng)), seed)
    dec = decompose(D)
    rec_ok = dec.reconstruct() == D and dec.parts()[0] + dec.parts()[1] + dec.parts()[2] == D
    return seed, sign_ok, descent_ok, rec_ok


def structural(cfg: BatteryConfig) -> CriterionResult:
    t0 = time.perf_counter()
    bad = []
    for t in range(4):
        for orientation in (1, -1):
            signs = tuple(-1 if i == t else 1 for i in range(4))
            sp = ScalarSpace(signs, orientation)
            star = hodge_star_operator(sp)
            if not (star @ star == -ExtOperator.identity(sp, 2) and star.adjoint() == star):
                bad.append(("star", signs, orientation))
    seeds = [_sub_seed(cfg.seed, 80, i) for i in range(cfg.structural_count)]
    for seed, s, d, r in _map(_structural_instance, seeds, cfg.jobs):
        if not (s and d and r):
            bad.append((seed, s, d, r))
    detail = "star in 4 placements x 2 orientations; commutation sign, parity descent, reconstruction"
    return CriterionResult(8, "structural identities", not bad, 8 + len(seeds), time.perf_counter() - t0, detail, bad)


def run_all(cfg: BatteryConfig | None = None, only: Iterable[int] | None = None) -> list[CriterionResult]:
    cfg = cfg or BatteryConfig()
    wanted = set(only) if only is not None else set(range(1, 9))
    results: list[CriterionResult] = []
    if wanted & {1, 2}:
        results += [r for r in route_and_weyl(cfg) if r.number in wanted]
    table = {3: certificates, 4: non_vacuity, 5: petrov_battery, 6: topology, 7: appendix, 8: structural}
    for num, fn in table.items():
        if num in wanted:
            results.append(fn(cfg))
    return results
