"""The acceptance suite: each criterion is an exact finite check with a time limit.

``verify_suite`` runs them all and returns one record per criterion; the CLI
prints them and exits 3 when any criterion fails.
"""
from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .cache import BallCache, cache_dir
from .graphs import FiniteGraph, QuotientMap
from .lattice import PositiveRational, QPlusLattice
from .localstructure import build_exhaustion, exhaustion_factors, local_simple_content, quotient_degree_check
from .models import BMUniversal, DirectedTree, EndStab, FullAut, ProductWithFinite
from .modular import arc_labelling, md_lower_bound_modular, path_delta, random_walk_between
from .oracles import point_stabilizer_factors
from .perm import DEFAULT_ORDER_BOUND, OrderBoundExceeded, PermGroup, dihedral, from_cycles, named_group
from .propertyz import arc_fibre_transitivity_check, verify_z_morphism, z_morphism
from .report import RunConfig, run_report
from .scale import orbit_growth, quotient_scale_check, scale_estimate, tidy_coprime_certificate
from .trees import TypedTranslation, WordMap


@dataclass
class CriterionResult:
    id: int
    name: str
    status: str            # "pass" | "fail" | "skip"
    seconds: float
    limit: float | None
    detail: str

    def line(self) -> str:
        lim = f" (limit {self.limit:g} s)" if self.limit else ""
        return f"[{self.status.upper()}] {self.id:>2} {self.name}: {self.seconds:.2f} s{lim} - {self.detail}"


@dataclass
class SuiteConfig:
    order_bound: int = DEFAULT_ORDER_BOUND
    cache: str | None = None
    seed: int = 0


def _ball(m, r, cfg):
    d = cache_dir(cfg.cache)
    return BallCache(d).ball(m, r) if d else m.canonical_cayley_abels(r)


# -- criteria: each returns (ok, detail) -------------------------------------------

def c1_regular_tree_md(cfg):
    got = {}
    ok = True
    for d in (3, 4, 5, 6, 7):
        res = run_report(RunConfig({"family": "full_aut", "d": d}, order_bound=cfg.order_bound), "md-bounds")["result"]
        got[d] = (res["lower"], res["upper"], res["verdict"])
        if d == 5:
            ok &= (res["lower"], res["upper"], res["verdict"]) == (4, 5, "inconclusive")
            ok &= any(n.startswith("md = 5") for n in res["notes"])
        else:
            ok &= (res["lower"], res["upper"], res["verdict"]) == (d, d, f"md = {d}")
    return ok, "; ".join(f"d={d}: {lo}..{hi} {v}" for d, (lo, hi, v) in got.items())


def c2_end_stabilizers(cfg):
    out, ok = [], True
    for d, d2 in ((3, 2), (3, 3), (4, 3)):
        k = (d - 1) * (d2 - 1)
        m = EndStab(d, d2)
        H = QPlusLattice.generated_by(arc_labelling(m, _ball(m, 2, cfg)).labels.values())
        want = QPlusLattice.generated_by([PositiveRational(1, k)])
        res = run_report(RunConfig({"family": "end_stab", "d": d, "d2": d2}, order_bound=cfg.order_bound),
                         "md-bounds")["result"]
        ok &= H == want and res["verdict"] == f"md = {k + 1}"
        out.append(f"({d},{d2}): image {[str(g) for g in H.basis_rationals()]}, {res['verdict']}")
    return ok, "; ".join(out)


def c3_min_cost(cfg):
    rng = random.Random(cfg.seed)
    pairs = set()
    while len(pairs) < 20:
        s = rng.randint(3, 30)
        p = rng.randint(1, s - 1)
        if math.gcd(p, s - p) == 1:
            pairs.add((p, s - p))
    bad = []
    for p, q in sorted(pairs):
        v = md_lower_bound_modular(QPlusLattice.generated_by([PositiveRational(p, q)])).value
        if v != p + q:
            bad.append((p, q, v))
    v23 = md_lower_bound_modular(QPlusLattice.generated_by([2, 3])).value
    v6 = md_lower_bound_modular(QPlusLattice.generated_by([6])).value
    ok = not bad and v23 == 7 and v6 == 7
    return ok, f"20 pairs, mismatches {bad}; <2,3> -> {v23}; <6> -> {v6}"


def c4_path_independence(cfg):
    rng = random.Random(cfg.seed)
    out, ok = [], True
    for m in (EndStab(3, 3), DirectedTree.red_blue(2, 3)):
        ball = _ball(m, 5, cfg)
        lab = arc_labelling(m, ball)
        disagree = 0
        for _ in range(1000):
            a, b = rng.randrange(ball.n), rng.randrange(ball.n)
            w1 = random_walk_between(ball, a, b, rng)
            w2 = random_walk_between(ball, a, b, rng)
            disagree += path_delta(lab, w1) != path_delta(lab, w2)
        ok &= disagree == 0
        out.append(f"{type(m).__name__}{tuple(m.params().values())}: {ball.n} vertices, {disagree}/1000 disagree")
    return ok, "; ".join(out)


def c5_scale_full_aut(cfg):
    out, ok = [], True
    N = 5
    for d in (3, 4, 5):
        m = FullAut(d)
        for l in (1, 2):
            s = orbit_growth(m, WordMap.translation(d, l), None, N)
            closed = (1,) + tuple(d * (d - 1) ** (n * l - 1) for n in range(1, N + 1))
            est = scale_estimate(s)
            ok &= s.sizes == closed and est.converged and not est.heuristic and est.value == (d - 1) ** l
            out.append(f"d={d} l={l}: s={est.value}")
    return ok, ", ".join(out)


def c6_tidy_coprime(cfg):
    out, ok = [], True
    for p, q in ((3, 2), (5, 2), (4, 3)):
        m = DirectedTree.out_in(p, q)
        cert = tidy_coprime_certificate(m, TypedTranslation(m.tree, (("out", "arc"),)))
        ok &= cert.coprime and cert.scale == p
        for s in range(1, 5):
            rep = arc_fibre_transitivity_check(m, s)
            ok &= len(rep.fibres) == 1 and rep.fibres[0].arcs == p ** s and rep.fibres[0].orbits == 1
        out.append(f"({p},{q}): s={cert.scale}, fibres p^s in 1 orbit")
    return ok, "; ".join(out)


def _unions(m, r, cfg):
    res = []
    for order in ("bfs", "reverse"):
        e = build_exhaustion(m.canonical_cayley_abels(r), order)
        total: dict = {}
        for s in exhaustion_factors(m, e, order_bound=cfg.order_bound):
            for k, v in s.factors.items():
                total[k] = total.get(k, 0) + v
        res.append((e, total))
    return res


def c7_jordan_holder(cfg):
    cases = [(FullAut(3), 3), (FullAut(4), 3), (FullAut(6), 3), (BMUniversal(named_group("S5"), "S5"), 3),
             (BMUniversal(named_group("A4"), "A4"), 3), (BMUniversal(dihedral(5), "D5"), 3)]
    out, ok = [], True
    for m, r in cases:
        (e1, u1), (e2, u2) = _unions(m, r, cfg)
        distinct = e1.base_order != e2.base_order
        ok &= distinct and u1 == u2
        out.append(f"{m.params()} r={r}: {sum(u1.values())} factors, equal={u1 == u2}")
    return ok, "; ".join(out)


def c8_uf_local_simple_content(cfg):
    groups = [("S4", PermGroup.symmetric(4)), ("A4", named_group("A4")), ("D4", dihedral(4)),
              ("S5", named_group("S5")), ("A5", PermGroup.alternating(5))]
    out, ok = [], True
    for name, F in groups:
        rep = local_simple_content(BMUniversal(F, name), depth=3, order_bound=cfg.order_bound)
        oracle = set(point_stabilizer_factors(F.generators, F.degree))
        ok &= set(rep.stable_factors) == oracle
        out.append(f"{name}: {sorted(map(str, rep.stable_factors))}")
    return ok, "; ".join(out)


def c9_property_z(cfg):
    m = DirectedTree.red_blue(2, 3)
    fib = {}
    for r in (3, 5):
        ball = _ball(m, r, cfg)
        chk = verify_z_morphism(z_morphism(m, ball), ball)
        fib[r] = chk.base_fibre
    ok = chk.is_morphism and chk.collapse_is_property_z and chk.bipartite and fib[5] > fib[3]
    return ok, (f"r=5 morphism={chk.is_morphism} collapse={chk.collapse_is_property_z} "
                f"bipartite={chk.bipartite}; base fibre {fib[3]} -> {fib[5]}")


def _random_circulant(rng):
    while True:
        n = rng.randint(5, 30)
        S = sorted(set(rng.sample(range(1, n // 2 + 1), rng.randint(1, min(3, n // 2)))))
        if math.gcd(n, *S) == 1:
            break
    edges = {tuple(sorted((i, (i + s) % n))) for i in range(n) for s in S}
    divs = [k for k in range(1, n) if n % k == 0]
    k = rng.choice(divs)           # rotation subgroup generated by i -> i + k
    return n, S, k, FiniteGraph.from_edges(n, sorted(edges)), QuotientMap.from_labels([i % k for i in range(n)])


def c10_quotient_degree(cfg):
    rng = random.Random(cfg.seed)
    eq = ineq_bad = mismatch = 0
    for _ in range(100):
        n, S, k, g, q = _random_circulant(rng)
        res = quotient_degree_check(g, q)
        if res.degree_after > res.degree_before:
            ineq_bad += 1
        if res.equal != (res.witness is None):
            mismatch += 1
        eq += res.equal
    ok = ineq_bad == 0 and mismatch == 0
    return ok, f"100 graphs, {eq} with equality, inequality violations {ineq_bad}, mismatches {mismatch}"


def c11_scale_quotient(cfg):
    m = ProductWithFinite(FullAut(3), PermGroup.cyclic(2))
    out, ok = [], True
    for f in ((0, 1), (1, 0)):
        res = quotient_scale_check(m, WordMap.translation(3, 1), f, N=5)
        ok &= res.s_base.converged and res.s_quotient.converged and res.s_base.value == res.s_quotient.value == 2
        out.append(f"f={f}: {res.s_base.value} and {res.s_quotient.value}")
    return ok, "; ".join(out)


CRITERIA = [
    (1, "regular-tree md bounds", c1_regular_tree_md, 5.0, True),
    (2, "end stabilizer modular image and md", c2_end_stabilizers, 2.0, True),
    (3, "least generating cost", c3_min_cost, 10.0, False),
    (4, "modular path independence", c4_path_independence, None, False),
    (5, "scale of full-tree translations", c5_scale_full_aut, 5.0, False),
    (6, "coprime tidy certificates and arc fibres", c6_tidy_coprime, None, False),
    (7, "Jordan-Holder stability of exhaustions", c7_jordan_holder, None, True),
    (8, "local simple content of U(F)", c8_uf_local_simple_content, None, True),
    (9, "property Z on the red-blue tree", c9_property_z, None, False),
    (10, "quotient degree on circulants", c10_quotient_degree, None, False),
    (11, "scale modulo a compact kernel", c11_scale_quotient, None, False),
]


def run_criterion(cid: int, cfg: SuiteConfig) -> CriterionResult:
    _, name, fn, limit, uses_factors = next(c for c in CRITERIA if c[0] == cid)
    t = time.perf_counter()
    try:
        ok, detail = fn(cfg)
        status = "pass" if ok else "fail"
    except OrderBoundExceeded as exc:
        status, detail = ("skip", f"order bound {cfg.order_bound} too small: {exc}") if uses_factors \
            else ("fail", str(exc))
    except Exception as exc:       # a crash is a failed criterion, not a crashed suite
        status, detail = "fail", f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t
    if status == "pass" and limit is not None and dt > limit:
        status, detail = "fail", f"{detail} (took {dt:.2f} s, limit {limit} s)"
    return CriterionResult(cid, name, status, dt, limit, detail)


def verify_suite(cfg: SuiteConfig | None = None, only: list[int] | None = None, jobs: int = 1) -> dict:
    cfg = cfg or SuiteConfig()
    ids = [c[0] for c in CRITERIA if only is None or c[0] in only]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(run_criterion, ids, [cfg] * len(ids)))
    else:
        results = [run_criterion(i, cfg) for i in ids]
    results.sort(key=lambda r: r.id)
    return {"passed": all(r.status != "fail" for r in results),
            "counts": {s: sum(r.status == s for r in results) for s in ("pass", "fail", "skip")},
            "criteria": [asdict(r) for r in results]}


def summary_lines(suite: dict) -> list[str]:
    lines = [CriterionResult(**c).line() for c in suite["criteria"]]
    c = suite["counts"]
    lines.append(f"{c['pass']} passed, {c['fail']} failed, {c['skip']} skipped")
    return lines
