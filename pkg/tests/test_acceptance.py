"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line; the lines are also
repeated in pytest's terminal summary.  Run standalone with
``python tests/test_acceptance.py`` for just the ten lines.
"""

import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import naive_snf  # noqa: E402
from ordercomplex.cli import main as cli_main  # noqa: E402
from ordercomplex.fields import gf_make  # noqa: E402
from ordercomplex.groups import (  # noqa: E402
    build_pgl2,
    build_psl2,
    build_psl2_8_ext3,
    cyclic,
    elementary_abelian,
    quaternion,
    symmetric4,
)
from ordercomplex.homology import homology_of, order_complex, reduced_homology  # noqa: E402
from ordercomplex.lattice import all_subgroups  # noqa: E402
from ordercomplex.snf import SparseIntMatrix, smith_normal_form  # noqa: E402
from ordercomplex.topology import (  # noqa: E402
    certify_contractible,
    euler_check,
    hall_check,
    iterate_reductions,
    mobius,
    quillen_reduce,
)
from ordercomplex.verifier import ascending_link_census, classify_involutions, verify_theorem  # noqa: E402

RESULTS: list[str] = []


def report(number, title, ok, detail, seconds=None, budget=None):
    within = budget is None or seconds <= budget
    timing = "" if seconds is None else f" ({seconds:.1f}s" + (f", budget {budget}s)" if budget else ")")
    line = f"[{'PASS' if ok and within else 'FAIL'}] {number:>2}. {title}: {detail}{timing}"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert within, f"{line}: over budget"


@pytest.fixture(scope="module")
def theorem_q9():
    t = time.perf_counter()
    rep = verify_theorem(3, 1, seed=0)
    return rep, time.perf_counter() - t


def test_01_theorem_q9(theorem_q9):
    rep, secs = theorem_q9
    s = rep.stages
    bw = s["bjorner_walker"]
    direct = s["whole_complex"]["homology_direct"]
    ok = (rep.verdict == "contractible"
          and bw["complements"] == 36 and bw["antichain"] and bw["complements_equal_2B_subgroups"]
          and len(s["summands"]) == 36 and all(e["collapse"]["contractible"] for e in s["summands"])
          and not any(direct["betti"].values()) and direct["torsion"] == {}
          and s["mobius"]["mu_1_G"] == 0 and s["mobius"]["rota"]["passed"])
    detail = (f"verdict {rep.verdict}, {bw['complements']} complements (antichain {bw['antichain']}), "
              f"{sum(e['collapse']['contractible'] for e in s['summands'])} summand collapses, "
              f"whole-complex betti {list(direct['betti'].values())}, mu(1,G) = {s['mobius']['mu_1_G']}")
    report(1, "PGL2(9) contractible", ok, detail, secs, 15 * 60)


def test_02_census_q9():
    t = time.perf_counter()
    g = build_pgl2(gf_make(3, 2))
    l = all_subgroups(g)
    reduced, _ = quillen_reduce(l)
    _, b = classify_involutions(g)
    reports = [ascending_link_census(g, l, x, reduced) for x in sorted(b.member_indices)]
    counts = {tuple(r.counts[k] for k in ("D2(q+1)", "D2(q-1)", "Klein_2A1B2")) for r in reports}
    ok = counts == {(6, 5, 5)} and all(r.passed for r in reports) and len(reports) == 36 \
        and len({r.signature() for r in reports}) == 1
    report(2, "census (D20, D16, 2A1B2)", ok,
           f"{sorted(counts)} over {len(reports)} 2B elements, formulas {reports[0].expected}",
           time.perf_counter() - t)


def test_03_a5():
    t = time.perf_counter()
    g = build_psl2(gf_make(2, 2))
    l = all_subgroups(g)
    m = mobius(l)
    c = order_complex(l.proper_part())
    h = homology_of(c)
    chi = c.euler_characteristic()
    rota = euler_check(l, m, chi, strict=False)
    ok = h.nonzero() == {1: 60} and h.to_json()["torsion"] == {} and m[l.bottom] == -60 \
        and chi == -59 and rota.passed
    report(3, "PSL2(4) wedge of 60 circles", ok,
           f"betti {h.betti_list()}, torsion {h.to_json()['torsion']}, mu {m[l.bottom]}, chi {chi}",
           time.perf_counter() - t, 60)


def test_04_psl2_8_ext3():
    t = time.perf_counter()
    g = build_psl2_8_ext3()
    l = all_subgroups(g)
    m = mobius(l)
    c = order_complex(l.proper_part())
    t_mu = time.perf_counter() - t
    h = reduced_homology(c, collapse_first=True)
    ok = h.nonzero() == {2: 504} and h.to_json()["torsion"] == {} and m[l.bottom] == 504 \
        and g.socle.order == 504 and euler_check(l, m, c.euler_characteristic(), strict=False).passed
    report(4, "PSL2(8):3 wedge of 504 2-spheres", ok,
           f"betti {h.betti_list()}, torsion {h.to_json()['torsion']}, mu {m[l.bottom]}, "
           f"|G'| {g.socle.order}, lattice+mu {t_mu:.1f}s", time.perf_counter() - t, 60 * 60)


def test_05_example_suite():
    t = time.perf_counter()
    parts, ok = [], True
    for p in (2, 3, 5):
        lc = all_subgroups(cyclic(p * p))
        cc = order_complex(lc.proper_part())
        hp = all_subgroups(elementary_abelian(p))
        hh = homology_of(order_complex(hp.proper_part()))
        ok &= cc.is_point() and hh.nonzero() == {0: p}
        parts.append(f"C{p * p} point={cc.is_point()}, C{p}xC{p} betti0={hh.betti[0]}")
    report(5, "cyclic p^2 / elementary abelian p^2", ok, "; ".join(parts), time.perf_counter() - t)


def test_06_frattini():
    t = time.perf_counter()
    parts, ok = [], True
    for name, g in (("Q8", quaternion()), ("C4", cyclic(4)), ("C9", cyclic(9))):
        l = all_subgroups(g)
        cert = certify_contractible(l.proper_part())
        _, log = iterate_reductions(l.proper_part(), l)
        ok &= cert is not None and log.verdict == "contractible"
        parts.append(f"{name} {cert['method'] if cert else 'none'}")
    report(6, "nontrivial Frattini => contractible", ok, ", ".join(parts), time.perf_counter() - t)


def test_07_hall_vanishing():
    t = time.perf_counter()
    parts, ok = [], True
    groups = (("A5", build_psl2(gf_make(2, 2))), ("PGL2(9)", build_pgl2(gf_make(3, 2))),
              ("PSL2(8):3", build_psl2_8_ext3()), ("S4", symmetric4()), ("Q8", quaternion()))
    for name, g in groups:
        l = all_subgroups(g)
        chk = hall_check(l, mobius(l), quillen_reduce(l)[0], strict=False)
        ok &= chk.passed
        parts.append(f"{name} {chk.details['checked']} nodes")
    report(7, "Hall vanishing off maximal intersections", ok, ", ".join(parts), time.perf_counter() - t)


def test_08_reduction_invariance():
    t = time.perf_counter()
    parts, ok = [], True
    for name, g in (("A5", build_psl2(gf_make(2, 2))), ("S4", symmetric4())):
        l = all_subgroups(g)
        full = homology_of(order_complex(l.proper_part()))
        red = homology_of(order_complex(quillen_reduce(l)[0]))
        same = full.nonzero() == red.nonzero() and full.to_json()["torsion"] == red.to_json()["torsion"]
        ok &= same
        parts.append(f"{name} {full.nonzero()} vs {red.nonzero()}")
    report(8, "homology unchanged by reduction", ok, ", ".join(parts), time.perf_counter() - t)


def test_09_snf_oracle():
    t = time.perf_counter()
    rng = np.random.default_rng(20260)
    bad = 0
    for _ in range(500):
        r, c = rng.integers(1, 13, size=2)
        a = rng.integers(-5, 6, size=(r, c)).tolist()
        if smith_normal_form(SparseIntMatrix.from_dense(a))[0] != naive_snf(a):
            bad += 1
    report(9, "sparse SNF vs naive dense oracle", bad == 0, f"{500 - bad}/500 agree",
           time.perf_counter() - t, 60)


def test_10_determinism(tmp_path):
    t = time.perf_counter()
    paths = [tmp_path / f"run{i}.json" for i in (1, 2)]
    codes = [cli_main(["verify", "paper", "--p", "3", "--n", "1", "--seed", "0", "--out", str(p)])
             for p in paths]
    a, b = (p.read_bytes() for p in paths)
    ok = codes == [0, 0] and a == b and json.loads(a)["verdict"] == "contractible"
    report(10, "byte-identical reports", ok, f"exit codes {codes}, {len(a)} bytes, identical={a == b}",
           time.perf_counter() - t)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
