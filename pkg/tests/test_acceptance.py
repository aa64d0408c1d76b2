"""Acceptance criteria 1-10; each test prints one PASS/FAIL line."""

import random
import time
from fractions import Fraction

from helpers import disguise, random_form
from kwkoszul.filtration import check_colon, verify_koszul_filtration, verify_structural_identities
from kwkoszul.homology import (ScrollMonoid, build_pair, connected_components, nonkoszul_witness,
                               relative_homology_dim, target_mu)
from kwkoszul.invariants import classify_scroll, hilbert_correction, koszul_verdict, regularity_formula
from kwkoszul.pencil import (J, KWForm, LinearForm, N, PencilError, S, blocks_to_matrix, coordinate_forms,
                             kw_normal_form, matrix_to_pencil, normal_form_of_matrix, scroll_matrix, section,
                             verify_certificate)
from kwkoszul.ringmodel import (groebner_check_degreewise, hilbert_function, koszul_betti_table, membership, poly_mul,
                                quotient_res_betti, regularity_from_betti, scroll_term_order, two_minors)


def report(k, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
    assert ok, detail


def fs(*names):
    return frozenset(names)


def test_criterion_01_worked_section():
    t = time.perf_counter()
    X = scroll_matrix([2, 4])
    Y = section(X, coordinate_forms(X, ["y2_3"]))
    F, cert = normal_form_of_matrix(Y)
    verified = verify_certificate(matrix_to_pencil(Y), F, cert)
    elapsed = time.perf_counter() - t
    jordan = [b for b in F.blocks if b.kind == "jordan"]
    ok = (list(F.scroll_lengths) == [2] and not F.nilpotent_lengths and [b.length for b in jordan] == [2, 2]
          and len({b.eigenvalue for b in jordan}) == 2 and verified and elapsed < 1)
    report(1, ok, f"{F} certificate={verified} in {elapsed:.3f}s")


def test_criterion_02_main_boundary():
    t = time.perf_counter()
    results = []
    for n in (1, 2):
        good = KWForm.of(N(2 * n), S(n))
        bad = KWForm.of(N(2 * n + 1), S(n))
        results.append(koszul_verdict(good) and verify_koszul_filtration(good, 4).ok)
        results.append(not koszul_verdict(bad) and nonkoszul_witness(2 * n + 1, n))
    elapsed = time.perf_counter() - t
    report(2, all(results) and elapsed < 120, f"checks={results} in {elapsed:.1f}s")


def test_criterion_03_homology_witness():
    t = time.perf_counter()
    pair = build_pair(ScrollMonoid(3, 1), target_mu(3, 1))
    comps = connected_components(pair.sub_faces())
    h1 = relative_homology_dim(pair, 1)
    X = scroll_matrix([1, 3])
    G = two_minors(section(X, coordinate_forms(X, ["y2_1", "y2_4"])))
    assert G.ring.n == 4
    b34 = quotient_res_betti(G.ring, G, 3, 4).get((3, 4), 0)
    elapsed = time.perf_counter() - t
    report(3, comps == 2 and h1 >= 1 and b34 >= 1 and elapsed < 60,
           f"components={comps} H1={h1} beta34={b34} in {elapsed:.1f}s")


HILBERT_CORPUS = [
    KWForm.of(N(2), S(1)), KWForm.of(N(3), S(1)), KWForm.of(N(4), S(1)), KWForm.of(N(5), S(1)),
    KWForm.of(N(3), S(2)), KWForm.of(N(4), S(2)), KWForm.of(N(5), S(2)), KWForm.of(N(2), S(3)),
    KWForm.of(N(2), N(3), S(1)), KWForm.of(N(2), N(2), S(2)), KWForm.of(N(3), S(1), S(1)),
    KWForm.of(N(2), S(1), S(2)), KWForm.of(N(3), S(1), J(1, 0)), KWForm.of(N(2), S(1), J(2, 1)),
    KWForm.of(N(4), J(2, 0)), KWForm.of(N(3), J(1, 0), J(1, 1)), KWForm.of(N(2), J(2, 0), J(1, 1)),
    KWForm.of(N(5), J(1, 1)), KWForm.of(N(3), N(3), J(1, 0)), KWForm.of(N(4), S(1), J(1, 1)),
    KWForm.of(N(2), S(2), J(1, 0), J(1, 1)), KWForm.of(S(2), J(2, 0)), KWForm.of(N(2), N(2), N(2), S(1)),
    KWForm.of(N(3), S(3)),
]


def test_criterion_04_hilbert_formula():
    bad = []
    for F in HILBERT_CORPUS:
        assert F.num_variables <= 8
        full = two_minors(blocks_to_matrix(F))
        rest = F.without_nilpotent()
        part = two_minors(blocks_to_matrix(rest)) if rest.blocks else None
        corr = hilbert_correction(F)
        for d in range(1, 6):
            hp = hilbert_function(part.ring, part, d) if part is not None else 0
            c = corr.coeffs[d] if d < len(corr.coeffs) else 0
            if hilbert_function(full.ring, full, d) - hp != c:
                bad.append((str(F), d))
    report(4, not bad and len(HILBERT_CORPUS) >= 20, f"{len(HILBERT_CORPUS)} sequences, mismatches={bad}")


def test_criterion_05_regularity():
    cases = [(KWForm.of(N(3), S(1)), 2), (KWForm.of(N(5), S(2)), 2), (KWForm.of(N(4), S(1)), 3),
             (KWForm.of(S(1), S(1)), 1), (KWForm.of(S(3)), 1), (KWForm.of(S(1), S(2)), 1)]
    bad = []
    for F, expected in cases:
        G = two_minors(blocks_to_matrix(F))
        table = koszul_betti_table(G.ring, G, 7, nmax=7, degmax=7)
        got = (regularity_formula(F), regularity_from_betti(table))
        if got != (expected, expected):
            bad.append((str(F), got))
    report(5, not bad, f"{len(cases)} forms, mismatches={bad}")


def test_criterion_06_groebner():
    forms = [KWForm.of(S(1), S(1)), KWForm.of(S(2), J(2, 0)), KWForm.of(J(2, 0), J(2, 1)),
             KWForm.of(S(1), J(1, 2)), KWForm.of(S(2), S(1)), KWForm.of(S(1), J(2, 1), J(1, 2)),
             KWForm.of(J(1, 0), J(1, 1), J(1, 2)), KWForm.of(S(3), J(1, 0)), KWForm.of(S(1), S(1), J(1, 1)),
             KWForm.of(J(3, 2), S(1)), KWForm.of(S(2), J(1, 0), J(1, 1))]
    bad = [str(F) for F in forms if not groebner_check_degreewise(blocks_to_matrix(F), scroll_term_order(F), 4).ok]
    report(6, not bad and len(forms) >= 10, f"{len(forms)} forms, failures={bad}")


def test_criterion_07_filtration_corpus():
    failures = []
    for F in (KWForm.of(N(2), S(1)), KWForm.of(N(3), S(2)), KWForm.of(N(4), S(2)), KWForm.of(J(2, 0), J(3, 1)),
              KWForm.of(N(4), S(2), J(2, 0), J(2, 1))):
        if not verify_koszul_filtration(F, 3).ok:
            failures.append(str(F))
    # the identities listed for the mixed example
    mixed = KWForm.of(N(4), S(2), J(2, 0), J(2, 1))
    M = frozenset(mixed.variables())
    z, u = fs("z1_1_1", "z1_1_2"), fs("z2_1_1", "z2_1_2")
    H3 = fs("x1_1", "x1_2", "x1_3")
    I10, I20 = H3 | {"y1_1"}, H3 | fs("y1_1", "y1_2")
    I21 = I20 | {"y1_3"}
    listed = [((), "x1_2", H3 | fs("y1_1", "y1_3") | z | u), (fs("x1_2"), "x1_1", M), (fs("x1_1", "x1_2"), "x1_3", M),
              (H3, "y1_1", H3), (I10, "y1_2", I20 | z | u), (I20, "y1_3", I20 | z | u), (I21, "z1_1_1", I21 | u)]
    for smaller, x, colon in listed:
        if not check_colon(mixed, frozenset(smaller), x, colon, 3).ok:
            failures.append(f"mixed {x}")
    # the two-Jordan example's listed identities
    tj = KWForm.of(J(2, 0), J(3, 1))
    Z, U = fs("z1_1_1", "z1_1_2"), fs("z2_1_1", "z2_1_2", "z2_1_3")
    T = Z | U
    for smaller, x, colon in [((), "z1_1_1", U), ((), "z2_1_1", Z), (fs("z1_1_1"), "z1_1_2", T),
                              (U | {"z1_1_1"}, "z1_1_2", T), (fs("z2_1_1"), "z2_1_2", T),
                              (Z | {"z2_1_1"}, "z2_1_2", T), (U, "z1_1_1", U), (Z, "z2_1_1", Z)]:
        if not check_colon(tj, frozenset(smaller), x, colon, 3).ok:
            failures.append(f"two-jordan {x}")
    report(7, not failures, f"failures={failures}")


def test_criterion_08_structural_identities():
    F = KWForm.of(N(3), S(2), J(2, 0), J(2, 1))
    rep = verify_structural_identities(F)
    G = two_minors(blocks_to_matrix(F))
    R = G.ring
    x2y1_vanishes = membership(poly_mul(R.var("x1_2"), R.var("y1_1")), G)
    report(8, rep.ok and not x2y1_vanishes,
           f"{len(rep.checks)} asserted identities ok={rep.ok}; x2*y1 in I2 = {x2y1_vanishes} (required: False)")


def test_criterion_09_classification():
    want = {
        (1, 1): {"strongly_koszul": True},
        (1, 2): {"balanced": True, "linearly_koszul": True, "ul_koszul": True, "universal_regularity": True,
                 "strongly_koszul": False},
        (1, 3): {"linearly_koszul": False},
        (2, 2, 2): {"ul_koszul": True, "universal_regularity": False},
        (1, 1, 1): {"balanced": True, "linearly_koszul": True, "strongly_koszul": True, "ul_koszul": True,
                    "universal_regularity": True},
        (1, 1, 2): {"ul_koszul": False, "linearly_koszul": True},
    }
    bad = []
    for T, preds in want.items():
        got = classify_scroll(T).to_json()
        bad += [(T, k) for k, v in preds.items() if got[k] != v]
    report(9, not bad, f"{len(want)} types, mismatches={bad}")


def test_criterion_10_property_suites():
    rng = random.Random(2024)
    failures = {"certificate": 0, "monotonicity": 0, "nilpotent_bound": 0}
    done = 0
    while done < 100:
        F = random_form(rng, max_vars=8)
        try:
            P = disguise(F, rng)
            G, cert = kw_normal_form(P)
        except PencilError:
            continue
        done += 1
        if G != F or not verify_certificate(P, G, cert):
            failures["certificate"] += 1
    done = 0
    while done < 50:
        T = sorted(rng.randint(1, 4) for _ in range(rng.randint(1, 3)))
        X = scroll_matrix(T)
        forms = [LinearForm(tuple(Fraction(rng.randint(-2, 2)) for _ in X.variables)) for _ in range(rng.randint(1, 2))]
        try:
            G, _ = normal_form_of_matrix(section(X, forms))
        except PencilError:
            continue
        done += 1
        if G.scroll_lengths and min(G.scroll_lengths) < T[0]:
            failures["monotonicity"] += 1
    done = 0
    while done < 50:
        T = sorted(rng.randint(1, 4) for _ in range(rng.randint(1, 3)))
        X = scroll_matrix(T)
        names = rng.sample(X.variables, rng.randint(1, max(1, min(3, X.n - 2))))
        try:
            G, _ = normal_form_of_matrix(section(X, coordinate_forms(X, names)))
        except PencilError:
            continue
        done += 1
        if any(m > T[-1] for m in G.nilpotent_lengths):
            failures["nilpotent_bound"] += 1
    report(10, not any(failures.values()), f"100/50/50 cases, failures={failures}")
