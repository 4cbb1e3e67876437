"""The package's acceptance gauntlet.

Eleven independent checks, each returning a CriterionResult with exact or
statistical details.  run_all() is what the `report` subcommand emits; the
test suite runs the same functions one per test.  Everything here is a pure
function of (seed, jobs), so reports are byte-identical across runs.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import groups, montecarlo, rng, spectral, symbolic
from .groups import F2, Z2
from .homoclinic import Configuration, four_cover_lift, kernel, phi_exact, phi_windowed
from .montecarlo import ExperimentConfig
from .ring import PolyF, RingElement, parse_ring_element
from .symbolic import BoundaryOverflow

DEFAULT_SEED = 20260815


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: dict

    def to_json_dict(self):
        return {"number": self.number, "name": self.name,
                "passed": self.passed, "details": self.details}


def criterion_01(seed=DEFAULT_SEED, jobs=1):
    """Local pattern counts of the difference SFT."""
    wide = symbolic.allowed_patterns(3, 2)
    narrow = {M: symbolic.allowed_patterns(M, 1).allowed for M in (3, 4, 5, 6, 7)}
    counts_ok = len(wide.allowed) == 41 and all(
        len(s) == 15 for s in narrow.values())
    same_ok = all(s == narrow[3] for s in narrow.values())
    return CriterionResult(
        1, "pattern counts",
        counts_ok and same_ok,
        {"wide_count": len(wide.allowed),
         "narrow_counts": {str(M): len(s) for M, s in narrow.items()},
         "narrow_identical": same_ok})


def criterion_02(seed=DEFAULT_SEED, jobs=1):
    """Forced completions of partially specified patterns."""
    wide = symbolic.allowed_patterns(3, 2)
    narrow = symbolic.allowed_patterns(3, 1)
    top = symbolic.pattern_completions(wide, 2)
    mid = symbolic.pattern_completions(narrow, 1)
    ok = top == [(2, 2, 2)] and mid == [(1, 0, 1), (1, 1, 0), (1, 1, 1)]
    return CriterionResult(
        2, "pattern completions", ok,
        {"k2_completions": [list(t) for t in top],
         "k1_completions": [list(t) for t in mid]})


def criterion_03(seed=DEFAULT_SEED, jobs=1):
    """Kernel l1 mass: exact partial sums and the closed-form full norm."""
    k3 = kernel(3, F2)
    k3z = kernel(3, Z2)
    partials_ok = all(
        k.partial_l1(n) == 1 - Fraction(2, 3) ** (n + 1)
        for k in (k3, k3z) for n in range(31))
    k5 = kernel(5, F2)
    full_ok = k5.full_l1 == Fraction(1, 3) and kernel(5, Z2).full_l1 == Fraction(1, 3)
    return CriterionResult(
        3, "kernel l1 mass", partials_ok and full_ok,
        {"partials_checked": 31, "partials_ok": partials_ok,
         "full_norm_M5": str(k5.full_l1)})


def criterion_04(seed=DEFAULT_SEED, jobs=1):
    """Tree counts, closure/boundary laws, and the cylinder partition mass."""
    count_ok = all(
        len(symbolic.enumerate_trees(n)) == symbolic.catalan(n)
        for n in range(11))
    laws_ok = True
    for n in range(11):
        for t in symbolic.enumerate_trees(n):
            closure = t.closure()
            if len(closure) != 2 * t.size + 1:
                laws_ok = False
            if len(t.boundary()) != t.size + 1:
                laws_ok = False
    mass = symbolic.partition_mass(30)
    mass_ok = 1 - Fraction(1, 10 ** 6) < mass <= 1
    return CriterionResult(
        4, "tree combinatorics", count_ok and laws_ok and mass_ok,
        {"counts_ok": count_ok, "laws_ok": laws_ok,
         "partition_mass_30": float(mass),
         "partition_mass_30_shortfall": float(1 - mass),
         "mass_in_gate": mass_ok})


def criterion_05(seed=DEFAULT_SEED, jobs=1):
    """Exact conservation of both reduction machines: the output differs
    from the input by a convolution with f-star, and stays in-alphabet."""
    runs_each = 500
    identity_ok = True
    alphabet_ok = True
    completed = 0
    overflow = 0

    for i in range(runs_each):
        M = 3 if i % 2 == 0 else 4
        f = PolyF.standard(M, F2)
        window = groups.ball(F2, 3)
        ids = rng.element_ids(F2, window)
        vals = rng.symbols(seed, i, ids, M + 1)
        d = Configuration(F2, {s: int(v) for s, v in zip(window, vals)}, (0, M))
        res = symbolic.reduce_cover(d, M)
        din = d.as_ring()
        dout = res.config.as_ring() + RingElement(
            F2, {s: Fraction(v) for s, v in res.spill.items()})
        if dout - din != -(res.carry * f.star_ring()):
            identity_ok = False
        if any(not 0 <= v <= M - 1 for v in res.config.values.values()):
            alphabet_ok = False
        completed += 1

    neg_window = groups.negative_monoid(F2, 6)
    neg_ids = rng.element_ids(F2, neg_window)
    i = 0
    done = 0
    while done < runs_each and i < 4 * runs_each:
        M = 3 if i % 2 == 0 else 4
        f = PolyF.standard(M, F2)
        vals = rng.symbols(seed, runs_each + i, neg_ids, M)
        d = Configuration(F2, {s: int(v) for s, v in zip(neg_window, vals)},
                          (0, M - 1))
        i += 1
        try:
            res = symbolic.carry_add(d, "", M)
        except BoundaryOverflow:
            overflow += 1
            continue
        done += 1
        din = d.as_ring() + RingElement.delta(F2, "")
        dout = res.config.as_ring()
        if dout - din != -(res.carry * f.star_ring()):
            identity_ok = False
        if any(not 0 <= v <= M - 1 for v in res.config.values.values()):
            alphabet_ok = False
        completed += 1

    ok = identity_ok and alphabet_ok and completed >= 2 * runs_each
    return CriterionResult(
        5, "carry conservation", ok,
        {"runs": completed, "window_overflows_skipped": overflow,
         "identity_ok": identity_ok, "alphabet_ok": alphabet_ok})


def criterion_06(seed=DEFAULT_SEED, jobs=1):
    """Round trip through the M+1 letter cover: lift exact coordinates to
    symbols and confirm the symbols parametrize the same coordinates."""
    M = 3
    per_group = 500
    lift_alphabet_ok = True
    containment_ok = True
    for gi, group in enumerate((F2, Z2)):
        support = groups.ball(group, 2)
        ids = rng.element_ids(group, support)
        big = groups.ball(group, 5)
        evals = groups.ball(group, 1)
        for i in range(per_group):
            vals = rng.symbols(seed, gi * per_group + i, ids, M)
            d = Configuration(group, {s: int(v) for s, v in zip(support, vals)},
                              (0, M - 1))
            x = phi_exact(d, big, M)
            lifted = four_cover_lift(x, M)
            if any(not 0 <= v <= M for v in lifted.values.values()):
                lift_alphabet_ok = False
            original = phi_exact(d, evals, M)
            enclosed = phi_windowed(lifted, evals, M)
            for s in evals:
                if not enclosed[s].contains(original[s].value):
                    containment_ok = False
    return CriterionResult(
        6, "symbolic cover round trip",
        lift_alphabet_ok and containment_ok,
        {"samples": 2 * per_group, "lift_alphabet_ok": lift_alphabet_ok,
         "containment_ok": containment_ok})


def criterion_07(seed=DEFAULT_SEED, jobs=1):
    """Injectivity machinery: the collision-mass identity, the forced pair
    restriction along percolation paths, the exact collision family, and a
    pair search expecting full separation."""
    binom_ok = all(
        symbolic.binomial_collision_mass(n) == Fraction(8, 9) ** n
        for n in range(21))
    cfg = ExperimentConfig(seed=seed, samples=10_000, M=3, group=F2,
                           sample_radius=12, eval_radius=1)
    rep = montecarlo.collision_search(cfg, pairs=10_000)
    ok = (binom_ok and rep["passed"]
          and rep["random_pairs"]["unresolved"] == 0
          and rep["control"]["passed"])
    return CriterionResult(
        7, "injectivity machinery", ok,
        {"binomial_identity_ok": binom_ok,
         "control": rep["control"],
         "random_pairs": rep["random_pairs"],
         "family": rep["family"]})


_MEMBER_FACTORS = ["1", "2", "3", "a", "b", "A", "1 + a", "a - b", "a*b", "0"]
_NON_MEMBERS = ["1", "a", "2", "a*B", "b", "A", "1 + a", "3", "-1", "a*a"]


def _parse_over(group, text):
    if group == F2:
        return parse_ring_element(text)
    return parse_ring_element(text, group=Z2)


def criterion_08(seed=DEFAULT_SEED, jobs=1):
    """Exact transform dichotomy on a battery of members and non-members of
    the principal ideal, over both groups and M in {3, 4, 5}."""
    all_ok = True
    batteries = {}
    for group in (F2, Z2):
        for M in (3, 4, 5):
            f = PolyF.standard(M, group)
            fr = f.as_ring()
            g_list = [
                _parse_over(group, h) * fr for h in _MEMBER_FACTORS
            ] + [_parse_over(group, g) for g in _NON_MEMBERS]
            report = spectral.haar_indicator_check(g_list, f)
            witnesses_ok = all(
                e["witness"] is None or 1 <= e["witness"]["k"] <= M - 1
                for e in report["entries"])
            members = sum(e["member"] for e in report["entries"])
            ok = report["passed"] and witnesses_ok and members == 10
            all_ok = all_ok and ok
            batteries["%s_M%d" % (group, M)] = {
                "elements": len(g_list), "members": members,
                "passed": report["passed"], "witness_fractions_ok": witnesses_ok}
    return CriterionResult(8, "transform membership battery", all_ok, batteries)


def criterion_09(seed=DEFAULT_SEED, jobs=1):
    """Statistical uniformity of window coordinates under certified bins."""
    cfg = ExperimentConfig(seed=seed, samples=10_000, M=3, group=F2,
                           sample_radius=12, eval_radius=1, bins=30)
    rep = montecarlo.haar_window_test(cfg, jobs=jobs)
    return CriterionResult(
        9, "statistical uniformity", rep["passed"],
        {"min_p_value": rep["min_p_value"],
         "ambiguous_rate": rep["ambiguous_rate"],
         "pair_p_value": rep["pair"]["p_value"],
         "coordinates": [
             {"site": c["site"], "p_value": c["p_value"],
              "ambiguous": c["ambiguous"]} for c in rep["coordinates"]]})


def criterion_10(seed=DEFAULT_SEED, jobs=1):
    """Measure preservation of the carry map plus its exact coordinate
    translation identity, at the identity and at a."""
    cfg = ExperimentConfig(seed=seed, samples=10_000, M=3, group=F2,
                           sample_radius=14, eval_radius=1)
    rep = montecarlo.tau_invariance_test(cfg)
    details = {"passed_variants": []}
    for v in rep["variants"]:
        details["passed_variants"].append({
            "root": v["root"], "retained": v["retained"],
            "exact_coordinate_matches": v["exact_coordinate_matches"],
            "discard_rate": v["discard_rate"],
            "discard_bound": v["discard_bound"],
            "frequency_max_deviation": v["frequency_max_deviation"],
            "frequency_tolerance": v["frequency_tolerance"],
            "image_collisions": v["image_collisions"],
            "passed": v["passed"]})
    return CriterionResult(10, "carry invariance", rep["passed"], details)


def criterion_11(seed=DEFAULT_SEED, jobs=1):
    """Monte Carlo transform estimates agree with the certified values."""
    M = 3
    cfg = ExperimentConfig(seed=seed, samples=10_000, M=M, group=F2,
                           sample_radius=12, eval_radius=1)
    f = PolyF.standard(M, F2)
    fr = f.as_ring()
    cases = {
        "1": parse_ring_element("1"),
        "f": fr,
        "(1+a)*f": parse_ring_element("1 + a") * fr,
        "a": parse_ring_element("a"),
    }
    all_ok = True
    rows = {}
    for label, g in cases.items():
        emp = montecarlo.empirical_fourier(cfg, g, jobs=jobs)
        value = spectral.mu_hat(g, f, radius=2)
        est = complex(emp["estimate"][0], emp["estimate"][1])
        corners = [complex(float(re), float(im))
                   for re in (value.re.lo, value.re.hi)
                   for im in (value.im.lo, value.im.hi)]
        dist = max(abs(est - c) for c in corners)
        ok = dist <= emp["band"]
        all_ok = all_ok and ok
        rows[label] = {"estimate": emp["estimate"], "band": emp["band"],
                       "certified_zero": value.exact_zero,
                       "distance": dist, "within_band": ok}
    return CriterionResult(11, "estimator consistency", all_ok, rows)


CRITERIA = [criterion_01, criterion_02, criterion_03, criterion_04,
            criterion_05, criterion_06, criterion_07, criterion_08,
            criterion_09, criterion_10, criterion_11]


def run_all(seed=DEFAULT_SEED, jobs=1):
    results = [fn(seed=seed, jobs=jobs) for fn in CRITERIA]
    return {
        "schema": "1",
        "command": "report",
        "seed": seed,
        "criteria": [r.to_json_dict() for r in results],
        "passed": all(r.passed for r in results),
    }
