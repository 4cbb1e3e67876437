import numpy as np
import pytest

from homoclinic_lab import groups, rng
from homoclinic_lab.groups import F2, Z2, GroupMismatch
from homoclinic_lab.montecarlo import (EnclosureTooWide, ExperimentConfig,
                                       _assign_bin, collision_search,
                                       empirical_fourier, haar_window_test,
                                       sample_config, tau_invariance_test)
from homoclinic_lab.ring import parse_ring_element, PolyF


def cfg_with(**kw):
    base = dict(seed=77, samples=50)
    base.update(kw)
    return ExperimentConfig(**base)


def test_experiment_config_validation():
    with pytest.raises(ValueError):
        cfg_with(M=2)
    with pytest.raises(ValueError):
        cfg_with(samples=0)
    with pytest.raises(ValueError):
        cfg_with(eval_radius=12, sample_radius=12)
    with pytest.raises(ValueError):
        cfg_with(bins=1)
    with pytest.raises(ValueError):
        cfg_with(group="f3")


def test_rng_symbols_are_pure_functions():
    ids = rng.element_ids(F2, groups.ball(F2, 3))
    a = rng.symbols(9, 4, ids, 3)
    b = rng.symbols(9, 4, ids, 3)
    assert np.array_equal(a, b)
    # value depends only on the site id, not on array position
    sub = rng.symbols(9, 4, ids[5:9], 3)
    assert np.array_equal(sub, a[5:9])
    # different stream, seed or modulus decorrelate
    assert not np.array_equal(rng.symbols(9, 5, ids, 3), a)
    assert not np.array_equal(rng.symbols(10, 4, ids, 3), a)
    assert a.min() >= 0 and a.max() <= 2


def test_rng_child_ids_chain_like_word_ids():
    words = [w for w in groups.ball(F2, 4) if not w.endswith("A")]
    ids = np.array([rng.word_id(w) for w in words], dtype=np.uint64)
    kids = rng.child_ids(ids, "a")
    expect = np.array([rng.word_id(w + "a") for w in words], dtype=np.uint64)
    assert np.array_equal(kids, expect)


def test_rng_rough_uniformity():
    ids = rng.element_ids(F2, groups.ball(F2, 6))  # 1457 sites
    vals = rng.symbols(123, 0, ids, 3)
    counts = np.bincount(vals, minlength=3)
    assert counts.sum() == len(ids)
    # 4 sigma around the uniform mean
    sigma = (len(ids) * (1 / 3) * (2 / 3)) ** 0.5
    assert all(abs(c - len(ids) / 3) < 4 * sigma for c in counts)


def test_sample_config_determinism_and_window_consistency():
    cfg = cfg_with(sample_radius=5)
    d1 = sample_config(cfg, 3)
    d2 = sample_config(cfg, 3)
    assert d1.values == d2.values
    assert d1.alphabet == (0, 2)
    assert set(d1.values) == set(groups.ball(F2, 5))
    small = sample_config(cfg, 3, window=groups.ball(F2, 2))
    assert all(small.values[s] == d1.values[s] for s in small.values)
    assert sample_config(cfg, 4).values != d1.values


def test_assign_bin_certification():
    # depth 2: den 27, tail 16 units
    assert _assign_bin(5, 2, 3, 3) is None    # [5, 21] straddles bins
    assert _assign_bin(20, 2, 3, 3) is None   # [20, 36] wraps past 27
    # depth 8: den 19683, tail 1024 units
    assert _assign_bin(0, 8, 3, 10) == 0      # [0, 1024] inside bin 0
    assert _assign_bin(2000, 8, 3, 10) == 1
    assert _assign_bin(19683 + 2000, 8, 3, 10) == 1  # numerator mod den
    assert _assign_bin(1960, 8, 3, 10) is None       # crosses 19683/10


def test_haar_window_test_passes_and_is_deterministic():
    cfg = cfg_with(samples=200, sample_radius=8, bins=6)
    rep1 = haar_window_test(cfg)
    rep2 = haar_window_test(cfg)
    assert rep1 == rep2
    assert rep1["passed"] is True
    assert rep1["config"] == cfg.to_json_dict()
    assert len(rep1["coordinates"]) == len(groups.ball(F2, 1))
    for c in rep1["coordinates"]:
        assert c["determined"] + c["ambiguous"] == cfg.samples
        assert sum(c["histogram"]) == c["determined"]
        assert c["p_value"] > 1e-3
    assert rep1["pair"]["cells"] == 6
    assert rep1["pair"]["bins_per_cell"] == 1
    assert rep1["ambiguous_rate"] < 0.01


def test_haar_window_test_z2():
    cfg = cfg_with(samples=150, group=Z2, sample_radius=9, bins=5)
    rep = haar_window_test(cfg)
    assert rep["passed"] is True
    assert rep["pair"]["sites"] == ["(0,0)", "(-1,0)"]


def test_haar_jobs_merge_bit_identical():
    cfg = cfg_with(samples=60, sample_radius=8, bins=6)
    assert haar_window_test(cfg, jobs=2) == haar_window_test(cfg, jobs=1)


def test_haar_rejects_wide_enclosure():
    cfg = cfg_with(samples=10, sample_radius=8, bins=30)
    with pytest.raises(EnclosureTooWide):
        haar_window_test(cfg)


def test_haar_flags_degenerate_sampler():
    cfg = cfg_with(samples=120, sample_radius=8, bins=6)

    def zeros(seed, index, ids, M):
        return np.zeros(len(ids), dtype=np.int64)

    rep = haar_window_test(cfg, value_fn=zeros)
    assert rep["passed"] is False
    assert rep["min_p_value"] <= 1e-3


def test_tau_invariance_passes():
    cfg = cfg_with(samples=100, sample_radius=10)
    rep = tau_invariance_test(cfg)
    assert rep["passed"] is True
    assert rep == tau_invariance_test(cfg)
    roots = [v["root"] for v in rep["variants"]]
    assert roots == ["", "a"]
    for v in rep["variants"]:
        assert v["retained"] + v["discarded"] == cfg.samples
        assert v["exact_coordinate_matches"] == v["retained"]
        assert v["image_collisions"] == 0
        assert v["discard_rate"] <= v["discard_bound"]
    assert rep["variants"][0]["rhs"] == {
        "": "1/3", "a": "0", "b": "0", "A": "1/9", "B": "1/9"}


def test_tau_invariance_guards():
    with pytest.raises(ValueError):
        tau_invariance_test(cfg_with(group=Z2, sample_radius=10))
    with pytest.raises(ValueError):
        tau_invariance_test(cfg_with(M=4, sample_radius=10))
    with pytest.raises(ValueError):
        tau_invariance_test(cfg_with(sample_radius=24))


def test_collision_search_free_group():
    cfg = cfg_with(samples=10)
    rep = collision_search(cfg, pairs=40, control=16)
    assert rep["passed"] is True
    assert rep["control"] == {"pairs": 16, "enclosure_matches": 16,
                              "passed": True}
    rp = rep["random_pairs"]
    assert rp["pairs"] == 40
    assert rp["separated"] == 40 and rp["unresolved"] == 0
    assert rep["collisions_found"] == 0
    fam = rep["family"]
    assert fam["passed"] is True
    assert fam["pattern_allowed"] and fam["difference_is_one_on_interior"]
    assert fam["percolation_forcing"] == ["pair", "pair"]


def test_collision_search_z2_has_no_family_section():
    cfg = cfg_with(samples=10, group=Z2)
    rep = collision_search(cfg, pairs=15, control=8)
    assert rep["family"] is None
    assert rep["passed"] is True


def test_collision_search_requires_m_three():
    with pytest.raises(ValueError):
        collision_search(cfg_with(M=4), pairs=5, control=2)


def test_empirical_fourier_member_is_exact():
    cfg = cfg_with(samples=200, sample_radius=10)
    f = PolyF.standard(3, F2)
    g = parse_ring_element("1 + a") * f.as_ring()
    rep = empirical_fourier(cfg, g)
    assert rep["estimate"] == [1.0, 0.0]
    assert rep["bias_bound"] == 0.0
    assert rep["zero_phase_samples"] == cfg.samples
    assert rep["band"] == 3.0 / cfg.samples ** 0.5


def test_empirical_fourier_non_member_stays_in_band():
    cfg = cfg_with(samples=400, sample_radius=10)
    rep = empirical_fourier(cfg, parse_ring_element("1"))
    est = complex(*rep["estimate"])
    assert abs(est) < rep["band"]
    assert rep["sites"] == 2 ** 11 - 1
    assert rep["bias_bound"] > 0


def test_empirical_fourier_jobs_identical():
    cfg = cfg_with(samples=60, sample_radius=8)
    g = parse_ring_element("a - b")
    assert empirical_fourier(cfg, g, jobs=2) == empirical_fourier(cfg, g)


def test_empirical_fourier_guards():
    cfg = cfg_with(samples=10)
    with pytest.raises(GroupMismatch):
        empirical_fourier(cfg, parse_ring_element("1", Z2))
    from fractions import Fraction
    from homoclinic_lab.ring import RingElement
    with pytest.raises(ValueError):
        empirical_fourier(cfg, RingElement(F2, {"": Fraction(1, 2)}))
    with pytest.raises(ValueError):
        empirical_fourier(cfg_with(samples=5, sample_radius=1),
                          parse_ring_element("a*b*a"))
