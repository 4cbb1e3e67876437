"""Seeded statistical experiments on the homoclinic parametrization.

Every experiment is a pure function of its ExperimentConfig.  Symbols are
counter-based hashes of (seed, sample index, canonical site id), so results
do not depend on evaluation order and parallel runs reduce exact integer
tallies; reports are reproducible bit for bit for a fixed config.

Coordinate values are never floating point estimates: a sampled coordinate
is certified to lie in [num, num + tail] / M^(depth+1), an interval whose
width is the exact l1 tail of the kernel beyond the sampled cone depth.
Histogram bins are only assigned when the whole interval lands in one bin;
straddling samples deepen their cone adaptively and are counted as
ambiguous if they still straddle at the maximum depth.
"""

import cmath
import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import chi2

from . import groups, rng, symbolic
from .groups import F2, Z2
from .homoclinic import Configuration, phi_windowed
from .intervals import PI_HI
from .ring import NotDivisible, PolyF, divide_by_f, quotient_coordinates


class EnclosureTooWide(ValueError):
    """The base coordinate enclosure is wider than one histogram bin."""


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    samples: int
    M: int = 3
    group: str = F2
    sample_radius: int = 12
    eval_radius: int = 1
    bins: int = 30

    def __post_init__(self):
        groups.check_group(self.group)
        if self.M < 3:
            raise ValueError("M must be at least 3")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if not 0 <= self.eval_radius < self.sample_radius:
            raise ValueError("eval_radius must be smaller than sample_radius")
        if self.bins < 2:
            raise ValueError("need at least two bins")

    def to_json_dict(self):
        return {"seed": self.seed, "samples": self.samples, "M": self.M,
                "group": self.group, "sample_radius": self.sample_radius,
                "eval_radius": self.eval_radius, "bins": self.bins}


def sample_config(cfg, index, window=None):
    """The index-th sampled configuration, materialized on a window
    (default: the ball of the sampling radius)."""
    if window is None:
        window = groups.ball(cfg.group, cfg.sample_radius)
    ids = rng.element_ids(cfg.group, window)
    vals = rng.symbols(cfg.seed, index, ids, cfg.M)
    values = {el: int(v) for el, v in zip(window, vals)}
    return Configuration(cfg.group, values, (0, cfg.M - 1))


_CACHE_LEVELS = 20


class _Cone:
    """Per-level canonical site ids of a monoid cone root*P or root*N.

    A coordinate of the parametrized point at root is determined by the
    sampled symbols on the forward cone root*P (letters a, b), each level l
    carrying weight M^-(l+1); the carry machine instead spreads over the
    backward cone root*N (letters A, B).  The direction argument picks the
    letter pair.

    Free group: level l holds the 2^l sites root*u in bit order (first
    letter of the pair = bit 0).  While a prefix can still cancel into root
    the words are tracked as strings; as soon as a node ends in a letter of
    the pair its whole subtree chains ids with one mix per letter, which
    vectorizes.

    Z^2: level l holds the l+1 sites root +/- (k, l-k) with multiplicities
    binomial(l, k), the number of monoid words reaching each site.
    """

    def __init__(self, group, root, M, direction="positive"):
        self.group = group
        self.root = root
        self.M = M
        if direction == "positive":
            self.letters = ("a", "b")
            self._sign = 1
        else:
            self.letters = ("A", "B")
            self._sign = -1
        self._cancel = {groups._INVERSE[c] for c in self.letters}
        if group == F2:
            self._levels = [np.array([rng.word_id(root)], dtype=np.uint64)]
            init_strings = {0: root} if root and root[-1] in self._cancel else {}
            self._strings = [init_strings]
        else:
            self._levels = [np.array([rng.z2_id(root)], dtype=np.uint64)]
            self._weights = [[1]]
        self._stacked = None

    def _grow_one(self):
        top = len(self._levels) - 1
        if self.group == F2:
            nxt = self._next_f2(self._levels[top], top + 1)
        else:
            nxt = self._next_z2(top + 1)
        self._levels.append(nxt)

    def _next_f2(self, prev, level):
        n = len(prev)
        nxt = np.empty(2 * n, dtype=np.uint64)
        nxt[0::2] = rng.child_ids(prev, self.letters[0])
        nxt[1::2] = rng.child_ids(prev, self.letters[1])
        strings = {}
        for idx, word in self._strings[level - 1].items():
            for bit in (0, 1):
                child = groups.multiply(F2, word, self.letters[bit])
                nxt[2 * idx + bit] = rng.word_id(child)
                if child and child[-1] in self._cancel:
                    strings[2 * idx + bit] = child
        if level == len(self._strings):
            self._strings.append(strings)
        return nxt

    def _z2_site(self, level, k):
        i0, j0 = self.root
        return (i0 + self._sign * k, j0 + self._sign * (level - k))

    def _next_z2(self, level):
        ids = np.array([rng.z2_id(self._z2_site(level, k))
                        for k in range(level + 1)], dtype=np.uint64)
        self._weights.append([math.comb(level, k) for k in range(level + 1)])
        return ids

    def level_ids(self, level):
        """Cached ids for levels up to the cache cap."""
        if level > _CACHE_LEVELS:
            raise ValueError("level beyond cache cap; use next_level")
        while len(self._levels) <= level:
            self._grow_one()
        return self._levels[level]

    def stacked_ids(self, depth):
        """All ids of levels 0..depth as one array plus level offsets, so a
        base fold needs a single draw per sample."""
        if self._stacked is None or self._stacked[0] < depth:
            parts = [self.level_ids(l) for l in range(depth + 1)]
            offsets = [0]
            for p in parts:
                offsets.append(offsets[-1] + len(p))
            self._stacked = (depth, np.concatenate(parts), offsets)
        d, ids, offsets = self._stacked
        if d == depth:
            return ids, offsets
        return ids[:offsets[depth + 1]], offsets[:depth + 2]

    def next_level(self, prev_ids, level):
        """One transient extension step from the caller's current level
        array; used past the cache cap where no cancellation remains."""
        if self.group == F2:
            if level - 1 < len(self._strings) and self._strings[level - 1]:
                raise AssertionError("transient extension inside the "
                                     "cancellation zone")
            nxt = np.empty(2 * len(prev_ids), dtype=np.uint64)
            nxt[0::2] = rng.child_ids(prev_ids, self.letters[0])
            nxt[1::2] = rng.child_ids(prev_ids, self.letters[1])
            return nxt
        return np.array([rng.z2_id(self._z2_site(level, k))
                         for k in range(level + 1)], dtype=np.uint64)

    def level_weights(self, level):
        if self.group == F2:
            return None
        while len(self._weights) <= level:
            l = len(self._weights)
            self._weights.append([math.comb(l, k) for k in range(l + 1)])
        return self._weights[level]

    def level_sum(self, values, level):
        if self.group == F2:
            return int(values.sum())
        w = self.level_weights(level)
        return sum(wk * int(v) for wk, v in zip(w, values))


def _tail_units(M, depth):
    """ceil of the kernel l1 tail beyond the given cone depth, in units of
    M^-(depth+1): tail <= (M-1) 2^(depth+1) / (M-2) in those units."""
    t = (M - 1) * (1 << (depth + 1))
    return -(-t // (M - 2))


def _enclosure_width(M, depth):
    return Fraction((M - 1) * (1 << (depth + 1)), (M - 2) * M ** (depth + 1))


def _assign_bin(num, depth, M, bins):
    """Histogram bin of the enclosed coordinate, or None if the enclosure
    wraps past an integer or straddles a bin boundary."""
    den = M ** (depth + 1)
    nm = num % den
    hi = nm + _tail_units(M, depth)
    if hi >= den:
        return None
    lo_bin = nm * bins // den
    if lo_bin != hi * bins // den:
        return None
    return lo_bin


class _ConeFold:
    """Running partial numerator of one coordinate of one sample: value
    sum over levels 0..depth in base M, deepened one level at a time."""

    def __init__(self, cone, seed, index, M, value_fn):
        self.cone = cone
        self.seed = seed
        self.index = index
        self.M = M
        self.value_fn = value_fn
        self.num = 0
        self.depth = -1
        self._ids = None

    def deepen(self):
        level = self.depth + 1
        if level <= _CACHE_LEVELS:
            ids = self.cone.level_ids(level)
        else:
            ids = self.cone.next_level(self._ids, level)
        vals = self.value_fn(self.seed, self.index, ids, self.M)
        self.num = self.num * self.M + self.cone.level_sum(vals, level)
        self.depth = level
        self._ids = ids

    def to_depth(self, depth):
        if self.depth == -1 and 0 <= depth <= _CACHE_LEVELS:
            ids, offsets = self.cone.stacked_ids(depth)
            vals = self.value_fn(self.seed, self.index, ids, self.M)
            num = 0
            for level in range(depth + 1):
                seg = vals[offsets[level]:offsets[level + 1]]
                num = num * self.M + self.cone.level_sum(seg, level)
            self.num = num
            self.depth = depth
            self._ids = ids[offsets[depth]:offsets[depth + 1]]
            return self.num
        while self.depth < depth:
            self.deepen()
        return self.num


def _pair_cell(b, bins, cells):
    return b * cells // bins


_PAIR_CELLS = 10


def _chi_square_p(counts, expected):
    counts = np.asarray(counts, dtype=float)
    expected = np.asarray(expected, dtype=float)
    stat = float(((counts - expected) ** 2 / expected).sum())
    dof = counts.size - 1
    return stat, float(chi2.sf(stat, dof))


def _chunk_ranges(n, parts):
    parts = max(1, min(parts, n))
    step = -(-n // parts)
    return [(lo, min(lo + step, n)) for lo in range(0, n, step)]


def _haar_chunk(cfg, lo, hi, max_extra, value_fn=None):
    """Tallies for sample indices [lo, hi): per-site histograms, ambiguous
    counts and the pair grid.  Pure integer output, so chunk merges are
    exact and order independent."""
    if value_fn is None:
        value_fn = rng.symbols
    sites = groups.ball(cfg.group, cfg.eval_radius)
    cones = [_Cone(cfg.group, s, cfg.M) for s in sites]
    bins = cfg.bins
    cells = min(_PAIR_CELLS, bins)
    hist = np.zeros((len(sites), bins), dtype=np.int64)
    ambiguous = np.zeros(len(sites), dtype=np.int64)
    grid = np.zeros((cells, cells), dtype=np.int64)
    pair_total = 0
    pair_sites = (0, 1) if len(sites) > 1 else (0, 0)
    base = cfg.sample_radius
    for index in range(lo, hi):
        sample_bins = []
        for ci, cone in enumerate(cones):
            fold = _ConeFold(cone, cfg.seed, index, cfg.M, value_fn)
            fold.to_depth(base)
            b = _assign_bin(fold.num, fold.depth, cfg.M, bins)
            while b is None and fold.depth < base + max_extra:
                fold.deepen()
                b = _assign_bin(fold.num, fold.depth, cfg.M, bins)
            if b is None:
                ambiguous[ci] += 1
            else:
                hist[ci, b] += 1
            sample_bins.append(b)
        b1, b2 = sample_bins[pair_sites[0]], sample_bins[pair_sites[1]]
        if b1 is not None and b2 is not None:
            grid[_pair_cell(b1, bins, cells),
                 _pair_cell(b2, bins, cells)] += 1
            pair_total += 1
    return hist, ambiguous, grid, pair_total


def haar_window_test(cfg, max_extra=12, p_threshold=1e-3,
                     ambiguity_threshold=0.01, jobs=1, value_fn=None):
    """Per-coordinate uniformity and pairwise independence of sampled
    window coordinates, using only bin assignments that are certified by
    the interval enclosure.

    Each eval-window coordinate gets a chi-square test against the uniform
    histogram; one pair of coordinates gets an independence test on a
    coarse product grid (cells are unions of whole bins, so a certified
    bin implies a certified cell).  Fails if any p-value drops below
    p_threshold or the ambiguity rate reaches ambiguity_threshold.
    """
    width = _enclosure_width(cfg.M, cfg.sample_radius)
    if width >= Fraction(1, cfg.bins):
        raise EnclosureTooWide(
            "enclosure width %s at depth %d is not below bin width 1/%d"
            % (width, cfg.sample_radius, cfg.bins))
    sites = groups.ball(cfg.group, cfg.eval_radius)
    bins = cfg.bins

    if jobs > 1 and value_fn is None:
        ranges = _chunk_ranges(cfg.samples, jobs)
        with ProcessPoolExecutor(max_workers=len(ranges)) as pool:
            parts = list(pool.map(_haar_chunk, [cfg] * len(ranges),
                                  [r[0] for r in ranges],
                                  [r[1] for r in ranges],
                                  [max_extra] * len(ranges)))
        hist = sum(p[0] for p in parts)
        ambiguous = sum(p[1] for p in parts)
        grid = sum(p[2] for p in parts)
        pair_total = sum(p[3] for p in parts)
    else:
        hist, ambiguous, grid, pair_total = _haar_chunk(
            cfg, 0, cfg.samples, max_extra, value_fn)

    coords = []
    worst_p = 1.0
    for ci, site in enumerate(sites):
        n_det = int(hist[ci].sum())
        if n_det == 0:
            raise EnclosureTooWide("no sample produced a certified bin")
        stat, p = _chi_square_p(hist[ci], [n_det / bins] * bins)
        worst_p = min(worst_p, p)
        coords.append({
            "site": groups.format_element(cfg.group, site),
            "determined": n_det,
            "ambiguous": int(ambiguous[ci]),
            "chi_square": stat,
            "p_value": p,
            "histogram": [int(c) for c in hist[ci]],
        })

    cells = min(_PAIR_CELLS, bins)
    cells_per = bins // cells if bins % cells == 0 else None
    if pair_total > 0:
        cell_prob = np.zeros(cells)
        for b in range(bins):
            cell_prob[_pair_cell(b, bins, cells)] += 1.0 / bins
        expected = pair_total * np.outer(cell_prob, cell_prob)
        pair_stat, pair_p = _chi_square_p(grid.ravel(), expected.ravel())
    else:
        pair_stat, pair_p = 0.0, 1.0
    worst_p = min(worst_p, pair_p)

    total_evals = cfg.samples * len(sites)
    amb_rate = float(ambiguous.sum()) / total_evals
    passed = worst_p > p_threshold and amb_rate < ambiguity_threshold
    return {
        "experiment": "haar_window",
        "config": cfg.to_json_dict(),
        "coordinates": coords,
        "pair": {
            "sites": [groups.format_element(cfg.group, sites[0]),
                      groups.format_element(cfg.group, sites[min(1, len(sites) - 1)])],
            "cells": cells,
            "bins_per_cell": cells_per,
            "samples": int(pair_total),
            "chi_square": pair_stat,
            "p_value": pair_p,
        },
        "ambiguous_rate": amb_rate,
        "min_p_value": worst_p,
        "thresholds": {"p_value": p_threshold,
                       "ambiguity": ambiguity_threshold},
        "passed": bool(passed),
    }


def _positive_cone_sites(group, t, depth):
    """Sites t*p for monoid words p up to the given length, deduplicated,
    in discovery order."""
    out = {t: None}
    frontier = [t]
    gens = groups.generators(group)
    for _ in range(depth):
        nxt = []
        for s in frontier:
            for g in gens:
                sg = groups.multiply(group, s, g)
                if sg not in out:
                    out[sg] = None
                nxt.append(sg)
        frontier = nxt
    return list(out)


def _fourier_plan(g, f, radius):
    """Included sites (union of capped forward cones from supp g), their
    exact quotient coordinates as integers over a common denominator, and
    the l1 tail bound for everything left out."""
    group = g.group
    site_set = {}
    tail = Fraction(0)
    for t, c in g.items():
        cap = radius - groups.word_length(group, t)
        if cap < 0:
            raise ValueError("sample radius smaller than the support of g")
        for s in _positive_cone_sites(group, t, cap):
            site_set[s] = None
        tail += abs(c) * f.tail_l1_beyond(cap)
    sites = list(site_set)
    try:
        q = divide_by_f(g, f)
        if all(s in site_set for s in q.support()):
            # finitely supported quotient inside the window: nothing is
            # truncated, the window pairing is exact
            tail = Fraction(0)
    except NotDivisible:
        pass
    coords = quotient_coordinates(g, f, sites)
    den = 1
    for v in coords.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    kept_sites = []
    nums = []
    for s in sites:
        n = int(coords[s] * den)
        if n != 0:
            kept_sites.append(s)
            nums.append(n)
    return kept_sites, nums, den, tail


def _fourier_chunk(cfg, lo, hi, ids_list, nums_list, den):
    """Exact residues (mod den) of the pairing exponent for each sample in
    [lo, hi).  int64 fast path when the dot product provably fits."""
    ids = np.array(ids_list, dtype=np.uint64)
    nums = [int(n) for n in nums_list]
    bound = max((abs(n) for n in nums), default=0) * (cfg.M - 1) * max(len(nums), 1)
    use_i64 = bound < (1 << 62)
    nvec = np.array(nums, dtype=np.int64) if use_i64 else nums
    out = []
    for index in range(lo, hi):
        vals = rng.symbols(cfg.seed, index, ids, cfg.M)
        if use_i64:
            e = int(vals @ nvec)
        else:
            e = sum(n * int(v) for n, v in zip(nvec, vals))
        out.append(e % den)
    return out


def empirical_fourier(cfg, g, jobs=1):
    """Monte Carlo estimate of the transform at the integral character g,
    with an error band combining the statistical term 3/sqrt(N) and the
    exact bias bound from truncating the pairing to the sampled window.

    The per-sample exponent <x, g> mod 1 is computed in exact integer
    arithmetic (quotient coordinates over a common power-of-M denominator),
    so parallel chunks return exact residues and the float fold happens
    once, in index order.
    """
    if g.group != cfg.group:
        raise groups.GroupMismatch("character and config disagree on group")
    if not g.is_integral():
        raise ValueError("empirical_fourier needs an integral character")
    f = PolyF.standard(cfg.M, cfg.group)
    sites, nums, den, tail = _fourier_plan(g, f, cfg.sample_radius)
    ids_list = [rng.element_id(cfg.group, s) for s in sites]

    if jobs > 1 and sites:
        ranges = _chunk_ranges(cfg.samples, jobs)
        with ProcessPoolExecutor(max_workers=len(ranges)) as pool:
            parts = list(pool.map(_fourier_chunk, [cfg] * len(ranges),
                                  [r[0] for r in ranges],
                                  [r[1] for r in ranges],
                                  [ids_list] * len(ranges),
                                  [nums] * len(ranges),
                                  [den] * len(ranges)))
        residues = [r for part in parts for r in part]
    else:
        residues = _fourier_chunk(cfg, 0, cfg.samples, ids_list, nums, den)

    acc = 0j
    exact_ones = 0
    for r in residues:
        if r == 0:
            exact_ones += 1
            acc += 1.0
        else:
            acc += cmath.exp(-2j * math.pi * (r / den))
    est = acc / cfg.samples
    bias = 2 * PI_HI * (cfg.M - 1) * tail
    band = 3.0 / math.sqrt(cfg.samples) + float(bias)
    return {
        "experiment": "empirical_fourier",
        "config": cfg.to_json_dict(),
        "g": g.to_json_dict(),
        "sites": len(sites),
        "estimate": [est.real, est.imag],
        "band": band,
        "bias_bound": float(bias),
        "zero_phase_samples": exact_ones,
    }


def _word_of_position(level, pos):
    return "".join("B" if (pos >> (level - 1 - k)) & 1 else "A"
                   for k in range(level))


def _tau_variant(cfg, root, index_lo, eval_sites):
    """One shift variant of the carry-invariance experiment.

    Samples the window root*N to the configured depth, adds 1 at root,
    runs the carry cascade, and checks per retained sample that the exact
    difference of parametrized coordinates equals the corresponding
    homoclinic coordinate mod 1.  Injectivity is monitored by hashing the
    full image window.
    """
    M = cfg.M
    R = cfg.sample_radius
    N = cfg.samples
    cone = _Cone(F2, root, M, direction="negative")
    level_ids = [cone.level_ids(l) for l in range(R + 1)]

    def kernel_coeff(word):
        # coefficient of the fundamental kernel at a negative-monoid word
        if any(c in "ab" for c in word):
            return Fraction(0)
        return Fraction(1, M ** (len(word) + 1))

    root_inv = groups.inverse(F2, root)
    rhs = {}
    for s in eval_sites:
        rhs[s] = kernel_coeff(groups.multiply(F2, root_inv, s))

    depth2 = []
    for l in range(min(2, R) + 1):
        for p in range(1 << l):
            depth2.append((l, p))
    freq = np.zeros((len(depth2), M), dtype=np.int64)

    discarded = 0
    retained = 0
    exact_matches = 0
    digests = {}
    collisions = 0
    recheck = []

    for i in range(N):
        index = index_lo + i
        values = [rng.symbols(cfg.seed, index, level_ids[l], M).astype(np.int64)
                  for l in range(R + 1)]
        fired = [values[0] == M - 1]
        for l in range(1, R + 1):
            parent = np.repeat(fired[l - 1], 2)
            fired.append((values[l] == M - 1) & parent)
        if bool(fired[R].any()):
            discarded += 1
            continue
        img = [v.copy() for v in values]
        if fired[0][0]:
            img[0][0] = 0
        else:
            img[0][0] += 1
        for l in range(R):
            if not fired[l].any():
                break
            recv = np.repeat(fired[l], 2)
            bump = recv & ~fired[l + 1]
            img[l + 1][bump] += 1
            img[l + 1][fired[l + 1]] = 0
        retained += 1

        for si, (l, p) in enumerate(depth2):
            freq[si, int(img[l][p])] += 1

        delta = []
        delta.append((0, 0, int(img[0][0]) - int(values[0][0])))
        for l in range(R):
            if not fired[l].any():
                break
            for p in np.nonzero(np.repeat(fired[l], 2))[0]:
                d = int(img[l + 1][p]) - int(values[l + 1][p])
                if d:
                    delta.append((l + 1, int(p), d))
        terms = []
        for (l, p, d) in delta:
            u = _word_of_position(l, p)
            t = groups.multiply(F2, root, u)
            terms.append((groups.inverse(F2, t), d))
        ok = True
        for s in eval_sites:
            total = Fraction(0)
            for (t_inv, d) in terms:
                total += d * kernel_coeff(groups.multiply(F2, t_inv, s))
            if (total - rhs[s]).denominator != 1:
                ok = False
                break
        if ok:
            exact_matches += 1

        h = hashlib.sha256()
        for l in range(R + 1):
            h.update(img[l].astype(np.uint8).tobytes())
        dg = h.digest()
        if dg in digests:
            recheck.append((digests[dg], index))
        else:
            digests[dg] = index

    # a digest collision is only a real collision if the raw image windows
    # agree; regenerate both deterministically and compare
    for idx_a, idx_b in recheck:
        img_a = _tau_image(cfg, root, idx_a, level_ids)
        img_b = _tau_image(cfg, root, idx_b, level_ids)
        if img_a is not None and img_b is not None and \
                all(np.array_equal(x, y) for x, y in zip(img_a, img_b)):
            collisions += 1

    n_eval = retained if retained else 1
    sigma = math.sqrt((1.0 / M) * (1 - 1.0 / M) / n_eval)
    max_dev = 0.0
    for si in range(len(depth2)):
        for v in range(M):
            dev = abs(freq[si, v] / n_eval - 1.0 / M)
            max_dev = max(max_dev, dev)

    p_disc = 1.0 - float(symbolic.partition_mass(R - 2, M))
    sigma_disc = math.sqrt(max(p_disc * (1 - p_disc), 1e-12) / N)
    disc_rate = discarded / N
    disc_bound = p_disc + 4 * sigma_disc

    passed = (exact_matches == retained and collisions == 0
              and max_dev <= 4 * sigma and disc_rate <= disc_bound)
    return {
        "root": groups.format_element(F2, root),
        "samples": N,
        "retained": retained,
        "discarded": discarded,
        "discard_rate": disc_rate,
        "discard_bound": disc_bound,
        "exact_coordinate_matches": exact_matches,
        "frequency_max_deviation": max_dev,
        "frequency_tolerance": 4 * sigma,
        "distinct_images": len(digests),
        "image_collisions": collisions,
        "rhs": {groups.format_element(F2, s): str(v) for s, v in rhs.items()},
        "passed": bool(passed),
    }


def _tau_image(cfg, root, index, level_ids):
    M = cfg.M
    R = len(level_ids) - 1
    values = [rng.symbols(cfg.seed, index, level_ids[l], M).astype(np.int64)
              for l in range(R + 1)]
    fired = [values[0] == M - 1]
    for l in range(1, R + 1):
        fired.append((values[l] == M - 1) & np.repeat(fired[l - 1], 2))
    if bool(fired[R].any()):
        return None
    img = [v.copy() for v in values]
    if fired[0][0]:
        img[0][0] = 0
    else:
        img[0][0] += 1
    for l in range(R):
        if not fired[l].any():
            break
        recv = np.repeat(fired[l], 2)
        img[l + 1][recv & ~fired[l + 1]] += 1
        img[l + 1][fired[l + 1]] = 0
    return img


def tau_invariance_test(cfg):
    """Statistical check that adding 1 at a site and carrying preserves the
    sampled symbol distribution, plus the exact coordinate identity: for
    every retained sample the difference of parametrized coordinates
    equals the homoclinic coordinate translated to the carry site.

    Runs two variants on disjoint sample streams: the carry at the group
    identity and at the generator a.  Discards (cascade reaching the
    window boundary) are counted against the exact cylinder mass bound.
    """
    if cfg.group != F2:
        raise ValueError("carry invariance experiment is defined over the "
                         "free group window")
    if cfg.M != 3:
        raise ValueError("the exact cylinder accounting needs M = 3")
    if cfg.sample_radius > _CACHE_LEVELS:
        raise ValueError("sample_radius beyond the cone cache cap")
    eval_sites = groups.ball(F2, cfg.eval_radius)
    v_e = _tau_variant(cfg, "", 0, eval_sites)
    v_a = _tau_variant(cfg, "a", cfg.samples, eval_sites)
    return {
        "experiment": "tau_invariance",
        "config": cfg.to_json_dict(),
        "variants": [v_e, v_a],
        "passed": bool(v_e["passed"] and v_a["passed"]),
    }


def _interval_overlap(n1, n2, t_units, den):
    d = (n2 - n1) % den
    return d <= t_units or (den - d) <= t_units


def collision_search(cfg, pairs=None, control=64, pair_depth=8, max_extra=6):
    """Search for distinct samples with equal parametrized coordinates.

    Three parts: (i) a positive control on the known family d -> d + 1,
    whose windowed coordinate enclosures must agree exactly; (ii) random
    pairs of independent samples, separated by certified intervals with
    adaptive deepening, expecting zero unresolved pairs; (iii) a symbolic
    reconstruction of the family from an all-ones pattern configuration,
    confirming the forced pair-restriction structure along percolation
    paths.
    """
    if cfg.M != 3:
        raise ValueError("the exact collision family needs M = 3")
    group = cfg.group
    M = cfg.M
    eval_sites = groups.ball(group, cfg.eval_radius)

    # (i) control family: e = d + 1 sitewise gives identical enclosures
    window = groups.ball(group, 4)
    ids = rng.element_ids(group, window)
    control_matches = 0
    for n in range(control):
        raw = rng.symbols(cfg.seed, n, ids, 2)
        d = Configuration(group, {s: int(v) for s, v in zip(window, raw)}, (0, 1))
        e = Configuration(group, {s: int(v) + 1 for s, v in zip(window, raw)}, (1, 2))
        enc_d = phi_windowed(d, eval_sites, M)
        enc_e = phi_windowed(e, eval_sites, M)
        control_matches += all(enc_d[s] == enc_e[s] for s in eval_sites)
    control_ok = control_matches == control

    # (ii) independent pairs
    n_pairs = pairs if pairs is not None else cfg.samples
    cones = [_Cone(group, s, M) for s in eval_sites]
    folds_ok = 0
    unresolved = 0
    deepened = 0
    base_offset = 1 << 20
    for i in range(n_pairs):
        fa = [_ConeFold(c, cfg.seed, base_offset + i, M, rng.symbols)
              for c in cones]
        fb = [_ConeFold(c, cfg.seed, base_offset + n_pairs + i, M, rng.symbols)
              for c in cones]
        for f_ in fa + fb:
            f_.to_depth(pair_depth)
        depth = pair_depth
        separated = _pair_separated(fa, fb, M, depth)
        if not separated:
            deepened += 1
            while not separated and depth < pair_depth + max_extra:
                depth += 1
                for f_ in fa + fb:
                    f_.to_depth(depth)
                separated = _pair_separated(fa, fb, M, depth)
        if separated:
            folds_ok += 1
        else:
            unresolved += 1
    pairs_ok = unresolved == 0

    # (iii) symbolic reconstruction of the family from the all-ones pattern
    family = None
    if group == F2:
        f = PolyF.standard(M, group)
        cwin = groups.ball(F2, 3)
        ones = Configuration(F2, {s: 1 for s in cwin}, (-1, 1))
        table = symbolic.allowed_patterns(M, M - 1)
        interior = [s for s in cwin
                    if all(groups.multiply(F2, s, g) in ones.values
                           for g in groups.generators(F2))]
        patt_ok = (1, 1, 1) in table.allowed and bool(interior)
        conv = ones.as_ring() * f.star_ring()
        conv_ok = all(conv.coefficient(s) == 1 for s in interior)
        perc = symbolic.percolation_path(ones, "", 2, M)
        forcing = [step["forcing"] for step in perc["steps"]]
        family = {
            "pattern_allowed": bool(patt_ok),
            "difference_is_one_on_interior": bool(conv_ok),
            "percolation_forcing": forcing,
            "all_pair_forced": all(fo == "pair" for fo in forcing),
        }
        family["passed"] = bool(family["pattern_allowed"]
                                and family["difference_is_one_on_interior"]
                                and family["all_pair_forced"])

    passed = control_ok and pairs_ok and (family is None or family["passed"])
    return {
        "experiment": "collision_search",
        "config": cfg.to_json_dict(),
        "control": {"pairs": control, "enclosure_matches": control_matches,
                    "passed": bool(control_ok)},
        "random_pairs": {"pairs": n_pairs, "separated": folds_ok,
                         "deepened": deepened, "unresolved": unresolved,
                         "passed": bool(pairs_ok)},
        "family": family,
        "collisions_found": 0 if pairs_ok else None,
        "passed": bool(passed),
    }


def _pair_separated(fa, fb, M, depth):
    t = _tail_units(M, depth)
    den = M ** (depth + 1)
    for a, b in zip(fa, fb):
        if not _interval_overlap(a.num % den, b.num % den, t, den):
            return True
    return False
