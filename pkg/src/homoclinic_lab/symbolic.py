"""Symbolic-dynamics machinery: the height-level reduction sweep, the
carry/addition machine with its tree and cylinder combinatorics, SFT pattern
tables, and the percolation analysis behind the injectivity bound.

Trees are finite sets of words over the inverse generators A, B closed under
initial subwords; they index the carry cascades of the addition machine.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import heapq
import math

from . import groups
from .groups import F2, check_group
from .homoclinic import Configuration
from .ring import RingElement


class ValueOutOfRange(ValueError):
    """A configuration value violates the declared symbol range."""


class NonTermination(RuntimeError):
    """The toppling loop exceeded its step budget."""


class BoundaryOverflow(RuntimeError):
    """A carry tried to leave the stored window."""

    def __init__(self, site, message=None):
        self.site = site
        super().__init__(message or f"carry left the window at {site!r}")


class ConstraintViolated(ValueError):
    """A configuration breaks the SFT pattern constraints on its window."""


@dataclass(frozen=True)
class Tree:
    """A finite set of words over {A, B} closed under initial subwords."""

    nodes: frozenset

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        for w in self.nodes:
            if any(c not in "AB" for c in w):
                raise ValueError(f"tree node {w!r} is not a word over A, B")
            if w and w[:-1] not in self.nodes:
                raise ValueError(f"tree is not initial-subword-closed at {w!r}")

    @property
    def size(self):
        return len(self.nodes)

    def closure(self):
        """T-bar = T together with both children of every node; {""} for T empty."""
        if not self.nodes:
            return frozenset({""})
        out = set(self.nodes)
        for w in self.nodes:
            out.add(w + "A")
            out.add(w + "B")
        return frozenset(out)

    def boundary(self):
        return self.closure() - self.nodes

    def sorted_words(self):
        return sorted(self.nodes, key=lambda w: groups.sort_key(F2, w))

    def to_json(self):
        return self.sorted_words()

    @classmethod
    def from_words(cls, words):
        return cls(frozenset(words))


@dataclass(frozen=True)
class CylinderSpec:
    """The cylinder E_{T, omega}: value M-1 on T, prescribed sub-maximal
    boundary values omega on the boundary of T."""

    tree: Tree
    omega: tuple  # sorted ((word, value), ...)

    @classmethod
    def make(cls, tree, omega):
        omega = dict(omega)
        if set(omega) != set(tree.boundary()):
            raise ValueError("omega must be defined exactly on the tree boundary")
        items = tuple(sorted(omega.items(), key=lambda kv: groups.sort_key(F2, kv[0])))
        return cls(tree=tree, omega=items)

    def omega_dict(self):
        return dict(self.omega)


def catalan(n):
    return math.comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def _tree_sets(n):
    if n == 0:
        return (frozenset(),)
    out = []
    for left in range(n):
        for ta in _tree_sets(left):
            for tb in _tree_sets(n - 1 - left):
                nodes = {""}
                nodes.update("A" + w for w in ta)
                nodes.update("B" + w for w in tb)
                out.append(frozenset(nodes))
    return tuple(out)


def enumerate_trees(n, cap=12):
    """All trees with exactly n nodes; there are catalan(n) of them."""
    if n < 0:
        raise ValueError("tree size must be nonnegative")
    if n > cap:
        raise ValueError(f"tree size {n} exceeds the enumeration cap {cap}")
    return [Tree(nodes) for nodes in _tree_sets(n)]


def cylinder_measure(spec, M=3):
    """Product measure of E_{T, omega}: (1/M) ** |T-bar|."""
    return Fraction(1, M) ** (2 * spec.tree.size + 1)


def partition_mass(n_max, M=3):
    """Sum over tree sizes n <= n_max of C_n (M-1)^(n+1) M^-(2n+1).

    This is the total measure of all cylinders with |T| <= n_max; the full
    series sums to 1.
    """
    total = Fraction(0)
    for n in range(n_max + 1):
        total += catalan(n) * (M - 1) ** (n + 1) * Fraction(1, M ** (2 * n + 1))
    return total


def classify_cylinder(d, M=3):
    """The unique cylinder E_{T, omega} containing the configuration, or None
    when the window cannot decide (the tree of M-1 values reaches sites
    outside the window)."""
    if d.group != F2:
        raise ValueError("cylinders are defined over words, not z2 pairs")
    window = d.values
    if "" not in window:
        return None
    if window[""] != M - 1:
        tree = Tree(frozenset())
        return CylinderSpec.make(tree, {"": window[""]})
    tree_nodes = {""}
    omega = {}
    frontier = [""]
    while frontier:
        w = frontier.pop()
        for c in "AB":
            child = w + c
            if child not in window:
                return None
            if window[child] == M - 1:
                tree_nodes.add(child)
                frontier.append(child)
            else:
                omega[child] = window[child]
    return CylinderSpec.make(Tree(frozenset(tree_nodes)), omega)


@dataclass(frozen=True)
class PatternTable:
    """Allowed local SFT patterns (k, l, m) = (c_s, c_sa, c_sb) within a
    symmetric symbol range, under |M k - l - m| <= M - 1."""

    M: int
    bound: int
    allowed: frozenset


def allowed_patterns(M, bound):
    if M < 3:
        raise ValueError("M must be at least 3")
    rng = range(-bound, bound + 1)
    allowed = frozenset(
        (k, l, m)
        for k in rng
        for l in rng
        for m in rng
        if abs(M * k - l - m) <= M - 1
    )
    return PatternTable(M=M, bound=bound, allowed=allowed)


def pattern_completions(table, k, l=None, m=None):
    """All allowed triples with the given first entry and optional others."""
    out = [
        triple
        for triple in table.allowed
        if triple[0] == k
        and (l is None or triple[1] == l)
        and (m is None or triple[2] == m)
    ]
    return sorted(out)


@dataclass
class CarryResult:
    """A reduced configuration plus the exact carry bookkeeping.

    The defining identity is output - input = -carry * f' on all of the
    group, where f' = (M - a - b)* and output includes the spill values that
    landed outside the window.
    """

    config: Configuration
    carry: RingElement
    spill: dict


def _check_values(d, lo, hi):
    for el, v in d.values.items():
        if not (lo <= v <= hi):
            raise ValueOutOfRange(
                f"value {v} at {groups.format_element(d.group, el) or '1'} "
                f"outside {{{lo},...,{hi}}}"
            )


def reduce_cover(d, M):
    """One descending height sweep of the reduction process.

    Every window site with value >= M fires exactly once in its height turn:
    it loses M and each inverse-generator neighbor gains 1.  Window values
    end in {0,...,M-1}; carries to sites outside the window are returned as
    spill and are never fired.
    """
    _check_values(d, 0, M)
    group = d.group
    a, b = groups.generators(group)
    children = (groups.inverse(group, a), groups.inverse(group, b))
    work = dict(d.values)
    fired = {}
    spill = {}
    by_height = {}
    for el in work:
        by_height.setdefault(groups.height(group, el), []).append(el)
    for k in sorted(by_height, reverse=True):
        for s in sorted(by_height[k], key=lambda el: groups.sort_key(group, el)):
            if work[s] >= M:
                work[s] -= M
                fired[s] = fired.get(s, 0) + 1
                for c in children:
                    child = groups.multiply(group, s, c)
                    if child in work:
                        work[child] += 1
                    else:
                        spill[child] = spill.get(child, 0) + 1
    config = Configuration(group, work, (0, M - 1))
    return CarryResult(config=config, carry=RingElement(group, fired), spill=spill)


def carry_add(d, site, M, max_steps=100_000):
    """The addition machine: add 1 at the site, then topple until stable.

    Toppling order is the deterministic word order; the result equals
    d + delta_site - carry * f'.  A carry leaving the window raises
    BoundaryOverflow; exceeding max_steps raises NonTermination.
    """
    _check_values(d, 0, M - 1)
    group = d.group
    groups.check_element(group, site)
    if site not in d.values:
        raise ValueError("the incremented site must lie in the window")
    a, b = groups.generators(group)
    children = (groups.inverse(group, a), groups.inverse(group, b))
    work = dict(d.values)
    work[site] += 1
    fired = {}
    heap = []
    if work[site] >= M:
        heapq.heappush(heap, (groups.sort_key(group, site), site))
    steps = 0
    while heap:
        _, s = heapq.heappop(heap)
        if work[s] < M:
            continue
        steps += 1
        if steps > max_steps:
            raise NonTermination(f"toppling exceeded {max_steps} steps")
        work[s] -= M
        fired[s] = fired.get(s, 0) + 1
        for c in children:
            child = groups.multiply(group, s, c)
            if child not in work:
                raise BoundaryOverflow(child)
            work[child] += 1
            if work[child] >= M:
                heapq.heappush(heap, (groups.sort_key(group, child), child))
    config = Configuration(group, work, (0, M - 1))
    return CarryResult(config=config, carry=RingElement(group, fired), spill={})


PAIR_RESTRICTION = frozenset({(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)})

_FORCED_ZERO_PATTERNS = frozenset({(1, 0, 1), (1, 1, 0)})


def percolation_path(c, start, n, M=3):
    """Build the percolation word p in {a,b}^n from a difference
    configuration c valued in {-1,0,1} with c = 1 at the start site.

    Each step stands at the current site, reads the local pattern
    (c_s, c_sa, c_sb), prefers the a-successor when it carries 1, and records
    what the pattern forces: "zero" (the underlying symbol is pinned to 0
    there) for (1,0,1) and (1,1,0), or "pair" (the 5-of-9 restriction on the
    site and its b-successor) for (1,1,1).
    """
    if c.group != F2:
        raise ValueError("percolation paths are built over words")
    _check_values(c, -1, 1)
    table = allowed_patterns(M, 1)
    values = c.values
    if start not in values:
        raise ConstraintViolated("start site is outside the window")
    if values[start] != 1:
        raise ConstraintViolated("percolation must start on a site with value 1")
    site = start
    path = []
    steps = []
    for _ in range(n):
        sa = groups.multiply(F2, site, "a")
        sb = groups.multiply(F2, site, "b")
        if sa not in values or sb not in values:
            raise ConstraintViolated("window does not contain the reachable sites")
        pattern = (values[site], values[sa], values[sb])
        if pattern not in table.allowed:
            raise ConstraintViolated(f"pattern {pattern} at {site!r} is not allowed")
        if pattern in _FORCED_ZERO_PATTERNS:
            forcing = "zero"
        elif pattern == (1, 1, 1):
            forcing = "pair"
        else:
            raise ConstraintViolated(
                f"pattern {pattern} cannot continue a percolation path"
            )
        step = {"site": site, "pattern": pattern, "forcing": forcing}
        if forcing == "pair":
            step["pair_set"] = sorted(PAIR_RESTRICTION)
        steps.append(step)
        letter = "a" if values[sa] == 1 else "b"
        path.append(letter)
        site = sa if letter == "a" else sb
    return {"path": "".join(path), "steps": steps}


def injectivity_bound(n, M):
    """((2M + 2) / M^2) ** n, the per-step collision mass raised to the path
    length."""
    return Fraction(2 * M + 2, M * M) ** n


def binomial_collision_mass(n):
    """Sum over m of binom(n, m) (5/9)^m (1/3)^(n-m), exactly (8/9)^n."""
    return sum(
        math.comb(n, m) * Fraction(5, 9) ** m * Fraction(1, 3) ** (n - m)
        for m in range(n + 1)
    )
