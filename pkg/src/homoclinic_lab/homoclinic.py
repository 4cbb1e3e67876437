"""The homoclinic kernel w = (f*)^-1, the map phi(d) = pi(d . w), membership
residuals for X_f windows, and the 4-cover lift.

Coordinates of phi on finite-support inputs are exact rationals; windowed
inputs get rigorous interval enclosures whose tails come from the geometric
series of the kernel.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from . import groups
from .groups import F2, Z2, check_group
from .ring import PolyF, RingElement


@lru_cache(maxsize=None)
def _standard_poly(M, group):
    return PolyF.standard(M, group)

F_STAR_INVERSE = "f_star_inverse"
F_INVERSE = "f_inverse"


class UnsupportedGroup(ValueError):
    """Only the free group f2 and z2 instances are implemented."""


class ResidualNonzero(ValueError):
    """A window failed the X_f membership residual check."""


class WidthExceedsOne(ValueError):
    """An interval mod 1 is vacuous because its width reached 1."""


@dataclass(frozen=True)
class Kernel:
    """Closed-form geometric-series inverse of f* (or of f) for f = M - a - b.

    Coefficients are nonnegative, supported on the negative (resp. positive)
    monoid, with value M^-(len+1) at each monoid word in the free group and
    binomial multiplicity in z2.  The full l1 norm is 1/(M-2).
    """

    M: int
    group: str
    orientation: str
    truncation_radius: int

    def __post_init__(self):
        if self.orientation not in (F_STAR_INVERSE, F_INVERSE):
            raise ValueError(f"unknown orientation {self.orientation!r}")

    @property
    def _poly(self):
        return _standard_poly(self.M, self.group)

    def coefficient(self, el):
        """Exact coefficient at el; zero off the support monoid."""
        if self.orientation == F_INVERSE:
            return self._poly.inv_coeff(el)
        return self._poly.inv_coeff(groups.inverse(self.group, el))

    def partial_l1(self, n=None):
        """l1 mass through word length n: (1 - (2/M)^(n+1)) / (M - 2)."""
        if n is None:
            n = self.truncation_radius
        if n < 0:
            return Fraction(0)
        return (1 - Fraction(2, self.M) ** (n + 1)) / (self.M - 2)

    def tail_l1(self, n=None):
        """l1 mass beyond word length n: (2/M)^(n+1) / (M - 2)."""
        if n is None:
            n = self.truncation_radius
        return Fraction(2, self.M) ** (n + 1) / (self.M - 2)

    @property
    def full_l1(self):
        return Fraction(1, self.M - 2)

    def truncated_ring(self):
        """The kernel restricted to its truncation radius, as a RingElement."""
        monoid = (
            groups.negative_monoid
            if self.orientation == F_STAR_INVERSE
            else groups.positive_monoid
        )
        terms = {el: self.coefficient(el) for el in monoid(self.group, self.truncation_radius)}
        return RingElement(self.group, terms)


def kernel(M, group=F2, radius=0):
    if group not in groups.GROUPS:
        raise UnsupportedGroup(f"no kernel for group {group!r}")
    if M < 3:
        raise ValueError("M must be at least 3")
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    return Kernel(M=M, group=group, orientation=F_STAR_INVERSE, truncation_radius=radius)


@dataclass
class Configuration:
    """Integer symbols on an explicit finite window, with a declared alphabet."""

    group: str
    values: dict
    alphabet: tuple

    def __post_init__(self):
        check_group(self.group)
        lo, hi = self.alphabet
        self.alphabet = (int(lo), int(hi))
        if lo > hi:
            raise ValueError("alphabet range is empty")
        for el, v in self.values.items():
            groups.check_element(self.group, el)
            if not isinstance(v, int) or not (lo <= v <= hi):
                raise ValueError(
                    f"value {v!r} at {groups.format_element(self.group, el) or '1'} "
                    f"outside alphabet [{lo}, {hi}]"
                )

    def window(self):
        return set(self.values)

    def get(self, el, default=0):
        return self.values.get(el, default)

    def support(self):
        return sorted(
            (el for el, v in self.values.items() if v),
            key=lambda el: groups.sort_key(self.group, el),
        )

    def as_ring(self):
        return RingElement(self.group, dict(self.values))

    def copy(self):
        return Configuration(self.group, dict(self.values), self.alphabet)

    def to_json_dict(self):
        order = sorted(self.values, key=lambda el: groups.sort_key(self.group, el))
        return {
            "group": self.group,
            "alphabet": [self.alphabet[0], self.alphabet[1]],
            "values": [
                {"w": groups.format_element(self.group, el), "v": self.values[el]}
                for el in order
            ],
        }

    @classmethod
    def from_json_dict(cls, data):
        group = data["group"]
        values = {
            groups.parse_element(group, entry["w"]): int(entry["v"])
            for entry in data["values"]
        }
        lo, hi = data["alphabet"]
        return cls(group, values, (int(lo), int(hi)))


def _fraction_json(value):
    return {"num": str(value.numerator), "den": str(value.denominator)}


@dataclass(frozen=True)
class TorusValue:
    """A point of R/Z, either exact or enclosed in an interval of width < 1.

    Normalized so lo lies in [0, 1); hi = lo for exact values.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo = Fraction(self.lo)
        hi = Fraction(self.hi)
        if hi < lo:
            raise ValueError("empty torus interval")
        if hi - lo >= 1:
            raise WidthExceedsOne(f"interval width {hi - lo} is not below 1")
        shift = math.floor(lo)
        object.__setattr__(self, "lo", lo - shift)
        object.__setattr__(self, "hi", hi - shift)

    @classmethod
    def exact(cls, value):
        value = Fraction(value)
        return cls(value, value)

    @classmethod
    def enclosure(cls, lo, hi):
        return cls(lo, hi)

    @property
    def is_exact(self):
        return self.lo == self.hi

    @property
    def value(self):
        if not self.is_exact:
            raise ValueError("torus value is an enclosure, not exact")
        return self.lo

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, value):
        """Whether the real number `value` lies in the interval mod 1."""
        value = Fraction(value)
        n = math.ceil(self.lo - value)
        return value + n <= self.hi

    def contains_torus(self, other):
        """Whether `other`'s interval fits inside this one mod 1."""
        n = math.ceil(self.lo - other.lo)
        return other.lo + n >= self.lo and other.hi + n <= self.hi

    def to_json_dict(self):
        if self.is_exact:
            return _fraction_json(self.lo)
        return {"lo": _fraction_json(self.lo), "hi": _fraction_json(self.hi)}

    def __repr__(self):
        if self.is_exact:
            return f"TorusValue({self.lo})"
        return f"TorusValue([{self.lo}, {self.hi}])"


def phi_exact(d, window, M):
    """Exact torus coordinates of phi(d) = pi(d . w) on the window.

    d is treated as zero outside its own window (finite support).
    """
    kern = kernel(M, d.group)
    group = d.group
    out = {}
    for s in window:
        total = Fraction(0)
        for t, v in d.values.items():
            if v:
                u = groups.multiply(group, groups.inverse(group, t), s)
                total += v * kern.coefficient(u)
        out[s] = TorusValue.exact(total)
    return out


def _cone_tail(group, s, window, M, max_len):
    """Exact kernel mass sum_t K(t^-1 s) over sites t = s.v (v positive)
    lying outside the window.

    Walks the positive monoid; once a site is outside the window at monoid
    depth beyond max_len + |s|, every deeper site has word length > max_len,
    so the whole subtree contributes the closed geometric form.
    """
    gens = groups.generators(group)
    s_len = groups.word_length(group, s)
    limit = max_len + s_len

    def walk(site, depth):
        inside = site in window
        if not inside and depth > limit:
            # full subtree: sum_j 2^j M^-(depth+j+1) = M^-(depth+1) * M/(M-2)
            return Fraction(1, M**depth) * Fraction(1, M - 2)
        mass = Fraction(0) if inside else Fraction(1, M ** (depth + 1))
        for c in gens:
            mass += walk(groups.multiply(group, site, c), depth + 1)
        return mass

    return walk(s, 0)


def phi_windowed(d, eval_window, M):
    """Interval enclosures of phi at eval_window coordinates, valid for every
    extension of d beyond its window by alphabet-range symbols.

    Each coordinate is [exact + lo*tail_s, exact + hi*tail_s] where tail_s is
    the exact kernel mass escaping the window at that coordinate and (lo, hi)
    is the alphabet range.
    """
    group = d.group
    kern = kernel(M, group)
    window = d.window()
    max_len = max((groups.word_length(group, el) for el in window), default=-1)
    alo, ahi = d.alphabet
    out = {}
    for s in eval_window:
        exact = Fraction(0)
        for t, v in d.values.items():
            if v:
                u = groups.multiply(group, groups.inverse(group, t), s)
                exact += v * kern.coefficient(u)
        tail = _cone_tail(group, s, window, M, max_len)
        out[s] = TorusValue.enclosure(exact + alo * tail, exact + ahi * tail)
    return out


def _as_torus(value):
    if isinstance(value, TorusValue):
        return value
    return TorusValue.exact(value)


def xf_residual(x, M):
    """Residual M x_t - x_{ta} - x_{tb} mod 1 at every interior site of the
    window (sites whose a- and b-successors are also present).

    All-zero residuals certify consistency with X_f membership.
    """
    if not x:
        return {}
    some_key = next(iter(x))
    group = F2 if isinstance(some_key, str) else Z2
    a, b = groups.generators(group)
    out = {}
    for t, xt in x.items():
        ta = groups.multiply(group, t, a)
        tb = groups.multiply(group, t, b)
        if ta in x and tb in x:
            vt, va, vb = _as_torus(xt), _as_torus(x[ta]), _as_torus(x[tb])
            lo = M * vt.lo - va.hi - vb.hi
            hi = M * vt.hi - va.lo - vb.lo
            out[t] = TorusValue.enclosure(lo, hi)
    return out


def four_cover_lift(x, M):
    """Lift an exact X_f window to symbols d_t = M v_t - v_{ta} - v_{tb} + 1
    over the alphabet {0, ..., M}, where v is the fractional representative
    in [0,1) of each coordinate.

    Defined on interior sites; raises ResidualNonzero if the window is not
    exactly consistent with the X_f constraint.
    """
    if not x:
        return None
    some_key = next(iter(x))
    group = F2 if isinstance(some_key, str) else Z2
    a, b = groups.generators(group)
    values = {}
    for t, xt in x.items():
        xt = _as_torus(xt)
        if not xt.is_exact:
            raise ValueError("four_cover_lift needs exact coordinates")
        ta = groups.multiply(group, t, a)
        tb = groups.multiply(group, t, b)
        if ta in x and tb in x:
            raw = M * xt.value - _as_torus(x[ta]).value - _as_torus(x[tb]).value + 1
            if raw.denominator != 1:
                raise ResidualNonzero(
                    f"residual {raw - 1} at {groups.format_element(group, t) or '1'}"
                )
            d = int(raw)
            if not (0 <= d <= M):
                raise ResidualNonzero(f"lift symbol {d} escapes {{0,...,{M}}}")
            values[t] = d
    return Configuration(group, values, (0, M))


def homoclinic_point(g, window, M):
    """Exact coordinates of g . x_delta on the window, for integral g."""
    if not g.is_integral():
        raise ValueError("homoclinic points come from integral ring elements")
    d = Configuration(
        group=g.group,
        values={el: int(c) for el, c in g.terms.items()},
        alphabet=(
            min((int(c) for c in g.terms.values()), default=0),
            max((int(c) for c in g.terms.values()), default=0),
        ),
    )
    return phi_exact(d, window, M)
