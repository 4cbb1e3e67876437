"""Group elements and word combinatorics for the free group F2 and Z^2.

Elements are plain Python values rather than wrapper objects:

* ``f2``: a reduced word over the alphabet ``a, b, A, B`` where ``A = a^-1``
  and ``B = b^-1``.  The identity is the empty string ``""``.
* ``z2``: a pair ``(i, j)`` of ints, with the generators ``a = (1, 0)`` and
  ``b = (0, 1)`` written multiplicatively.

Every function takes the group name explicitly so callers cannot mix the two
by accident; mixing types raises :class:`GroupMismatch`.
"""

from collections import deque

F2 = "f2"
Z2 = "z2"

GROUPS = (F2, Z2)

LETTERS = "abAB"
_INVERSE = {"a": "A", "b": "B", "A": "a", "B": "b"}
# lexicographic order used everywhere: a < b < A < B
_LETTER_RANK = {c: i for i, c in enumerate(LETTERS)}


class GroupMismatch(TypeError):
    """An element of one group was passed where the other was expected."""


def check_group(group):
    if group not in GROUPS:
        raise ValueError(f"unknown group {group!r}; expected one of {GROUPS}")
    return group


def identity(group):
    check_group(group)
    return "" if group == F2 else (0, 0)


def generators(group):
    """The two positive generators (a, b) of the group."""
    check_group(group)
    if group == F2:
        return ("a", "b")
    return ((1, 0), (0, 1))


def check_element(group, el):
    check_group(group)
    if group == F2:
        if not isinstance(el, str):
            raise GroupMismatch(f"f2 element must be str, got {type(el).__name__}")
        return el
    if not (isinstance(el, tuple) and len(el) == 2):
        raise GroupMismatch(f"z2 element must be an (i, j) tuple, got {el!r}")
    return el


def reduce_word(word):
    """Freely reduce a word over a, b, A, B."""
    out = []
    for c in word:
        if c not in _INVERSE:
            raise ValueError(f"invalid letter {c!r} in word {word!r}")
        if out and out[-1] == _INVERSE[c]:
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def multiply(group, g, h):
    check_element(group, g)
    check_element(group, h)
    if group == Z2:
        return (g[0] + h[0], g[1] + h[1])
    # only the seam between the two reduced words can cancel
    i = len(g)
    j = 0
    while i > 0 and j < len(h) and _INVERSE[g[i - 1]] == h[j]:
        i -= 1
        j += 1
    return g[:i] + h[j:]


def inverse(group, g):
    check_element(group, g)
    if group == Z2:
        return (-g[0], -g[1])
    return "".join(_INVERSE[c] for c in reversed(g))


def word_length(group, g):
    check_element(group, g)
    if group == Z2:
        return abs(g[0]) + abs(g[1])
    return len(g)


def height(group, g):
    """Image of g under the homomorphism sending both a and b to 1."""
    check_element(group, g)
    if group == Z2:
        return g[0] + g[1]
    return sum(1 if c in "ab" else -1 for c in g)


def sort_key(group, g):
    """Total order: word length first, then a fixed tie-break.

    For f2 the tie-break is letterwise with a < b < A < B; for z2 it is the
    plain tuple order on (i, j).
    """
    check_element(group, g)
    if group == Z2:
        return (abs(g[0]) + abs(g[1]), g[0], g[1])
    return (len(g), tuple(_LETTER_RANK[c] for c in g))


def ball(group, radius, max_elements=2_000_000):
    """All elements with word length <= radius, sorted by sort_key.

    |B_n| = 2 * 3^n - 1 for f2 and 2n^2 + 2n + 1 for z2, so the guard on
    max_elements keeps an oversized radius from exhausting memory.
    """
    check_group(group)
    if radius < 0:
        return []
    if group == F2:
        size = 2 * 3**radius - 1
    else:
        size = 2 * radius * radius + 2 * radius + 1
    if size > max_elements:
        raise WindowTooLarge(
            f"ball of radius {radius} in {group} has {size} elements "
            f"(limit {max_elements})"
        )
    if group == Z2:
        out = [
            (i, j)
            for i in range(-radius, radius + 1)
            for j in range(-radius + abs(i), radius - abs(i) + 1)
        ]
        out.sort(key=lambda el: sort_key(Z2, el))
        return out
    out = [""]
    frontier = [""]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for c in LETTERS:
                if w and _INVERSE[w[-1]] == c:
                    continue
                nxt.append(w + c)
        frontier = nxt
        out.extend(frontier)
    out.sort(key=lambda el: sort_key(F2, el))
    return out


def sphere(group, radius):
    """Elements of word length exactly radius."""
    return [g for g in ball(group, radius) if word_length(group, g) == radius]


def negative_monoid(group, radius):
    """Words over the inverse generators only, up to the given length.

    For f2 these are the words over A and B; for z2 the pairs with both
    coordinates <= 0.  Sorted by sort_key.
    """
    check_group(group)
    if group == Z2:
        out = [
            (-i, -j)
            for i in range(radius + 1)
            for j in range(radius + 1 - i)
        ]
        out.sort(key=lambda el: sort_key(Z2, el))
        return out
    out = [""]
    frontier = [""]
    for _ in range(radius):
        frontier = [w + c for w in frontier for c in "AB"]
        out.extend(frontier)
    out.sort(key=lambda el: sort_key(F2, el))
    return out


def positive_monoid(group, radius):
    """Words over the positive generators a and b, up to the given length."""
    neg = negative_monoid(group, radius)
    return sorted(
        (inverse(group, g) for g in neg), key=lambda el: sort_key(group, el)
    )


def format_element(group, g):
    """Serialized form: the reduced word itself (empty string = identity)
    for f2, "(i,j)" for z2."""
    check_element(group, g)
    if group == Z2:
        return f"({g[0]},{g[1]})"
    return g


def parse_element(group, text):
    check_group(group)
    text = text.strip()
    if group == Z2:
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError(f"cannot parse z2 element from {text!r}")
        parts = text[1:-1].split(",")
        if len(parts) != 2:
            raise ValueError(f"cannot parse z2 element from {text!r}")
        return (int(parts[0]), int(parts[1]))
    word = reduce_word(text)
    if word != text:
        raise ValueError(f"word {text!r} is not reduced")
    return word


class WindowTooLarge(ValueError):
    """A requested ball or window exceeds the configured element budget."""


def is_in_ball(group, g, radius):
    return word_length(group, g) <= radius


def cayley_neighbors(group, g):
    """g times each of a, b, a^-1, b^-1 in that order."""
    check_element(group, g)
    if group == Z2:
        i, j = g
        return [(i + 1, j), (i, j + 1), (i - 1, j), (i, j - 1)]
    return [multiply(F2, g, c) for c in LETTERS]


def bfs_distances(group, sources, radius):
    """Word metric distance from a set of sources, out to radius."""
    dist = {}
    q = deque()
    for s in sources:
        check_element(group, s)
        dist[s] = 0
        q.append(s)
    while q:
        g = q.popleft()
        d = dist[g]
        if d == radius:
            continue
        for h in cayley_neighbors(group, g):
            if h not in dist:
                dist[h] = d + 1
                q.append(h)
    return dist
