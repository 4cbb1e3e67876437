import pytest

from homoclinic_lab import groups
from homoclinic_lab.groups import F2, Z2


def test_reduce_word_cancels_adjacent_inverses():
    assert groups.reduce_word("aA") == ""
    assert groups.reduce_word("abBA") == ""
    assert groups.reduce_word("aab") == "aab"
    assert groups.reduce_word("aBbA") == ""
    assert groups.reduce_word("baBA") == "baBA"


def test_multiply_and_inverse_f2():
    assert groups.multiply(F2, "ab", "BA") == ""
    assert groups.multiply(F2, "a", "a") == "aa"
    assert groups.inverse(F2, "ab") == "BA"
    assert groups.inverse(F2, "") == ""
    for w in ("", "a", "Ab", "baB"):
        assert groups.multiply(F2, w, groups.inverse(F2, w)) == ""


def test_multiply_and_inverse_z2():
    assert groups.multiply(Z2, (1, 2), (-1, 0)) == (0, 2)
    assert groups.inverse(Z2, (3, -4)) == (-3, 4)
    assert groups.identity(Z2) == (0, 0)


def test_height_counts_generator_letters():
    assert groups.height(F2, "") == 0
    assert groups.height(F2, "a") == 1
    assert groups.height(F2, "A") == -1
    assert groups.height(F2, "ab") == 2
    assert groups.height(F2, "aB") == 0
    assert groups.height(Z2, (2, -3)) == -1


@pytest.mark.parametrize("n,size", [(0, 1), (1, 5), (2, 17), (3, 53)])
def test_ball_sizes_f2(n, size):
    # |B_n| = 2 * 3^n - 1 in the free group
    assert len(groups.ball(F2, n)) == size


@pytest.mark.parametrize("n,size", [(0, 1), (1, 5), (2, 13), (3, 25)])
def test_ball_sizes_z2(n, size):
    # |B_n| = 2n^2 + 2n + 1 in the plane
    assert len(groups.ball(Z2, n)) == size


def test_sphere_sizes():
    assert len(groups.sphere(F2, 0)) == 1
    assert len(groups.sphere(F2, 1)) == 4
    assert len(groups.sphere(F2, 3)) == 4 * 9
    assert len(groups.sphere(Z2, 2)) == 8


def test_monoid_windows():
    neg = groups.negative_monoid(F2, 2)
    assert len(neg) == 7
    assert all(all(c in "AB" for c in w) for w in neg)
    pos = groups.positive_monoid(F2, 3)
    assert len(pos) == 15
    assert len(groups.negative_monoid(Z2, 3)) == 10
    assert all(i <= 0 and j <= 0 for i, j in groups.negative_monoid(Z2, 3))


def test_ball_is_sorted_and_deduplicated():
    ball = groups.ball(F2, 2)
    assert ball[0] == ""
    assert ball[1:5] == ["a", "b", "A", "B"]
    assert len(set(ball)) == len(ball)
    keys = [groups.sort_key(F2, el) for el in ball]
    assert keys == sorted(keys)


def test_format_parse_round_trip():
    for el in groups.ball(F2, 2):
        assert groups.parse_element(F2, groups.format_element(F2, el)) == el
    for el in groups.ball(Z2, 2):
        assert groups.parse_element(Z2, groups.format_element(Z2, el)) == el
    assert groups.format_element(F2, "") == ""
    assert groups.format_element(Z2, (1, -2)) == "(1,-2)"


def test_parse_element_rejects_garbage():
    with pytest.raises(ValueError):
        groups.parse_element(F2, "ax")
    with pytest.raises(ValueError):
        groups.parse_element(Z2, "(1,)")


def test_cayley_neighbors():
    nb = groups.cayley_neighbors(F2, "")
    assert sorted(nb) == sorted(["a", "b", "A", "B"])
    assert len(groups.cayley_neighbors(Z2, (0, 0))) == 4


def test_ball_cap():
    with pytest.raises(groups.WindowTooLarge):
        groups.ball(F2, 30)
