import pytest
from mpmath import mp, mpc, mpf

from nazeta import epstein

SQUARE = [[1, 0], [0, 1]]
HEX = [[1, mpf(1) / 2], [mpf(1) / 2, 1]]


def dirichlet_beta(s):
    return (mp.zeta(s, mpf(1) / 4) - mp.zeta(s, mpf(3) / 4)) / mp.power(4, s)


def l_minus3(s):
    return (mp.zeta(s, mpf(1) / 3) - mp.zeta(s, mpf(2) / 3)) / mp.power(3, s)


@pytest.mark.parametrize("s", [mpf(2), mpc(1.5, 4), mpc(0.3, 2), mpc(-1.2, -5)])
def test_square_lattice_is_four_zeta_beta(s):
    with mp.workdps(45):
        ref = 4 * mp.zeta(s) * dirichlet_beta(s)
        ours = epstein.epstein_zeta(SQUARE, s, 35)
        assert abs(ours - ref) <= mpf(10) ** -32 * abs(ref)


def test_hexagonal_lattice_is_six_zeta_l():
    with mp.workdps(45):
        s = mpc(2.5, 1)
        ref = 6 * mp.zeta(s) * l_minus3(s)
        assert abs(epstein.epstein_zeta(HEX, s, 35) - ref) <= mpf(10) ** -32 * abs(ref)


def test_split_point_does_not_matter():
    gram = [[mpf("1.7"), mpf("0.4")], [mpf("0.4"), mpf("0.9")]]
    with mp.workdps(45):
        s = mpc(0.8, 3)
        a = epstein.completed_epstein(gram, s, 35)
        b = epstein.completed_epstein(gram, s, 35, split=mpf("0.6"))
        assert abs(a - b) <= mpf(10) ** -32 * abs(a)


def test_functional_equation_with_dual_form():
    gram = [[mpf("2.1"), mpf("0.3"), 0], [mpf("0.3"), mpf("1.2"), mpf("0.1")], [0, mpf("0.1"), mpf("0.8")]]
    with mp.workdps(45):
        m = mp.matrix(gram)
        inv = m ** -1
        dual = [[inv[i, j] for j in range(3)] for i in range(3)]
        s = mpc(0.4, 2)
        lhs = epstein.completed_epstein(gram, s, 35)
        rhs = epstein.completed_epstein(dual, mpf(3) / 2 - s, 35) / mp.sqrt(mp.det(m))
        assert abs(lhs - rhs) <= mpf(10) ** -32 * abs(lhs)


def test_agrees_with_box_sum_where_it_converges():
    gram = [[mpf("1.3"), mpf("0.2")], [mpf("0.2"), mpf("0.7")]]
    with mp.workdps(30):
        s = mpf(6)
        theta = epstein.epstein_zeta(gram, s, 25)
        box = epstein.direct_epstein(gram, s, 25)
        assert abs(theta - box) < mpf(10) ** -10


def test_short_vectors_counts_half_of_the_circle():
    # r_2(1) + r_2(2) + r_2(4) + r_2(5) = 4 + 4 + 4 + 8 = 20 nonzero points, 10 pairs
    vecs = list(epstein.short_vectors(SQUARE, 5))
    assert len(vecs) == 10
    assert len({tuple(-c for c in v) for v in vecs} & set(vecs)) == 0


def test_short_vectors_rejects_indefinite():
    with pytest.raises(ValueError):
        list(epstein.short_vectors([[1, 2], [2, 1]], 3))
