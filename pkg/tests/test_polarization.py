import numpy as np
import pytest

from agpolar.channel import DMC, bhattacharyya, qsc, split_exact, split_exact_matrix
from agpolar.codeset import MonomialIndexSet, decreasing_closure
from agpolar.curve import custom_curve, rational_curve
from agpolar.errors import (
    LengthMismatch,
    NotSymmetric,
    OutOfRange,
    PreconditionViolated,
    TooLarge,
)
from agpolar.galois import field_new
from agpolar.kernel import build_kernel
from agpolar.polarization import (
    MultiIndex,
    ZEstimates,
    bn_permutation,
    decode_sc,
    encode,
    encode_many,
    gn_matrix,
    mc_estimate_z,
    row_monomial,
    select_info_set,
    simulate_bler,
    theoretical_order,
    transmit,
)


def bsc(p):
    return qsc(field_new(2, 1), p)


# -- indexing and the transform matrix ----------------------------------


def test_multiindex_roundtrip():
    mi = MultiIndex.from_value(10, 8, 2)
    assert mi.digits == (2, 1)
    assert mi.value == 10
    assert mi.row() == 54
    with pytest.raises(OutOfRange):
        MultiIndex.from_value(64, 8, 2)


def test_bn_permutation():
    assert bn_permutation(2, 2).tolist() == [0, 2, 1, 3]
    assert bn_permutation(2, 1).tolist() == [0, 1]
    for l, n in ((2, 3), (3, 2), (8, 2)):
        p = bn_permutation(l, n)
        assert p[p].tolist() == list(range(l**n))  # involution
    with pytest.raises(TooLarge):
        bn_permutation(2, 25)


def test_gn_matrix_arikan(ka):
    g2 = gn_matrix(ka, 2)
    assert g2.tolist() == [
        [1, 0, 0, 0],
        [1, 0, 1, 0],
        [1, 1, 0, 0],
        [1, 1, 1, 1],
    ]
    assert np.array_equal(gn_matrix(ka, 1), ka.matrix)


@pytest.mark.parametrize("name,n", [("ka", 3), ("kr", 2), ("kh", 2)])
def test_gn_matrix_orderg_identity(name, n, request):
    # G_n(i, j) = prod_t G(row digit_t, point digit_t)
    k = request.getfixturevalue(name)
    g = gn_matrix(k, n)
    l, f = k.l, k.field
    for i in range(l**n):
        idig = MultiIndex.from_value(l**n - 1 - i, l, n).digits
        for j in range(l**n):
            jdig = MultiIndex.from_value(j, l, n).digits
            prod = 1
            # variable t pairs row digit t with the point digit at the
            # mirrored position of j's expansion
            for t in range(n):
                prod = f.mul(prod, int(k.matrix[l - 1 - idig[t], jdig[n - 1 - t]]))
            assert g[i, j] == prod


def test_gn_matrix_hermitian_first_row(kh):
    g2 = gn_matrix(kh, 2)
    top = kh.matrix[0]  # x^3y evaluations
    f = kh.field
    for j in range(64):
        assert g2[0, j] == f.mul(int(top[j // 8]), int(top[j % 8]))


def test_gn_matrix_cap(ka):
    with pytest.raises(TooLarge):
        gn_matrix(ka, 11)


def test_row_monomial(kh):
    assert row_monomial(kh, 2, 1).digits == (7, 7)
    assert row_monomial(kh, 2, 64).digits == (0, 0)
    # row 47 carries value 17 = digits (1, 2): x_1 * y_2
    mi = row_monomial(kh, 2, 47)
    assert mi.value == 17
    g2 = gn_matrix(kh, 2)
    f = kh.field
    x_row, y_row = kh.matrix[6], kh.matrix[5]
    for j in range(64):
        assert g2[46, j] == f.mul(int(x_row[j // 8]), int(y_row[j % 8]))
    with pytest.raises(OutOfRange):
        row_monomial(kh, 2, 65)


# -- encoding -----------------------------------------------------------


@pytest.mark.parametrize("name,n", [("ka", 3), ("kr", 2), ("kh", 2)])
def test_encode_matches_matrix(name, n, request):
    k = request.getfixturevalue(name)
    rng = np.random.default_rng(7)
    g = gn_matrix(k, n)
    total = k.l**n
    f = k.field
    for _ in range(5):
        u = rng.integers(0, f.q, size=total)
        x = encode(k, n, u)
        direct = np.zeros(total, dtype=np.int64)
        for i in range(total):
            direct = f.add_table[direct, f.mul_table[u[i], g[i]]]
        assert np.array_equal(x, direct)
    assert not encode(k, n, np.zeros(total, dtype=np.int64)).any()
    unit = np.zeros(total, dtype=np.int64)
    unit[-1] = 1
    assert np.array_equal(encode(k, n, unit), np.ones(total, dtype=np.int64))


def test_encode_many_consistent(kr):
    rng = np.random.default_rng(8)
    u = rng.integers(0, 4, size=(6, 16))
    batch = encode_many(kr, 2, u)
    for s in range(6):
        assert np.array_equal(batch[s], encode(kr, 2, u[s]))


# -- Monte Carlo Z estimation -------------------------------------------


def test_mc_noiseless_and_uniform(ka):
    z0 = mc_estimate_z(ka, 2, bsc(0.0), samples=200, seed=1)
    assert np.all(z0.est < 1e-12)
    z1 = mc_estimate_z(ka, 2, bsc(0.5), samples=200, seed=1)
    assert np.all(np.abs(z1.est - 1.0) < 1e-9)


def test_mc_matches_exact_splits(ka):
    w = bsc(0.1)
    z = mc_estimate_z(ka, 1, w, samples=20000, seed=3)
    for i in (1, 2):
        exact = bhattacharyya(split_exact(w, ka, i))
        assert abs(z.est[i - 1] - exact) <= 3 * max(z.se[i - 1], 1e-6)


def test_mc_matches_exact_splits_gf4(kr, gf4):
    w = qsc(gf4, 0.1)
    z = mc_estimate_z(kr, 1, w, samples=20000, seed=3)
    for i in range(1, 5):
        exact = bhattacharyya(split_exact(w, kr, i))
        assert abs(z.est[i - 1] - exact) <= 3 * max(z.se[i - 1], 1e-6)


def test_mc_deterministic(kr, gf4):
    w = qsc(gf4, 0.1)
    a = mc_estimate_z(kr, 1, w, samples=500, seed=9)
    b = mc_estimate_z(kr, 1, w, samples=500, seed=9)
    assert np.array_equal(a.est, b.est)


def test_mc_requires_sof(ka):
    gf2 = field_new(2, 1)
    asym = DMC(gf2, [0, 1], [[0.9, 0.1], [0.3, 0.7]])
    with pytest.raises(NotSymmetric):
        mc_estimate_z(ka, 1, asym, samples=10, seed=0)


def test_zestimates_serialize(ka):
    z = mc_estimate_z(ka, 1, bsc(0.1), samples=50, seed=4)
    d = z.serialize()
    assert d["samples"] == 50 and d["seed"] == 4
    assert [row["index"] for row in d["z"]] == [1, 2]


# -- information-set selection ------------------------------------------


def _exact_z_estimates(k, n, w):
    g = gn_matrix(k, n)
    total = k.l**n
    est = np.array(
        [bhattacharyya(split_exact_matrix(w, g, i)) for i in range(1, total + 1)]
    )
    return ZEstimates(l=k.l, n=n, est=est, se=np.zeros(total), samples=0, seed=0)


def test_select_trivial(ka):
    z = mc_estimate_z(ka, 2, bsc(0.0), samples=50, seed=1)
    assert select_info_set(z, 4).values() == [0, 1, 2, 3]
    assert select_info_set(z, 0).values() == []
    with pytest.raises(OutOfRange):
        select_info_set(z, 5)


def test_select_matches_exact_binary(gf2):
    k = build_kernel(rational_curve(gf2))
    w = bsc(0.1)
    exact = _exact_z_estimates(k, 3, w)
    best = select_info_set(exact, 4).values()
    mc = mc_estimate_z(k, 3, w, samples=100000, seed=5)
    assert select_info_set(mc, 4).values() == best


def test_select_weakly_decreasing_rational(kr, rat4, gf4):
    w = qsc(gf4, 0.1)
    exact = _exact_z_estimates(kr, 1, w)
    for dim in range(5):
        chosen = select_info_set(exact, dim, hstar=rat4.hstar)
        closed = decreasing_closure(chosen, rat4)
        assert closed.values() == chosen.values()


# -- SC decoding and simulation -----------------------------------------


@pytest.mark.parametrize("name,n", [("ka", 2), ("kr", 2), ("kh", 1)])
def test_decode_noiseless_roundtrip(name, n, request):
    k = request.getfixturevalue(name)
    w = qsc(k.field, 0.0)
    rng = np.random.default_rng(11)
    total = k.l**n
    for _ in range(3):
        u = rng.integers(0, k.field.q, size=total)
        x = encode(k, n, u)
        assert np.array_equal(decode_sc(k, n, w, x, {}), u)


def test_decode_all_frozen(ka):
    w = bsc(0.1)
    frozen = {0: 1, 1: 0, 2: 1, 3: 0}
    y = np.array([0, 0, 0, 0])
    assert decode_sc(ka, 2, w, y, frozen).tolist() == [1, 0, 1, 0]


def test_decode_length_mismatch(ka):
    with pytest.raises(LengthMismatch):
        decode_sc(ka, 2, bsc(0.1), np.zeros(3, dtype=np.int64), {})


def test_decode_beats_uncoded(ka):
    # N=8 rate 1/2 polar code vs uncoded word error 1 - 0.95^8
    w = bsc(0.05)
    exact = _exact_z_estimates(ka, 3, w)
    # 0-based channel position of monomial value v is N - 1 - v
    info = sorted(8 - 1 - v for v in select_info_set(exact, 4).values())
    bler = simulate_bler(ka, 3, w, info, trials=10000, seed=13)
    assert bler < 1 - 0.95**8


def test_transmit_deterministic(gf4):
    w = qsc(gf4, 0.2)
    x = np.arange(4).repeat(25)
    a = transmit(w, x, np.random.default_rng(2))
    b = transmit(w, x, np.random.default_rng(2))
    assert np.array_equal(a, b)
    assert ((a == x).mean()) > 0.5


# -- theoretical degradation order --------------------------------------


def test_order_hermitian_n1(kh, herm4):
    order = theoretical_order(kh, herm4, 1)
    # x^2y (index 6) dominates xy, x^2, y, x, 1
    assert order[6] == {4, 3, 2, 1, 0}
    # x^3y is blocked by the pole-order guard (m = 9 >= l = 8)
    assert order[7] == set()
    # the constant dominates nothing
    assert order[0] == set()


def test_order_rational_constant_dominated(kr, rat4):
    order = theoretical_order(kr, rat4, 1)
    for k in range(1, 4):
        assert 0 in order[k]
    assert order[3] == {0, 1, 2}
    assert order[0] == set()


def test_order_hermitian_n2(kh, herm4):
    order = theoretical_order(kh, herm4, 2)
    # y_1 x_2 (value 10) dominates x_2 (8), y_1 (2), 1 (0) and, by
    # transposition to the lower position, x_1 (1)
    assert {8, 2, 0, 1} <= order[10]


def test_order_transitive(kr, rat4):
    order = theoretical_order(kr, rat4, 2)
    for i, dom in order.items():
        assert i not in dom
        for j in dom:
            assert order[j] <= dom


def test_order_consistent_with_exact_splits(kr, rat4, gf4):
    w = qsc(gf4, 0.1)
    order = theoretical_order(kr, rat4, 1)
    z = {k: bhattacharyya(split_exact(w, kr, 4 - k)) for k in range(4)}
    for i, dom in order.items():
        for j in dom:
            assert z[i] >= z[j] - 1e-9


def test_order_precondition():
    # genus 3 on 4 points: l < 2g
    bad = custom_curve(
        {
            "family": "custom",
            "field": {"p": 2, "r": 3},
            "points": [[0], [1], [2], [3]],
            "gens": [{"name": "t", "pole": 1}],
            "genus": 3,
            "hstar": [0, 1, 2, 7],
            "basis": [[0], [1], [2], [7]],
        }
    )
    k = build_kernel(bad)
    with pytest.raises(PreconditionViolated):
        theoretical_order(k, bad, 1)
