import math

import pytest

from splitconv.costmodel import (
    Method,
    add_oaa,
    add_split,
    asymptotic_costs,
    full_fft_cost,
    mul_oaa,
    mul_split,
    spatial_cost,
    sweep,
)


def test_oaa_spot_values():
    assert mul_oaa(8, 1) == 64
    assert mul_oaa(3, 3) == pytest.approx(257.19, abs=5e-3)
    assert mul_oaa(224, 3) == pytest.approx(1.4338e6, rel=1e-4)
    assert add_oaa(8, 1) == 0
    assert add_oaa(3, 3) == pytest.approx(238.19, abs=5e-3)
    for n in (1, 7, 224):
        assert add_oaa(n, 1) == 0


def test_split_spot_values():
    assert mul_split(16, 16, 1) == 4352
    assert add_split(16, 16, 1) == 4096
    assert mul_split(224, 16, 3) == pytest.approx(1.1227e6, rel=1e-4)


def test_log_of_square_parsing():
    # 2 (2k-1)^2 log2((2k-1)^2) with k=2 -> 2 * 9 * log2(9)
    assert mul_oaa(2, 2) - 9 == pytest.approx(2 * 9 * math.log2(9))


@pytest.mark.parametrize("fn,args", [
    (mul_oaa, (0, 3)), (add_oaa, (4, 0)), (mul_split, (4, 0, 3)), (add_split, (-1, 4, 3)),
])
def test_rejects_non_positive(fn, args):
    with pytest.raises(ValueError):
        fn(*args)


def test_spatial_cost():
    row = spatial_cost(4, 3)
    assert (row.mults, row.adds, row.total) == (36, 36, 72)
    assert row.storage_elems == 16 + 9
    assert spatial_cost(10, 1).mults == 100
    assert spatial_cost(8, 8).adds == 64
    with pytest.raises(ValueError):
        spatial_cost(3, 4)


def test_full_fft_cost():
    row = full_fft_cost(16)
    assert row.adds == 256 * 4
    assert row.mults == 256 * 4 + 256
    assert row.storage_elems == 512


def test_asymptotic_costs():
    notes = asymptotic_costs(224, 3, 16)
    assert notes[Method.FULL_FFT] == "N² log N; storage 2N²"
    assert notes[Method.OAA] == "N² log k; storage N² + K²"
    assert notes[Method.SPLIT] == "N² log S; storage N² + S²"


def test_sweep_shape_and_totals():
    rows = sweep(224, [3], [16])
    assert [r.method for r in rows] == [Method.OAA, Method.SPLIT]
    rows = sweep(224, [1, 3, 5], [16, 32])
    assert len(rows) == 9
    for r in rows:
        assert r.total == r.mults + r.adds
        assert r.mults >= 0 and r.adds >= 0
    k1 = rows[0]
    assert k1.total == 224 ** 2
    assert rows[1].total == (224 ** 2 / 256) * (2 * 256 * 8 * 2 + 256)
    with pytest.raises(ValueError):
        sweep(8, [], [4])


def test_split_below_oaa_at_fig3_points():
    for s in (16, 32):
        for k in (3, 5, 7, 9, 11):
            assert mul_split(224, s, k) + add_split(224, s, k) < mul_oaa(224, k) + add_oaa(224, k)


def test_gap_shape():
    def gap(s, k):
        return mul_oaa(224, k) + add_oaa(224, k) - mul_split(224, s, k) - add_split(224, s, k)

    gaps32 = [gap(32, k) for k in (3, 5, 7, 9, 11)]
    assert all(b > a for a, b in zip(gaps32, gaps32[1:]))
    # for s=16 the gap peaks at k=7 under base-2 logs
    gaps16 = [gap(16, k) for k in (3, 5, 7, 9, 11)]
    assert max(gaps16) == gaps16[2]


@pytest.mark.parametrize("k,s", [(1, 4), (3, 16), (5, 8), (7, 32)])
def test_scale_law(k, s):
    for fn, args in ((mul_oaa, (k,)), (add_oaa, (k,)), (mul_split, (s, k)), (add_split, (s, k))):
        assert fn(64, *args) == 4 * fn(32, *args)


def test_monotone_in_n():
    for k, s in ((3, 8), (5, 16)):
        vals = [mul_split(n, s, k) + add_split(n, s, k) for n in range(1, 100)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        vals = [mul_oaa(n, k) + add_oaa(n, k) for n in range(1, 100)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
