import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitconv.planner import InfeasiblePlan, PlanRequest, choose_patch_size, workspace


def brute_force(n, k, budget, candidates):
    best = None
    for s in candidates:
        m = 1
        while m < s + k - 1:
            m *= 2
        if m * m > budget:
            continue
        side = s + k - 1
        mults = (n * n / (s * s)) * (2 * side ** 2 * math.log2(side ** 2) + side ** 2)
        adds = (n * n / (s * s)) * (2 * side ** 2 * math.log2(side ** 2))
        total = mults + adds
        if best is None or total < best[1] or (total == best[1] and s < best[0]):
            best = (s, total)
    return best


def test_vgg_example():
    res = choose_patch_size(PlanRequest(224, 3, math.inf, (4, 8, 16, 32)))
    assert res.chosen_S == 8
    assert [c.S for c in res.per_candidate] == [4, 8, 16, 32]
    assert [c.workspace for c in res.per_candidate] == [64, 256, 1024, 4096]


def test_singleton():
    assert choose_patch_size(PlanRequest(64, 3, 10 ** 6, (16,))).chosen_S == 16


def test_infeasible_lists_workspaces():
    with pytest.raises(InfeasiblePlan, match="S=4: 64"):
        choose_patch_size(PlanRequest(224, 3, 10, (4, 8)))


def test_budget_excludes_large_patches():
    res = choose_patch_size(PlanRequest(224, 3, 64, (4, 8, 16)))
    assert res.chosen_S == 4
    assert [c.feasible for c in res.per_candidate] == [True, False, False]


def test_invalid_request():
    with pytest.raises(ValueError):
        PlanRequest(0, 3)
    with pytest.raises(ValueError):
        PlanRequest(8, 3, candidates=())


def test_workspace():
    assert workspace(8, 3) == 256
    assert workspace(16, 1) == 256


requests = st.tuples(
    st.integers(1, 512),
    st.integers(1, 11),
    st.sampled_from([16, 64, 100, 256, 1000, 1024, 4096, 10 ** 6]),
    st.lists(st.integers(1, 64), min_size=1, max_size=6),
)


@settings(max_examples=200, deadline=None)
@given(requests)
def test_exhaustive_optimality(req):
    n, k, budget, cands = req
    want = brute_force(n, k, budget, cands)
    if want is None:
        with pytest.raises(InfeasiblePlan):
            choose_patch_size(PlanRequest(n, k, budget, cands))
        return
    res = choose_patch_size(PlanRequest(n, k, budget, cands))
    assert res.chosen_S == want[0]
    assert res.modeled_total == pytest.approx(want[1], rel=1e-12)
    assert choose_patch_size(PlanRequest(n, k, budget, cands)) == res


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 512), st.integers(1, 9), st.lists(st.integers(1, 64), min_size=1, max_size=6))
def test_monotone_budget(n, k, cands):
    last = np.inf
    for budget in (16, 64, 256, 1024, 4096, 16384, math.inf):
        try:
            total = choose_patch_size(PlanRequest(n, k, budget, cands)).modeled_total
        except InfeasiblePlan:
            continue
        assert total <= last
        last = total
