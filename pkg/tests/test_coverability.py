import itertools
import random

import pytest

from petrilive.coverability import (all_dead_set, backward_coverability, backward_saturate,
                                    closed_upset_within, dead_set, is_dead, is_post_closed_up,
                                    min_enabling, pre_min, saturation, witness_firing)
from petrilive.errors import InputError
from petrilive.exploration import Search
from petrilive.net import Net, fire, fire_sequence
from petrilive.samples import random_net
from petrilive.wqo import OMEGA as W
from petrilive.wqo import DownSet, member_down, member_up, union_down


def test_min_enabling(net):
    assert min_enabling(net, "t1") == (2, 0, 0)
    assert min_enabling(net, "t3") == (0, 0, 1)
    free = Net.build("f", ["p"], ["t"], {("t", "p"): 1})
    assert min_enabling(free, "t") == (0,)


def test_pre_min(net):
    m = pre_min(net, "t3", (2, 0, 0))
    assert m == (1, 0, 1)
    assert all(a >= b for a, b in zip(fire(net, m, "t3"), (2, 0, 0)))
    for t in net.transitions:
        assert pre_min(net, t, (0, 0, 0)) == min_enabling(net, t)


def test_pre_min_is_least_preimage():
    r = random.Random(4)
    for _ in range(60):
        n = random_net(r, max_places=3)
        target = tuple(r.randint(0, 4) for _ in n.places)
        for ti in range(len(n.transitions)):
            best = pre_min(n, ti, target)
            for m in itertools.product(range(9), repeat=n.dim):
                if all(a >= w for a, w in zip(m, n.pre[ti])):
                    m2 = fire(n, m, ti)
                    if all(a >= b for a, b in zip(m2, target)):
                        assert all(a >= b for a, b in zip(m, best))


def test_saturation_fixtures(net):
    assert set(backward_saturate(net, "t1").basis) == {(2, 0, 0), (1, 1, 0), (0, 0, 1)}
    single = Net.build("s", ["p"], ["t"], {("p", "t"): 1})
    assert backward_saturate(single, "t").basis == ((1,),)


def test_dead_set_fixtures(net):
    rep = dead_set(net, ["t1", "t2", "t3"])
    assert set(rep.dead_set.basis) == {(0, W, 0), (W, 0, 0)}
    assert set(rep.combined_live_candidates.basis) == {(0, 0, 1), (1, 1, 0)}
    assert set(dead_set(net, ["t1"]).dead_set.basis) == {(1, 0, 0), (0, W, 0)}


def test_dead_set_t2_t3_follows_algorithm(net):
    # (0,1,0) is dead for every transition, so it belongs here too
    assert set(dead_set(net, ["t2", "t3"]).dead_set.basis) == {(0, W, 0), (W, 0, 0)}


def test_dead_set_is_union_of_singletons(net):
    both = dead_set(net, ["t1", "t2"]).dead_set
    parts = union_down(dead_set(net, ["t1"]).dead_set, dead_set(net, ["t2"]).dead_set)
    assert both == parts


def test_dead_set_errors(net):
    with pytest.raises(InputError):
        dead_set(net, [])
    with pytest.raises(InputError):
        dead_set(net, ["zz"])


def test_is_dead(net):
    rep = dead_set(net, ["t1", "t2", "t3"])
    for t in ["t1", "t2", "t3"]:
        assert is_dead(rep, (0, 1, 0), t)
    assert not is_dead(rep, (3, 1, 0), "t1")
    assert is_dead(dead_set(net, ["t1"]), (1, 0, 0), "t1")
    with pytest.raises(InputError):
        is_dead(dead_set(net, ["t1"]), (1, 0, 0), "t2")


def test_chains_replay():
    r = random.Random(8)
    for _ in range(50):
        n = random_net(r)
        for ti in range(len(n.transitions)):
            sat = saturation(n, ti)
            for b in sat.basis.basis:
                fire_sequence(n, b, sat.chains[b] + (ti,))
                assert witness_firing(n, ti, b)[-1] == ti


def _fires_eventually(n, m, ti, budget=3000):
    s = Search(n, m, goal=lambda x: all(a >= w for a, w in zip(x, n.pre[ti])))
    s.step(budget)
    return s.found is not None, s.exhausted


def test_saturation_complete_on_small_box():
    r = random.Random(9)
    checked = 0
    for _ in range(30):
        n = random_net(r, max_places=3, max_transitions=3)
        for ti in range(len(n.transitions)):
            up = backward_saturate(n, ti)
            for m in itertools.product(range(4), repeat=n.dim):
                found, exhausted = _fires_eventually(n, m, ti)
                if found:
                    assert member_up(up, m)
                elif exhausted:
                    assert not member_up(up, m)
                checked += 1
    assert checked > 500


def test_backward_coverability_targets(net):
    sat = backward_coverability(net, [(0, 1, 0)])
    assert member_up(sat.basis, (4, 1, 0))


def test_all_dead_set_is_intersection(net):
    d = all_dead_set(net, ["t1", "t2", "t3"])
    for m in itertools.product(range(5), repeat=3):
        rep = dead_set(net, ["t1", "t2", "t3"])
        assert member_down(d, m) == all(is_dead(rep, m, t) for t in ["t1", "t2", "t3"])


def test_closed_upset_within(net, doubling_net):
    d = dead_set(doubling_net, list(doubling_net.transitions)).dead_set
    safe = closed_upset_within(doubling_net, d)
    assert safe.basis == ((0, 0, 0, 1, 0, 0, 0),)
    assert is_post_closed_up(doubling_net, safe)
    # nothing in the running example's non-dead markings is closed
    d1 = dead_set(net, ["t1", "t2", "t3"]).dead_set
    assert closed_upset_within(net, d1).basis == ()


def test_closed_upset_random_sound():
    r = random.Random(10)
    for _ in range(60):
        n = random_net(r, max_places=3)
        d = dead_set(n, range(len(n.transitions))).dead_set
        safe = closed_upset_within(n, d)
        for m in itertools.product(range(5), repeat=n.dim):
            if member_up(safe, m):
                assert not member_down(d, m)
                for ti in range(len(n.transitions)):
                    if all(a >= w for a, w in zip(m, n.pre[ti])):
                        assert member_up(safe, fire(n, m, ti))
