import itertools
import random

from petrilive.wqo import (OMEGA, DownSet, UpSet, complement_down, complement_up,
                           intersect_down, intersect_up, is_antichain, maximize, member_down,
                           member_up, minimize, union_down, union_up)

W = OMEGA
B = 6


def _box(n):
    return itertools.product(range(B + 1), repeat=n)


def _brute_min(vs):
    return sorted({v for v in vs if not any(u != v and all(a <= b for a, b in zip(u, v))
                                           for u in vs)})


def _rand_up(r, n):
    return UpSet(n, [tuple(r.randint(0, 4) for _ in range(n)) for _ in range(r.randint(0, 4))])


def _rand_down(r, n):
    def coord():
        return W if r.random() < 0.25 else r.randint(0, 4)
    return DownSet(n, [tuple(coord() for _ in range(n)) for _ in range(r.randint(0, 4))])


def test_minimize_maximize():
    assert set(minimize([(2, 0, 0), (3, 0, 0), (1, 1, 0)]).basis) == {(2, 0, 0), (1, 1, 0)}
    assert maximize([(0, W, 0), (0, 3, 0)]).basis == ((0, W, 0),)


def test_minimize_against_filter():
    r = random.Random(3)
    vs = [tuple(r.randint(0, 5) for _ in range(3)) for _ in range(50)]
    assert sorted(minimize(vs).basis) == _brute_min(vs)


def test_membership():
    dt = DownSet(3, [(0, W, 0), (W, 0, 0)])
    assert member_down(dt, (0, 5, 0))
    assert not member_down(dt, (1, 1, 0))
    assert not member_down(DownSet(3, []), (0, 0, 0))
    assert not member_up(UpSet(3, []), (9, 9, 9))


def test_complement_of_s_t1():
    d = complement_up(UpSet(3, [(0, 0, 1), (1, 1, 0), (2, 0, 0)]))
    assert set(d.basis) == {(1, 0, 0), (0, W, 0)}


def test_union_gives_dead_set():
    d = union_down(DownSet(3, [(1, 0, 0), (0, W, 0)]), DownSet(3, [(W, 0, 0)]))
    assert set(d.basis) == {(0, W, 0), (W, 0, 0)}


def test_intersect_with_full_is_identity():
    d = DownSet(3, [(1, 0, 0), (0, W, 0)])
    assert intersect_down(d, DownSet.full(3)) == d


def test_double_complement():
    r = random.Random(11)
    for _ in range(100):
        n = r.randint(1, 4)
        u = _rand_up(r, n)
        assert complement_down(complement_up(u)) == u
        d = _rand_down(r, n)
        assert complement_up(complement_down(d)) == d


def test_algebra_against_brute_force():
    r = random.Random(12)
    for _ in range(100):
        n = r.randint(1, 3)
        u1, u2 = _rand_up(r, n), _rand_up(r, n)
        d1, d2 = _rand_down(r, n), _rand_down(r, n)
        cu, cd = complement_up(u1), complement_down(d1)
        iu, uu = intersect_up(u1, u2), union_up(u1, u2)
        idn, ud = intersect_down(d1, d2), union_down(d1, d2)
        for res in (cu, cd, iu, uu, idn, ud):
            assert is_antichain(res.basis)
        for m in _box(n):
            assert member_down(cu, m) == (not member_up(u1, m))
            assert member_up(cd, m) == (not member_down(d1, m))
            assert member_up(iu, m) == (member_up(u1, m) and member_up(u2, m))
            assert member_up(uu, m) == (member_up(u1, m) or member_up(u2, m))
            assert member_down(idn, m) == (member_down(d1, m) and member_down(d2, m))
            assert member_down(ud, m) == (member_down(d1, m) or member_down(d2, m))


def test_json_uses_w():
    d = DownSet(3, [(0, W, 0)])
    assert d.to_json() == [[0, "w", 0]]
    assert DownSet.from_json(3, d.to_json()) == d
