import dataclasses
import itertools
import random

import pytest

from petrilive.errors import CertificateError, InputError
from petrilive.liveness import (NO, UNKNOWN, YES, InvariantCertificate, PathCertificate,
                                is_live_marked_net, is_live_set, is_live_transition,
                                is_weakly_live_set, live_predicate_scan, validate_verdict)
from petrilive.net import Net, fire_sequence
from petrilive.samples import random_net, weak_doubling_marking
from petrilive.semilinear import SemilinearSet

from conftest import T_ALL, live_reference


def test_live_at_310(net):
    v = is_live_set(net, (3, 1, 0), T_ALL)
    assert v.answer == YES
    assert isinstance(v.certificate, InvariantCertificate)
    assert validate_verdict(net, (3, 1, 0), T_ALL, v)


def test_not_live_at_410(net):
    # liveness is not upward closed: one more token in p1 kills every transition
    v = is_live_set(net, (4, 1, 0), T_ALL)
    assert v.answer == NO
    assert [net.transitions[t] for t in v.certificate.sequence] == ["t1", "t1"]
    assert v.certificate.end == (0, 1, 0)
    assert validate_verdict(net, (4, 1, 0), T_ALL, v)


def test_not_live_at_210(net):
    v = is_live_set(net, (2, 1, 0), T_ALL)
    assert v.answer == NO
    assert fire_sequence(net, (2, 1, 0), v.certificate.sequence) == (0, 1, 0)


def test_single_transitions(net):
    assert is_live_transition(net, (3, 1, 0), "t1").answer == YES
    v = is_live_transition(net, (1, 0, 0), "t1")
    assert v.answer == NO and v.certificate.sequence == ()
    assert is_live_transition(net, (0, 0, 1), "t3").answer == YES


def test_marked_net(net):
    assert is_live_marked_net(net, (3, 1, 0)).answer == YES
    assert is_live_marked_net(net, (4, 1, 0)).answer == NO
    with pytest.raises(InputError):
        is_live_marked_net(Net.build("empty", ["p"], [], {}), (0,))


def test_input_errors(net):
    with pytest.raises(InputError):
        is_live_set(net, (3, 1, 0), [])
    with pytest.raises(InputError):
        is_live_set(net, (3, 1, 0), ["t9"])
    with pytest.raises(InputError):
        is_live_set(net, (3, 1, 0), T_ALL, budget=0)


def test_budget_exhaustion_is_unknown(doubling_net):
    v = is_live_set(doubling_net, weak_doubling_marking(2, 3), None, budget=1)
    assert v.answer in (UNKNOWN, NO)
    if v.answer == UNKNOWN:
        assert v.certificate is None


def test_weak_liveness(net):
    v = is_weakly_live_set(net, (4, 1, 0), T_ALL)
    assert v.answer == NO and v.certificate.end == (0, 1, 0)
    assert validate_verdict(net, (4, 1, 0), T_ALL, v, weak=True)
    assert is_weakly_live_set(net, (3, 1, 0), T_ALL).answer == YES


def test_weak_singletons_match_plain(net):
    for m in itertools.product(range(4), repeat=3):
        for t in T_ALL:
            assert is_weakly_live_set(net, m, [t]).answer == is_live_transition(net, m, t).answer


def test_weak_is_weaker():
    n = Net.build("branch", ["p", "a", "b"], ["ta", "tb"],
                  {("a", "ta"): 1, ("ta", "a"): 1, ("p", "tb"): 1, ("tb", "b"): 1})
    # ta loops forever; tb can fire once and dies
    assert is_weakly_live_set(n, (1, 1, 0), None).answer == YES
    assert is_live_set(n, (1, 1, 0), None).answer == NO


def test_scan_matches_reference(net):
    scan = live_predicate_scan(net, T_ALL, 3)
    assert len(scan) == 64
    for m, v in scan.items():
        assert v.answer != UNKNOWN
        assert (v.answer == YES) == live_reference(m)


def test_scan_zero_box(net):
    scan = live_predicate_scan(net, T_ALL, 0)
    assert list(scan) == [(0, 0, 0)] and scan[(0, 0, 0)].answer == NO


def test_scan_guard(net):
    with pytest.raises(InputError):
        live_predicate_scan(net, T_ALL, 100)


def test_set_is_conjunction_of_singletons():
    rng = random.Random(31)
    for _ in range(40):
        n = random_net(rng, max_places=3, max_transitions=3)
        m = tuple(rng.randint(0, 2) for _ in n.places)
        whole = is_live_set(n, m, None, budget=3000).answer
        parts = [is_live_transition(n, m, t, budget=3000).answer for t in n.transitions]
        if whole != UNKNOWN and UNKNOWN not in parts:
            assert (whole == YES) == all(p == YES for p in parts)


def test_random_verdicts_validate():
    rng = random.Random(32)
    for _ in range(40):
        n = random_net(rng, max_places=3, max_transitions=3)
        m = tuple(rng.randint(0, 2) for _ in n.places)
        v = is_live_set(n, m, None, budget=3000)
        assert validate_verdict(n, m, None, v)


def test_doubling_fixture(doubling_net):
    for x1 in range(3):
        for x6 in range(2 ** x1 + 3):
            v = is_live_marked_net(doubling_net, weak_doubling_marking(x1, x6))
            assert v.answer == (YES if x6 > 2 ** x1 else NO), (x1, x6)


def test_forged_certificates_fail(net):
    good = is_live_set(net, (4, 1, 0), T_ALL)
    cut = dataclasses.replace(good.certificate, sequence=good.certificate.sequence[:1],
                              end=(2, 1, 0))
    with pytest.raises(CertificateError):
        validate_verdict(net, (4, 1, 0), T_ALL, dataclasses.replace(good, certificate=cut))
    yes = is_live_set(net, (3, 1, 0), T_ALL)
    small = InvariantCertificate(SemilinearSet.of(((3, 1, 0), ())), yes.certificate.dead)
    with pytest.raises(CertificateError):
        validate_verdict(net, (3, 1, 0), T_ALL, dataclasses.replace(yes, certificate=small))
    with pytest.raises(CertificateError):
        validate_verdict(net, (3, 1, 0), T_ALL, dataclasses.replace(yes, answer=NO))


def test_verdict_json(net):
    out = is_live_set(net, (4, 1, 0), T_ALL).to_json(net)
    assert out["answer"] == "no"
    assert out["certificate"]["sequence"] == ["t1", "t1"]
    assert out["stats"]["budget_used"] <= out["stats"]["budget"]
