"""Reference nets used by the tests, the acceptance suite and the README."""

from __future__ import annotations

import random

from .net import Net


def running_example() -> Net:
    """The three-place running example: live in (3,1,0), not live in (4,1,0)."""
    return Net.build("running", ["p1", "p2", "p3"], ["t1", "t2", "t3"], {
        ("p1", "t1"): 2,
        ("p1", "t2"): 1, ("p2", "t2"): 1, ("t2", "p1"): 2, ("t2", "p3"): 1,
        ("p3", "t3"): 1, ("t3", "p1"): 1, ("t3", "p2"): 1,
    })


def drain() -> Net:
    """One place, one transition that only consumes: never structurally live."""
    return Net.build("drain", ["p"], ["t"], {("p", "t"): 1})


def weak_doubling() -> Net:
    """Live in ``(x1,0,1,0,1,x6,0)`` iff ``x6 > 2**x1``.

    ``p1`` counts doubling rounds.  With the control token on ``p3`` tokens
    move back from the buffer ``p2`` to ``p5`` (``m``); ``s`` spends a round
    and moves control to ``p7``, where ``d`` turns one ``p5`` token into two
    buffer tokens and ``r`` returns control.  So at most ``2**x1`` tokens
    ever reach ``p5``.  ``c`` cancels a ``p5`` token against a ``p6`` token,
    ``w`` moves a ``p6`` token to ``p4``, and ``g`` (enabled by ``p4``) feeds
    every place.  All transitions die exactly when ``p6`` can be emptied
    before ``p4`` is marked.
    """
    places = ["p1", "p2", "p3", "p4", "p5", "p6", "p7"]
    arcs = {
        ("p3", "s"): 1, ("p1", "s"): 1, ("s", "p7"): 1,
        ("p7", "d"): 1, ("p5", "d"): 1, ("d", "p7"): 1, ("d", "p2"): 2,
        ("p7", "r"): 1, ("r", "p3"): 1,
        ("p3", "m"): 1, ("p2", "m"): 1, ("m", "p3"): 1, ("m", "p5"): 1,
        ("p5", "c"): 1, ("p6", "c"): 1,
        ("p6", "w"): 1, ("w", "p4"): 1,
        ("p4", "g"): 1,
    }
    for p in places:
        arcs[("g", p)] = 1
    return Net.build("weak_doubling", places, ["s", "d", "r", "m", "c", "w", "g"], arcs)


def weak_doubling_marking(x1: int, x6: int):
    return (x1, 0, 1, 0, 1, x6, 0)


def random_net(rng: random.Random, max_places: int = 4, max_transitions: int = 4,
               max_weight: int = 2, density: float = 0.4, name: str = "rand") -> Net:
    n = rng.randint(1, max_places)
    k = rng.randint(1, max_transitions)
    places = [f"p{i + 1}" for i in range(n)]
    transitions = [f"t{i + 1}" for i in range(k)]
    arcs = {}
    for p in places:
        for t in transitions:
            if rng.random() < density:
                arcs[(p, t)] = rng.randint(1, max_weight)
            if rng.random() < density:
                arcs[(t, p)] = rng.randint(1, max_weight)
    return Net.build(name, places, transitions, arcs)
