"""Random inputs shared by the property tests and the acceptance suite."""

import random

from covercalc.ends import AiFunction, FreeGroup, Zk, _ball
from covercalc.words import invert, multiply


def random_transitive_action(rng, rank, degree):
    """Permutations (as lists) generating a transitive action on ``degree`` points."""
    while True:
        perms = [rng.sample(range(degree), degree) for _ in range(rank)]
        seen = {0}
        stack = [0]
        while stack:
            p = stack.pop()
            for perm in perms:
                for q in (perm[p], perm.index(p)):
                    if q not in seen:
                        seen.add(q)
                        stack.append(q)
        if len(seen) == degree:
            return perms


def act(perms, p, word):
    for x in word:
        perm = perms[abs(x) - 1]
        p = perm[p] if x > 0 else perm.index(p)
    return p


def schreier_generators(perms, degree):
    """Generators of the stabilizer of point 0, from a BFS transversal."""
    rank = len(perms)
    transversal = {0: ()}
    queue = [0]
    while queue:
        p = queue.pop(0)
        for x in [i for r in range(1, rank + 1) for i in (r, -r)]:
            q = act(perms, p, (x,))
            if q not in transversal:
                transversal[q] = transversal[p] + (x,)
                queue.append(q)
    gens = []
    for p in range(degree):
        for x in range(1, rank + 1):
            q = act(perms, p, (x,))
            w = multiply(transversal[p], (x,), invert(transversal[q]))
            if w:
                gens.append(w)
    return gens


def _radial_function(G, depth, rng, radius):
    """x(g) depends only on the last ``depth`` letters once |g| >= depth."""
    tail = {}
    values = {}
    for g, d in _ball(G, radius).items():
        if d < depth:
            values[g] = rng.randint(-2, 2)
        else:
            key = G.geodesic(g)[d - depth:]
            values[g] = tail.setdefault(key, rng.randint(-2, 2))
    return AiFunction(G, values, 0, radius)


def _support_function(G, rng, radius):
    """Arbitrary values on ball(radius - 2), the default elsewhere."""
    values = {g: rng.randint(-2, 2) for g, d in _ball(G, radius).items() if d <= radius - 2}
    return AiFunction(G, values, rng.randint(-1, 1), radius)


def random_ai_function(seed, group=None, radius=5):
    rng = random.Random(seed)
    G = group or rng.choice([Zk(1), Zk(2), FreeGroup(2)])
    if G.radial:
        return _radial_function(G, rng.randint(1, 3), rng, radius)
    return _support_function(G, rng, radius)
