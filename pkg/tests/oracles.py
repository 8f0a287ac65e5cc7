"""Independent reference computations used by the tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from liexmod.freelie import Bracket, Letter


def tensor(t) -> dict:
    """Associative expansion of a bracket term: [a,b] -> ab - ba, as {word tuple: coeff}."""
    if isinstance(t, Letter):
        return {(t,): Fraction(1)}
    a, b = tensor(t.left), tensor(t.right)
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, 0) + x * y
            out[v + u] = out.get(v + u, 0) - x * y
    return {k: v for k, v in out.items() if v}


def tensor_of_combination(terms) -> dict:
    out: dict = {}
    for c, t in terms:
        for w, x in tensor(t).items():
            out[w] = out.get(w, 0) + Fraction(c) * x
    return {k: v for k, v in out.items() if v}


def lyndon_count(k: int, n: int) -> int:
    """Number of Lyndon words of length n over k letters, by brute force."""
    count = 0
    for w in itertools.product(range(k), repeat=n):
        if all(w < w[i:] + w[:i] for i in range(1, n)):
            count += 1
    return count


def necklace_count(k: int, n: int) -> int:
    """Aperiodic necklaces of length n over k letters: rotation orbits of size exactly n."""
    seen, count = set(), 0
    for w in itertools.product(range(k), repeat=n):
        if w in seen:
            continue
        orbit = {w[i:] + w[:i] for i in range(n)}
        seen |= orbit
        count += len(orbit) == n
    return count


def random_term(rng: random.Random, alphabet, max_degree: int):
    d = rng.randint(1, max_degree)
    return _term_of_degree(rng, alphabet, d)


def _term_of_degree(rng, alphabet, d):
    if d == 1:
        return rng.choice(alphabet)
    k = rng.randint(1, d - 1)
    return Bracket(_term_of_degree(rng, alphabet, k), _term_of_degree(rng, alphabet, d - k))
