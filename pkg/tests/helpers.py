"""Shared builders for randomized symbolic test suites."""

from __future__ import annotations

import numpy as np

from midconv import Convoluter, EigDivisor, GroupElement, GroupMode, MonodromyVector


def random_partition(rng, r, max_part=None):
    cap = max_part or r
    parts = []
    left = r
    while left > 0:
        p = int(rng.integers(1, min(cap, left) + 1))
        parts.append(p)
        left -= p
    return sorted(parts, reverse=True)


def random_vector(rng, mode, r, n, tag, max_part=None):
    divisors = []
    for i in range(n):
        patt = random_partition(rng, r, max_part)
        entries = [(GroupElement.generator(f"{tag}e{i}_{j}", mode), m)
                   for j, m in enumerate(patt)]
        divisors.append(EigDivisor(mode, entries))
    return MonodromyVector(divisors)


def random_beta(rng, vector, aim, v_policy, tag):
    """aim: 'fresh' (independent twist), 'maxmult' (rank-reducing), or
    'support' (inverse of a random support element)."""
    if aim == "fresh":
        h = [GroupElement.generator(f"{tag}h{i}", vector.mode)
             for i in range(vector.n)]
    elif aim == "maxmult":
        h = [g.max_multiplicity()[0].invert() for g in vector]
    elif aim == "support":
        h = [g.support()[int(rng.integers(0, len(g.support())))].invert()
             for g in vector]
    else:
        raise ValueError(aim)
    if v_policy == "same":
        return Convoluter(h)
    return Convoluter.with_fresh_v(h, [f"{tag}s{i}" for i in range(vector.n - 1)])


def naive_kappa_local(beta, vector, i):
    """Literal transcription of the local transform formula, kept
    independent of the library code path: returns the coefficient list
    [(element, coefficient)] without canonicalization."""
    n, r = vector.n, vector.rank
    d = (n - 2) * r - sum(g.multiplicity(h.invert())
                          for g, h in zip(vector, beta.h))
    g = vector[i]
    out = [(beta.v[i], g.multiplicity(beta.h[i].invert()) + d)]
    for a, m in g.entries:
        if not a.combine(beta.h[i]).is_identity():
            out.append((a.combine(beta.u[i]), m))
    return out
