"""Exhaustive and random generation of valid parameter lists."""

from __future__ import annotations

import random
from itertools import combinations

from .pgroup import GroupSpec, SpecError


def log_order(spec: GroupSpec) -> int:
    """log_p |G| straight from the parameters."""
    if spec.form == "R":
        return spec.rparam + 2 * (spec.rparam + sum(spec.ells))
    rs = [r for _, r in spec.qpairs]
    ds = [n - r for n, r in spec.qpairs]
    l1 = spec.ells[0] if spec.ells else 0
    zeta = max([l1] + rs[:1] + ds[-1:])
    return zeta + 2 * (sum(rs) + sum(spec.ells))


def _ell_lists(max_sum: int, top: int):
    """Non-increasing lists of positive ints, entries <= top, sum <= max_sum."""
    yield ()
    for first in range(min(top, max_sum), 0, -1):
        for rest in _ell_lists(max_sum - first, first):
            yield (first,) + rest


def qform_specs(p: int, max_log: int):
    """Every valid Q-form spec with |G| <= p^max_log, in a fixed order."""
    out = []
    # alpha = 0
    for ells in _ell_lists(max_log, max_log):
        if ells and ells[0] + 2 * sum(ells) <= max_log:
            out.append(GroupSpec(p, "Q", (), ells))
    # alpha >= 1: choose strictly decreasing r's, then increasing d = n - r
    for alpha in range(1, max_log + 1):
        for rs in combinations(range(max_log // 2, -1, -1), alpha):
            if 2 * sum(rs) > max_log:
                continue
            for ds in combinations(range(1, max_log + 1), alpha):
                ns = tuple(r + d for r, d in zip(rs, ds))
                spec = GroupSpec(p, "Q", tuple(zip(ns, rs)), ())
                try:
                    spec.validate()
                except SpecError:
                    continue
                base = log_order(spec)
                if base > max_log:
                    continue
                for ells in _ell_lists(max_log, ns[-1] - 1):
                    s2 = GroupSpec(p, "Q", spec.qpairs, ells)
                    if log_order(s2) <= max_log:
                        out.append(s2.validate())
    return sorted(set(out), key=lambda s: (log_order(s), str(s)))


def rform_specs(max_log: int):
    out = []
    for n in range(1, max_log + 1):
        for ells in _ell_lists(max_log, n):
            s = GroupSpec(2, "R", (), ells, n)
            if log_order(s) <= max_log:
                out.append(s.validate())
    return sorted(out, key=lambda s: (log_order(s), str(s)))


def battery(max_log2: int = 14, max_log3: int = 8, rforms: bool = True):
    """Q-form specs for p = 2 and p = 3 and R-form specs, all with |G| <= 2^max_log2
    (p = 2) resp. 3^max_log3 (p = 3)."""
    specs = qform_specs(2, max_log2) + qform_specs(3, max_log3)
    if rforms:
        specs += rform_specs(max_log2)
    return specs


def random_qform_specs(count: int, seed: int = 0, min_log: int = 15, max_alpha: int = 4, max_beta: int = 3):
    """Random valid Q-form specs of order at least p^min_log (formula-only use)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = rng.choice([2, 3, 5])
        alpha = rng.randint(0, max_alpha)
        beta = rng.randint(0 if alpha else 1, max_beta)
        rs = sorted(rng.sample(range(0, 12), alpha), reverse=True)
        ds = sorted(rng.sample(range(1 if p > 2 else 2, 16), alpha))
        pairs = tuple((r + d, r) for r, d in zip(rs, ds))
        top = (pairs[-1][0] - 1) if pairs else 10
        if top < 1 and beta:
            continue
        ells = tuple(sorted((rng.randint(1, top) for _ in range(beta)), reverse=True))
        spec = GroupSpec(p, "Q", pairs, ells)
        try:
            spec.validate()
        except SpecError:
            continue
        if log_order(spec) >= min_log and spec not in out:
            out.append(spec)
    return out
