"""Reference leakage functions and an empirical adversary view.

A leakage profile is a set of records ``(i1, i2, cmp, msdb)`` over positions
``i1 < i2`` (1-based) of a query sequence ``[(client, plaintext), ...]``. The
oracles compute what each scheme is allowed to reveal; ``adversary_view``
runs the public algorithms of a real instance on every pair and records what
actually comes out.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, NamedTuple, Optional

from . import basic, eore, enhanced
from .encoding import Plaintext, cmp, ind


class LeakageRecord(NamedTuple):
    i1: int
    i2: int
    cmp: int
    msdb: Optional[int]


LeakageProfile = frozenset  # of LeakageRecord

RevealedSet = frozenset  # of frozenset({j, k})


def revealed(pairs: Iterable[tuple[int, int]]) -> RevealedSet:
    """Normalize client pairs into an unordered revealed-key set."""
    out = set()
    for j, k in pairs:
        if j == k:
            raise ValueError(f"self-pair ({j}, {j}) cannot carry a comparison key")
        out.add(frozenset((j, k)))
    return frozenset(out)


def _positions(q):
    """Yield (pos1, j1, m1, pos2, j2, m2) over all ordered pairs pos1 < pos2."""
    for (p1, (j1, m1)), (p2, (j2, m2)) in combinations(enumerate(q, start=1), 2):
        yield p1, j1, m1, p2, j2, m2


def _record(p1, m1, p2, m2) -> LeakageRecord:
    return LeakageRecord(p1, p2, cmp(m1, m2), ind(m1, m2))


def leak_basic(S: RevealedSet, q) -> LeakageProfile:
    return frozenset(
        _record(p1, m1, p2, m2)
        for p1, j1, m1, p2, j2, m2 in _positions(q)
        if j1 == j2 or frozenset((j1, j2)) in S
    )


def leak_eore(S: RevealedSet, q) -> LeakageProfile:
    return frozenset(
        _record(p1, m1, p2, m2)
        for p1, j1, m1, p2, j2, m2 in _positions(q)
        if j1 != j2 and frozenset((j1, j2)) in S
    )


def ore_leakage(subsequence: list[tuple[int, Plaintext]]) -> set[LeakageRecord]:
    """Leakage of the default single-client ORE on one client's (position, m) list."""
    return {
        _record(p1, m1, p2, m2) for (p1, m1), (p2, m2) in combinations(subsequence, 2)
    }


def leak_enhanced(S: RevealedSet, q,
                  ore_leak: Callable[[list], Iterable[LeakageRecord]] = ore_leakage) -> LeakageProfile:
    per_client: dict[int, list] = {}
    for pos, (j, m) in enumerate(q, start=1):
        per_client.setdefault(j, []).append((pos, m))
    out = set(leak_eore(S, q))
    for sub in per_client.values():
        out.update(ore_leak(sub))
    return frozenset(out)


# --- empirical side --------------------------------------------------------------


@dataclass
class SchemeInstance:
    """A freshly keyed scheme exposing only what an adversary could run."""

    name: str
    pp: object
    encrypt: Callable
    public_compare: Optional[Callable]
    cmp_key: Callable
    compare_mc: Callable


def instantiate(scheme: str, N: int, n: int, *, rng=None) -> SchemeInstance:
    if scheme == "basic":
        mk, pp = basic.setup(N, n, rng=rng)
        keys = {j: basic.gen_key(j, mk, pp) for j in range(1, N + 1)}
        return SchemeInstance(
            scheme, pp,
            encrypt=lambda j, m: basic.encrypt(m, keys[j], pp),
            public_compare=basic.compare,
            cmp_key=lambda j, k: basic.gen_cmp_key(j, k, mk, pp, rng=rng),
            compare_mc=basic.compare_mc,
        )
    if scheme == "eore":
        mk, pp = eore.eore_setup(N, n, rng=rng)
        keys = {j: eore.eore_gen_key(j, mk, pp) for j in range(1, N + 1)}
        return SchemeInstance(
            scheme, pp,
            encrypt=lambda j, m: eore.eore_encrypt(m, keys[j], pp, rng=rng),
            public_compare=None,
            cmp_key=lambda j, k: eore.eore_gen_cmp_key(j, k, mk, pp, rng=rng),
            compare_mc=eore.eore_compare_mc,
        )
    if scheme == "enhanced":
        mk, pp = enhanced.enh_setup(N, n, rng=rng)
        keys = {j: enhanced.enh_gen_key(j, mk, pp, rng=rng) for j in range(1, N + 1)}
        return SchemeInstance(
            scheme, pp,
            encrypt=lambda j, m: enhanced.enh_encrypt(m, keys[j], pp, rng=rng),
            public_compare=enhanced.enh_compare,
            cmp_key=lambda j, k: enhanced.enh_gen_cmp_key(j, k, mk, pp, rng=rng),
            compare_mc=enhanced.enh_compare_mc,
        )
    raise ValueError(f"unknown scheme {scheme!r}")


def adversary_view(instance: SchemeInstance, S: RevealedSet, q) -> LeakageProfile:
    """Everything the public algorithms reveal about q given the keys in S."""
    cts = [instance.encrypt(j, m) for j, m in q]
    keys = {pair: instance.cmp_key(*sorted(pair)) for pair in S}
    out = set()
    for (p1, (j1, _)), (p2, (j2, _)) in combinations(enumerate(q, start=1), 2):
        ct1, ct2 = cts[p1 - 1], cts[p2 - 1]
        if j1 == j2:
            if instance.public_compare is None:
                continue
            res = instance.public_compare(ct1, ct2, instance.pp)
        else:
            ck = keys.get(frozenset((j1, j2)))
            if ck is None:
                continue
            res = instance.compare_mc(ct1, ct2, ck, instance.pp)
        out.add(LeakageRecord(p1, p2, res.less, res.msdb))
    return frozenset(out)


def profile_csv(profile: LeakageProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("i1", "i2", "cmp", "msdb"))
    for rec in sorted(profile, key=lambda r: (r.i1, r.i2)):
        w.writerow((rec.i1, rec.i2, rec.cmp, "" if rec.msdb is None else rec.msdb))
    return buf.getvalue()
