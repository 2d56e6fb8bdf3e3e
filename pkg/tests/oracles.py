"""Independent brute-force oracles for checking query evaluation.

These never call the evaluator's machinery: they enumerate row chains, join
relations positionally, or multiply adjacency matrices, and compare value
multisets.
"""

from __future__ import annotations

from collections import Counter
from typing import Dict, List, Sequence, Tuple

from simplexdb import Selection, Sheaf, Table, Zigzag
from simplexdb.zigzag import _single_steps


def chain_oracle(sheaf: Sheaf, zigzag: Zigzag, selection: Selection) -> Counter:
    """Enumerate every tuple of row keys, one per zigzag position, consistent
    under the sheaf's key maps, and count the (start value, end value) pairs.

    Only meaningful on fully concrete sheaves.
    """
    schema = sheaf.schema
    steps = _single_steps(schema, zigzag)
    base = sheaf.table(zigzag.start)
    assert isinstance(base, Table)
    assert selection.keys is not None, "oracle expects a key-subset selection"
    out: Counter = Counter()

    def walk(pos: int, cur_simplex: str, key: str, start_key: str) -> None:
        if pos == len(steps):
            end_t = sheaf.table(cur_simplex)
            out[base.rows[start_key] + end_t.rows[key]] += 1
            return
        direction, i, target = steps[pos]
        if direction == "descend":
            km = sheaf.key_maps[(cur_simplex, i)]
            walk(pos + 1, target, km[key], start_key)
        else:
            km = sheaf.key_maps[(target, i)]
            coface_t = sheaf.table(target)
            for k2 in coface_t.keys:
                if km[k2] == key:
                    walk(pos + 1, target, k2, start_key)

    for k in selection.keys:
        walk(0, zigzag.start, k, k)
    return out


def bounded_difference_relation(d: int, lo: int, hi: int) -> List[Tuple[int, int]]:
    """All (s, t) with t - s = d inside [lo, hi]^2, by exhaustive scan."""
    return [(s, t) for s in range(lo, hi + 1) for t in range(lo, hi + 1) if t - s == d]


def odometer_oracle(
    selections: Sequence[int], d1: int, d2: int, lo: int = 0, hi: int = 100
) -> Counter:
    """Compose two bounded difference relations and restrict to the selection."""
    r1 = bounded_difference_relation(d1, lo, hi)
    r2 = bounded_difference_relation(d2, lo, hi)
    out: Counter = Counter()
    for s0 in selections:
        for s, t in r1:
            if s != s0:
                continue
            for t2, u in r2:
                if t2 == t:
                    out[((s0,), (u,))] += 1
    return Counter({start + end: n for (start, end), n in out.items()})


def adjacency_power_row(
    people: Sequence[str], rows: Sequence[Tuple[str, str]], start: str, power: int
) -> Dict[str, int]:
    """Row `start` of the `power`-th matrix power, where one hop from p
    reaches the first component of every row whose second component is p."""
    index = {p: i for i, p in enumerate(people)}
    n = len(people)
    m = [[0] * n for _ in range(n)]
    for x, p in rows:
        m[index[p]][index[x]] += 1
    vec = [0] * n
    vec[index[start]] = 1
    for _ in range(power):
        vec = [sum(vec[i] * m[i][j] for i in range(n)) for j in range(n)]
    return {people[j]: vec[j] for j in range(n) if vec[j]}


def two_step_join_oracle(
    interactions: Sequence[Tuple[str, str, str]],
    creations: Sequence[Tuple[str, str, str]],
    dates: Sequence[str],
) -> Counter:
    """Interactions on the dates, joined to creations on the company pair."""
    out: Counter = Counter()
    for d in dates:
        for c1, c2, when in interactions:
            if when != d:
                continue
            for k1, k2, made in creations:
                if (k1, k2) == (c1, c2):
                    out[((d,), (made,))] += 1
    return Counter({start + end: n for (start, end), n in out.items()})
