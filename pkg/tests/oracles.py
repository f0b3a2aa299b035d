"""Independent brute-force oracles used by the test suite.

Everything here recomputes quantities along a different route than the
package: tower words by direct string recursion, chain properties by
graph search, conditional limits by renewal densities.
"""

from __future__ import annotations

from itertools import product
from math import gcd

from stacklab.tower import StackingData


def materialize_word(sd: StackingData, r: int, n: int, mode: str = "base") -> list[int]:
    """The word encoding tower n over reference r, by direct recursion.

    Start from (1, ..., h_r) and interleave spacer blocks stage by stage;
    independent of the arithmetic-descent decoder.
    """
    h_r = sd.heights()[r - 1]
    word = list(range(1, h_r + 1))
    for m in range(r, n):
        spacers = sd.stage_spacers(m)
        q = sd.stages[m - 1].q
        nxt: list[int] = []
        for i in range(q):
            nxt.extend(word)
            if i < q - 1:
                a = spacers[i]
                if mode == "base":
                    nxt.extend([0] * a)
                else:
                    nxt.extend(h_r + 1 + j for j in range(a))
        word = nxt
    return word


def brute_valid_levels(sd: StackingData, n: int, t_max: int) -> list[int]:
    """K by filtering the materialized stage-(n-1) membership word."""
    h_n = sd.heights()[n - 1]
    word = materialize_word(sd, n - 1, n)
    return [k for k in range(max(0, h_n - t_max)) if word[k] != 0]


def zero_symbol_count(sd: StackingData, n: int) -> int:
    """Closed-form count of base-mode zeros in the reference-1 word of tower n.

    Equals h_n minus h_1 times the number of tower-1 copies, and also the
    stage-by-stage sum of spacer totals times copies of the stage above.
    """
    heights = sd.heights()
    copies = 1
    total = 0
    for m in range(n - 1, 0, -1):
        # `copies` = number of copies of tower m+1 inside tower n
        total += copies * sd.spacer_total(m)
        copies *= sd.stages[m - 1].q
    assert total == heights[n - 1] - copies * heights[0]
    return total


def is_irreducible_aperiodic(matrix) -> bool:
    """Strong connectivity plus gcd-1 cycle structure, by graph search."""
    size = len(matrix)
    adj = [[j for j in range(size) if matrix[i][j] > 0] for i in range(size)]

    def reachable(start: int) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    if any(len(reachable(i)) != size for i in range(size)):
        return False
    # Aperiodicity: gcd over edges of (d[u] + 1 - d[v]) for BFS distances.
    from collections import deque

    dist = [-1] * size
    dist[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    g = 0
    for u in range(size):
        for v in adj[u]:
            g = gcd(g, dist[u] + 1 - dist[v])
    return abs(g) == 1


def oracle_word_counts(sd: StackingData, r: int, n: int, offsets, mode: str = "base") -> dict:
    """Per-word level counts over K by direct slicing of the materialized word."""
    word = materialize_word(sd, r, n, mode)
    counts: dict = {}
    for k in brute_valid_levels(sd, n, offsets[-1]):
        w = tuple(word[k + t] for t in offsets)
        counts[w] = counts.get(w, 0) + 1
    return counts


def exhaustive_generic_acceptors(base, offsets, N0, q, alphabet):
    """All spacer sequences meeting the word-frequency cap, by full enumeration."""
    from stacklab.randomstacks.generic import evaluate_candidate

    acceptors = []
    for spacers in product(range(alphabet), repeat=q - 1):
        record = evaluate_candidate(base, spacers, q, tuple(offsets), N0)
        if record.accepted:
            acceptors.append(spacers)
    return acceptors
