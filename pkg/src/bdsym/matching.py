"""Enumeration of perfect matchings in a bipartite candidate relation."""
from __future__ import annotations

from typing import Iterator, Sequence


def perfect_matchings(candidates: Sequence[Sequence[int]], size: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every injective choice ``m`` with ``m[i] in candidates[i]``.

    With ``len(candidates) == size`` each result is a permutation of
    ``range(size)``.  Results come out in lexicographic order provided every
    candidate list is sorted ascending.
    """
    rows = len(candidates)
    if size is None:
        size = rows
    if rows > size or any(not c for c in candidates):
        return
    # Hall-style quick rejection: the union of all candidates must cover the rows.
    if len({v for c in candidates for v in c}) < rows:
        return
    used = [False] * size
    chosen = [0] * rows

    def extend(i: int) -> Iterator[tuple[int, ...]]:
        if i == rows:
            yield tuple(chosen)
            return
        for v in candidates[i]:
            if not used[v]:
                used[v] = True
                chosen[i] = v
                yield from extend(i + 1)
                used[v] = False

    yield from extend(0)


def has_perfect_matching(candidates: Sequence[Sequence[int]], size: int | None = None) -> bool:
    """Kuhn's augmenting-path test; cheaper than enumerating when only existence matters."""
    rows = len(candidates)
    if size is None:
        size = rows
    owner: list[int | None] = [None] * size

    def augment(i: int, seen: list[bool]) -> bool:
        for v in candidates[i]:
            if not seen[v]:
                seen[v] = True
                if owner[v] is None or augment(owner[v], seen):
                    owner[v] = i
                    return True
        return False

    return all(augment(i, [False] * size) for i in range(rows))
