"""Sparse unit-pivot elimination by column operations.

Each step picks an entry that is a unit (``+-1`` over the integers, any
nonzero mod p), clears its row with column operations, and retires the
pivot row and column.  Column operations keep every column equal to the
boundary of an integral chain, which is what makes clearing (dropping
columns of the next boundary map indexed by pivot rows) sound over Z.

What remains after elimination is the Schur complement on the non-pivot
rows; over a field it is zero, over Z it has no unit entries and is handed
to the dense Smith form kernel.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field


@dataclass
class Reduction:
    nrows: int
    pivots: list[tuple[int, int]] = field(default_factory=list)
    # non-pivot columns that are still nonzero, keyed by original column index
    remainder: dict[int, dict[int, int]] = field(default_factory=dict)
    protected: dict[int, dict[int, int]] = field(default_factory=dict)

    @property
    def pivot_rows(self) -> set[int]:
        return {r for r, _ in self.pivots}


def eliminate(columns: list[dict[int, int]], nrows: int, modulus: int | None = None,
              protected: list[dict[int, int]] | None = None,
              strategy: str = "markowitz") -> Reduction:
    """Eliminate unit pivots from ``columns``; ``protected`` columns only follow along.

    ``strategy`` is ``"markowitz"`` (smallest column, then smallest row) or
    ``"first"`` (lowest column index, lowest row index); invariants do not
    depend on it.
    """
    p = modulus
    cols: list[dict[int, int]] = [dict(c) for c in columns]
    nprot = 0
    if protected:
        nprot = len(protected)
        cols.extend(dict(c) for c in protected)
    ncols = len(cols)
    first_prot = ncols - nprot
    if p is not None:
        for c in cols:
            for i in [i for i, v in c.items() if v % p == 0]:
                del c[i]
            for i in c:
                c[i] %= p
    rowcols: list[set[int]] = [set() for _ in range(nrows)]
    for j, c in enumerate(cols):
        for i in c:
            rowcols[i].add(j)
    active = [True] * ncols

    if p is None:
        def is_unit(v):
            return v == 1 or v == -1
    else:
        def is_unit(v):
            return True

    markowitz = strategy == "markowitz"
    colheap: list[tuple[int, int, int]] = [
        ((len(cols[j]) if markowitz else j), len(cols[j]), j) for j in range(first_prot)]
    heapq.heapify(colheap)
    rowheap: list[tuple[int, int, int]] = []
    if markowitz:
        rowheap = [(len(rowcols[i]), len(rowcols[i]), i) for i in range(nrows) if rowcols[i]]
        heapq.heapify(rowheap)
    rowdone = [False] * nrows
    pivots: list[tuple[int, int]] = []

    def col_candidate():
        # cheapest unit entry in the shortest live column
        while colheap:
            _, nz, c = colheap[0]
            if not active[c] or len(cols[c]) != nz:
                heapq.heappop(colheap)
                continue
            pc = cols[c]
            if not pc:
                heapq.heappop(colheap)
                active[c] = False
                continue
            best = bestcount = None
            if markowitz:
                for i, v in pc.items():
                    if is_unit(v):
                        cnt = len(rowcols[i])
                        if best is None or cnt < bestcount or (cnt == bestcount and i < best):
                            best, bestcount = i, cnt
            else:
                for i in sorted(pc):
                    if is_unit(pc[i]):
                        best, bestcount = i, len(rowcols[i])
                        break
            if best is None:
                heapq.heappop(colheap)
                continue
            return (bestcount - 1) * (nz - 1), best, c
        return None

    def row_candidate():
        while rowheap:
            _, nz, r = rowheap[0]
            if rowdone[r] or len(rowcols[r]) != nz:
                heapq.heappop(rowheap)
                continue
            best = bestcount = None
            for j in rowcols[r]:
                if j < first_prot and is_unit(cols[j][r]):
                    cnt = len(cols[j])
                    if best is None or cnt < bestcount or (cnt == bestcount and j < best):
                        best, bestcount = j, cnt
            if best is None:
                heapq.heappop(rowheap)
                continue
            return (nz - 1) * (bestcount - 1), r, best
        return None

    while True:
        cand = col_candidate()
        if markowitz:
            rc = row_candidate()
            if rc is not None and (cand is None or rc[0] < cand[0]):
                cand = rc
        if cand is None:
            break
        _, r, c = cand
        pc = cols[c]
        lam = pc[r]
        inv = lam if p is None else pow(lam, -1, p)
        items = list(pc.items())
        targets = [j for j in rowcols[r] if j != c]
        for j in targets:
            cj = cols[j]
            f = cj[r] * inv
            if p is None:
                for i, v in items:
                    old = cj.get(i)
                    if old is None:
                        cj[i] = -f * v
                        rowcols[i].add(j)
                    else:
                        new = old - f * v
                        if new:
                            cj[i] = new
                        else:
                            del cj[i]
                            rowcols[i].discard(j)
            else:
                for i, v in items:
                    old = cj.get(i)
                    if old is None:
                        cj[i] = (-f * v) % p
                        rowcols[i].add(j)
                    else:
                        new = (old - f * v) % p
                        if new:
                            cj[i] = new
                        else:
                            del cj[i]
                            rowcols[i].discard(j)
            if j < first_prot:
                heapq.heappush(colheap, ((len(cj) if markowitz else j), len(cj), j))
        for i, _ in items:
            rowcols[i].discard(c)
            if markowitz and i != r and rowcols[i]:
                heapq.heappush(rowheap, (len(rowcols[i]), len(rowcols[i]), i))
        active[c] = False
        rowdone[r] = True
        pivots.append((r, c))

    red = Reduction(nrows=nrows, pivots=pivots)
    for j in range(first_prot):
        if active[j] and cols[j]:
            red.remainder[j] = cols[j]
    for k in range(nprot):
        red.protected[k] = cols[first_prot + k]
    return red
