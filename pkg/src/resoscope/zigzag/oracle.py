"""Brute-force interval oracle for small zigzag filtrations.

For every pair of positions i <= j in the zigzag, the oracle computes the
generalized rank r(i, j): the dimension of the image of the canonical map
from the limit to the colimit of the H0 module restricted to [i, j].
Interval multiplicities follow by inclusion-exclusion

    m[i, j] = r(i, j) - r(i-1, j) - r(i, j+1) + r(i-1, j+1)

with out-of-range ranks taken as 0.

The H0 module of a graph zigzag is block-diagonal over the connected
components of its barcode graph (component-vertices linked by the
inclusion maps), so the rank equals the number of blocks admitting a
compatible assignment with nonzero total mass; each block is checked by
exact rational linear algebra.  This is deliberately independent of the
event-driven production algorithm: no event classification, no forest, no
kill rule.
"""

from __future__ import annotations

from fractions import Fraction

from ..graph import ParameterError
from .filtration import ZigzagFiltration

MAX_SPACES = 40
MAX_SIMPLICES = 220


def _components(nodes: frozenset[int], edges: frozenset[tuple[int, int]]) -> list[frozenset[int]]:
    adj: dict[int, set[int]] = {n: set() for n in nodes}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen: set[int] = set()
    comps = []
    for start in sorted(nodes):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(frozenset(comp))
    return comps


class _Echelon:
    """Incremental row echelon over the rationals (sparse rows)."""

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        row = {k: Fraction(v) for k, v in row.items() if v != 0}
        while row:
            piv = min(row)
            if piv not in self.pivots:
                return row
            base = self.pivots[piv]
            factor = row[piv] / base[piv]
            for k, v in base.items():
                nv = row.get(k, Fraction(0)) - factor * v
                if nv == 0:
                    row.pop(k, None)
                else:
                    row[k] = nv
        return row

    def add(self, row: dict[int, Fraction]) -> bool:
        """Insert a row; returns True if it increased the rank."""
        red = self.reduce(row)
        if not red:
            return False
        self.pivots[min(red)] = red
        return True


class ZigzagOracle:
    """Precomputed barcode graph; answers ranks and interval multiplicities."""

    def __init__(self, filtration: ZigzagFiltration):
        n = len(filtration)
        if n > MAX_SPACES:
            raise ParameterError(f"oracle limited to {MAX_SPACES} spaces, got {n}")
        self.filtration = filtration
        self.spaces = [filtration.space(i) for i in range(n)]
        total = max((len(s.nodes) + len(s.edges)) for s in self.spaces) if n else 0
        if total > MAX_SIMPLICES:
            raise ParameterError("instance too large for the brute-force oracle")
        self.comps: list[list[frozenset[int]]] = [
            _components(s.nodes, s.edges) for s in self.spaces
        ]
        # va[(p, a)] = global variable id; edges link snapshot comps to the
        # union comp containing them
        self.var: dict[tuple[int, int], int] = {}
        for p, comps in enumerate(self.comps):
            for a in range(len(comps)):
                self.var[(p, a)] = len(self.var)
        self.links: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for p in range(n):
            if p % 2 == 0:
                continue
            for q in (p - 1, p + 1):
                if not 0 <= q < n:
                    continue
                for a, snap_comp in enumerate(self.comps[q]):
                    target = self._containing(p, snap_comp)
                    self.links.setdefault((q, a), []).append((p, target))
        self.adj: dict[tuple[int, int], set[tuple[int, int]]] = {}
        for (q, a), tgts in self.links.items():
            for tgt in tgts:
                self.adj.setdefault((q, a), set()).add(tgt)
                self.adj.setdefault(tgt, set()).add((q, a))

    def _containing(self, p: int, snap_comp: frozenset[int]) -> int:
        probe = next(iter(snap_comp))
        for b, union_comp in enumerate(self.comps[p]):
            if probe in union_comp:
                return b
        raise AssertionError("snapshot component not inside any union component")

    # -- generalized rank ------------------------------------------------------

    def rank(self, i: int, j: int) -> int:
        n = len(self.spaces)
        if i < 0 or j >= n or i > j:
            return 0
        verts = [(p, a) for p in range(i, j + 1) for a in range(len(self.comps[p]))]
        if not verts:
            return 0
        seen: set[tuple[int, int]] = set()
        count = 0
        for v0 in verts:
            if v0 in seen:
                continue
            block = {v0}
            stack = [v0]
            seen.add(v0)
            while stack:
                x = stack.pop()
                for y in self.adj.get(x, ()):
                    if i <= y[0] <= j and y not in seen:
                        seen.add(y)
                        block.add(y)
                        stack.append(y)
            if self._block_feasible(block, i, j):
                count += 1
        return count

    def _block_feasible(self, block: set[tuple[int, int]], i: int, j: int) -> bool:
        idx = {v: n for n, v in enumerate(sorted(block))}
        ech = _Echelon()
        for p, a in block:
            if p % 2 == 0:
                continue
            for q in (p - 1, p + 1):
                if not i <= q <= j:
                    continue
                row = {idx[(p, a)]: Fraction(1)}
                for b, snap_comp in enumerate(self.comps[q]):
                    if self.links.get((q, b)) and (p, a) in self.links[(q, b)]:
                        key = idx[(q, b)]
                        row[key] = row.get(key, Fraction(0)) - 1
                ech.add(row)
        mass = {idx[(p, a)]: Fraction(1) for (p, a) in block if p == i}
        if not mass:
            return False
        return bool(ech.reduce(mass))

    # -- intervals --------------------------------------------------------------

    def position_intervals(self) -> dict[tuple[int, int], int]:
        n = len(self.spaces)
        r = {}
        for i in range(n):
            for j in range(i, n):
                r[(i, j)] = self.rank(i, j)

        def rr(i: int, j: int) -> int:
            return r.get((i, j), 0)

        out = {}
        for i in range(n):
            for j in range(i, n):
                m = rr(i, j) - rr(i - 1, j) - rr(i, j + 1) + rr(i - 1, j + 1)
                if m < 0:
                    raise AssertionError(f"negative multiplicity at [{i},{j}]")
                if m:
                    out[(i, j)] = m
        # consistency: pointwise dimensions must match
        for p in range(n):
            alive = sum(m for (i, j), m in out.items() if i <= p <= j)
            if alive != len(self.comps[p]):
                raise AssertionError(f"dimension mismatch at position {p}")
        return out

    def barcode(self) -> list[tuple[int, int]]:
        """Bar multiset in initial-time units, collapsed to snapshots."""
        seq = self.filtration.seq
        bars = []
        for (i, j), mult in self.position_intervals().items():
            sb = (i + 1) // 2
            sd = j // 2
            if sb > sd:
                raise AssertionError("union-only interval should not occur")
            bars.extend([(seq.birth_time(sb), seq.death_time(sd))] * mult)
        bars.sort()
        return bars


def oracle_barcode(filtration: ZigzagFiltration) -> list[tuple[int, int]]:
    return ZigzagOracle(filtration).barcode()
