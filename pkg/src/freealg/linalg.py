"""Sparse exact Gaussian elimination over a FieldSpec.

Vectors are dicts ``row -> raw value``.  Rows must be totally ordered by
``key``; each stored basis vector is indexed by its maximal row (its pivot),
so reducing a vector strictly lowers its maximal row at every step.  Each
stored vector remembers the combination of input columns that produced it,
which gives solutions and kernel relations for free.
"""
from __future__ import annotations

from typing import Callable, Hashable, Iterable

from .scalars import FieldSpec


def _axpy(spec: FieldSpec, y: dict, c, x: dict) -> None:
    """y -= c*x, dropping zeros."""
    for k, v in x.items():
        nv = spec.sub(y.get(k, spec.zero), spec.mul(c, v))
        if nv == 0:
            y.pop(k, None)
        else:
            y[k] = nv


class Echelon:
    def __init__(self, spec: FieldSpec, key: Callable | None = None):
        self.spec = spec
        self.key = key or (lambda r: r)
        self.pivots: dict = {}

    def __len__(self):
        return len(self.pivots)

    def _top(self, vec: dict):
        return max(vec, key=self.key)

    def add(self, vec: dict, label: Hashable):
        """Insert a column.  Returns None if it enlarged the span, otherwise a
        kernel relation {label: coeff} whose combination of inputs is zero."""
        spec = self.spec
        v = dict(vec)
        combo = {label: spec.one}
        while v:
            r = self._top(v)
            hit = self.pivots.get(r)
            if hit is None:
                self.pivots[r] = (v, combo)
                return None
            pv, pc = hit
            c = spec.div(v[r], pv[r])
            _axpy(spec, v, c, pv)
            _axpy(spec, combo, c, pc)
        return combo

    def solve(self, target: dict) -> dict | None:
        """Coefficients {label: c} with sum c*column = target, or None."""
        spec = self.spec
        t = dict(target)
        x: dict = {}
        while t:
            r = self._top(t)
            hit = self.pivots.get(r)
            if hit is None:
                return None
            pv, pc = hit
            c = spec.div(t[r], pv[r])
            _axpy(spec, t, c, pv)
            for k, v in pc.items():
                nv = spec.add(x.get(k, spec.zero), spec.mul(c, v))
                if nv == 0:
                    x.pop(k, None)
                else:
                    x[k] = nv
        return x

    def contains(self, target: dict) -> bool:
        return self.solve(target) is not None


def kernel(spec: FieldSpec, columns: Iterable[tuple[Hashable, dict]], key=None) -> tuple[Echelon, list[dict]]:
    """Echelonize labelled columns; return the echelon and a kernel basis."""
    ech = Echelon(spec, key)
    rels = []
    for label, col in columns:
        rel = ech.add(col, label)
        if rel is not None:
            rels.append(rel)
    return ech, rels


def dense_rank(spec: FieldSpec, rows: list[list]) -> int:
    """Rank of a dense matrix by textbook row reduction.

    Deliberately independent of ``Echelon``: used to re-check certificates.
    """
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = spec.inv(m[rank][col])
        m[rank] = [spec.mul(inv, v) for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col]
                m[i] = [spec.sub(a, spec.mul(f, b)) for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank
