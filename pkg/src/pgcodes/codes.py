"""Codeword algebra for the hyperplane incidence code of PG(n, q).

A codeword is a dense vector of F_p values indexed by point index.  The code
is spanned by the characteristic vectors of hyperplanes; `combine` builds
F_p-linear combinations and records which hyperplanes carry nonzero
coefficients in a `Decomposition`.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence, Union

import numpy as np

from .geometry import Hyperplane, ProjectiveSpace, SubspacePointSet


class Codeword:
    """Immutable vector of canonical F_p residues indexed by point index."""

    __slots__ = ("space", "values")

    def __init__(self, space: ProjectiveSpace, values: np.ndarray):
        if len(values) != space.num_points:
            raise ValueError("value vector length must equal the point count")
        vals = (np.asarray(values) % space.field.p).astype(np.int16)
        vals.setflags(write=False)
        self.space = space
        self.values = vals

    @classmethod
    def zero(cls, space: ProjectiveSpace) -> "Codeword":
        return cls(space, np.zeros(space.num_points, dtype=np.int16))

    def value(self, point_index: int) -> int:
        return int(self.values[point_index])

    def __eq__(self, other):
        return (isinstance(other, Codeword) and self.space is other.space
                and np.array_equal(self.values, other.values))

    def __add__(self, other: "Codeword") -> "Codeword":
        return Codeword(self.space, (self.values + other.values) % self.space.field.p)

    def __sub__(self, other: "Codeword") -> "Codeword":
        return Codeword(self.space, (self.values - other.values) % self.space.field.p)

    def scaled(self, alpha: int) -> "Codeword":
        return Codeword(self.space, (self.values.astype(np.int64) * alpha) % self.space.field.p)

    def is_zero(self) -> bool:
        return not self.values.any()

    def __repr__(self):
        return f"Codeword(weight={weight(self)}, space={self.space!r})"

    def to_json(self) -> dict:
        sp = self.space
        supp = np.nonzero(self.values)[0]
        return {
            "n": sp.n,
            "p": sp.field.p,
            "h": sp.field.h,
            "values": [[int(i), int(self.values[i])] for i in supp],
        }


def codeword_from_json(data: Union[dict, str], space: ProjectiveSpace) -> Codeword:
    if isinstance(data, str):
        data = json.loads(data)
    if (data["n"], data["p"], data["h"]) != (space.n, space.field.p, space.field.h):
        raise ValueError("codeword parameters do not match the supplied space")
    vals = np.zeros(space.num_points, dtype=np.int16)
    for i, v in data["values"]:
        vals[int(i)] = int(v) % space.field.p
    return Codeword(space, vals)


class Decomposition:
    """A codeword written as sum of coefficient * hyperplane indicator.

    `terms` maps hyperplane index to its nonzero F_p coefficient; this is the
    extended evaluation of the codeword on hyperplanes (zero off `terms`).
    """

    __slots__ = ("space", "terms", "dropped", "flags", "tie_breaks")

    def __init__(self, space: ProjectiveSpace, terms: dict[int, int],
                 dropped: Sequence[int] = (), flags: Sequence[str] = (),
                 tie_breaks: Sequence[int] = ()):
        p = space.field.p
        clean = {}
        for hidx in sorted(terms):
            coef = terms[hidx] % p
            if coef == 0:
                raise ValueError("decomposition terms must have nonzero coefficients")
            clean[int(hidx)] = int(coef)
        self.space = space
        self.terms = clean
        self.dropped = tuple(dropped)
        self.flags = tuple(flags)
        self.tie_breaks = tuple(tie_breaks)

    @property
    def m(self) -> int:
        return len(self.terms)

    def coefficient(self, h: Union[Hyperplane, int]) -> int:
        """Extended evaluation on hyperplanes: the coefficient, or 0."""
        key = h.index if isinstance(h, Hyperplane) else int(h)
        return self.terms.get(key, 0)

    def hyperplane_indices(self) -> tuple[int, ...]:
        return tuple(self.terms)

    def to_json(self) -> dict:
        return {"terms": [[h, c] for h, c in self.terms.items()]}

    def __repr__(self):
        return f"Decomposition(m={self.m}, terms={self.terms})"


def decomposition_from_json(data: Union[dict, str], space: ProjectiveSpace) -> Decomposition:
    if isinstance(data, str):
        data = json.loads(data)
    return Decomposition(space, {int(h): int(c) for h, c in data["terms"]})


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def incidence_codeword(space: ProjectiveSpace, h: Union[Hyperplane, int]) -> Codeword:
    """Characteristic vector of a hyperplane: 1 on its points, 0 elsewhere."""
    vals = np.zeros(space.num_points, dtype=np.int16)
    vals[space.hyperplane_point_indices(h)] = 1
    return Codeword(space, vals)


def combine(space: ProjectiveSpace,
            terms: Iterable[tuple[Union[Hyperplane, int], int]]
            ) -> tuple[Codeword, Decomposition]:
    """F_p-linear combination of hyperplane indicators.

    Duplicate hyperplanes are merged by coefficient addition; terms whose
    merged coefficient vanishes are dropped from the resulting decomposition
    and reported in its `dropped` metadata.
    """
    p = space.field.p
    merged: dict[int, int] = {}
    for h, coef in terms:
        key = h.index if isinstance(h, Hyperplane) else int(h)
        merged[key] = (merged.get(key, 0) + int(coef)) % p
    dropped = sorted(k for k, v in merged.items() if v == 0)
    surviving = {k: v for k, v in merged.items() if v != 0}
    vals = np.zeros(space.num_points, dtype=np.int64)
    for hidx, coef in surviving.items():
        vals[space.hyperplane_point_indices(hidx)] += coef
    cw = Codeword(space, vals % p)
    return cw, Decomposition(space, surviving, dropped=dropped)


def support(c: Codeword) -> np.ndarray:
    """Sorted indices of the points where the codeword is nonzero."""
    return np.nonzero(c.values)[0]


def weight(c: Codeword) -> int:
    return int(np.count_nonzero(c.values))


def restricted_weight(c: Codeword, sub: SubspacePointSet) -> int:
    """Weight of the restriction to a subspace: |supp(c) & subspace points|."""
    idx = np.asarray(sub.point_indices, dtype=np.int64)
    return int(np.count_nonzero(c.values[idx]))


def restricted_support(c: Codeword, sub: SubspacePointSet) -> np.ndarray:
    idx = np.asarray(sub.point_indices, dtype=np.int64)
    return idx[c.values[idx] != 0]


def partial_combination(d: Decomposition, subset: Iterable[int]) -> Codeword:
    """The combination restricted to a subset of the decomposition's terms."""
    subset = set(int(s) for s in subset)
    extra = subset - set(d.terms)
    if extra:
        raise ValueError(f"subset contains hyperplanes outside the decomposition: {sorted(extra)}")
    space = d.space
    vals = np.zeros(space.num_points, dtype=np.int64)
    for hidx in subset:
        vals[space.hyperplane_point_indices(hidx)] += d.terms[hidx]
    return Codeword(space, vals % space.field.p)
