"""Decomposition of small-weight codewords and minimality analysis.

A codeword of weight at most W(n, q) is (in the guaranteed regime) a unique
combination of ceil(wt / theta(n-1)) hyperplanes.  `decompose` recovers the
terms by majority peeling: some hyperplane always carries more than half of
theta(n-1) points of equal nonzero value, and subtracting it shrinks the
problem.  The partition machinery then refines the singleton partition of
the terms along a hole-witness adjacency graph to a fixpoint; the size of
the fixpoint and of its exceptional hole set decide minimality, with a
constructive witness in the non-minimal case and an exhaustive oracle as an
independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import bounds
from .bounds import BoundContext
from .codes import Codeword, Decomposition, combine, weight
from .ff import matrix_mod_p, nullspace
from .geometry import ProjectiveSpace, _f_matmul

DEFAULT_ORACLE_CAP = 100_000_000


class NoDecompositionError(ValueError):
    """Raised when majority peeling cannot express the codeword."""


class OracleCapExceededError(ValueError):
    """Raised when p^m exceeds the exhaustive-search budget."""


VERDICT_MINIMAL = "Minimal"
VERDICT_NOT_MINIMAL = "NotMinimal"
VERDICT_UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class HyperplanePartition:
    """Partition of the decomposition's hyperplanes; generation 0 = singletons."""

    blocks: tuple[frozenset[int], ...]
    generation: int

    @property
    def size(self) -> int:
        return len(self.blocks)

    def as_sorted_lists(self) -> list[list[int]]:
        return [sorted(b) for b in self.blocks]


def _make_partition(blocks, generation):
    ordered = tuple(sorted((frozenset(b) for b in blocks), key=min))
    return HyperplanePartition(ordered, generation)


@dataclass(frozen=True)
class AdjacencyWitnessGraph:
    """Edges between partition blocks, each annotated with a witness hole."""

    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]  # (block_i, block_j, witness point)

    def edge_pairs(self) -> set[tuple[int, int]]:
        return {(a, b) for a, b, _ in self.edges}


@dataclass(frozen=True)
class OracleResult:
    minimal: bool
    combinations_checked: int
    counterexample: Optional[Codeword] = None
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class MinimalityReport:
    decomposition: Decomposition
    fixpoint: HyperplanePartition
    history: tuple[HyperplanePartition, ...]
    exceptional_holes: tuple[int, ...]
    verdict: str
    witness: Optional[Codeword]
    oracle: Optional[OracleResult]
    regime_flags: tuple[str, ...]

    def to_json(self) -> dict:
        out = {
            "decomposition": self.decomposition.to_json(),
            "partition_history": [p.as_sorted_lists() for p in self.history],
            "fixpoint": self.fixpoint.as_sorted_lists(),
            "exceptional_holes": list(self.exceptional_holes),
            "verdict": self.verdict,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "oracle": None,
            "regime_flags": list(self.regime_flags),
        }
        if self.oracle is not None:
            out["oracle"] = {
                "minimal": self.oracle.minimal,
                "combinations_checked": self.oracle.combinations_checked,
                "flags": list(self.oracle.flags),
            }
        return out


# ---------------------------------------------------------------------------
# Decomposition by majority peeling
# ---------------------------------------------------------------------------

def _pencil_counts(space: ProjectiveSpace, residual: np.ndarray,
                   supp: np.ndarray, anchor_pos: int):
    """Counts of same-valued support points on every hyperplane through an anchor.

    Hyperplanes through the anchor are parameterised by the canonical points
    of PG(n-1, q); the other support points land on quotient points, and one
    dual-incidence transform turns the (quotient point, value) histogram into
    per-hyperplane counts.  Returns (counts[t, alpha-1], hyperplane index per t).
    """
    f = space.field
    p = f.p
    n = space.n
    enum_q = space._get_enum(n - 1)
    tq = enum_q.size

    anchor = int(supp[anchor_pos])
    anchor_coords = space.point_table[anchor]
    b = space.complement_rows(anchor_coords)

    cand_rows = space.span_rows(b)                       # theta(n-1) x (n+1)
    cand_idx = space._enum.index_rows(cand_rows)

    others = np.delete(supp, anchor_pos)
    if len(others):
        y = _f_matmul(f, space.point_table[others], np.ascontiguousarray(b.T))
        yidx = enum_q.index_rows(enum_q.normalize_rows(y))
        vals = residual[others].astype(np.int64)
        codes_flat = yidx * (p - 1) + (vals - 1)
        w = np.bincount(codes_flat, minlength=tq * (p - 1)).reshape(tq, p - 1)
    else:
        w = np.zeros((tq, p - 1), dtype=np.int64)

    inc = space.incidence_matrix(n - 1)
    if inc is not None:
        counts = np.rint(inc @ w.astype(np.float32)).astype(np.int64)
    else:
        # fallback: direct dots candidate x support, chunked
        counts = np.zeros((tq, p - 1), dtype=np.int64)
        if len(others):
            oc = space.point_table[others]
            vals = residual[others].astype(np.int64)
            chunk = max(1, (1 << 22) // max(len(others), 1))
            for start in range(0, tq, chunk):
                stop = min(tq, start + chunk)
                acc = None
                for k in range(n + 1):
                    term = f.mul_table[cand_rows[start:stop, k][:, None], oc[:, k][None, :]]
                    acc = term if acc is None else f.add_table[acc, term]
                hits = acc == 0
                for alpha in range(1, p):
                    counts[start:stop, alpha - 1] = (hits & (vals == alpha)[None, :]).sum(axis=1)
    counts[:, int(residual[anchor]) - 1] += 1            # anchor lies on every candidate
    return counts, cand_idx


def _best_candidate(counts: np.ndarray, cand_idx: np.ndarray):
    """(count, hyperplane index, value, tie) of the maximal candidate.

    Ties at the maximal count break to the lowest hyperplane index, then the
    smallest value.
    """
    best = int(counts.max())
    ts, als = np.nonzero(counts == best)
    hyp = cand_idx[ts]
    order = np.lexsort((als, hyp))
    k = order[0]
    return best, int(hyp[k]), int(als[k]) + 1, len(ts) > 1


def decompose(c: Codeword, ctx: Optional[BoundContext] = None,
              max_peels: Optional[int] = None) -> Decomposition:
    """Write a small-weight codeword as its unique hyperplane combination.

    Peeling step: scan support anchors in index order; the first anchor whose
    hyperplane pencil contains a candidate (H, alpha) covering more than half
    of theta(n-1) support points of value alpha gets that candidate peeled.
    In the guaranteed regime the first anchor always succeeds and the term
    set is independent of the peel order, so this matches the global-maximum
    rule up to ordering.  Out of regime the peel is best-effort and flagged.

    Raises NoDecompositionError when no majority candidate exists anywhere or
    the peel budget is exhausted with a nonzero residual.
    """
    space = c.space
    if ctx is None:
        ctx = bounds.context_for(c)
    p = space.field.p
    wt = weight(c)
    theta_h = space.theta(space.n - 1)
    flags = list(bounds.regime_flags(ctx, weight=wt))
    in_regime = not flags

    m_est = -(-wt // theta_h)  # ceil
    if max_peels is not None:
        cap = max_peels
    elif ctx.h >= 2:
        cap = delta_cap = bounds.delta(space.n, ctx) - 1
        if not in_regime:
            cap = max(delta_cap, m_est + 2)
            flags.append("best-effort")
    else:
        cap = m_est + 2
        flags.append("best-effort")

    residual = c.values.astype(np.int16).copy()
    terms: dict[int, int] = {}
    tie_breaks: list[int] = []

    peels = 0
    while residual.any():
        if peels >= cap:
            raise NoDecompositionError(
                f"residual nonzero after {peels} peels (weight {wt} may exceed W, "
                "or the input is outside the guaranteed regime)")
        supp = np.nonzero(residual)[0]
        found = False
        for anchor_pos in range(len(supp)):
            counts, cand_idx = _pencil_counts(space, residual, supp, anchor_pos)
            best, hyp, alpha, tie = _best_candidate(counts, cand_idx)
            if 2 * best > theta_h:
                if tie:
                    tie_breaks.append(peels)
                pts = space.hyperplane_point_indices(hyp)
                residual[pts] = (residual[pts] - alpha) % p
                terms[hyp] = (terms.get(hyp, 0) + alpha) % p
                if terms[hyp] == 0:
                    del terms[hyp]
                peels += 1
                found = True
                break
        if not found:
            raise NoDecompositionError(
                "no hyperplane carries a strict majority of equal-valued support "
                f"points (weight {wt}; outside the guaranteed regime?)")

    if in_regime and len(terms) != m_est and wt > 0:
        raise NoDecompositionError(
            f"internal inconsistency: {len(terms)} terms recovered but "
            f"ceil(wt/theta) = {m_est} expected in regime")
    return Decomposition(space, terms, flags=flags, tie_breaks=tie_breaks)


# ---------------------------------------------------------------------------
# Partition refinement over the hole-witness adjacency graph
# ---------------------------------------------------------------------------

def _term_rows(d: Decomposition) -> np.ndarray:
    """One dense value row per term: coefficient on the hyperplane, 0 off it."""
    space = d.space
    rows = np.zeros((d.m, space.num_points), dtype=np.int16)
    for r, (hidx, coef) in enumerate(d.terms.items()):
        rows[r, space.hyperplane_point_indices(hidx)] = coef
    return rows


def _block_values(d: Decomposition, partition: HyperplanePartition,
                  term_rows: Optional[np.ndarray] = None) -> np.ndarray:
    p = d.space.field.p
    if term_rows is None:
        term_rows = _term_rows(d)
    order = {h: r for r, h in enumerate(d.terms)}
    out = np.zeros((partition.size, d.space.num_points), dtype=np.int16)
    for bi, block in enumerate(partition.blocks):
        acc = np.zeros(d.space.num_points, dtype=np.int64)
        for h in block:
            acc += term_rows[order[h]]
        out[bi] = acc % p
    return out


def build_adjacency(d: Decomposition, partition: HyperplanePartition,
                    term_rows: Optional[np.ndarray] = None) -> AdjacencyWitnessGraph:
    """Edges between blocks witnessed by a hole of c that is a real point of
    exactly those two blocks' partial combinations and a hole of all others."""
    union = set()
    for h in d.terms:
        union.update(d.space.hyperplane_point_indices(h).tolist())
    if partition.size != 0 and set().union(*partition.blocks) != set(d.terms):
        raise ValueError("partition does not cover the decomposition's hyperplanes")
    if partition.size > 62:
        raise ValueError("too many blocks for the bitmask encoding")

    vals = _block_values(d, partition, term_rows)
    cvals = vals.astype(np.int64).sum(axis=0) % d.space.field.p
    nz = vals != 0
    nz_count = nz.sum(axis=0)
    mask = (cvals == 0) & (nz_count == 2)
    pts = np.nonzero(mask)[0]
    if len(pts) == 0:
        return AdjacencyWitnessGraph(partition.size, ())
    bits = (nz[:, pts].astype(np.int64)
            * (1 << np.arange(partition.size, dtype=np.int64))[:, None]).sum(axis=0)
    uniq, first = np.unique(bits, return_index=True)
    edges = []
    for code, fi in zip(uniq, first):
        members = [b for b in range(partition.size) if (int(code) >> b) & 1]
        edges.append((members[0], members[1], int(pts[fi])))
    edges.sort()
    return AdjacencyWitnessGraph(partition.size, tuple(edges))


def _merge_components(partition: HyperplanePartition,
                      graph: AdjacencyWitnessGraph) -> HyperplanePartition:
    parent = list(range(partition.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in graph.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, set[int]] = {}
    for bi, block in enumerate(partition.blocks):
        groups.setdefault(find(bi), set()).update(block)
    return _make_partition(groups.values(), partition.generation + 1)


def refine_to_fixpoint(d: Decomposition
                       ) -> tuple[HyperplanePartition, list[HyperplanePartition]]:
    """Iterate component merging from the singleton partition to a fixpoint."""
    term_rows = _term_rows(d)
    current = _make_partition([{h} for h in d.terms], 0)
    history = [current]
    while True:
        graph = build_adjacency(d, current, term_rows)
        merged = _merge_components(current, graph)
        if merged.blocks == current.blocks:
            return current, history
        current = merged
        history.append(current)


def exceptional_holes(d: Decomposition, fixpoint: HyperplanePartition) -> tuple[int, ...]:
    """Holes of c at which some fixpoint block's partial combination is nonzero."""
    vals = _block_values(d, fixpoint)
    cvals = vals.astype(np.int64).sum(axis=0) % d.space.field.p
    mask = (cvals == 0) & (vals != 0).any(axis=0)
    return tuple(int(i) for i in np.nonzero(mask)[0])


def build_witness(d: Decomposition, fixpoint: HyperplanePartition,
                  holes: Sequence[int]) -> Codeword:
    """Solve the hole system and return a subsupport codeword that is not a
    scalar multiple of c.  Requires |holes| <= |blocks| - 2."""
    nblocks = fixpoint.size
    r = len(holes)
    if r > nblocks - 2:
        raise ValueError(f"witness construction needs r <= blocks - 2 (r={r}, blocks={nblocks})")
    space = d.space
    p = space.field.p
    vals = _block_values(d, fixpoint)
    rows = [[int(vals[b, pt]) for b in range(nblocks)] for pt in sorted(holes)]
    basis = nullspace(matrix_mod_p(p, rows, cols=nblocks))
    chosen = None
    for vec in basis:
        if len(set(vec)) > 1:  # not proportional to the all-ones vector
            chosen = vec
            break
    if chosen is None:
        raise RuntimeError("null space contained no vector independent of all-ones")
    acc = np.zeros(space.num_points, dtype=np.int64)
    for b in range(nblocks):
        acc += int(chosen[b]) * vals[b].astype(np.int64)
    witness = Codeword(space, acc % p)

    cvals = vals.astype(np.int64).sum(axis=0) % p
    if np.any((witness.values != 0) & (cvals == 0)):
        raise RuntimeError("witness support escapes supp(c)")
    if _is_scalar_multiple(witness.values, cvals, p):
        raise RuntimeError("witness degenerated to a scalar multiple of c")
    return witness


def _is_scalar_multiple(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    for lam in range(p):
        if np.array_equal(a, (lam * b.astype(np.int64)) % p):
            return True
    return False


# ---------------------------------------------------------------------------
# Exhaustive oracle
# ---------------------------------------------------------------------------

def oracle_minimal(d: Decomposition, cap: int = DEFAULT_ORACLE_CAP,
                   chunk: int = 1 << 15) -> OracleResult:
    """Brute-force minimality: enumerate every coefficient vector in F_p^m.

    A combination c' of the decomposition's hyperplanes has supp(c') inside
    supp(c) iff it vanishes on every hole of c lying on the union of the
    hyperplanes.  The verdict is exact in the guaranteed regime (support
    subsets cannot involve outside hyperplanes there); otherwise the result
    is flagged heuristic, though a found counterexample is definitive.
    """
    space = d.space
    p = space.field.p
    m = d.m
    total = p ** m
    if total > cap:
        raise OracleCapExceededError(f"p^m = {total} exceeds the oracle cap {cap}")
    wt_c = 0
    flags = []
    if m:
        union = sorted(set().union(
            *(space.hyperplane_point_indices(h).tolist() for h in d.terms)))
        union = np.asarray(union, dtype=np.int64)
        indicator = np.zeros((m, len(union)), dtype=np.int64)
        pos = {int(u): k for k, u in enumerate(union)}
        for r, h in enumerate(d.terms):
            for pt in space.hyperplane_point_indices(h):
                indicator[r, pos[int(pt)]] = 1
        coef = np.array(list(d.terms.values()), dtype=np.int64)
        c_on_union = (coef @ indicator) % p
        hole_cols = np.nonzero(c_on_union == 0)[0]
        wt_c = int(np.count_nonzero(c_on_union))
        scalar_rows = {tuple((lam * coef) % p) for lam in range(p)}

        checked = 0
        powers = p ** np.arange(m, dtype=np.int64)
        ind_holes = indicator[:, hole_cols]
        for start in range(0, total, chunk):
            stop = min(total, start + chunk)
            ks = np.arange(start, stop, dtype=np.int64)
            betas = (ks[:, None] // powers[None, :]) % p
            checked = stop
            if len(hole_cols):
                inside = ((betas @ ind_holes) % p == 0).all(axis=1)
            else:
                inside = np.ones(len(ks), dtype=bool)
            for row in np.nonzero(inside)[0]:
                beta = tuple(int(x) for x in betas[row])
                if beta in scalar_rows:
                    continue
                # value-level check: a coefficient mismatch could still give
                # a proportional value vector outside the unique regime
                v = (betas[row] @ indicator) % p
                if any(np.array_equal(v, (lam * c_on_union) % p) for lam in range(p)):
                    continue
                counter, _ = combine(space, list(zip(d.terms.keys(), betas[row].tolist())))
                ctx = BoundContext(space.n, p, space.field.h)
                if bounds.regime_flags(ctx, weight=wt_c):
                    flags.append("heuristic-span-restricted")
                return OracleResult(False, checked, counter, tuple(flags))
    ctx = BoundContext(space.n, p, space.field.h)
    if bounds.regime_flags(ctx, weight=wt_c):
        flags.append("heuristic-span-restricted")
    return OracleResult(True, total, None, tuple(flags))


# ---------------------------------------------------------------------------
# Verdict
# ---------------------------------------------------------------------------

def verdict(c: Codeword, ctx: Optional[BoundContext] = None,
            with_oracle: bool = False, oracle_cap: int = DEFAULT_ORACLE_CAP,
            decomposition: Optional[Decomposition] = None) -> MinimalityReport:
    """Run the full minimality pipeline on a codeword.

    Minimal:    fixpoint has one block (only asserted inside the regime).
    NotMinimal: the exceptional-hole count is at most blocks - 2; the emitted
                witness re-verifies its postconditions, so this verdict stands
                even outside the regime.
    Otherwise Undetermined, optionally accompanied by the oracle's answer.
    """
    space = c.space
    if ctx is None:
        ctx = bounds.context_for(c)
    wt = weight(c)
    flags = list(bounds.regime_flags(ctx, weight=wt))
    in_regime = not flags

    if wt == 0:
        empty = Decomposition(space, {})
        fix = _make_partition([], 0)
        return MinimalityReport(empty, fix, (fix,), (), VERDICT_MINIMAL, None,
                                None, tuple(flags + ["degenerate-zero-codeword"]))

    d = decomposition if decomposition is not None else decompose(c, ctx)
    fixpoint, history = refine_to_fixpoint(d)
    holes = exceptional_holes(d, fixpoint)

    witness = None
    if fixpoint.size == 1:
        verdict_str = VERDICT_MINIMAL if in_regime else VERDICT_UNDETERMINED
        if not in_regime:
            flags.append("single-block-outside-regime")
    elif len(holes) <= fixpoint.size - 2:
        witness = build_witness(d, fixpoint, holes)
        verdict_str = VERDICT_NOT_MINIMAL
    else:
        verdict_str = VERDICT_UNDETERMINED

    oracle = None
    if with_oracle:
        oracle = oracle_minimal(d, cap=oracle_cap)
    return MinimalityReport(d, fixpoint, tuple(history), holes, verdict_str,
                            witness, oracle, tuple(flags))


# ---------------------------------------------------------------------------
# Named fixtures
# ---------------------------------------------------------------------------

def szonyi_example(space: ProjectiveSpace) -> tuple[Codeword, dict]:
    """Seven-line plane configuration: two triples of lines through two points
    of a common transversal, with coefficients (+1, +1, -1) per triple and -1
    on the transversal.  Deterministic lowest-index choices throughout."""
    if space.n != 2:
        raise ValueError("the seven-line configuration lives in a plane (n = 2)")
    if space.field.p <= 3:
        raise ValueError("requires p > 3")
    t = 0
    t_points = np.sort(space.hyperplane_point_indices(t))
    r_pt, s_pt = int(t_points[0]), int(t_points[1])
    r_lines = [int(i) for i in np.sort(space.pencil_indices(r_pt)) if i != t][:3]
    s_lines = [int(i) for i in np.sort(space.pencil_indices(s_pt)) if i != t][:3]
    p = space.field.p
    terms = [
        (r_lines[0], 1), (r_lines[1], 1), (r_lines[2], p - 1),
        (s_lines[0], 1), (s_lines[1], 1), (s_lines[2], p - 1),
        (t, p - 1),
    ]
    cw, _ = combine(space, terms)
    info = {
        "t": t, "R": r_pt, "S": s_pt,
        "r": r_lines[:2], "r_prime": r_lines[2],
        "s": s_lines[:2], "s_prime": s_lines[2],
    }
    return cw, info


def p2_fixtures(space: ProjectiveSpace, kind: str) -> tuple[Codeword, dict]:
    """Characteristic-2 plane configurations with all coefficients 1.

    "pencil":       three lines through a common point.
    "no-hole-line": a base line with two further lines through each of two of
                    its points (five lines; the base line carries no holes).
    """
    if space.n != 2 or space.field.p != 2:
        raise ValueError("fixtures are defined for p = 2, n = 2")
    if kind == "pencil":
        vertex = 0
        lines = [int(i) for i in np.sort(space.pencil_indices(vertex))][:3]
        cw, _ = combine(space, [(l, 1) for l in lines])
        return cw, {"vertex": vertex, "lines": lines}
    if kind == "no-hole-line":
        base = 0
        base_points = np.sort(space.hyperplane_point_indices(base))
        a_pt, b_pt = int(base_points[0]), int(base_points[1])
        a_lines = [int(i) for i in np.sort(space.pencil_indices(a_pt)) if i != base][:2]
        b_lines = [int(i) for i in np.sort(space.pencil_indices(b_pt)) if i != base][:2]
        lines = [base] + a_lines + b_lines
        cw, _ = combine(space, [(l, 1) for l in lines])
        return cw, {"base": base, "A": a_pt, "B": b_pt, "lines": lines}
    raise ValueError(f"unknown fixture kind: {kind!r}")


def random_combination(space: ProjectiveSpace, j: int, rng: np.random.Generator
                       ) -> tuple[Codeword, Decomposition]:
    """j distinct random hyperplanes with random nonzero coefficients."""
    p = space.field.p
    idx = rng.choice(space.num_hyperplanes, size=j, replace=False)
    coefs = rng.integers(1, p, size=j)
    return combine(space, list(zip(idx.tolist(), coefs.tolist())))
