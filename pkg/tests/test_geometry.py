"""Enumeration, indexing and incidence of PG(n, q)."""

from itertools import combinations

import numpy as np
import pytest

from pgcodes import space_make
from pgcodes.geometry import DEFAULT_POINT_CAP


def theta(m, q):
    return 0 if m < 0 else (q ** (m + 1) - 1) // (q - 1)


def test_point_counts(spaces):
    assert spaces(2, 5, 1).num_points == 31
    assert spaces(2, 2, 1).num_points == 7
    assert spaces(3, 2, 5).num_points == 33825


def test_rejects_low_dimension(fields):
    with pytest.raises(ValueError):
        space_make(1, fields(5, 1))


def test_resource_guard(fields):
    with pytest.raises(ValueError):
        space_make(2, fields(5, 1), max_points=10)
    assert DEFAULT_POINT_CAP == 10_000_000


def test_index_table_bijection(spaces):
    for key in ((2, 5, 1), (2, 2, 5), (3, 3, 1)):
        sp = spaces(*key)
        idx = sp._enum.index_rows(sp.point_table)
        assert np.array_equal(idx, np.arange(sp.num_points))


def test_point_index_roundtrip(spaces):
    sp = spaces(2, 3, 2)
    for i in (0, 1, 17, sp.num_points - 1):
        pt = sp.point(i)
        assert sp.point_index(pt.coords) == i
        assert pt.coords[next(k for k, c in enumerate(pt.coords) if c)] == 1


def test_normalization_idempotent(spaces):
    sp = spaces(2, 5, 1)
    rng = np.random.default_rng(0)
    for _ in range(50):
        v = [int(x) for x in rng.integers(0, 5, size=3)]
        if not any(v):
            continue
        once = sp.normalize(v)
        assert sp.normalize(once) == once


def test_normalize_rejects_zero(spaces):
    with pytest.raises(ValueError):
        spaces(2, 5, 1).normalize([0, 0, 0])


def test_incident_basics(spaces):
    sp = spaces(2, 5, 1)
    p = sp.point(sp.point_index([1, 0, 0]))
    h_yes = sp.hyperplane(sp.hyperplane_index([0, 0, 1]))
    h_no = sp.hyperplane(sp.hyperplane_index([1, 0, 0]))
    assert sp.incident(p, h_yes)
    assert not sp.incident(p, h_no)


def test_every_line_of_pg25_has_six_points(spaces):
    sp = spaces(2, 5, 1)
    for h in range(sp.num_hyperplanes):
        pts = sp.hyperplane_point_indices(h)
        assert len(set(pts.tolist())) == 6
        for pt in pts:
            assert sp.incident(int(pt), h)


def test_hyperplanes_through_counts(spaces):
    sp = spaces(2, 5, 1)
    for pt in range(sp.num_points):
        hs = sp.hyperplanes_through(pt)
        assert len(hs) == 6
        assert all(sp.incident(pt, h) for h in hs)
    sp32 = spaces(3, 2, 5)
    rng = np.random.default_rng(1)
    for pt in rng.integers(0, sp32.num_points, size=10):
        assert len(sp32.pencil_indices(int(pt))) == 1057  # theta_2(32)


def test_point_and_pencil_duality(spaces):
    """Each hyperplane carries theta(n-1) points, each point theta(n-1)
    hyperplanes, and q * theta(n-1) + 1 = theta(n)."""
    for key in ((2, 7, 1), (3, 2, 2)):
        sp = spaces(*key)
        t1 = theta(sp.n - 1, sp.q)
        for h in range(sp.num_hyperplanes):
            assert len(sp.hyperplane_point_indices(h)) == t1
        for pt in range(sp.num_points):
            assert len(sp.pencil_indices(pt)) == t1
        assert sp.q * t1 + 1 == sp.num_points


def test_line_through(spaces):
    sp = spaces(2, 5, 1)
    p = sp.point_index([1, 0, 0])
    q_ = sp.point_index([0, 1, 0])
    line = sp.line_through(p, q_)
    assert len(line.point_set) == 6
    for i in line.point_set:
        assert sp.point(i).coords[2] == 0
    # well-definedness: any two points of the line span the same line
    for a, b in combinations(line.point_set, 2):
        assert sp.line_through(a, b).point_set == line.point_set
    with pytest.raises(ValueError):
        sp.line_through(p, p)


def test_line_through_pg332_sizes(spaces):
    sp = spaces(3, 2, 5)
    rng = np.random.default_rng(2)
    for _ in range(20):
        a, b = rng.choice(sp.num_points, size=2, replace=False)
        assert len(sp.line_through(int(a), int(b)).point_set) == 33


def test_line_counts(spaces):
    assert spaces(2, 5, 1).line_count() == 31
    assert spaces(2, 2, 1).line_count() == 7
    assert spaces(3, 2, 1).line_count() == 35
    assert sum(1 for _ in spaces(2, 5, 1).lines_of()) == 31


def test_lines_of_pg32_against_pair_oracle(spaces):
    """Brute-force oracle: canonical lines from every point pair."""
    sp = spaces(3, 2, 1)
    oracle = set()
    for a, b in combinations(range(sp.num_points), 2):
        oracle.add(sp.line_through(a, b).point_set)
    enumerated = [ln.point_set for ln in sp.lines_of()]
    assert len(enumerated) == len(set(enumerated)) == 35
    assert set(enumerated) == oracle


def test_lines_of_guard(spaces):
    with pytest.raises(ValueError):
        list(spaces(3, 2, 5).lines_of(max_lines=10))


def test_two_points_span_unique_line(spaces):
    sp = spaces(2, 3, 1)
    for a, b in combinations(range(sp.num_points), 2):
        ln1 = sp.line_through(a, b)
        assert a in ln1.point_set and b in ln1.point_set
    # dually: two lines of a plane meet in exactly one point
    for h1, h2 in combinations(range(sp.num_hyperplanes), 2):
        s1 = set(sp.hyperplane_point_indices(h1).tolist())
        s2 = set(sp.hyperplane_point_indices(h2).tolist())
        assert len(s1 & s2) == 1


def test_span_points(spaces):
    sp = spaces(3, 2, 5)
    # two points span a line of q+1 points
    sub = sp.span_points([0, 1])
    assert sub.dim == 1 and len(sub.point_indices) == 33
    # three independent points span a plane of theta_2 points
    a = sp.point_index([1, 0, 0, 0])
    b = sp.point_index([0, 1, 0, 0])
    c = sp.point_index([0, 0, 1, 0])
    sub2 = sp.span_points([a, b, c])
    assert len(sub2.point_indices) == 1057
    assert list(sub2.point_indices) == sorted(sub2.point_indices)
    # a full basis spans everything
    d = sp.point_index([0, 0, 0, 1])
    assert len(sp.span_points([a, b, c, d]).point_indices) == sp.num_points
    # dependent basis rejected
    ab = sp.point_index([1, 1, 0, 0])
    with pytest.raises(ValueError):
        sp.span_points([a, b, ab])


def test_span_points_pg3_32_plane_size(spaces):
    sp = spaces(3, 2, 5)
    rng = np.random.default_rng(3)
    found = 0
    while found < 5:
        pts = [int(x) for x in rng.choice(sp.num_points, size=3, replace=False)]
        rows = sp.point_table[pts]
        if sp._rank(rows) != 3:
            continue
        assert len(sp.span_points(pts).point_indices) == 1057
        found += 1
