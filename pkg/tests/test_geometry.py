import pytest

from grassver.gf import Subspace, enumerate_subspaces, qint
from grassver.geometry import (
    CoverKind,
    GeometryContext,
    Stratum,
    classify_stratum,
    cover_kind,
    expected_stratum_size,
    pair_profile,
    stratum_sizes,
    verify_cover_counts,
)


@pytest.fixture(scope="module")
def ctx242():
    return GeometryContext(2, 4, 2)


def test_reference_subspace_defaults(ctx242):
    assert ctx242.y == Subspace.coordinate_span([0, 1], 2, 4)
    assert classify_stratum(ctx242.y, ctx242) == Stratum(2, 0)
    assert classify_stratum(Subspace.zero(2, 4), ctx242) == Stratum(0, 0)


def test_stratum_examples(ctx242):
    u = Subspace.coordinate_span([0, 2], 2, 4)  # meets y in e0 only
    assert classify_stratum(u, ctx242) == Stratum(1, 1)
    v = Subspace.coordinate_span([2, 3], 2, 4)
    assert classify_stratum(v, ctx242) == Stratum(0, 2)


def test_cover_kind_dichotomy(ctx242):
    u = Subspace.coordinate_span([2], 2, 4)
    v_slash = Subspace.coordinate_span([0, 2], 2, 4)
    v_back = Subspace.coordinate_span([2, 3], 2, 4)
    assert cover_kind(u, v_slash, ctx242) is CoverKind.SLASH
    assert cover_kind(u, v_back, ctx242) is CoverKind.BACKSLASH
    # not a cover: same dim, or not containing u
    assert cover_kind(u, Subspace.coordinate_span([3], 2, 4), ctx242) is None
    assert cover_kind(v_slash, u, ctx242) is None
    w = Subspace.coordinate_span([0, 1], 2, 4)
    assert cover_kind(u, w, ctx242) is None


def test_every_cover_has_exactly_one_kind(ctx242):
    ctx = ctx242
    for u in ctx.elements:
        if u.dim == ctx.n:
            continue
        i_u = ctx.intersection_dim_with_y(u.rows)
        for vrows, _ in ctx.superspaces_rows(u.rows):
            i_v = ctx.intersection_dim_with_y(vrows)
            assert i_v in (i_u, i_u + 1)


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (3, 4, 2), (2, 5, 2)])
def test_cover_count_formulas_hold_everywhere(q, n, k):
    report = verify_cover_counts(GeometryContext(q, n, k))
    assert report.holds
    assert report.checked == len(GeometryContext(q, n, k).elements)


def test_cover_count_closed_forms_spot(ctx242):
    # u in stratum (1,1): slash-covers q^j[i]=2, backslash-covers [j]=1,
    # slash-covered by [k-i]=1, backslash-covered by q^(k-i)[n-k-j]=2
    u = Subspace.coordinate_span([0, 2], 2, 4)
    slash_below = sum(
        1 for m in ctx242.hyperplanes_rows(u.rows)
        if ctx242.intersection_dim_with_y(m) == 0)
    assert slash_below == 2
    above = list(ctx242.superspaces_rows(u.rows))
    slash_above = sum(
        1 for v, _ in above if ctx242.intersection_dim_with_y(v) == 2)
    assert slash_above == 1
    assert len(above) - slash_above == 2


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (2, 5, 2), (3, 4, 2)])
def test_stratum_sizes_closed_form(q, n, k):
    ctx = GeometryContext(q, n, k)
    sizes = stratum_sizes(ctx)
    for s, count in sizes.items():
        assert expected_stratum_size(s.i, s.j, ctx) == count
    assert sum(sizes.values()) == len(ctx.elements)
    # strata partition P: i <= k, j <= n-k
    assert all(0 <= s.i <= k and 0 <= s.j <= n - k for s in sizes)


def test_superspace_and_hyperplane_counts(ctx242):
    for u in ctx242.elements:
        d = u.dim
        if d < ctx242.n:
            assert (len(list(ctx242.superspaces_rows(u.rows)))
                    == qint(ctx242.n - d, 2))
        if d > 0:
            assert (len(list(ctx242.hyperplanes_rows(u.rows)))
                    == qint(d, 2))


def test_typed_adjacency_matches_pair_profile(ctx242):
    from grassver.gf import dim_intersect

    z = Subspace.coordinate_span([0, 2], 2, 4)
    swept = dict(ctx242.typed_adjacency(z.rows))
    count = 0
    for u in enumerate_subspaces(4, 2, 2):
        if u == z or dim_intersect(u, z) != 1:
            continue
        count += 1
        assert u.rows in swept
        assert swept[u.rows] == pair_profile(u, z, ctx242)
    assert count == len(swept)


def test_banded_context_skips_enumeration():
    ctx = GeometryContext(2, 7, 3, dims=())
    assert ctx.elements == []
    u = Subspace.coordinate_span([0, 4, 5], 2, 7)
    assert ctx.stratum(u) == Stratum(1, 2)
    with pytest.raises(ValueError):
        list(ctx.subspaces_of_dim(3))


def test_non_canonical_reference_subspace():
    y = Subspace.from_matrix([[1, 1, 0, 0], [0, 0, 1, 1]], 2)
    ctx = GeometryContext(2, 4, 2, y=y)
    assert ctx.stratum(y) == Stratum(2, 0)
    rep = verify_cover_counts(ctx)
    assert rep.holds


def test_invalid_parameters():
    with pytest.raises(ValueError):
        GeometryContext(4, 4, 2)  # q not prime
    with pytest.raises(ValueError):
        GeometryContext(2, 2, 2)  # n == k
    with pytest.raises(ValueError):
        GeometryContext(2, 4, 2, y=Subspace.coordinate_span([0], 2, 4))
