import pytest
from support import bfs_norms, count_components, lattice_ball

from cocycle_rigidity.errors import PreconditionError, RadiusExceeded
from cocycle_rigidity.formats import parse_group
from cocycle_rigidity.geometry import CayleyExplorer, GeodesicPath, metric_violations


def explorer(spec, **kw):
    return CayleyExplorer(parse_group(spec), **kw)


@pytest.mark.parametrize("spec, radius", [("Z^2", 5), ("F(2)", 4), ("S(4)", 6), ("Z^1 x C(3)", 4), ("Z^3", 3)])
def test_word_norm_matches_independent_bfs(spec, radius):
    E = explorer(spec)
    oracle = bfs_norms(E.group, radius)
    for g, n in oracle.items():
        assert E.word_norm(g) == n
    assert sorted(E.ball(radius), key=repr) == sorted(oracle, key=repr)


def test_lattice_norm_is_l1():
    E = explorer("Z^2")
    assert E.word_norm((3, -4)) == 7
    assert set(E.ball(4)) == set(lattice_ball(2, 4))


@pytest.mark.parametrize(
    "spec, sizes",
    [
        ("Z^1", [1, 2, 2, 2, 2]),
        ("Z^2", [1, 4, 8, 12, 16]),
        ("F(2)", [1, 4, 12, 36, 108]),
        ("S(3)", [1, 3, 2]),
    ],
)
def test_sphere_sizes(spec, sizes):
    E = explorer(spec)
    assert E.sphere_sizes(len(sizes) - 1) == sizes


def test_finite_group_is_exhausted():
    E = explorer("S(3)")
    assert sum(E.sphere_sizes(5)) == 6
    assert E.exhausted
    assert E.sphere(4) == []


def test_words_are_lexicographically_least_geodesics():
    E = explorer("Z^2")
    assert E.word_label((1, 1)) == "+1.+2"
    assert E.word_label((-1, 2)) == "+2.+2.-1"
    assert E.word_label((0, 0)) == "e"
    for g in E.ball(3):
        assert E.parse_word(E.word_label(g)) == g
        assert len(E.word(g)) == E.word_norm(g)


def test_free_group_words_are_the_reduced_words():
    E = explorer("F(2)")
    F = E.group
    g = F.parse_label("abA")
    assert E.word_norm(g) == 3
    assert [F.generator_names[i] for i in E.word(g)] == ["a", "b", "A"]


def test_radius_cap_raises():
    E = explorer("Z^2", max_radius=3)
    E.ball(3)
    with pytest.raises(RadiusExceeded) as info:
        E.ball(4)
    assert info.value.radius == 4


def test_radius_cap_from_environment(monkeypatch):
    monkeypatch.setenv("COCYCLE_MAX_RADIUS", "2")
    E = explorer("Z^1")
    with pytest.raises(RadiusExceeded):
        E.word_norm((5,))


def test_translated_sites():
    E = explorer("Z^2")
    sites = tuple(E.ball(1))
    assert E.translated((2, 0), sites) == tuple((2 + a, b) for a, b in sites)


def test_segment_is_a_geodesic():
    E = explorer("Z^2")
    seg = E.geodesic_segment((2, 1))
    assert seg.vertices == ((0, 0), (1, 0), (2, 0), (2, 1))
    assert E.is_geodesic(seg)
    assert not E.is_geodesic(GeodesicPath(0, ((0, 0), (1, 0), (1, 1), (0, 1))))


def test_biinfinite_geodesic_on_z_and_z2():
    assert explorer("Z^1").extend_biinfinite_geodesic(4).vertices == tuple((k,) for k in range(-4, 5))
    path = explorer("Z^2").extend_biinfinite_geodesic(3)
    assert path.start == -3
    assert path.vertices == ((0, 3), (0, 2), (0, 1), (0, 0), (1, 0), (2, 0), (3, 0))


# F(2) balls grow like 3^r and the construction explores B(2n + 4)
@pytest.mark.parametrize("spec, top", [("Z^2", 6), ("F(2)", 3), ("Z^1 x S(3)", 6), ("Z^3", 5)])
def test_biinfinite_geodesics_are_restriction_consistent(spec, top):
    E = explorer(spec)
    long = E.extend_biinfinite_geodesic(top)
    assert E.is_geodesic(long)
    for n in range(1, top):
        assert E.extend_biinfinite_geodesic(n) == long.restrict(-n, n)


def test_geodesic_on_finite_group_is_impossible():
    with pytest.raises((PreconditionError, RadiusExceeded)):
        explorer("S(3)").extend_biinfinite_geodesic(3)


@pytest.mark.parametrize("L", [1, 2, 3])
def test_half_geodesic_neighbourhoods_meet_near_the_origin(L):
    E = explorer("Z^2")
    ok, witness = E.half_geodesic_intersection_check(E.extend_biinfinite_geodesic(2 * L), L)
    assert ok and witness is None


def test_half_geodesic_check_preconditions():
    E = explorer("Z^2")
    with pytest.raises(PreconditionError):
        E.half_geodesic_intersection_check(E.extend_biinfinite_geodesic(1), 1)


def test_l_neighbourhood_brute_force():
    E = explorer("Z^2")
    T = [(0, 0), (3, 0)]
    expected = {g for g in lattice_ball(2, 5) if any(abs(g[0] - t[0]) + abs(g[1] - t[1]) <= 1 for t in T)}
    assert set(E.l_neighborhood(T, 1)) == expected


@pytest.mark.parametrize("r", range(0, 7))
def test_ends_of_z2(r):
    rep = explorer("Z^2").component_report(r, 2 * r + 4)
    assert (rep.unbounded, rep.N_of_r) == (1, r)
    assert rep.bounded == 0


@pytest.mark.parametrize("r", range(0, 5))
def test_ends_of_z(r):
    rep = explorer("Z^1").component_report(r)
    assert (rep.unbounded, rep.N_of_r) == (2, r)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_free_group_components_match_flood_fill(r):
    G = parse_group("F(2)")
    R = r + 3
    rep = CayleyExplorer(G).component_report(r, R)
    assert (rep.unbounded, rep.bounded) == count_components(G, r, R)
    assert rep.unbounded == 4 * 3**r


def test_bounded_components_raise_n():
    # in Z x C(2) with r = 0 the element t_1 sits inside the removed ball's shadow
    G = parse_group("Z^1 x C(2)")
    E = CayleyExplorer(G)
    for r in range(4):
        rep = E.component_report(r)
        assert (rep.unbounded, rep.bounded) == count_components(G, r, rep.R_max)
        assert rep.N_of_r == max([r] + [E.word_norm(g) for g in rep.bounded_elements])


def test_finite_group_has_no_unbounded_component():
    rep = explorer("S(3)").component_report(0, 3)
    assert rep.unbounded == 0
    assert rep.N_of_r == 2
    assert not rep.caveat


def test_avoiding_path():
    E = explorer("Z^1")
    assert E.path_avoiding_ball((5,), (-5,), 2, 8) is None
    E2 = explorer("Z^2")
    path = E2.path_avoiding_ball((5, 0), (-5, 0), 2, 8)
    assert path is not None and E2.is_path(path)
    assert all(E2.word_norm(v) > 2 for v in path.vertices)


def test_metric_axioms_on_a_ball():
    E = explorer("F(2)")
    assert metric_violations(E, E.ball(2)) == []
