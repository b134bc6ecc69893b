import pytest

from coverforge.abgrp import FgAbGroup, GroupHom, kernel, image, torsion_subgroup
from coverforge.clgrp import abstract_class_group, class_group, torsion_check, torsion_cover
from coverforge.fanlat import fan_isomorphism, fixture
from coverforge.intlin import IntMatrix, in_span, snf

COMPLETE = ["p1", "p2", "p3", "p1xp1", "hirzebruch_a", "square_torsion"]


def classes(name):
    return [list(c.key) for c in class_group(fixture(name)).divisor_classes]


def test_p2_class_group():
    cl = class_group(fixture("p2"))
    assert cl.cl.free_rank == 1 and cl.cl.invariant_factors == []
    # each line is the hyperplane class; the sign of the generator is a convention
    keys = classes("p2")
    assert keys[0] == keys[1] == keys[2] and abs(keys[0][0]) == 1


def test_p1xp1_class_group():
    cl = class_group(fixture("p1xp1"))
    assert cl.cl.free_rank == 2 and not cl.cl.invariant_factors
    c = cl.divisor_classes
    assert c[0] == c[1] and c[2] == c[3] and c[0] != c[2]
    # (1,0),(1,0),(0,1),(0,1) up to a change of basis of Z^2
    assert abs(snf(IntMatrix.from_cols([c[0].key, c[2].key])).diagonal[1]) == 1


def test_square_fan_class_group():
    cl = class_group(fixture("square_torsion"))
    assert cl.cl.free_rank == 2 and cl.cl.invariant_factors == [2]
    # intlin example: Smith diagonal of the ray matrix is (1, 2)
    assert snf(fixture("square_torsion").ray_matrix).diagonal == [1, 2]


@pytest.mark.parametrize("name", COMPLETE)
def test_rank_is_n_minus_s(name):
    fan = fixture(name)
    assert class_group(fan).cl.free_rank == fan.n - fan.rank


@pytest.mark.parametrize("name", COMPLETE)
def test_short_exact_sequence(name):
    fan = fixture(name)
    cl = class_group(fan)
    M = FgAbGroup.free(fan.rank)
    Zn = cl.projection.source
    incl = GroupHom(M, Zn, fan.ray_matrix)
    # injective on the left, zero composite, kernel of projection = image of M
    assert kernel(incl)[0].is_trivial
    assert cl.projection.compose(incl).is_zero()
    K, k_inc = kernel(cl.projection)
    I, i_inc = image(incl)
    assert K.isomorphic(I)
    for col in k_inc.matrix.columns():
        assert in_span(fan.ray_matrix, col)
    for col in fan.ray_matrix.columns():
        assert cl.projection(Zn.elt(col)).is_zero()


def test_torsion_check():
    assert torsion_check(fixture("p2")).torsion_free
    assert torsion_check(fixture("p1xp1")).torsion_free
    rep = torsion_check(fixture("square_torsion"))
    assert not rep.torsion_free
    assert rep.class_group_torsion == rep.lattice_quotient == [2]


def test_torsion_cover_trivial_when_rays_generate():
    for name in ["p1", "p2", "p3", "p1xp1", "hirzebruch_a"]:
        c = torsion_cover(fixture(name))
        assert c.galois_group.is_trivial and c.degree == 1


def test_torsion_cover_square():
    fan = fixture("square_torsion")
    c = torsion_cover(fan)
    assert c.sublattice.basis.columns() == [(1, 1), (0, 2)]
    assert c.galois_group.invariant_factors == [2]
    assert c.galois_group.isomorphic(torsion_subgroup(class_group(fan).cl)[0])
    assert fan_isomorphism(c.covering_fan, fixture("p1xp1")) is not None
    assert torsion_check(c.covering_fan).torsion_free


def test_abstract_class_group():
    cl = abstract_class_group([2], 1, [[1, 1], [0, 1], [1, 3]])
    assert cl.cl.invariant_factors == [2] and cl.cl.free_rank == 1
    assert cl.divisor_classes[0] == cl.divisor_classes[2] + cl.cl.elt([0, -2])
    with pytest.raises(ValueError):
        abstract_class_group([2], 1, [[1]])
    with pytest.raises(ValueError):
        abstract_class_group([1], 1, [[1, 1]])
