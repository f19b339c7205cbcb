import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from toric_wci.coxcl import (
    DivisorClass,
    anticanonical,
    class_group,
    degree_of_monomial,
    group_D,
    irrelevant_locus,
    is_ample,
    is_homogeneous,
    support_function_slopes,
)
from toric_wci.exactmat import solve_rational
from toric_wci.gwps import fan_from_weights, projective_space_fan
from toric_wci.io import load_fan

CORPUS = ["p2.fan", "p3.fan", "p1xp1.fan", "example2.fan", "example3.fan", "example4_p3.fan", "example4_p5.fan"]


def sympy_class_group(fan):
    D = sympy_snf(sympy.Matrix([list(r) for r in fan.rays]), domain=sympy.ZZ)
    diag = [abs(int(D[i, i])) for i in range(min(D.shape))]
    rank = sum(1 for d in diag if d)
    return fan.n_rays - rank, tuple(d for d in diag if d > 1)


@pytest.mark.parametrize("name", CORPUS)
def test_class_group_matches_sympy(name):
    fan = load_fan(name)
    cl = class_group(fan)
    assert (cl.free_rank, cl.torsion) == sympy_class_group(fan)


@pytest.mark.parametrize("name", CORPUS)
def test_characters_have_trivial_class(name):
    fan = load_fan(name)
    cl = class_group(fan)
    for k in range(fan.lattice_rank):
        div = [r[k] for r in fan.rays]  # div(chi^{e_k})
        assert cl.class_of(div) == cl.zero()


def test_example2_grading():
    cl = class_group(load_fan("example2.fan"))
    assert str(cl) == "Z ⊕ Z/5"
    assert [str(d) for d in cl.degrees] == ["(1 | 4 mod 5)", "(1 | 3 mod 5)", "(1 | 1 mod 5)", "(1 | 0 mod 5)"]
    assert str(group_D(cl)) == "C* × Z/5"
    assert not group_D(cl).connected


def test_weighted_projective_grading_is_the_weights():
    for w in [(1, 1, 1), (1, 2, 3), (2, 3, 5, 7)]:
        cl = class_group(fan_from_weights(w))
        assert str(cl) == "Z"
        assert tuple(d.free[0] for d in cl.degrees) == w
        assert str(group_D(cl)) == "C*"


def test_irrelevant_locus():
    Z = irrelevant_locus(load_fan("p1xp1.fan"))
    assert Z.generators == ((0, 2), (0, 3), (1, 2), (1, 3))
    assert Z.components() == ((0, 1), (2, 3))
    assert not Z.is_origin()
    assert irrelevant_locus(projective_space_fan(3)).is_origin()
    assert irrelevant_locus(load_fan("example2.fan")).is_origin()


def test_divisor_class_arithmetic():
    a = DivisorClass((1,), (4,), (5,))
    b = DivisorClass((2,), (3,), (5,))
    assert a + b == DivisorClass((3,), (2,), (5,))
    assert (a - a).is_torsion()
    assert 5 * DivisorClass((0,), (1,), (5,)) == DivisorClass((0,), (0,), (5,))
    with pytest.raises(ValueError):
        a + DivisorClass((1,), (1,), (7,))


@pytest.mark.parametrize("name", CORPUS)
@given(data=st.data())
def test_lift_class_round_trip(name, data):
    fan = load_fan(name)
    cl = class_group(fan)
    free = data.draw(st.lists(st.integers(-30, 30), min_size=cl.free_rank, max_size=cl.free_rank))
    tors = [data.draw(st.integers(0, d - 1)) for d in cl.torsion]
    c = cl.make(free, tors)
    assert cl.class_of(cl.lift_class(c)) == c


@given(st.lists(st.integers(0, 6), min_size=4, max_size=4), st.lists(st.integers(0, 6), min_size=4, max_size=4))
def test_degree_is_additive(e1, e2):
    cl = class_group(load_fan("example2.fan"))
    s = [a + b for a, b in zip(e1, e2)]
    assert degree_of_monomial(cl, s) == degree_of_monomial(cl, e1) + degree_of_monomial(cl, e2)


def test_homogeneity_sees_torsion():
    cl = class_group(load_fan("example2.fan"))
    # x0^5 and x3^5 both have degree (5 | 0); x0^4 x3 has (5 | 1)
    assert is_homogeneous(cl, [[5, 0, 0, 0], [0, 0, 0, 5]])
    h = is_homogeneous(cl, [[5, 0, 0, 0], [4, 0, 0, 1]])
    assert not h and h.mismatch == (0, 1)


def test_ampleness():
    fan = load_fan("p1xp1.fan")
    cl = class_group(fan)
    assert not is_ample(fan, cl, cl.make([1, 0]))
    assert is_ample(fan, cl, cl.make([1, 1]))
    assert not is_ample(fan, cl, cl.make([-1, 2]))
    ex2 = load_fan("example2.fan")
    cl2 = class_group(ex2)
    for t in range(5):
        assert is_ample(ex2, cl2, cl2.make([1], [t]))
        assert not is_ample(ex2, cl2, cl2.make([0], [t]))
    assert is_ample(ex2, cl2, anticanonical(cl2))


def test_wrong_witness_is_rejected():
    fan = load_fan("example2.fan")
    cl = class_group(fan)
    with pytest.raises(ValueError):
        is_ample(fan, cl, cl.make([1], [0]), [1, 0, 0, 0])


@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_ampleness_ignores_principal_part(coeffs, m):
    fan = load_fan("example2.fan")
    cl = class_group(fan)
    shifted = [c + sum(a * x for a, x in zip(m, r)) for c, r in zip(coeffs, fan.rays)]
    cls = cl.class_of(coeffs)
    assert cl.class_of(shifted) == cls
    assert is_ample(fan, cl, cls, coeffs) == is_ample(fan, cl, cls, shifted)


def _ample_oracle(fan, coeffs):
    """Strict convexity by solving each cone's system over Q."""
    for cone in fan.max_cones:
        m = solve_rational([fan.rays[i] for i in cone], [-coeffs[i] for i in cone])
        for j, v in enumerate(fan.rays):
            if j not in cone and sum(a * x for a, x in zip(m, v)) <= -coeffs[j]:
                return False
    return True


@pytest.mark.parametrize("name", CORPUS)
@given(data=st.data())
def test_ampleness_matches_rational_oracle(name, data):
    fan = load_fan(name)
    cl = class_group(fan)
    coeffs = data.draw(st.lists(st.integers(-5, 5), min_size=fan.n_rays, max_size=fan.n_rays))
    assert is_ample(fan, cl, cl.class_of(coeffs), coeffs) == _ample_oracle(fan, coeffs)
    slopes = support_function_slopes(fan, coeffs)
    for cone, m in zip(fan.max_cones, slopes):
        assert all(sum(a * x for a, x in zip(m, fan.rays[i])) == -coeffs[i] for i in cone)
