import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensorword.errors import CapExceededError, DimensionError, SpecError
from tensorword.symgroup import (Character, Permutation, builtin_character, builtin_group, character_inner_product,
                                 compose, generate_group, inverse, load_character_table, parse_character,
                                 parse_group, sign, validate_character)

from conftest import perm_sign


def cyc(m, *cycles):
    return Permutation.from_cycles(m, cycles)


def test_compose_inverse_sign_examples():
    t = cyc(3, (1, 2))
    assert compose(t, t).is_identity()
    c = cyc(3, (1, 2, 3))
    assert sign(c) == 1
    assert inverse(c) == cyc(3, (1, 3, 2))
    assert sign(t) == -1


def test_compose_applies_right_factor_first():
    s, t = cyc(3, (1, 2)), cyc(3, (2, 3))
    st_ = compose(s, t)
    assert all(st_(i) == s(t(i)) for i in range(3))


def test_cycle_notation_round_trip():
    p = Permutation.from_images([2, 3, 1, 5, 4])
    assert str(p) == "(1 2 3)(4 5)"
    assert Permutation.from_cycles(5, p.cycles()) == p
    assert str(Permutation.identity(3)) == "()"


def test_degree_mismatch():
    with pytest.raises(DimensionError):
        compose(cyc(3, (1, 2)), cyc(4, (1, 2)))


def test_invalid_permutations():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    with pytest.raises(ValueError):
        Permutation.from_cycles(3, [(1, 4)])
    with pytest.raises(ValueError):
        Permutation.from_cycles(3, [(1, 2), (2, 3)])


@settings(max_examples=100, deadline=None)
@given(st.permutations(range(6)), st.permutations(range(6)))
def test_sign_is_homomorphism(a, b):
    s, t = Permutation(tuple(a)), Permutation(tuple(b))
    assert sign(compose(s, t)) == sign(s) * sign(t)
    assert sign(s) == perm_sign(a)
    assert compose(s, inverse(s)).is_identity()


def test_generate_group_examples():
    assert generate_group(3, [cyc(3, (1, 2, 3))]).order == 3
    s3 = generate_group(3, [cyc(3, (1, 2)), cyc(3, (1, 2, 3))])
    assert s3.order == 6
    trivial = generate_group(4, [])
    assert trivial.order == 1 and trivial.elements[0].is_identity()


def test_generated_group_is_closed_and_canonical():
    g = generate_group(4, [cyc(4, (1, 2)), cyc(4, (3, 4))])
    assert g.elements[0].is_identity()
    assert math.factorial(4) % g.order == 0
    assert len(set(g.elements)) == g.order
    for a in g:
        assert inverse(a) in g
        for b in g:
            assert compose(a, b) in g


def test_generated_group_contains_short_products():
    gens = [cyc(5, (1, 2, 3)), cyc(5, (3, 4, 5))]
    g = generate_group(5, gens)
    for a in gens:
        for b in gens:
            assert compose(a, b) in g
    assert math.factorial(5) % g.order == 0


def test_generate_group_cap():
    with pytest.raises(CapExceededError):
        generate_group(5, [cyc(5, (1, 2)), cyc(5, (1, 2, 3, 4, 5))], order_cap=50)


@pytest.mark.parametrize("spec, order", [("sym:3", 6), ("alt:4", 12), ("cyclic:5", 5), ("trivial:4", 1),
                                         ("sym:1", 1), ("alt:2", 1), ("alt:3", 3), ("sym:5", 120)])
def test_builtin_groups(spec, order):
    g = builtin_group(spec)
    assert g.order == order and g.name == spec


def test_alt_groups_are_even():
    assert all(sign(g) == 1 for g in builtin_group("alt:5"))
    assert builtin_group("alt:5").order == 60


def test_builtin_group_cap_and_spec_errors():
    with pytest.raises(CapExceededError):
        builtin_group("sym:9")
    with pytest.raises(SpecError):
        builtin_group("dihedral:4")


def test_parse_gens_spec():
    g = parse_group("gens:(1 2),(1 2 3)")
    assert g.degree == 3 and g.order == 6
    g = parse_group("gens:(1 2)@4")
    assert g.degree == 4 and g.order == 2
    with pytest.raises(SpecError):
        parse_group("gens:(1 2) junk")


def test_builtin_characters():
    s3 = builtin_group("sym:3")
    sgn = builtin_character(s3, "sign")
    assert sgn.degree == 1
    assert all(sgn(g) == sign(g) for g in s3)
    assert np.all(builtin_character(builtin_group("alt:4"), "trivial").values == 1)
    c3 = builtin_group("cyclic:3")
    om = builtin_character(c3, "omega:1")
    w = cmath.exp(2j * cmath.pi / 3)
    gen = cyc(3, (1, 2, 3))
    assert om(gen) == pytest.approx(w)
    assert om(compose(gen, gen)) == pytest.approx(w**2)
    assert om(Permutation.identity(3)) == pytest.approx(1)


def test_omega_requires_cyclic_group():
    with pytest.raises(SpecError):
        builtin_character(builtin_group("sym:3"), "omega:1")
    with pytest.raises(SpecError):
        builtin_character(builtin_group("sym:3"), "bogus")


def test_inner_products():
    s3 = builtin_group("sym:3")
    sgn, triv = builtin_character(s3, "sign"), builtin_character(s3, "trivial")
    assert character_inner_product(sgn, sgn, s3) == pytest.approx(1)
    assert character_inner_product(triv, sgn, s3) == pytest.approx(0)
    two = Character(s3, 2 * triv.values)
    assert character_inner_product(two, two, s3) == pytest.approx(4)


def test_validate_examples():
    s4 = builtin_group("sym:4")
    assert validate_character(builtin_character(s4, "sign"), s4).ok
    s3 = builtin_group("sym:3")
    summed = Character(s3, builtin_character(s3, "trivial").values + builtin_character(s3, "sign").values)
    rep = validate_character(summed, s3, irreducible=True)
    assert not rep.checks["irreducible"][0]
    assert rep.checks["class_function"][0] and rep.checks["degree"][0]
    # break constancy on the two 3-cycles
    vals = np.ones(6, dtype=complex)
    vals[s3.index(cyc(3, (1, 2, 3)))] = 5
    rep = validate_character(Character(s3, vals), s3, irreducible=False)
    assert not rep.checks["class_function"][0]
    assert "irreducible" not in rep.checks


@pytest.mark.parametrize("gspec", ["sym:1", "sym:2", "sym:3", "sym:4", "alt:3", "alt:4", "cyclic:2",
                                   "cyclic:3", "cyclic:4", "cyclic:5", "trivial:3"])
def test_builtin_characters_validate(gspec):
    g = builtin_group(gspec)
    specs = ["trivial", "sign"]
    if gspec.startswith("cyclic"):
        specs += [f"omega:{j}" for j in range(g.degree)]
    for spec in specs:
        assert validate_character(builtin_character(g, spec), g, tol=1e-12).ok, (gspec, spec)


def test_table_character(tmp_path):
    g = builtin_group("sym:3")
    path = tmp_path / "chi.json"
    path.write_text(json.dumps({"values": [[sign(p), 0] for p in g]}))
    chi = load_character_table(g, path)
    np.testing.assert_array_equal(chi.values, builtin_character(g, "sign").values)
    assert parse_character(g, f"table:{path}").irreducible
    path.write_text(json.dumps({"values": [[1, 0]]}))
    with pytest.raises(DimensionError):
        load_character_table(g, path)
