import json

import pytest

from src.algebra.laurent import LaurentPolynomial
from src.groups.foxcalc import (
    AbelianizationMap,
    GroupWord,
    OpaqueRelator,
    Presentation,
    PresentationError,
    UnknownGeneratorError,
    WordParseError,
    abelianize,
    fox_derivative,
    fox_jacobian,
    load_presentation,
)

P = LaurentPolynomial.parse
W = GroupWord.parse

PRETZEL_MAP = AbelianizationMap({"a": "s^-1", "b": "s", "c": "t", "d": "s"})
FREE_MAP = AbelianizationMap({"x": "x", "y": "y", "z": "z", "w": "w"})


def random_word(rng, names="xyzw", max_length=12):
    letters = tuple((rng.choice(names), rng.choice([1, -1])) for _ in range(rng.randint(0, max_length)))
    return GroupWord(letters)


def test_free_reduction():
    assert W("a b b^-1 a^-1").is_identity()
    assert W("a b b^-1 c") == W("a c")
    assert len(W("x^3 x^-2")) == 1
    assert GroupWord.generator("b", -2) == W("b^-2")
    assert str(W("a b^-1 b^-1 c")) == "a b^-2 c"
    assert str(GroupWord.identity()) == "1"


def test_parser_syntaxes_agree():
    expected = W("a b^-1 a b a^-1")
    assert W("ab⁻¹aba⁻¹") == expected
    assert W("a b-1 a b a-1") == expected
    assert W("(a b^-1)^2") == W("a b^-1 a b^-1")
    assert W("(a b)^-1") == W("b^-1 a^-1")
    assert W("x1 x_2^2").generators() == frozenset({"x1", "x_2"})
    assert W("b²") == W("b b")


@pytest.mark.parametrize("text", ["a^", "(a b", "a )", "a + b", "a^-x"])
def test_parser_rejects(text):
    with pytest.raises(WordParseError):
        W(text)


def test_word_algebra():
    u, v = W("a b"), W("c^-1")
    assert u * v == W("a b c^-1")
    assert (u ** 2) == W("a b a b")
    assert (u ** -1) == u.inverse() == W("b^-1 a^-1")
    assert (u * u.inverse()).is_identity()


def test_abelianize_examples():
    assert abelianize(W("a b^-1"), PRETZEL_MAP) == P("s^-2")
    assert abelianize(GroupWord.identity(), PRETZEL_MAP) == 1
    r1 = W("(a b^-1) a b a^-1 (b a^-1) (a d^-1) a d^-1 a^-1 (d a^-1)")
    assert abelianize(r1, PRETZEL_MAP) == 1


def test_abelianization_images_must_be_unit_monomials():
    with pytest.raises(PresentationError):
        AbelianizationMap({"a": "2*s"})
    with pytest.raises(PresentationError):
        AbelianizationMap({"a": "1 + s"})
    with pytest.raises(UnknownGeneratorError):
        abelianize(W("q"), PRETZEL_MAP)


def test_fox_derivative_examples():
    b_map = AbelianizationMap({"b": "s", "d": "s"})
    assert fox_derivative(W("b"), "b", b_map) == 1
    assert fox_derivative(W("b^-1"), "b", b_map) == P("-s^-1")
    assert fox_derivative(W("b^2 d^-2"), "b", b_map) == P("1 + s")
    assert fox_derivative(W("d"), "b", b_map) == 0
    r1 = W("(a b^-1) a b a^-1 (b a^-1) (a d^-1) a d^-1 a^-1 (d a^-1)")
    assert fox_derivative(r1, "b", PRETZEL_MAP) == P("s^-3 - s^-2 + s^-1")
    with pytest.raises(UnknownGeneratorError):
        fox_derivative(W("b"), "q", b_map)


def test_product_inverse_and_fundamental_rules(rng):
    for _ in range(200):
        u, v = random_word(rng), random_word(rng)
        for g in "xyzw":
            assert fox_derivative(u * v, g, FREE_MAP) == \
                fox_derivative(u, g, FREE_MAP) + abelianize(u, FREE_MAP) * fox_derivative(v, g, FREE_MAP)
            assert fox_derivative(u.inverse(), g, FREE_MAP) == \
                -abelianize(u, FREE_MAP).inverse() * fox_derivative(u, g, FREE_MAP)
        total = sum((fox_derivative(u, g, FREE_MAP) * (FREE_MAP.image(g) - 1) for g in "xyzw"),
                    LaurentPolynomial.zero())
        assert total == abelianize(u, FREE_MAP) - 1


@pytest.mark.slow
def test_fox_rules_full_sweep(rng):
    for _ in range(1000):
        u, v = random_word(rng, max_length=20), random_word(rng, max_length=20)
        for g in "xyzw":
            assert fox_derivative(u * v, g, FREE_MAP) == \
                fox_derivative(u, g, FREE_MAP) + abelianize(u, FREE_MAP) * fox_derivative(v, g, FREE_MAP)
            assert fox_derivative(u.inverse(), g, FREE_MAP) == \
                -abelianize(u, FREE_MAP).inverse() * fox_derivative(u, g, FREE_MAP)
        total = sum((fox_derivative(u, g, FREE_MAP) * (FREE_MAP.image(g) - 1) for g in "xyzw"),
                    LaurentPolynomial.zero())
        assert total == abelianize(u, FREE_MAP) - 1


def test_derivative_ignores_spelling(rng):
    for _ in range(50):
        u = random_word(rng)
        padded = GroupWord.parse(f"x y y^-1 x^-1 ({u}) z^-1 z") if not u.is_identity() else u
        for g in "xyzw":
            assert fox_derivative(padded, g, FREE_MAP) == fox_derivative(u, g, FREE_MAP)


def _toy_presentation(**kwargs):
    data = dict(
        generators=("x", "y"),
        relators=(W("x y x^-1 y^-1"),),
        abelianization=AbelianizationMap({"x": "s", "y": "t"}),
    )
    data.update(kwargs)
    return Presentation(**data)


def test_presentation_checks_letters():
    with pytest.raises(UnknownGeneratorError):
        _toy_presentation(relators=(W("x q"),))
    with pytest.raises(UnknownGeneratorError):
        _toy_presentation(longitude=W("z"))
    with pytest.raises(PresentationError):
        _toy_presentation(abelianization=AbelianizationMap({"x": "s"}))


def test_presentation_reports_unkilled_relators():
    presentation = _toy_presentation(relators=(W("x y x^-1 y^-1"), W("x^2")))
    assert presentation.unkilled_relators() == [1]
    with pytest.raises(PresentationError):
        presentation.validate()


def test_jacobian_with_opaque_relators():
    presentation = _toy_presentation(opaque_relators=(OpaqueRelator("r2", frozenset("y")),))
    column = fox_jacobian(presentation, "x")
    assert column == [P("1 - t"), LaurentPolynomial.zero()]
    with pytest.raises(PresentationError):
        fox_jacobian(presentation, "y")


def test_presentation_dict_round_trip(tmp_path):
    presentation = _toy_presentation(opaque_relators=(OpaqueRelator("r2", frozenset("y")),),
                                     longitude=W("x y^-1"), distinguished_generator="x", name="toy")
    path = tmp_path / "toy.json"
    path.write_text(json.dumps(presentation.to_dict()))
    loaded = load_presentation(path)
    assert loaded.to_dict() == presentation.to_dict()
    assert loaded.relators == presentation.relators


def test_load_presentation_errors(tmp_path):
    with pytest.raises(PresentationError):
        load_presentation(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "x", "generators": ["x"]}))
    with pytest.raises(PresentationError, match="Missing required fields"):
        load_presentation(bad)
