import pytest
from hypothesis import given, strategies as st

from nfseer.errors import DomainError, ParseError
from nfseer.rating_scale import LABELS, as_position, parse_rating, rating_from_position


def test_nom_is_eighth():
    rp = parse_rating("Nom")
    assert (rp.r, rp.x) == (8, 8.0)


def test_last_label():
    rp = parse_rating("EHi+")
    assert (rp.label, rp.r, rp.x) == ("EHi+", 18, 18.0)


def test_unknown_label_names_text():
    with pytest.raises(ParseError, match="Medium"):
        parse_rating("Medium")


@pytest.mark.parametrize("text", ["vlo-", "VLO−", " hi+ ", "nOm"])
def test_case_and_minus_insensitive(text):
    assert parse_rating(text).label in LABELS


@pytest.mark.parametrize("x,label", [(8.0, "Nom"), (8.4, "Nom"), (8.5, "Nom+"), (0.0, "VLo-"), (19.0, "EHi+")])
def test_rating_from_position(x, label):
    assert rating_from_position(x).label == label


@pytest.mark.parametrize("x", [19.5, -0.1, float("nan")])
def test_rating_from_position_domain(x):
    with pytest.raises(DomainError):
        rating_from_position(x)


@pytest.mark.parametrize("label", LABELS)
def test_round_trip(label):
    assert rating_from_position(parse_rating(label).x).label == label


def test_embedding_strictly_increasing():
    xs = [parse_rating(label).x for label in LABELS]
    assert all(a < b for a, b in zip(xs, xs[1:]))


@given(st.floats(0, 19))
def test_nearest_center(x):
    r = rating_from_position(x).r
    assert all(abs(x - r) <= abs(x - c) for c in range(1, 19))


def test_as_position_accepts_numbers_and_labels():
    assert as_position("Hi") == 11.0
    assert as_position("7.25") == 7.25
    with pytest.raises(DomainError):
        as_position("19.5")
