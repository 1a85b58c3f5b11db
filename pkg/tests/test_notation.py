import random

import pytest

from actriv.catalog import (
    auxiliary_catalog,
    catalog,
    get_instance,
    known_trivializations,
)
from actriv.notation import (
    NotationError,
    format_move,
    format_presentation,
    format_sequence,
    format_word,
    parse_move,
    parse_presentation,
    parse_sequence,
)
from actriv.presentations import (
    enumerate_moves,
    make_presentation,
    total_length,
    trivial_presentation,
)
from actriv.words import free_reduce


class TestParse:
    def test_akbulut_kirby(self):
        p = parse_presentation("<a,b| a^3B^4, abaBAB >")
        assert p.rank == 2
        assert total_length(p) == 13
        assert p.relators[0] == (1, 1, 1, -2, -2, -2, -2)

    def test_t1(self):
        assert parse_presentation("<a,b| a^2bAB, b^2aBA >") == get_instance(
            "T1"
        ).presentation

    def test_unbalanced(self):
        with pytest.raises(NotationError):
            parse_presentation("<a,b| aa >")

    def test_unknown_symbol(self):
        with pytest.raises(NotationError):
            parse_presentation("<a,b| ac, b >")

    def test_malformed_exponent(self):
        with pytest.raises(NotationError):
            parse_presentation("<a,b| a^, b >")
        with pytest.raises(NotationError):
            parse_presentation("<a,b| a^x, b >")

    def test_x_style_generators(self):
        p = parse_presentation("<x0,x1| x0^2x1X0X1, x1^2x0X1X0 >")
        assert p == get_instance("T1").presentation

    def test_negative_exponent(self):
        assert parse_presentation("<a,b| a^-2, b >") == parse_presentation(
            "<a,b| A^2, b >"
        )

    def test_empty_relator(self):
        p = parse_presentation("<a,b|1,ab>")
        assert p.relators[0] == ()

    def test_reduces_input(self):
        p = parse_presentation("<a,b| aAb, a >")
        assert p.relators[0] == (2,)


class TestFormat:
    def test_trivial(self):
        assert format_presentation(trivial_presentation(2)) == "<a,b|a,b>"

    def test_empty_relator_as_one(self):
        p = make_presentation(2, [(), (1,)])
        assert format_presentation(p) == "<a,b|1,a>"

    def test_exponent_collapsing(self):
        assert format_word((2, -2), 2) == "bB"  # unreduced words never arise
        assert format_word((1, 1, 2, -1, -2), 2) == "a^2bAB"
        assert format_word((-2, -2, -2), 2) == "B^3"

    def test_round_trip_catalog(self):
        for record in catalog() + auxiliary_catalog():
            text = format_presentation(record.presentation)
            assert parse_presentation(text) == record.presentation

    def test_round_trip_random(self):
        rng = random.Random(9)
        for _ in range(100):
            relators = []
            for _ in range(2):
                raw = [rng.choice([1, -1, 2, -2]) for _ in range(rng.randrange(0, 9))]
                relators.append(free_reduce(raw))
            p = make_presentation(2, relators)
            assert parse_presentation(format_presentation(p)) == p


class TestMoveCodes:
    def test_round_trip_all_rank2(self):
        for m in enumerate_moves(2):
            assert parse_move(format_move(m, 2), 2) == m

    def test_sequence_round_trip(self):
        seq = known_trivializations()["T13"]
        text = format_sequence(seq, 2)
        assert parse_sequence(text, 2) == seq

    def test_empty_sequence(self):
        assert format_sequence((), 2) == "-"
        assert parse_sequence("-", 2) == ()

    def test_bad_codes(self):
        for code in ("frob:1", "inv:9", "mul:0:0", "conj:0:q", "inv:x"):
            with pytest.raises(NotationError):
                parse_move(code, 2)


class TestCatalog:
    def test_size(self):
        assert len(catalog()) == 20

    def test_known_lengths(self):
        expected = {
            "T1": 6, "T5": 10, "T11": 14, "T13": 7, "T29": 21, "T31": 10,
            "T34": 10, "T35": 24, "T39": 10, "T56": 25, "T61": 14, "T63": 24,
            "T66": 14, "T67": 22, "T76": 10, "T81": 19, "T82": 10, "T84": 15,
            "T85": 24,
        }
        for name, length in expected.items():
            assert get_instance(name).known_length == length

    def test_t56(self):
        assert get_instance("T56").known_length == 25

    def test_ak3_unsolved(self):
        assert get_instance("AK3").known_length is None

    def test_all_balanced_rank2(self):
        for record in catalog() + auxiliary_catalog():
            p = record.presentation
            assert p.rank == 2
            assert len(p.relators) == 2
            assert all(free_reduce(r) == r for r in p.relators)

    def test_unknown_id(self):
        with pytest.raises(KeyError):
            get_instance("T999")

    def test_auxiliary_not_in_catalog(self):
        assert all(r.id != "T83" for r in catalog())
        assert get_instance("T83").known_length is None


def hamming(u, v):
    assert len(u) == len(v)
    return sum(1 for x, y in zip(u, v) if x != y)


class TestInstanceSimilarity:
    """First-relator Hamming observations across the catalog family."""

    def test_t81_t82(self):
        r81 = get_instance("T81").presentation.relators[0]
        r82 = get_instance("T82").presentation.relators[0]
        assert hamming(r81, r82) == 4

    def test_t81_t83(self):
        r81 = get_instance("T81").presentation.relators[0]
        r83 = get_instance("T83").presentation.relators[0]
        assert hamming(r81, r83) == 2

    def test_case_insensitive_distance_zero(self):
        r81 = get_instance("T81").presentation.relators[0]
        for other in ("T82", "T83"):
            r = get_instance(other).presentation.relators[0]
            assert hamming([abs(x) for x in r81], [abs(x) for x in r]) == 0
