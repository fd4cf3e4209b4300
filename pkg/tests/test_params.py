import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mxg.descriptors import DescriptorError, LaggedXorshift, RecurrenceDescriptor, XorshiftOp
from mxg.params import (
    MERSENNE_EXPONENTS,
    InvariantError,
    ParamFileError,
    UnknownParamsError,
    embedded_table_text,
    list_params,
    lookup,
    parse_param_file,
    registry,
    serialize_params,
)

TWO_ROWS = """\
# two sets
[alpha]
word_size = 32
state_words = 17
effective_bits = 521
top_mask = 0xff800000
term = concat hi=17 lo=16 split=0xff800000 ops=L8,R11
term = xorshift lag=15 ops=L10,R23   # trailing comment
weyl_increment = 0x9e3779b9

[toybeta]
word_size = 8
state_words = 2
effective_bits = 11
top_mask = 0xe0
term = concat hi=2 lo=1 split=0xe0 ops=L1,R4
term = xorshift lag=1 ops=L2,R1
tempering_linear = R3 L2&0x6c L4&0x6a R5
weyl_increment = 0x0b
"""


def with_line(text, old, new):
    assert old in text
    return text.replace(old, new, 1)


def test_two_rows():
    rows = parse_param_file(TWO_ROWS)
    assert [r.name for r in rows] == ["alpha", "toybeta"]
    assert rows[0].n == 17 and rows[0].top_bits == 9
    assert rows[1].tempering_linear.linear_ops[1].and_mask == 0x6C


def test_bytes_input_and_empty():
    assert len(parse_param_file(TWO_ROWS.encode())) == 2
    assert parse_param_file("") == []
    assert parse_param_file("# only comments\n\n") == []


def test_even_weyl_increment_names_field():
    with pytest.raises(InvariantError) as e:
        parse_param_file(with_line(TWO_ROWS, "0x9e3779b9", "0x9e3779b8"))
    assert e.value.field == "weyl_increment"


@pytest.mark.parametrize(
    "old, new, field",
    [
        ("top_mask = 0xff800000", "top_mask = 0xff000000", "top_mask"),
        ("effective_bits = 521", "effective_bits = 523", "effective_bits"),
        ("word_size = 32", "word_size = 48", "word_size"),
        ("state_words = 17", "state_words = 18", "state_words"),
    ],
)
def test_invariant_errors(old, new, field):
    with pytest.raises(InvariantError) as e:
        parse_param_file(with_line(TWO_ROWS, old, new))
    assert e.value.field == field


@pytest.mark.parametrize(
    "old, new, line",
    [
        ("word_size = 32", "word_size = 0x20", 3),
        ("top_mask = 0xff800000", "top_mask = 4286578688", 6),
        ("weyl_increment = 0x9e3779b9", "weyl_incremnt = 0x9e3779b9", 9),
        ("term = xorshift lag=15", "term = xorshift lag=15 shift=3", 8),
        ("term = xorshift lag=15 ops=L10,R23", "term = rotate lag=15 ops=L10", 8),
        ("[toybeta]", "[toybeta", 11),
        ("word_size = 32", "word_size 32", 3),
        ("term = xorshift lag=15 ops=L10,R23", "term = xorshift lag=15 ops=L10,Q2", 8),
    ],
)
def test_syntax_errors_carry_line(old, new, line):
    with pytest.raises(ParamFileError) as e:
        parse_param_file(with_line(TWO_ROWS, old, new))
    assert e.value.line == line


def test_duplicate_name_and_key():
    with pytest.raises(ParamFileError, match="duplicate"):
        parse_param_file(TWO_ROWS.replace("[toybeta]", "[alpha]"))
    with pytest.raises(ParamFileError, match="repeated"):
        parse_param_file(with_line(TWO_ROWS, "word_size = 32", "word_size = 32\nword_size = 32"))


def test_missing_key():
    with pytest.raises(ParamFileError, match="missing"):
        parse_param_file(with_line(TWO_ROWS, "weyl_increment = 0x9e3779b9\n", ""))


def test_key_outside_record():
    with pytest.raises(ParamFileError):
        parse_param_file("word_size = 32\n")


def test_round_trip_canonical():
    rows = parse_param_file(TWO_ROWS)
    text = serialize_params(rows)
    assert parse_param_file(text) == rows
    assert serialize_params(parse_param_file(text)) == text


def test_embedded_table_round_trip():
    rows = parse_param_file(embedded_table_text())
    assert parse_param_file(serialize_params(rows)) == rows


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(sorted(registry())),
    st.integers(1, 31),
    st.integers(1, 31),
)
def test_round_trip_varied_shifts(name, a, b):
    prm = lookup(name)
    w = prm.w
    ops = (XorshiftOp("L", a % (w - 1) + 1), XorshiftOp("R", b % (w - 1) + 1))
    terms = (prm.recurrence.terms[0], LaggedXorshift(prm.recurrence.terms[1].lag, ops))
    alt = dataclasses.replace(prm, recurrence=RecurrenceDescriptor(terms))
    assert parse_param_file(serialize_params([alt])) == [alt]


def test_descriptor_needs_two_lags():
    prm = lookup("mxg32-521")
    single = RecurrenceDescriptor((LaggedXorshift(3, ()),))
    with pytest.raises(DescriptorError):
        single.validate(prm.w, prm.n)
    same = RecurrenceDescriptor((LaggedXorshift(3, ()), LaggedXorshift(3, (XorshiftOp("L", 1),))))
    with pytest.raises(DescriptorError):
        same.validate(prm.w, prm.n)


def test_descriptor_shift_range():
    with pytest.raises(DescriptorError):
        RecurrenceDescriptor((LaggedXorshift(1, (XorshiftOp("L", 32),)), LaggedXorshift(2, ()))).validate(32, 17)


# ------------------------------------------------------------- registry


def test_lookup_mxg32_521():
    prm = lookup("mxg32-521")
    assert (prm.w, prm.p, prm.n) == (32, 521, 17)
    assert bin(prm.top_mask).count("1") == 9
    assert lookup("mxg32-521") is prm
    assert lookup("mxg-32-521") is prm


def test_lookup_toy():
    prm = lookup("toy8-11")
    assert (prm.w, prm.p, prm.n) == (8, 11, 2)
    assert prm.is_toy


def test_lookup_unknown_lists_names():
    with pytest.raises(UnknownParamsError) as e:
        lookup("mxg32-99999")
    assert "mxg32-521" in e.value.available
    assert "mxg32-521" in str(e.value)


def test_registry_is_immutable():
    reg = registry()
    with pytest.raises(TypeError):
        reg["x"] = None


def test_every_embedded_row_valid():
    for prm in registry().values():
        prm.validate()
        if not prm.is_toy:
            assert prm.p in MERSENNE_EXPONENTS
            assert prm.w in (32, 64, 128)
            assert prm.charpoly_weight is not None
        assert prm.n * prm.w >= prm.p > (prm.n - 1) * prm.w
        assert prm.weyl_increment & 1


def test_list_params_sorted_and_filtered():
    rows = list_params()
    keys = [(w, p) for _, w, p, _ in rows]
    assert keys == sorted(keys)
    assert not any(name.startswith("toy") for name, *_ in rows)
    assert all(w == 32 for _, w, _, _ in list_params(w=32))
    at521 = list_params(p=521)
    assert sorted(w for _, w, _, _ in at521) == [32, 64, 128]
    assert len(list_params(include_toy=True)) == len(rows) + 5


def test_toy_namespace_marked():
    text = embedded_table_text()
    assert "Toy rows" in text and "Mersenne" in text
