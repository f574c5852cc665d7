import pytest
from hypothesis import given, strategies as st

from annaforge.textfmt import FormatError, parse_records, quote, _split_fields


def test_basic_record():
    recs = parse_records("annotation a.b.C lib=g:a:1 targets=TYPE\n")
    assert len(recs) == 1
    assert recs[0].rtype == "annotation"
    assert recs[0].positional == ["a.b.C"]
    assert recs[0].pairs == {"lib": "g:a:1", "targets": "TYPE"}


def test_comments_and_blanks():
    recs = parse_records("# header\n\nfoo bar  # trailing\n")
    assert len(recs) == 1
    assert recs[0].positional == ["bar"]


def test_quoted_values_with_escapes():
    recs = parse_records('cmd run="a b \\"c\\" \\n d"')
    assert recs[0].pairs["run"] == 'a b "c" \n d'


def test_hash_inside_quotes_not_a_comment():
    recs = parse_records('x v="a # b"')
    assert recs[0].pairs["v"] == "a # b"


def test_unterminated_quote_rejected():
    with pytest.raises(FormatError):
        parse_records('x v="oops')


def test_duplicate_key_rejected():
    with pytest.raises(FormatError):
        parse_records("x a=1 a=2")


def test_positional_after_pairs_rejected():
    with pytest.raises(FormatError):
        parse_records("x a=1 stray")


# the format family promises round-tripping for text without exotic line
# separators; \n, \r, and \t travel via escapes
_VALUE_ALPHABET = st.characters(
    blacklist_categories=("Cs", "Cc"),
) | st.sampled_from(list('\n\r\t"\\# ='))


@given(st.text(alphabet=_VALUE_ALPHABET, max_size=60))
def test_quote_roundtrip(value):
    line = f"rec k={quote(value)}"
    fields = _split_fields(line, "<t>", 1)
    assert fields[0] == "rec"
    recs = parse_records(line)
    assert recs[0].pairs["k"] == value
