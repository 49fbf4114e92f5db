import re

from hypothesis import given
from hypothesis import strategies as st

from stylesearch.analysis import AnalyzedDoc, analyze, analyze_doc, cluster_name


def test_basic_tokenization():
    assert analyze("Blue Denim-Trousers!") == ["blue", "denim", "trousers"]


def test_empty_input():
    assert analyze("") == []
    assert analyze("!!! --- ...") == []


def test_no_stopword_removal():
    assert analyze("this jeans features a slim fit") == [
        "this", "jeans", "features", "a", "slim", "fit",
    ]


def test_digits_kept():
    assert analyze("501 original jeans") == ["501", "original", "jeans"]


def test_underscore_is_a_separator():
    assert analyze("long_sleeve_top") == ["long", "sleeve", "top"]


def test_unicode_letters():
    assert analyze("Café Été") == ["café", "été"]


def test_configurable_stopwords():
    assert analyze("this jeans features a slim fit", stopwords={"this", "a"}) == [
        "jeans", "features", "slim", "fit",
    ]


def test_cluster_name_normalization():
    assert cluster_name("Long Sleeve Top") == "long_sleeve_top"
    assert cluster_name("long sleeve top") == "long_sleeve_top"
    assert cluster_name("denim shorts") == "denim_shorts"
    assert cluster_name("jeans") == "jeans"


def test_analyzed_doc_positions():
    doc = analyze_doc("d1", "blue denim blue trousers")
    assert doc.length == 4
    assert doc.positions == {"blue": [0, 2], "denim": [1], "trousers": [3]}


def test_analyzed_doc_length_matches_occurrences():
    doc = AnalyzedDoc("d", ["a", "b", "a"])
    assert doc.length == sum(len(p) for p in doc.positions.values())


@given(st.text(max_size=200))
def test_tokens_are_lowercase_word_runs(text):
    tokens = analyze(text)
    for tok in tokens:
        assert tok == tok.lower()
        assert re.fullmatch(r"[^\W_]+", tok)


@given(st.text(max_size=200))
def test_analysis_is_deterministic(text):
    assert analyze(text) == analyze(text)
