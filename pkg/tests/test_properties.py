"""Property-based invariants across modules."""

import string

from hypothesis import given, settings, strategies as st

from codeforge.docstyle import short_docstring
from codeforge.extract import tokenize_text
from codeforge.filters import _UPDATE_IMPL, FilterConfig, apply_update_filters
from codeforge.gate import evaluate_auc, generate_negatives
from codeforge.minhash import MinHasher, estimate_jaccard, exact_jaccard
from codeforge.split import ks_distance

# docstring-shaped text: words, punctuation, markers, newlines
_doc_text = st.text(
    alphabet=string.ascii_letters + string.digits + " .,:;!?@#*/<>()[]{}$\\`'\"-_\n",
    max_size=400,
)


@settings(max_examples=300, deadline=None)
@given(_doc_text)
def test_each_update_filter_idempotent(text):
    for fn in _UPDATE_IMPL.values():
        once = fn(text)
        assert fn(once) == once


@settings(max_examples=200, deadline=None)
@given(_doc_text)
def test_update_chain_idempotent(text):
    cfg = FilterConfig()
    once, _ = apply_update_filters(text, cfg)
    twice, _ = apply_update_filters(once, cfg)
    assert twice == once


@settings(max_examples=200, deadline=None)
@given(_doc_text)
def test_tokenize_text_tokens_nonempty_no_whitespace(text):
    for tok in tokenize_text(text):
        assert tok and not any(c.isspace() for c in tok)


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=200))
def test_short_docstring_is_prefix(text):
    assert text.startswith(short_docstring(text))


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.tuples(st.floats(0, 1), st.integers(0, 1)), min_size=2, max_size=80
    ).filter(lambda rows: len({l for _, l in rows}) == 2),
    st.randoms(use_true_random=False),
)
def test_auc_invariant_under_shuffling(rows, rnd):
    scores = [s for s, _ in rows]
    labels = [l for _, l in rows]
    base = evaluate_auc(scores, labels)
    rnd.shuffle(rows)
    assert evaluate_auc([s for s, _ in rows], [l for _, l in rows]) == base


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 60), st.integers(0, 2**32 - 1))
def test_negatives_never_self_paired(n, seed):
    pairs = [(f"code-{i}", f"doc-{i}", "python") for i in range(n)]
    out = generate_negatives(pairs, seed=seed, ratio=1.0)
    negs = [p for p in out if p.label == 0]
    assert len(negs) == n
    for p in negs:
        assert p.code.split("-")[1] != p.docstring.split("-")[1]


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.integers(0, 500), min_size=1, max_size=100),
    st.lists(st.integers(0, 500), min_size=1, max_size=100),
)
def test_ks_distance_bounds_and_symmetry(xs, ys):
    d = ks_distance(xs, ys)
    assert 0.0 <= d <= 1.0
    assert d == ks_distance(ys, xs)
    assert ks_distance(xs, xs) == 0.0


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.sampled_from([f"w{i}" for i in range(30)]), min_size=1, max_size=60),
    st.lists(st.sampled_from([f"w{i}" for i in range(30)]), min_size=1, max_size=60),
)
def test_minhash_estimate_in_unit_interval(a, b):
    h = MinHasher(seed=1)
    est = estimate_jaccard(h.signature(a), h.signature(b))
    assert 0.0 <= est <= 1.0
    assert 0.0 <= exact_jaccard(a, b) <= 1.0
    assert estimate_jaccard(h.signature(a), h.signature(a)) == 1.0
