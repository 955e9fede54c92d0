from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fragsleuth.corpus.chunks import ChunkRecord
from fragsleuth.corpus.sampling import SamplerConfig, sample_chunks
from fragsleuth.errors import InsufficientSamples

SEED = "1.3035772690"


def make_index(sizes: dict[str, int]) -> list[ChunkRecord]:
    records = []
    for label, n in sizes.items():
        for i in range(n):
            records.append(ChunkRecord(f"{label}/file{i % 3}", i, i * 4096, label))
    return records


def test_balanced_sample_of_80_over_8_classes():
    index = make_index({f"tool{i}": 40 for i in range(8)})
    sample = sample_chunks(index, SamplerConfig(SEED, 10))
    counts = Counter(r.label for r in sample)
    assert len(sample) == 80
    assert all(counts[label] == 10 for label in counts)


def test_full_class_size_is_identity_selection():
    index = make_index({"gzip": 17})
    sample = sample_chunks(index, SamplerConfig(SEED, 17))
    assert sorted(sample, key=lambda r: (r.path, r.ordinal)) == sorted(
        index, key=lambda r: (r.path, r.ordinal)
    )


def test_deterministic_for_fixed_seed():
    index = make_index({"gzip": 60, "lz4": 60})
    a = sample_chunks(index, SamplerConfig(SEED, 10))
    b = sample_chunks(index, SamplerConfig(SEED, 10))
    assert a == b


def test_selection_independent_of_input_order():
    index = make_index({"gzip": 60, "lz4": 60})
    a = sample_chunks(index, SamplerConfig(SEED, 10))
    b = sample_chunks(list(reversed(index)), SamplerConfig(SEED, 10))
    assert a == b


def test_different_seeds_differ():
    index = make_index({"gzip": 200})
    a = sample_chunks(index, SamplerConfig("seed-a", 10))
    b = sample_chunks(index, SamplerConfig("seed-b", 10))
    assert a != b


def test_insufficient_names_the_class():
    index = make_index({"gzip": 30, "bzip2": 4})
    with pytest.raises(InsufficientSamples) as err:
        sample_chunks(index, SamplerConfig(SEED, 10))
    assert err.value.label == "bzip2"
    assert "bzip2" in str(err.value)


def test_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(SEED, 0)
    with pytest.raises(ValueError):
        SamplerConfig("", 5)


@given(
    sizes=st.dictionaries(
        st.sampled_from(["gzip", "bzip2", "lz4", "compress"]),
        st.integers(min_value=5, max_value=40),
        min_size=1,
    ),
    k=st.integers(min_value=1, max_value=5),
)
@settings(max_examples=40, deadline=None)
def test_no_duplicates_and_exact_balance(sizes, k):
    sample = sample_chunks(make_index(sizes), SamplerConfig(SEED, k))
    counts = Counter(r.label for r in sample)
    assert set(counts) == set(sizes)
    assert all(v == k for v in counts.values())
    assert len({(r.path, r.ordinal, r.label) for r in sample}) == len(sample)
