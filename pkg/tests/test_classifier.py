import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fragsleuth.corpus.chunks import Fragment
from fragsleuth.classifier import (
    FragmentClassifier,
    checkpoint_from_model,
    encode_bytes,
    encode_fragment,
    load_checkpoint,
    model_from_checkpoint,
    save_checkpoint,
)
from fragsleuth.errors import (
    BadLength,
    BadMagic,
    ClassTableMismatch,
    ShapeMismatch,
    TruncatedFile,
    VersionMismatch,
)

SEED = "1.3035772690"
CLASSES = ["bzip2", "compress", "gzip", "lz4"]


class TestEncoding:
    def test_all_zero_black(self):
        img = encode_bytes(bytes(4096))
        assert img.shape == (64, 64)
        assert not img.any()

    def test_all_ff_white(self):
        img = encode_bytes(b"\xff" * 4096)
        assert (img == 1.0).all()

    def test_last_byte_maps_to_corner(self):
        data = bytearray(4096)
        data[4095] = 0x80
        img = encode_bytes(bytes(data))
        assert img[63, 63] == np.float32(128.0 / 255.0)
        assert img[0, 0] == 0.0

    def test_row_major_order(self):
        data = bytearray(4096)
        data[64 * 2 + 5] = 255
        img = encode_bytes(bytes(data))
        assert img[2, 5] == 1.0

    def test_bad_length(self):
        with pytest.raises(BadLength):
            encode_bytes(bytes(4095))

    def test_fragment_wrapper(self):
        frag = Fragment(b"\x10" * 4096, "gzip", ("p", 0))
        assert encode_fragment(frag)[0, 0] == np.float32(16 / 255)

    @given(st.integers(min_value=0, max_value=4095), st.integers(min_value=1, max_value=255))
    @settings(max_examples=30, deadline=None)
    def test_injective_on_single_byte_flips(self, pos, value):
        base = encode_bytes(bytes(4096))
        data = bytearray(4096)
        data[pos] = value
        changed = encode_bytes(bytes(data))
        assert not np.array_equal(base, changed)
        assert np.count_nonzero(changed != base) == 1


@pytest.fixture(scope="module")
def small_model():
    return FragmentClassifier.build(CLASSES, SEED)


class TestModel:
    def test_build_is_deterministic(self):
        a = FragmentClassifier.build(CLASSES, SEED)
        b = FragmentClassifier.build(CLASSES, SEED)
        for name in a.params.names():
            assert np.array_equal(a.params.value(name), b.params.value(name))

    def test_zero_output_weights_give_uniform_probs(self, small_model):
        model = FragmentClassifier.build(CLASSES, SEED)
        model.params.value("output_weights")[:] = 0
        model.params.value("output_bias")[:] = 0
        probs = model.predict_proba(np.random.default_rng(0).random((3, 64, 64, 1), dtype=np.float32))
        assert np.allclose(probs, 0.25, atol=1e-6)

    def test_batch_shape_contract(self, small_model):
        x = np.random.default_rng(1).random((5, 64, 64, 1), dtype=np.float32)
        probs, labels, conf = small_model.predict(x)
        assert probs.shape == (5, 4)
        assert len(labels) == 5 and conf.shape == (5,)
        assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-6)
        assert all(l in CLASSES for l in labels)

    def test_single_image_accepted(self, small_model):
        img = np.random.default_rng(2).random((64, 64), dtype=np.float32)
        probs, labels, conf = small_model.predict(img)
        assert probs.shape == (1, 4)
        assert conf[0] == probs[0].max()

    def test_wrong_shape_rejected(self, small_model):
        with pytest.raises(ShapeMismatch):
            small_model.forward(np.zeros((2, 32, 32, 1), dtype=np.float32))

    def test_require_classes(self, small_model):
        small_model.require_classes(["gzip", "lz4"])
        with pytest.raises(ClassTableMismatch, match="rar"):
            small_model.require_classes(["gzip", "rar"])


class TestCheckpoint:
    def test_round_trip_bit_identical(self, small_model, tmp_path):
        path = tmp_path / "model.fslc"
        data = checkpoint_from_model(small_model, epoch=3, val_accuracy=0.5, seed=SEED)
        save_checkpoint(data, path)
        loaded = load_checkpoint(path)
        assert loaded.arch == data.arch
        assert loaded.class_names == CLASSES
        assert loaded.epoch == 3 and loaded.val_accuracy == 0.5 and loaded.seed == SEED
        for name, value in data.params.items():
            assert value.dtype == np.float32
            assert np.array_equal(loaded.params[name], value), name

    def test_round_trip_identical_predictions(self, small_model, tmp_path):
        path = tmp_path / "model.fslc"
        x = np.random.default_rng(3).random((8, 64, 64, 1), dtype=np.float32)
        before = small_model.predict_proba(x)
        save_checkpoint(checkpoint_from_model(small_model, 1, 0.25, SEED), path)
        after = model_from_checkpoint(load_checkpoint(path)).predict_proba(x)
        assert np.array_equal(before, after)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "junk.fslc"
        path.write_bytes(b"NOPE" + bytes(64))
        with pytest.raises(BadMagic):
            load_checkpoint(path)

    def test_version_mismatch(self, small_model, tmp_path):
        path = tmp_path / "model.fslc"
        save_checkpoint(checkpoint_from_model(small_model, 1, 0.1, SEED), path)
        raw = bytearray(path.read_bytes())
        raw[4:6] = (99).to_bytes(2, "little")
        path.write_bytes(bytes(raw))
        with pytest.raises(VersionMismatch):
            load_checkpoint(path)

    @pytest.mark.parametrize("keep", [10, 100, 1000])
    def test_truncated_file(self, small_model, tmp_path, keep):
        path = tmp_path / "model.fslc"
        save_checkpoint(checkpoint_from_model(small_model, 1, 0.1, SEED), path)
        path.write_bytes(path.read_bytes()[:keep])
        with pytest.raises(TruncatedFile):
            load_checkpoint(path)

    def test_trailing_garbage_rejected(self, small_model, tmp_path):
        path = tmp_path / "model.fslc"
        save_checkpoint(checkpoint_from_model(small_model, 1, 0.1, SEED), path)
        path.write_bytes(path.read_bytes() + b"extra")
        with pytest.raises(TruncatedFile, match="trailing"):
            load_checkpoint(path)

    def test_class_count_mismatch_detected(self, small_model, tmp_path):
        path = tmp_path / "model.fslc"
        data = checkpoint_from_model(small_model, 1, 0.1, SEED)
        data.class_names = data.class_names[:2]  # K no longer matches payload shapes
        save_checkpoint(data, path)
        with pytest.raises(VersionMismatch, match="output_weights"):
            model_from_checkpoint(load_checkpoint(path))
