import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sweatkit import (
    DataError,
    FormatError,
    cosine,
    load_word2vec_text,
    nearest_neighbor,
    save_word2vec_text,
)
from sweatkit.embeddings import EmbeddingSpace

from conftest import make_space


def write(path, text):
    path.write_text(text, encoding="utf-8")


class TestLoader:
    def test_basic_load(self, tmp_path):
        p = tmp_path / "v.txt"
        write(p, "2 3\ncat 1 0 0\ndog 0 1 0\n")
        space = load_word2vec_text(str(p))
        assert space.dimension == 3
        assert set(space.words) == {"cat", "dog"}
        assert np.array_equal(space.vector("cat"), [1.0, 0.0, 0.0])

    def test_row_count_mismatch(self, tmp_path):
        p = tmp_path / "v.txt"
        write(p, "3 3\ncat 1 0 0\ndog 0 1 0\n")
        with pytest.raises(FormatError, match="row count mismatch"):
            load_word2vec_text(str(p))

    def test_zero_norm_vector(self, tmp_path):
        p = tmp_path / "v.txt"
        write(p, "1 3\nbad 0 0 0\n")
        with pytest.raises(FormatError, match="zero-norm"):
            load_word2vec_text(str(p))

    def test_duplicate_word(self, tmp_path):
        p = tmp_path / "v.txt"
        write(p, "2 2\ncat 1 0\ncat 0 1\n")
        with pytest.raises(FormatError, match="duplicate word"):
            load_word2vec_text(str(p))

    def test_dimension_mismatch_row(self, tmp_path):
        p = tmp_path / "v.txt"
        write(p, "1 3\ncat 1 0\n")
        with pytest.raises(FormatError, match="expected 4 fields"):
            load_word2vec_text(str(p))

    def test_nonfinite_component(self, tmp_path):
        p = tmp_path / "v.txt"
        write(p, "1 2\ncat nan 1\n")
        with pytest.raises(FormatError, match="non-finite"):
            load_word2vec_text(str(p))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_word2vec_text(str(tmp_path / "nope.txt"))

    def test_absent_word_is_error(self, tmp_path):
        p = tmp_path / "v.txt"
        write(p, "1 2\ncat 1 0\n")
        space = load_word2vec_text(str(p))
        with pytest.raises(DataError, match="not in vocabulary"):
            space.vector("dog")

    def test_round_trip_nine_significant_digits(self, tmp_path):
        p = tmp_path / "v.txt"
        write(p, "2 2\nu 0.123456789 -9.87654321\nv 1e-05 123456789\n")
        space = load_word2vec_text(str(p))
        out = tmp_path / "out.txt"
        save_word2vec_text(space, str(out))
        again = load_word2vec_text(str(out))
        for w in space.words:
            assert np.array_equal(space.vector(w), again.vector(w))


class TestCosine:
    def test_self_similarity(self):
        u = np.array([0.3, -2.0, 5.0])
        assert cosine(u, u) == 1.0

    def test_orthogonal(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_hand_value(self):
        # (1*2 + 2*1) / (sqrt(5) * sqrt(5)) = 4/5
        assert cosine([1.0, 2.0], [2.0, 1.0]) == pytest.approx(0.8, abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(DataError, match="dimension mismatch"):
            cosine([1.0, 0.0], [1.0, 0.0, 0.0])

    @given(
        st.lists(st.floats(min_value=-1e3, max_value=1e3), min_size=2, max_size=8),
        st.data(),
    )
    def test_symmetry(self, comps, data):
        u = np.array(comps)
        v = np.array(
            data.draw(
                st.lists(
                    st.floats(min_value=-1e3, max_value=1e3),
                    min_size=len(comps),
                    max_size=len(comps),
                )
            )
        )
        if np.linalg.norm(u) == 0 or np.linalg.norm(v) == 0:
            return
        assert abs(cosine(u, v) - cosine(v, u)) <= 1e-12

    @given(st.floats(min_value=1e-3, max_value=1e3))
    def test_scale_invariance(self, alpha):
        u = np.array([0.5, -1.0, 2.0])
        v = np.array([1.0, 0.25, -0.5])
        assert abs(cosine(alpha * u, v) - cosine(u, v)) <= 1e-9


class TestNearestNeighbor:
    def test_self_match(self):
        space = make_space("s", {"cat": (1.0, 0.2), "dog": (-0.5, 1.0)})
        assert nearest_neighbor(space, space.vector("cat")) == "cat"

    def test_hand_query(self):
        space = make_space("s", {"x": (1.0, 0.0), "y": (0.0, 1.0)})
        assert nearest_neighbor(space, [0.9, 0.1]) == "x"

    def test_lexicographic_tie_break(self):
        space = make_space("s", {"b": (1.0, 0.0), "a": (1.0, 0.0)})
        assert nearest_neighbor(space, [1.0, 0.0]) == "a"

    def test_dimension_mismatch(self):
        space = make_space("s", {"x": (1.0, 0.0)})
        with pytest.raises(DataError):
            nearest_neighbor(space, [1.0, 0.0, 0.0])

    def test_every_word_is_own_neighbor(self):
        rng = np.random.default_rng(7)
        words = [f"w{i}" for i in range(30)]
        space = EmbeddingSpace.from_rows("s", words, rng.normal(size=(30, 5)))
        for w in words:
            assert nearest_neighbor(space, space.vector(w)) == w


class TestSpaceValidation:
    def test_rejects_nan(self):
        with pytest.raises(DataError):
            make_space("s", {"x": (math.nan, 1.0)})

    def test_rejects_duplicate_words(self):
        with pytest.raises(DataError):
            EmbeddingSpace.from_rows("s", ["x", "x"], [[1.0, 0.0], [0.0, 1.0]])

    def test_matrix_is_readonly(self):
        space = make_space("s", {"x": (1.0, 0.0)})
        with pytest.raises(ValueError):
            space.matrix[0, 0] = 2.0
