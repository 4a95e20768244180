import numpy as np
import pytest

from sweatkit import EmbeddingSpace, PoleWordsets, TopicWordset


def make_space(label, mapping):
    return EmbeddingSpace.from_dict(label, mapping)


def random_space(rng, label, words, dim):
    return EmbeddingSpace.from_rows(label, words, rng.normal(size=(len(words), dim)))


def perturbed_unit(rng, center, sigma=0.1):
    v = center + rng.normal(scale=sigma, size=center.shape)
    return v / np.linalg.norm(v)


def polarized_fixture(seed=12345, dim=10, n_poles=8, n_topic=12):
    """Synthetic two-space setup where the topic provably flips poles.

    Pole A sits near e1 and pole B near e2, identically in both spaces.
    Topic words sit near e1 in space1 and near e2 in space2; control words
    sit near e3 identically in both spaces.
    """
    rng = np.random.default_rng(seed)
    e1, e2, e3 = np.eye(dim)[0], np.eye(dim)[1], np.eye(dim)[2]

    vectors1, vectors2 = {}, {}
    for i in range(n_poles):
        a = perturbed_unit(rng, e1)
        b = perturbed_unit(rng, e2)
        vectors1[f"good{i}"] = vectors2[f"good{i}"] = a
        vectors1[f"bad{i}"] = vectors2[f"bad{i}"] = b
    for i in range(n_topic):
        vectors1[f"topic{i}"] = perturbed_unit(rng, e1)
        vectors2[f"topic{i}"] = perturbed_unit(rng, e2)
    for i in range(n_topic):
        c = perturbed_unit(rng, e3)
        vectors1[f"ctrl{i}"] = vectors2[f"ctrl{i}"] = c

    space1 = make_space("S1", vectors1)
    space2 = make_space("S2", vectors2)
    poles = PoleWordsets(
        "pos", "neg",
        [f"good{i}" for i in range(n_poles)],
        [f"bad{i}" for i in range(n_poles)],
    )
    topic = TopicWordset("polarized", [f"topic{i}" for i in range(n_topic)])
    control = TopicWordset("control", [f"ctrl{i}" for i in range(n_topic)])
    return space1, space2, topic, control, poles


@pytest.fixture
def toy_pair():
    """2D toy from the score definitions: topic word w flips from pole a's
    direction in space1 to pole b's direction in space2."""
    space1 = make_space("E1", {"w": (1.0, 0.0), "a": (1.0, 0.0), "b": (0.0, 1.0)})
    space2 = make_space("E2", {"w": (0.0, 1.0), "a": (1.0, 0.0), "b": (0.0, 1.0)})
    poles = PoleWordsets("A", "B", ["a"], ["b"])
    topic = TopicWordset("toy", ["w"])
    return space1, space2, topic, poles
