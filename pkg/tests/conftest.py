import numpy as np
import pytest

from hlawka.shapes import circle, cosine_series, ellipse, odd_shape, square


@pytest.fixture
def unit_circle():
    return circle(1.0)


@pytest.fixture
def square_shape():
    return square()


@pytest.fixture
def odd_region():
    return odd_shape()


@pytest.fixture
def thin_ellipse():
    return ellipse(1.1, 1.0)


@pytest.fixture
def bump_shape():
    # r = 1 + 0.1 cos(4 theta): smooth, 4-fold symmetric
    return cosine_series([1.0, 0.0, 0.0, 0.0, 0.1])


def random_complex_samples(seed, n, re_range=(-2.0, 3.0), im_min=0.25, im_max=8.0):
    """Seeded samples with |Im s| bounded below, clearing real-axis poles."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        re = rng.uniform(*re_range)
        im = rng.uniform(im_min, im_max) * (1.0 if rng.uniform() < 0.5 else -1.0)
        out.append(complex(re, im))
    return out
