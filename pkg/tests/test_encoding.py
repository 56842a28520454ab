import numpy as np
import pytest
from hypothesis import given, strategies as st

from layerdepth import decode_layer_index, encode_layer_index
from layerdepth.errors import IndexOverflow
from layerdepth.svg.model import MAX_LAYER_INDEX, index_to_rgb, rgb_to_index


def test_zero():
    assert encode_layer_index(0) == (0, 0, 0)
    assert decode_layer_index((0, 0, 0)) == 0


def test_single_channel_boundary():
    assert encode_layer_index(255) == (255, 0, 0)


def test_base256_carry():
    assert encode_layer_index(257) == (1, 1, 0)
    assert decode_layer_index((1, 1, 0)) == 257


def test_max_value():
    assert decode_layer_index((255, 255, 255)) == 16777215
    assert encode_layer_index(MAX_LAYER_INDEX - 1) == (255, 255, 255)


def test_overflow():
    with pytest.raises(IndexOverflow):
        encode_layer_index(MAX_LAYER_INDEX)
    with pytest.raises(IndexOverflow):
        encode_layer_index(-1)


@given(st.integers(min_value=0, max_value=MAX_LAYER_INDEX - 1))
def test_roundtrip(i):
    assert decode_layer_index(encode_layer_index(i)) == i


def test_roundtrip_boundaries():
    for i in (0, 1, 255, 256, 257, 65535, 65536, 2**24 - 1):
        assert decode_layer_index(encode_layer_index(i)) == i


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(0)
    vals = rng.integers(0, MAX_LAYER_INDEX, size=(16, 16))
    rgb = index_to_rgb(vals)
    back = rgb_to_index(rgb)
    assert np.array_equal(back, vals)
    r, g, b = rgb[3, 7]
    assert (int(r), int(g), int(b)) == encode_layer_index(int(vals[3, 7]))
