"""Bridge call contract: dtypes, shapes, clamping, validation, statelessness."""

import concurrent.futures

import numpy as np
import pytest

bridge = pytest.importorskip("fsmr_bridge")
import fsmr


def full_mask(shape=(64, 64)):
    return np.full(shape, 255, dtype=np.uint8)


def test_version_matches_core():
    assert bridge.__version__ == fsmr.__version__


def test_corrupt_zeroes_lost_pixels_and_keeps_valid_ones(texture64):
    corrupted, mask = bridge.bridge_corrupt(texture64, "block", seed=1)
    assert corrupted.dtype == np.uint8 and mask.dtype == np.uint8
    assert corrupted.shape == texture64.shape and mask.shape == texture64.shape
    assert set(np.unique(mask)) <= {0, 255}
    valid = mask == 255
    np.testing.assert_array_equal(corrupted[valid], texture64[valid])
    assert (corrupted[~valid] == 0).all()
    # 16-pixel losses on a 32-pixel stride cover exactly a quarter
    assert (~valid).mean() == 0.25


def test_corrupt_is_deterministic_and_stateless(texture64):
    first = bridge.bridge_corrupt(texture64, "rand", seed=9)
    other = bridge.bridge_corrupt(texture64, "rand", seed=10)
    again = bridge.bridge_corrupt(texture64, "rand", seed=9)
    np.testing.assert_array_equal(first[0], again[0])
    np.testing.assert_array_equal(first[1], again[1])
    assert not np.array_equal(first[1], other[1])


def test_corrupt_float32_clamps_to_unit_range():
    ramp = np.linspace(-0.5, 1.5, 64 * 64, dtype=np.float32).reshape(64, 64)
    corrupted, mask = bridge.bridge_corrupt(ramp, "rand", seed=2)
    assert corrupted.dtype == np.float32
    assert corrupted.min() >= 0.0 and corrupted.max() <= 1.0
    valid = mask == 255
    np.testing.assert_array_equal(corrupted[valid], np.clip(ramp, 0.0, 1.0)[valid])


def test_pattern_spec_mapping_overrides_fields(texture64):
    _, light = bridge.bridge_corrupt(texture64, "rand", seed=3)
    _, heavy = bridge.bridge_corrupt(texture64, {"kind": "rand", "rand_p": 0.5}, seed=3)
    assert (heavy == 0).mean() > (light == 0).mean()
    _, narrow = bridge.bridge_corrupt(
        texture64, {"kind": "block", "block_loss": 8}, seed=0)
    assert (narrow == 0).mean() == 0.0625


@pytest.mark.parametrize("array, pattern, seed, err", [
    (np.zeros((8, 8)), "block", 0, TypeError),                   # float64
    ([[1, 2], [3, 4]], "block", 0, TypeError),                   # not an ndarray
    (np.zeros((8, 8), dtype=np.uint8), 7, 0, TypeError),         # spec type
    (np.zeros((8, 8), dtype=np.uint8), "swirl", 0, ValueError),
    (np.zeros((8, 8), dtype=np.uint8), {"rand_p": 0.5}, 0, ValueError),  # no kind
    (np.zeros((8, 8), dtype=np.uint8), {"kind": "rand", "zap": 1}, 0, ValueError),
    (np.zeros((8, 8), dtype=np.uint8), {"kind": "rand", "seed": 3}, 0, ValueError),
    (np.zeros((8, 8), dtype=np.uint8), {"kind": "rand", "rand_p": "lots"}, 0, ValueError),
    (np.zeros((8, 8), dtype=np.uint8), "block", "x", TypeError),
    (np.zeros((8, 8), dtype=np.uint8), "block", True, TypeError),
    (np.zeros(64, dtype=np.uint8), "block", 0, ValueError),      # 1-D
    (np.zeros((8, 8, 2), dtype=np.uint8), "block", 0, ValueError),
    (np.zeros((0, 8), dtype=np.uint8), "block", 0, ValueError),
])
def test_corrupt_rejects_bad_arguments(array, pattern, seed, err):
    with pytest.raises(err):
        bridge.bridge_corrupt(array, pattern, seed)


def test_corrupt_rejects_non_finite_floats():
    plane = np.full((8, 8), np.nan, dtype=np.float32)
    with pytest.raises(ValueError):
        bridge.bridge_corrupt(plane, "block")


@pytest.mark.parametrize("method", ["fsmr", "lin"])
def test_identity_no_loss_returns_uint8_input_unchanged(texture64, method):
    out = bridge.bridge_process(texture64, full_mask(), method, (64, 64))
    np.testing.assert_array_equal(out, texture64)


def test_identity_no_loss_returns_float32_input_unchanged(texture64):
    plane = (texture64 / 255.0).astype(np.float32)
    out = bridge.bridge_process(plane, full_mask(), "fsmr", (64, 64))
    assert out.dtype == np.float32
    np.testing.assert_array_equal(out, plane)


def test_color_input_resamples_to_target_shape():
    rng = np.random.default_rng(300257)
    image = rng.integers(0, 256, size=(300, 257, 3), dtype=np.uint8)
    out = bridge.bridge_process(image, full_mask((300, 257)), "cub", (224, 224))
    assert out.shape == (224, 224, 3)
    assert out.dtype == np.uint8


def test_single_channel_axis_is_preserved(texture64):
    image = texture64[:, :, None]
    out = bridge.bridge_process(image, full_mask(), "lin", (48, 32))
    assert out.shape == (32, 48, 1)
    flat = bridge.bridge_process(texture64, full_mask(), "lin", (48, 32))
    np.testing.assert_array_equal(out[:, :, 0], flat)


@pytest.mark.parametrize("mask, method, target, overrides, err", [
    (full_mask((32, 64)), "lin", (32, 32), None, ValueError),    # shape mismatch
    (full_mask().astype(np.float32), "lin", (32, 32), None, TypeError),
    (np.zeros((64, 64), dtype=np.uint8), "lin", (32, 32), None, ValueError),
    (full_mask(), "nearest", (32, 32), None, ValueError),
    (full_mask(), "lin", (0, 32), None, ValueError),
    (full_mask(), "lin", (32.0, 32.0), None, TypeError),
    (full_mask(), "lin", (32,), None, TypeError),
    (full_mask(), "lin", 32, None, TypeError),
    (full_mask(), "lin", (32, 32), {"bogus": 1}, ValueError),
    (full_mask(), "lin", (32, 32), {"iterations": -5}, ValueError),
    (full_mask(), "fsr", (32, 32), {"resize_kernel": "bilinear", "method": "fsmr"},
     ValueError),                               # pinned kernel + fsmr rejected, as in the CLI
])
def test_process_rejects_bad_arguments(texture64, mask, method, target, overrides, err):
    with pytest.raises(err):
        bridge.bridge_process(texture64, mask, method, target, overrides)


def test_overrides_change_the_result_without_leaking_state(texture64):
    corrupted, mask = bridge.bridge_corrupt(texture64, "block", seed=4)
    baseline = bridge.bridge_process(corrupted, mask, "fsr", (64, 64))
    short = bridge.bridge_process(corrupted, mask, "fsr", (64, 64), {"iterations": 1})
    assert not np.array_equal(baseline, short)
    again = bridge.bridge_process(corrupted, mask, "fsr", (64, 64))
    np.testing.assert_array_equal(baseline, again)


def test_explicit_method_and_size_win_over_overrides(texture64):
    corrupted, mask = bridge.bridge_corrupt(texture64, "line", seed=4)
    plain = bridge.bridge_process(corrupted, mask, "cub", (32, 32))
    steered = bridge.bridge_process(corrupted, mask, "cub", (32, 32),
                                    {"method": "lin", "target_width": 16})
    np.testing.assert_array_equal(plain, steered)


def test_concurrent_calls_match_the_serial_result(texture64):
    corrupted, mask = bridge.bridge_corrupt(texture64, "rand", seed=6)
    serial = bridge.bridge_process(corrupted, mask, "fsr", (96, 96))
    with concurrent.futures.ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(
            lambda _: bridge.bridge_process(corrupted, mask, "fsr", (96, 96)),
            range(4)))
    for result in results:
        np.testing.assert_array_equal(result, serial)
