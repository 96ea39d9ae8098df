"""Classical resize and axial gap reconstruction.

The resize oracle below recomputes every output pixel with explicit
Python loops straight from the kernel definition, independent of the
separable matrix implementation.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fsmr.errors import InvalidArgumentError
from fsmr.kernels import KernelSpec, interp_reconstruct, resize, resize_matrix
from fsmr.patterns import LossMask, make_line_mask


def kernel_value(kind: str, t: float, a: float = -0.5) -> float:
    t = abs(t)
    if kind == "bilinear":
        return max(0.0, 1.0 - t)
    if t <= 1.0:
        return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0
    if t <= 2.0:
        return a * (((t - 5.0) * t + 8.0) * t - 4.0)
    return 0.0


def naive_resize(image, target_size, kind, antialias=False):
    """Per-pixel weighted sum under the align-corners map, clamp-to-edge,
    with per-position weight normalization."""
    src_h, src_w = image.shape
    dst_w, dst_h = target_size
    radius = 1 if kind == "bilinear" else 2

    def axis_weights(n_src, n_dst, j):
        pos = j * (n_src - 1) / (n_dst - 1)
        stretch = max(1.0, (n_src - 1) / (n_dst - 1)) if antialias else 1.0
        r = radius * stretch
        taps, weights = [], []
        i = int(np.floor(pos - r)) + 1
        while i - pos <= r:
            w = kernel_value(kind, (i - pos) / stretch)
            taps.append(min(max(i, 0), n_src - 1))
            weights.append(w)
            i += 1
        total = sum(weights)
        return taps, [w / total for w in weights]

    out = np.zeros((dst_h, dst_w))
    for row in range(dst_h):
        rtaps, rweights = axis_weights(src_h, dst_h, row)
        for col in range(dst_w):
            ctaps, cweights = axis_weights(src_w, dst_w, col)
            acc = 0.0
            for ti, wi in zip(rtaps, rweights):
                for tj, wj in zip(ctaps, cweights):
                    acc += wi * wj * image[ti, tj]
            out[row, col] = acc
    return out


# ---------------------------------------------------------------------------
# Kernel shapes
# ---------------------------------------------------------------------------


def test_bilinear_kernel_values():
    k = KernelSpec("bilinear")
    np.testing.assert_allclose(k.weight([0.0, 0.5, -0.5, 1.0, 1.5]),
                               [1.0, 0.5, 0.5, 0.0, 0.0])


def test_bicubic_kernel_values():
    k = KernelSpec("bicubic")
    assert k.weight(0.0) == pytest.approx(1.0)
    assert k.weight(1.0) == pytest.approx(0.0)
    assert k.weight(2.0) == pytest.approx(0.0)
    # classic Catmull-Rom-like lobe: negative just past 1
    assert k.weight(1.5) < 0.0
    np.testing.assert_allclose(k.weight(0.5), kernel_value("bicubic", 0.5))


@pytest.mark.parametrize("kind", ["bilinear", "bicubic"])
def test_partition_of_unity_at_any_phase(kind):
    # integer-spaced taps covering the support must sum to 1 at any phase
    k = KernelSpec(kind)
    for phase in np.linspace(0.0, 1.0, 23):
        taps = np.arange(-3, 5, dtype=float) + phase
        assert np.sum(k.weight(taps)) == pytest.approx(1.0, abs=1e-12)


def test_unknown_kernel_kind_rejected():
    with pytest.raises(InvalidArgumentError):
        KernelSpec("lanczos")


# ---------------------------------------------------------------------------
# Resize
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("kind", ["bilinear", "bicubic"])
def test_resize_constant_stays_constant(kind):
    image = np.full((6, 9), 0.42)
    out = resize(image, (13, 5), KernelSpec(kind))
    np.testing.assert_allclose(out, 0.42, atol=1e-12)


def test_resize_2x2_bilinear_to_3x3_midpoints():
    image = np.array([[0.0, 1.0], [0.0, 1.0]])
    out = resize(image, (3, 3), KernelSpec("bilinear"))
    np.testing.assert_allclose(out, [[0.0, 0.5, 1.0]] * 3, atol=1e-12)


def test_resize_bilinear_is_exact_on_planar_ramps():
    ys, xs = np.mgrid[0:7, 0:11].astype(float)
    image = 0.3 * xs + 0.2 * ys + 0.1
    out = resize(image, (21, 13), KernelSpec("bilinear"))
    oy, ox = np.mgrid[0:13, 0:21].astype(float)
    expect = 0.3 * (ox * 10 / 20) + 0.2 * (oy * 6 / 12) + 0.1
    np.testing.assert_allclose(out, expect, atol=1e-12)


@pytest.mark.parametrize("kind", ["bilinear", "bicubic"])
def test_resize_matches_naive_oracle(kind, rng):
    image = rng.uniform(size=(16, 16))
    out = resize(image, (11, 7), KernelSpec(kind))
    np.testing.assert_allclose(out, naive_resize(image, (11, 7), kind), atol=1e-6)


@pytest.mark.parametrize("kind", ["bilinear", "bicubic"])
def test_antialiased_resize_matches_naive_oracle(kind, rng):
    image = rng.uniform(size=(24, 17))
    out = resize(image, (9, 6), KernelSpec(kind), antialias=True)
    np.testing.assert_allclose(out, naive_resize(image, (9, 6), kind, antialias=True),
                               atol=1e-6)


def test_antialias_is_a_no_op_on_upscale(rng):
    image = rng.uniform(size=(8, 8))
    plain = resize(image, (16, 16), KernelSpec("bicubic"))
    aa = resize(image, (16, 16), KernelSpec("bicubic"), antialias=True)
    np.testing.assert_array_equal(plain, aa)


@pytest.mark.parametrize("antialias", [False, True])
def test_identity_resize_is_exact(rng, antialias):
    image = rng.uniform(size=(9, 14))
    out = resize(image, (14, 9), KernelSpec("bicubic"), antialias=antialias)
    np.testing.assert_array_equal(out, image)


def test_resize_matrix_rows_sum_to_one():
    for kind in ("bilinear", "bicubic"):
        for antialias in (False, True):
            h = resize_matrix(17, 6, KernelSpec(kind), antialias=antialias)
            np.testing.assert_allclose(h.sum(axis=1), 1.0, atol=1e-12)


def test_resize_preserves_channels(rng):
    image = rng.uniform(size=(10, 12, 3))
    out = resize(image, (7, 5), KernelSpec("bicubic"))
    assert out.shape == (5, 7, 3)
    for c in range(3):
        np.testing.assert_allclose(out[:, :, c],
                                   resize(image[:, :, c], (7, 5), KernelSpec("bicubic")))


def test_resize_rejects_too_small_sources():
    with pytest.raises(InvalidArgumentError):
        resize(np.zeros((3, 3)), (8, 8), KernelSpec("bicubic"))
    with pytest.raises(InvalidArgumentError):
        resize(np.zeros((1, 5)), (8, 8), KernelSpec("bilinear"))


@settings(max_examples=20, deadline=None)
@given(src=st.integers(4, 20), dst=st.integers(2, 20))
def test_resize_axis_oracle_property(src, dst):
    rng = np.random.default_rng(src * 100 + dst)
    image = rng.uniform(size=(src, src))
    out = resize(image, (dst, dst), KernelSpec("bicubic"))
    np.testing.assert_allclose(out, naive_resize(image, (dst, dst), "bicubic"),
                               atol=1e-6)


# ---------------------------------------------------------------------------
# Axial gap reconstruction
# ---------------------------------------------------------------------------


def mask_from(valid) -> LossMask:
    return LossMask(np.asarray(valid, dtype=bool))


def test_reconstruct_single_gap_is_the_midpoint():
    image = np.array([[2.0, 0.0, 4.0]])
    valid = [[True, False, True]]
    out = interp_reconstruct(image, mask_from(valid), KernelSpec("bilinear"))
    assert out[0, 1] == pytest.approx(3.0)


def test_reconstruct_constant_image_any_mask(rng):
    image = np.full((20, 20), 0.6)
    valid = rng.uniform(size=(20, 20)) > 0.3
    valid[0, 0] = True
    out = interp_reconstruct(image, mask_from(valid), KernelSpec("bicubic"))
    np.testing.assert_allclose(out, 0.6, atol=1e-9)


def test_reconstruct_line_loss_on_vertical_ramp_is_exact():
    ys = np.arange(64, dtype=float)[:, None]
    image = np.repeat(ys / 63.0, 48, axis=1)
    mask = make_line_mask((48, 64), line_height=4, stride=16, offset=4)
    out = interp_reconstruct(image, mask, KernelSpec("bilinear"))
    np.testing.assert_allclose(out, image, atol=1e-6)


def test_reconstruct_leaves_valid_pixels_untouched(rng):
    image = rng.uniform(size=(16, 16))
    valid = rng.uniform(size=(16, 16)) > 0.4
    valid[3, 3] = True
    out = interp_reconstruct(image, mask_from(valid), KernelSpec("bicubic"))
    np.testing.assert_array_equal(out[valid], image[valid])


def test_reconstruct_averages_horizontal_and_vertical():
    image = np.array([
        [0.0, 2.0, 0.0],
        [4.0, 0.0, 8.0],
        [0.0, 6.0, 0.0],
    ])
    valid = np.array([
        [True, True, True],
        [True, False, True],
        [True, True, True],
    ])
    out = interp_reconstruct(image, mask_from(valid), KernelSpec("bilinear"))
    # horizontal estimate 6, vertical estimate 4 -> 5
    assert out[1, 1] == pytest.approx(5.0)


def test_reconstruct_orphan_pixel_falls_back_to_nearest():
    # row 1 and column 1 fully lost: the crossing pixel has no axial support
    valid = np.ones((5, 5), dtype=bool)
    valid[1, :] = False
    valid[:, 1] = False
    image = np.arange(25, dtype=float).reshape(5, 5) / 25.0
    out, info = interp_reconstruct(image, mask_from(valid), KernelSpec("bilinear"),
                                   full_output=True)
    assert info["nearest_fallback_pixels"] == 1
    assert out[1, 1] == image[0, 0]  # nearest valid neighbour


def test_reconstruct_shape_mismatch_rejected():
    with pytest.raises(InvalidArgumentError):
        interp_reconstruct(np.zeros((4, 4)), mask_from(np.ones((5, 5), bool)),
                           KernelSpec("bilinear"))
