import numpy as np
import pytest
from PIL import Image

from regionxfer.imgcore import (
    AlphaMask,
    BinaryMask,
    ImageIOError,
    ImageRGB,
    PipelineConfig,
    ValidationError,
    load_alpha,
    load_image,
    load_mask,
    quantize,
    save_image,
    save_mask,
)


def _png(path, arr, mode=None):
    im = Image.fromarray(np.asarray(arr, dtype=np.uint8))
    if mode:
        im = im.convert(mode)
    im.save(path)
    return path


@pytest.mark.parametrize("byte,value", [(0, 0.0), (255, 1.0)])
def test_load_image_byte_mapping(tmp_path, byte, value):
    path = _png(tmp_path / "p.png", np.full((1, 1, 3), byte))
    img = load_image(path)
    assert img.shape == (1, 1)
    assert np.all(img.data == value)


def test_load_image_drops_alpha(tmp_path):
    rgba = np.array([[[10, 20, 30, 0]]], dtype=np.uint8)
    path = _png(tmp_path / "a.png", rgba)
    np.testing.assert_array_equal(load_image(path).to_bytes(), [[[10, 20, 30]]])


def test_save_load_round_trip_is_byte_identical(tmp_path, rng):
    for i in range(10):
        h, w = rng.integers(1, 40, size=2)
        raw = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
        src = _png(tmp_path / f"src{i}.png", raw)
        img = load_image(src)
        save_image(img, tmp_path / f"out{i}.png")
        again = np.asarray(Image.open(tmp_path / f"out{i}.png"))
        np.testing.assert_array_equal(again, raw)
        save_image(load_image(tmp_path / f"out{i}.png"), tmp_path / f"again{i}.png")
        assert (tmp_path / f"out{i}.png").read_bytes() == (tmp_path / f"again{i}.png").read_bytes()


@pytest.mark.parametrize("value,byte", [(0.5, 128), (0.0, 0), (1.0, 255), (127.5 / 255, 128)])
def test_quantize_rounds_half_up(value, byte):
    assert quantize(value) == byte


def test_quantize_clamps():
    np.testing.assert_array_equal(quantize([-0.2, 1.7]), [0, 255])


def test_load_mask_threshold(tmp_path):
    path = _png(tmp_path / "m.png", [[0, 127, 128, 255]], mode="L")
    np.testing.assert_array_equal(load_mask(path, 0.5).data, [[0, 0, 1, 1]])


@pytest.mark.parametrize("byte,expected", [(255, 1.0), (0, 0.0)])
def test_load_mask_uniform(tmp_path, byte, expected):
    path = _png(tmp_path / "m.png", np.full((5, 7), byte), mode="L")
    mask = load_mask(path)
    assert isinstance(mask, BinaryMask)
    assert np.all(mask.data == expected)


def test_load_mask_rgb_uses_rec601(tmp_path):
    # pure green is 0.587 bright, pure blue 0.114
    arr = np.array([[[0, 255, 0], [0, 0, 255]]], dtype=np.uint8)
    path = _png(tmp_path / "m.png", arr)
    np.testing.assert_array_equal(load_mask(path, 0.5).data, [[1, 0]])
    np.testing.assert_array_equal(load_mask(path, 0.1).data, [[1, 1]])


def test_load_alpha_keeps_soft_values(tmp_path):
    path = _png(tmp_path / "a.png", [[0, 51, 255]], mode="L")
    np.testing.assert_allclose(load_alpha(path).data, [[0.0, 0.2, 1.0]])


def test_save_mask_writes_grayscale(tmp_path):
    save_mask(AlphaMask([[0.0, 0.5, 1.0]]), tmp_path / "m.png")
    im = Image.open(tmp_path / "m.png")
    assert im.mode == "L"
    np.testing.assert_array_equal(np.asarray(im), [[0, 128, 255]])


def test_missing_file(tmp_path):
    with pytest.raises(ImageIOError):
        load_image(tmp_path / "nope.png")
    with pytest.raises(ImageIOError):
        load_mask(tmp_path / "nope.png")


def test_rejects_non_png_and_16bit(tmp_path):
    Image.fromarray(np.zeros((4, 4, 3), np.uint8)).save(tmp_path / "x.bmp")
    with pytest.raises(ImageIOError):
        load_image(tmp_path / "x.bmp")
    Image.fromarray(np.zeros((4, 4), np.uint16) + 1000).save(tmp_path / "deep.png")
    with pytest.raises(ImageIOError):
        load_image(tmp_path / "deep.png")


def test_garbage_file(tmp_path):
    (tmp_path / "bad.png").write_bytes(b"not a png")
    with pytest.raises(ImageIOError):
        load_image(tmp_path / "bad.png")


def test_unwritable_path(tmp_path):
    img = ImageRGB(np.zeros((1, 1, 3)))
    with pytest.raises(ImageIOError):
        save_image(img, tmp_path / "missing-dir" / "x.png")


def test_buffers_validate():
    with pytest.raises(ValidationError):
        ImageRGB(np.zeros((0, 3, 3)))
    with pytest.raises(ValidationError):
        ImageRGB(np.full((2, 2, 3), 1.5))
    with pytest.raises(ValidationError):
        ImageRGB(np.zeros((2, 2)))
    with pytest.raises(ValidationError):
        AlphaMask(np.zeros((3, 0)))
    with pytest.raises(ValidationError):
        BinaryMask([[0.0, 0.5]])


def test_buffers_are_immutable():
    src = np.zeros((2, 2, 3))
    img = ImageRGB(src)
    src[0, 0, 0] = 1.0
    assert img.data[0, 0, 0] == 0.0
    with pytest.raises(ValueError):
        img.data[0, 0, 0] = 1.0


def test_config_validation():
    PipelineConfig()
    with pytest.raises(ValidationError):
        PipelineConfig(canny_low=0.5, canny_high=0.3)
    with pytest.raises(ValidationError):
        PipelineConfig(canny_sigma=0)
    with pytest.raises(ValidationError):
        PipelineConfig(feather_radius=-1)
    with pytest.raises(ValidationError):
        PipelineConfig(erosion_cap=-2)
