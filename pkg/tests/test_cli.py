import numpy as np
import pytest
from PIL import Image

from regionxfer.cli import main
from regionxfer.imgcore import BinaryMask, ImageRGB, save_image, save_mask
from regionxfer.stylemath import FeatureMap, gram, save_fmap


@pytest.fixture
def files(tmp_path, rng):
    content = np.full((16, 16, 3), 0.7)
    content[4:12, 4:12] = 0.2
    mask = np.zeros((16, 16))
    mask[2:14, 2:14] = 1
    paths = {
        "content": tmp_path / "content.png",
        "style": tmp_path / "style.png",
        "mask": tmp_path / "mask.png",
        "small": tmp_path / "small.png",
    }
    save_image(ImageRGB(content), paths["content"])
    save_image(ImageRGB(rng.random((16, 16, 3))), paths["style"])
    save_mask(BinaryMask(mask), paths["mask"])
    save_image(ImageRGB(rng.random((8, 8, 3))), paths["small"])
    return paths


def pixels(path):
    return np.asarray(Image.open(path))


def test_run(files, tmp_path):
    out = tmp_path / "out.png"
    code = main(["run", "--content", str(files["content"]), "--style", str(files["style"]),
                 "--mask", str(files["mask"]), "--out", str(out), "--dump-stages", str(tmp_path / "s")])
    assert code == 0
    assert pixels(out).shape == (16, 16, 3)
    assert (tmp_path / "s" / "alpha.png").exists()


def test_run_with_stylized_background(files, tmp_path):
    out = tmp_path / "out.png"
    assert main(["run", "--content", str(files["content"]), "--style", str(files["style"]),
                 "--mask", str(files["mask"]), "--stylized-bg", str(files["style"]),
                 "--out", str(out)]) == 0
    # far corner is outside the mask and takes the stylized background
    np.testing.assert_array_equal(pixels(out)[0, 0], pixels(files["style"])[0, 0])


def test_refine_mask(files, tmp_path):
    out = tmp_path / "refined.png"
    assert main(["refine-mask", "--image", str(files["content"]), "--mask", str(files["mask"]),
                 "--out", str(out)]) == 0
    refined = pixels(out) > 127
    assert not np.any(refined & ~(pixels(files["mask"]) > 127))


def test_feather(files, tmp_path):
    out = tmp_path / "alpha.png"
    assert main(["feather", "--mask", str(files["mask"]), "--radius", "2", "--out", str(out)]) == 0
    alpha = pixels(out)
    assert alpha[0, 0] == 0 and alpha[8, 8] == 255
    assert alpha[2, 8] == 128  # distance 1 of 2


def test_color_transfer(files, tmp_path):
    out = tmp_path / "ct.png"
    assert main(["color-transfer", "--content", str(files["content"]), "--style", str(files["style"]),
                 "--mask", str(files["mask"]), "--out", str(out)]) == 0
    np.testing.assert_array_equal(pixels(out)[0], pixels(files["content"])[0])


def test_blend(files, tmp_path):
    out = tmp_path / "b.png"
    assert main(["blend", "--fg", str(files["content"]), "--bg", str(files["style"]),
                 "--alpha", str(files["mask"]), "--out", str(out)]) == 0
    np.testing.assert_array_equal(pixels(out)[8, 8], pixels(files["content"])[8, 8])
    np.testing.assert_array_equal(pixels(out)[0, 0], pixels(files["style"])[0, 0])


def test_losses(tmp_path, capsys):
    f = FeatureMap([[1.0, 2.0], [0.0, 1.0]])
    save_fmap(f, tmp_path / "gen.fmap")
    save_fmap(FeatureMap([[0.0, 2.0], [0.0, 1.0]]), tmp_path / "orig.fmap")
    save_fmap(gram(f), tmp_path / "gram.fmap")
    code = main(["losses", "--generated", str(tmp_path / "gen.fmap"), "--original", str(tmp_path / "orig.fmap"),
                 "--style-grams", str(tmp_path / "gram.fmap")])
    assert code == 0
    assert capsys.readouterr().out.splitlines() == ["content 0.5", "style 0", "total 0.075"]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["run", "--content", "x.png"],
        ["feather", "--mask", "m.png", "--radius", "abc", "--out", "o.png"],
        ["feather", "--mask", "m.png", "--radius", "-1", "--out", "o.png"],
    ],
)
def test_usage_errors(argv):
    assert main(argv) == 1


def test_bad_config_is_usage_error(files, tmp_path):
    assert main(["refine-mask", "--image", str(files["content"]), "--mask", str(files["mask"]),
                 "--out", str(tmp_path / "o.png"), "--canny-low", "0.5", "--canny-high", "0.2"]) == 1


def test_bad_loss_weights_is_usage_error(tmp_path):
    save_fmap(FeatureMap([[1.0]]), tmp_path / "f.fmap")
    f = str(tmp_path / "f.fmap")
    assert main(["losses", "--generated", f, "--original", f, "--style-grams", f, "--alpha", "-1"]) == 1


def test_missing_file_is_io_error(files, tmp_path):
    assert main(["feather", "--mask", str(tmp_path / "absent.png"), "--radius", "1",
                 "--out", str(tmp_path / "o.png")]) == 2
    assert main(["run", "--content", str(tmp_path / "absent.png"), "--style", str(files["style"]),
                 "--mask", str(files["mask"]), "--out", str(tmp_path / "o.png")]) == 2


def test_bad_fmap_is_io_error(tmp_path):
    (tmp_path / "bad.fmap").write_bytes(b"junk")
    p = str(tmp_path / "bad.fmap")
    assert main(["losses", "--generated", p, "--original", p, "--style-grams", p]) == 2


def test_dimension_mismatch_exit_code(files, tmp_path):
    assert main(["run", "--content", str(files["small"]), "--style", str(files["style"]),
                 "--mask", str(files["mask"]), "--out", str(tmp_path / "o.png")]) == 3
    assert main(["blend", "--fg", str(files["small"]), "--bg", str(files["style"]),
                 "--alpha", str(files["mask"]), "--out", str(tmp_path / "o.png")]) == 3
    assert main(["refine-mask", "--image", str(files["small"]), "--mask", str(files["mask"]),
                 "--out", str(tmp_path / "o.png")]) == 3
