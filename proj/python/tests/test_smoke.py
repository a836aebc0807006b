import numpy as np
import pytest

import regsynth

GRID = """
For (i in range(0, 4)) {
    For (j in range(0, 3)) {
        Draw(x=16 * i + 0 * j + 7, y=0 * i + 16 * j + 7, attribute=0)
    }
}
"""


def tile(variant=0, size=16):
    yy, xx = np.mgrid[0:size, 0:size]
    c = (size - 1) / 2
    img = np.zeros((size, size, 3), np.uint8)
    img[...] = (30, 30, 40)
    disk = (xx - c) ** 2 + (yy - c) ** 2 <= (0.3 * size) ** 2
    img[disk] = [(220, 40, 40), (40, 90, 220)][variant]
    return img


def tiled(cols, rows, size=16):
    return np.tile(tile(size=size), (rows, cols, 1))


def test_parse_print_round_trip():
    p = regsynth.Program.parse(GRID)
    assert regsynth.Program.parse(str(p)) == p
    assert regsynth.Program.from_json(p.to_json()) == p
    assert p.outer == (0, 4) and p.inner == (0, 3)


def test_execute():
    draws = regsynth.Program.parse(GRID).execute(64, 48)
    assert len(draws) == 12
    assert (draws[0].x, draws[0].y, draws[0].i, draws[0].j) == (7, 7, 0, 0)


def test_synthesize_recovers_positions():
    pts = np.array([[16 * i + 7, 16 * j + 7] for i in range(4) for j in range(3)], float)
    p = regsynth.synthesize(pts, 64, 48)
    got = sorted((d.x, d.y) for d in p.execute(64, 48))
    assert got == sorted(map(tuple, pts))


def test_detect_tiled_image():
    pts = regsynth.detect(tiled(4, 4))
    assert pts.shape == (16, 2)
    assert np.all(np.abs((pts - 7.5) / 16 - np.round((pts - 7.5) / 16)) * 16 <= 2)


def test_inpaint_restores_a_tile():
    img = tiled(4, 3)
    mask = np.zeros(img.shape[:2], np.uint8)
    mask[16:32, 16:32] = 1
    broken = img.copy()
    broken[mask == 1] = 0
    out = regsynth.inpaint(broken, mask, regsynth.Program.parse(GRID))
    assert np.array_equal(out, img)


def test_extrapolate_one_period():
    img = tiled(4, 3)
    out, prog = regsynth.extrapolate(img, regsynth.Program.parse(GRID), right=16)
    assert np.array_equal(out, tiled(5, 3))
    assert prog.outer == (0, 5)


def test_edit_gain_one_is_identity():
    img = tiled(4, 3)
    pts = np.array([[16 * i + 7, 16 * j + 7] for i in range(4) for j in range(3)], float)
    out, moved = regsynth.edit(img, regsynth.Program.parse(GRID), pts, gain=1.0)
    assert np.array_equal(out, img)
    assert moved[0] == (7.0, 7.0)


def test_errors_carry_code_and_detail():
    with pytest.raises(regsynth.SyntaxError) as e:
        regsynth.Program.parse("For (i in range(0, 2)) { oops")
    assert e.value.code == "syntax_error"
    assert "line" in e.value.detail
    with pytest.raises(regsynth.DomainError) as e:
        regsynth.synthesize(np.array([[1.0, 1.0], [20.0, 1.0]]), 50, 50)
    assert e.value.code == "insufficient_centroids"
    assert isinstance(e.value, regsynth.RegsynthError)


def test_image_io_round_trip(tmp_path):
    img = tiled(2, 2)
    regsynth.write_image(img, tmp_path / "t.png")
    assert np.array_equal(regsynth.read_image(tmp_path / "t.png"), img)
    with pytest.raises(regsynth.IoError):
        regsynth.read_image(tmp_path / "missing.png")
