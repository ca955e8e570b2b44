import math

import numpy as np
import pytest

from epdkit.errors import DomainError
from epdkit.grid import GridFunction, sphere_area


@pytest.mark.parametrize("suffix", [".grid", ".json"])
@pytest.mark.parametrize("complex_values", [False, True])
def test_round_trip_is_bit_exact(tmp_path, suffix, complex_values):
    f = GridFunction.random_trig(2, 16, 2 * math.pi, 5, seed=3, complex_values=complex_values)
    path = tmp_path / f"f{suffix}"
    f.save(path)
    g = GridFunction.load(path)
    assert g.L == f.L and g.is_complex == f.is_complex
    assert np.array_equal(g.values, f.values)


def test_header_and_text_layout(tmp_path):
    f = GridFunction.constant(0.1, 1, 8, 3.0)
    path = tmp_path / "c.grid"
    f.save(path)
    lines = path.read_text().splitlines()
    assert '"layout": "row-major"' in lines[0]
    assert len(lines) == 9 and float(lines[1]) == 0.1


def test_validation():
    with pytest.raises(DomainError):
        GridFunction(np.zeros((12, 12)), 1.0)
    with pytest.raises(DomainError):
        GridFunction(np.zeros((8, 16)), 1.0)
    with pytest.raises(DomainError):
        GridFunction(np.zeros((2, 2, 2, 2)), 1.0)
    with pytest.raises(DomainError):
        GridFunction(np.zeros(8), 0.0)
    f = GridFunction(np.zeros(8), 1.0)
    with pytest.raises(ValueError):
        f.values[0] = 1.0


def test_bad_files(tmp_path):
    p = tmp_path / "bad.grid"
    p.write_text('{"n": 1, "P": 8, "L": 1.0, "dtype": "f64", "layout": "row-major"}\n1\n2\n')
    with pytest.raises(DomainError):
        GridFunction.load(p)
    p.write_text('{"n": 1, "P": 8, "L": 1.0, "dtype": "f64"}\n' + "0\n" * 8)
    with pytest.raises(DomainError):
        GridFunction.load(p)


def test_interpolation_matches_function():
    L = 3.0
    f = GridFunction.cosine(2, 16, L, (2, 1), amplitude=1.5, phase=0.3)
    pts = np.array([[0.123, 2.5], [1.7, 0.01]])
    want = 1.5 * np.cos(2 * math.pi / L * (2 * pts[:, 0] + pts[:, 1]) + 0.3)
    assert np.allclose(f.evaluate(pts), want, atol=1e-13)
    nyq = GridFunction.from_function(lambda x: np.cos(8 * 2 * math.pi * x / L), 1, 16, L)
    with pytest.raises(DomainError):
        nyq.evaluate([[0.1]])


def test_sphere_area():
    assert sphere_area(1) == pytest.approx(2)
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
