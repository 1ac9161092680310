import math

import numpy as np
import pytest

import tanhfx


def test_quantize_round_trip():
    raw, saturated = tanhfx.quantize(math.tanh(1.0), "S.15")
    assert raw == 24956
    assert not saturated
    assert tanhfx.quantize(1.0, "S.15") == (32767, True)
    assert tanhfx.dequantize(-4096, "S3.12") == -1.0
    assert str(tanhfx.QFormat.parse("S3.12")) == "S3.12"
    assert tanhfx.QFormat(0, 15).ulp == 2.0**-15


@pytest.mark.parametrize(
    "spec",
    [
        tanhfx.KernelSpec("pwl", step="1/64"),
        tanhfx.KernelSpec("taylor", step="1/16", terms=3),
        tanhfx.KernelSpec("catmull-rom", step="1/16"),
        tanhfx.KernelSpec("velocity", step="1/128"),
        tanhfx.KernelSpec("lambert", depth=7),
    ],
    ids=lambda s: s.label(),
)
def test_kernels_track_tanh(spec):
    k = tanhfx.Kernel(spec)
    assert k(0.0) == 0.0
    xs = np.linspace(-7.0, 7.0, 1001)
    ys = k.eval_array(xs)
    assert ys.shape == xs.shape
    xq = np.array([tanhfx.dequantize(tanhfx.quantize(x, "S3.12")[0], "S3.12") for x in xs])
    assert np.max(np.abs(ys - np.tanh(xq))) < 5e-5
    assert np.array_equal(k.eval_array(-xs), -ys)

    r = k.sweep()
    assert r["n_points"] == 49153
    assert r["rmse"] <= r["max_abs_err"] < 5e-5


def test_table1_rmse_column():
    rows = tanhfx.table1()
    assert [r["id"] for r in rows] == ["A", "B1", "B2", "C", "D", "E"]
    assert all(r["max_within"] and r["rmse_within"] for r in rows)
    assert not any(r["mse_within"] for r in rows)


def test_sweep_parameter_and_calibrate():
    pts = tanhfx.sweep_parameter(tanhfx.KernelSpec("pwl"), ["1/8", "1/16", "1/32", "1/64"])
    errs = [p["max_abs_err"] for p in pts]
    assert errs == sorted(errs, reverse=True)
    assert pts[0]["param"] == "1/8"

    spec = tanhfx.KernelSpec("lambert", in_fmt="S2.5", out_fmt="S.7", limit=4.0)
    c = tanhfx.calibrate(spec, 2.0**-7)
    assert c["param"] == 4
    assert c["coarser_max_err"] > 2.0**-7
    with pytest.raises(tanhfx.CalibrationError):
        tanhfx.calibrate(tanhfx.KernelSpec("pwl"), 1e-9)


def test_cost():
    c = tanhfx.cost(tanhfx.KernelSpec("taylor", step="1/16", terms=3))
    assert (c["adders"], c["multipliers"], c["lut_entries"]) == (2, 2, 96)
    g = tanhfx.cost(tanhfx.KernelSpec("velocity", step="1/256", grouped=True, in_fmt="S2.13", limit=4.0))
    assert g["blocks"]["vf-product"] == {"adders": 0, "multipliers": 4, "squarers": 0, "dividers": 0, "lut_entries": 20}


def test_hex_round_trip():
    k = tanhfx.Kernel(tanhfx.KernelSpec("taylor", step="1/16", terms=4, derivs="stored"))
    text = k.export_hex()
    back = tanhfx.Kernel.from_hex(text)
    assert back.spec.label() == k.spec.label()
    for raw in range(-32768, 32768, 7):
        assert back.eval_raw(raw) == k.eval_raw(raw)
    assert "#define TANH_LUT_COUNT" in k.export_cheader()


def test_errors():
    with pytest.raises(ValueError):
        tanhfx.KernelSpec("bogus")
    with pytest.raises(ValueError):
        tanhfx.KernelSpec("pwl", step="0.015625")
    with pytest.raises(ValueError):
        tanhfx.Kernel(tanhfx.KernelSpec("lambert", depth=0))
    with pytest.raises(ValueError):
        tanhfx.reciprocal_nr(0.0)


def test_scalar_helpers():
    assert tanhfx.lambert_value(1.0, 1) == 0.75
    assert abs(tanhfx.velocity_factor(0.5) - math.e) < 1e-12
    assert abs(tanhfx.domain_bound(15) - 5.545169815026823) < 1e-12
    assert tanhfx.tanh_ref(0.0) == 0.0
