"""Smoke test for the specprint_py extension module.

Build and install the module first:

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/specprint_py-*.whl

then run ``python python/smoke_test.py``.
"""

import json
import math
import os
import random
import tempfile

import specprint_py as sp


def smooth(size, seed, checker=0.0):
    rng = random.Random(seed)
    fx, fy, ph = rng.randint(1, 2), rng.randint(0, 2), rng.uniform(0, 2 * math.pi)
    rows = []
    for r in range(size):
        row = []
        for c in range(size):
            v = 0.5 + 0.2 * math.sin(2 * math.pi * (fx * r + fy * c) / size + ph)
            v += 0.05 * (rng.random() - 0.5)
            v += checker if (r + c) % 2 == 0 else -checker
            row.append(min(1.0, max(0.0, v)))
        rows.append(row)
    return sp.GrayImage(rows)


def main():
    a = smooth(32, 1)
    b = smooth(32, 2)
    assert sp.mse(a, a) == 0.0
    assert sp.psnr(a, a) == math.inf
    assert abs(sp.ssim(a, a) - 1.0) < 1e-9
    assert abs(sp.ssim(a, b) - sp.ssim(b, a)) < 1e-12
    assert abs(sp.hist_correlation(a, a) - 1.0) < 1e-12

    res = sp.residual(a)
    assert res.shape == (32, 32)
    assert abs(sum(map(sum, res.to_list()))) < 1e-9

    power = sp.power_spectrum(res)
    energy = sum(map(sum, power.to_list()))
    direct = 32 * 32 * sum(v * v for row in res.to_list() for v in row)
    assert abs(energy - direct) <= 1e-9 * direct

    corr = sp.center_shift(sp.autocorrelation(res))
    assert corr.kind == "autocorr" and corr.centered and corr.normalized
    assert corr.at(16, 16) == 1.0
    crop = sp.central_crop(corr, 5)
    assert crop.shape == (5, 5)

    clean = [sp.residual(smooth(32, s)) for s in range(6)]
    dirty = [sp.residual(smooth(32, s, checker=0.1)) for s in range(6)]
    real = sp.fingerprint_fields(clean, "real")
    fake = sp.fingerprint_fields(dirty, "generated")
    assert fake.summary()["zero_lag_checkerboard"] > 0.5
    assert abs(real.summary()["zero_lag_checkerboard"]) < 0.1
    same = real.compare(real)
    assert all(v == 100.0 for k, v in same.items() if k not in ("reference", "candidate"))

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "power.mat")
        sp.write_matrix(real.power, path)
        back = sp.read_matrix(path)
        assert back.to_list() == real.power.to_list()
        assert back.kind == "power" and back.centered
        sp.heatmap_png(sp.log_normalize(back), os.path.join(tmp, "power.png"))
        try:
            sp.read_matrix(os.path.join(tmp, "missing.mat"))
        except OSError:
            pass
        else:
            raise AssertionError("missing file must raise OSError")

    try:
        sp.residual(a, "median:0")
    except ValueError:
        pass
    else:
        raise AssertionError("invalid denoiser must raise ValueError")

    print(json.dumps({"ok": True, "real": real.summary(), "generated": fake.summary()}, indent=2))


if __name__ == "__main__":
    main()
