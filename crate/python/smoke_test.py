#!/usr/bin/env python3
"""Smoke test for the fracspec Python bindings.

Builds nothing itself: expects the extension module to have been produced by

    cargo build --release -p fracspec-python

and copies the cdylib next to this script under the importable name.
"""

import math
import pathlib
import shutil
import sys

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent


def stage_module():
    candidates = [
        ROOT / "target" / "release" / "libfracspec.so",
        ROOT / "target" / "release" / "libfracspec.dylib",
        ROOT / "target" / "debug" / "libfracspec.so",
    ]
    for src in candidates:
        if src.exists():
            dst = HERE / ("fracspec" + (".so" if src.suffix != ".dylib" else ".so"))
            shutil.copyfile(src, dst)
            return dst
    sys.exit("extension module not found; run: cargo build --release -p fracspec-python")


def main():
    stage_module()
    sys.path.insert(0, str(HERE))
    import fracspec

    checks = []

    def check(name, ok, detail=""):
        checks.append((name, ok))
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")

    # constant bundle and its cross identity
    c = fracspec.constants(2, 1.0)
    check("constants c_ns = 1/pi", abs(c["c_ns"] - 1.0 / math.pi) < 1e-14)
    ident = c["gamma_ns"] / fracspec.gamma(1.5)
    check("constant identity", abs(c["c_ns"] - ident) / c["c_ns"] < 1e-12)

    # circle spectral count
    circle = fracspec.Measure.subtorus(2, 1, [0.25])
    check("circle N(100) = 31", fracspec.kuznecov_sum(circle, 100.0) == 31.0)
    lams, vals = fracspec.kuznecov_sweep(circle, [10.0, 100.0, 1000.0])
    check("circle sweep", vals == [3.0, 31.0, 319.0])

    # heat sum scaling: H(t) sqrt(t) -> 1/(2 sqrt(pi))
    h = fracspec.heat_sum(circle, 1e-4)
    check(
        "heat scaling",
        abs(h * math.sqrt(1e-4) - 0.5 / math.sqrt(math.pi)) < 1e-3,
        f"H sqrt(t) = {h * 1e-2:.6f}",
    )

    # exact circle profile: F(r) = 2r, I_1/2 = 2 sqrt(2)
    prof = fracspec.Profile.exact(circle)
    check("profile F(0.1) = 0.2", abs(prof.f(0.1) - 0.2) < 1e-14)
    e = prof.riesz_layercake(0.5)
    check("circle I_1/2", abs(e - 2.0 * math.sqrt(2.0)) / e < 1e-5, f"I = {e:.8f}")

    # digit measure: exact log-periodicity of the renewal profile
    cantor = fracspec.Measure.digit(2, 3, [0, 2], [0.5])
    check(
        "cantor dimension",
        abs(cantor.dimension - math.log(2) / math.log(3)) < 1e-14,
    )
    ren = fracspec.Profile.renewal(cantor)
    r = 0.21
    check(
        "renewal log-periodicity",
        abs(ren.a(r) - ren.a(r / 3.0)) < 1e-12,
        f"a({r}) = {ren.a(r):.12f}",
    )

    # verdicts: circle converges, cantor oscillates
    rep = fracspec.sweep_report(circle, 40.0, 4000.0)
    check("circle verdict", rep["verdict"] == "converges", rep["verdict"])
    rep = fracspec.sweep_report(cantor, 200.0, 4000.0, per_decade=40, period=3.0)
    check(
        "cantor verdict",
        rep["verdict"] == "oscillates" and rep["amplitude_final"] > 0.02,
        f"amplitude {rep['amplitude_final']:.4f}",
    )
    check(
        "cantor exponent",
        abs(rep["fitted_exponent"] - (2.0 - math.log(2) / math.log(3))) < 0.03,
        f"fit {rep['fitted_exponent']:.4f}",
    )

    # Monte Carlo energy agrees with the exact layer cake
    val, se = fracspec.riesz_montecarlo(circle, 0.5, 200_000, 11)
    check(
        "circle MC energy",
        abs(val - 2.0 * math.sqrt(2.0)) < 4.0 * se,
        f"{val:.4f} +- {se:.4f}",
    )

    failed = [n for n, ok in checks if not ok]
    print(f"\n{len(checks) - len(failed)}/{len(checks)} checks passed")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
