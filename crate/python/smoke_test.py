#!/usr/bin/env python3
"""Smoke test for the `_kfburst` extension module.

Builds the cdylib if needed, loads it, and exercises the main types and
operations against known values. Exits non-zero on the first failure.

Usage: python3 python/smoke_test.py [--debug]
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module(profile: str):
    so = ROOT / "target" / profile / "lib_kfburst.so"
    if not so.exists():
        args = ["cargo", "build", "-p", "kfburst-py"]
        if profile == "release":
            args.append("--release")
        subprocess.run(args, cwd=ROOT, check=True)
    staging = Path(tempfile.mkdtemp(prefix="kfburst-smoke-"))
    shutil.copy2(so, staging / "_kfburst.so")
    sys.path.insert(0, str(staging))
    import _kfburst  # noqa: E402

    return _kfburst


checks = []


def check(name, ok, detail=""):
    checks.append((name, bool(ok)))
    status = "ok" if ok else "FAIL"
    print(f"  {name:<42s} {status} {detail}")


def main():
    profile = "debug" if "--debug" in sys.argv else "release"
    kf = load_module(profile)
    print(f"loaded _kfburst {kf.__version__} ({profile})")

    p2 = kf.ModelParams(1.0, 2.0, 0.2)
    check("alpha derived", p2.alpha == 2.0 and p2.integer_alpha == 2)

    try:
        kf.ModelParams(0.0, 1.0, 1.0)
        check("rejects beta = 0", False)
    except ValueError:
        check("rejects beta = 0", True)

    # atom bookkeeping
    amp = kf.singular_amplitude(p2, 1.0)
    check("atom mass e^{-2}", abs(amp - math.exp(-2)) < 1e-14, f"{amp:.12f}")
    check("atom location", abs(kf.atom_location(p2, 1.0, 3.0) - 3 * math.exp(-1)) < 1e-14)

    # kernel values: the two-burst closed form at t=1, xbar=1
    g = kf.green_regular(p2, 1.0, 1.0, 0.0)
    check("kernel value (finite sum)", abs(g - 0.089242240924583747) < 1e-13, f"{g:.12f}")

    # fractional alpha goes through the series; frozen 30-digit reference
    p15 = kf.ModelParams(1.0, 1.5, 1.0)
    g = kf.green_regular(p15, 1.0, 1.0, 0.0)
    check("kernel value (series)", abs(g - 0.29173360770845294) < 1e-12, f"{g:.12f}")

    # Laplace image and inversion agree with the series
    im = kf.laplace_image(p15, 1.0, 0.0, 1.0, 0.0)
    check("image real at real w", abs(im[1]) < 1e-15)
    inv, est = kf.laplace_green_regular(p15, 1.0, 1.0, 0.0)
    check("inversion matches series", abs(inv - g) < 1e-6 * abs(g), f"err_est {est:.1e}")

    # stationary density and mode
    check("stationary mode (alpha-1)/k", kf.stationary_mode(p2) == 5.0)
    p1 = kf.ModelParams(1.0, 1.0, 0.2)
    check("stationary mode at origin", kf.stationary_mode(p1) is None)
    check(
        "stationary density",
        abs(kf.stationary_density(p2, 5.0) - 0.073575888234288464) < 1e-14,
    )

    # Cauchy problem for phi = x e^{-x}
    phi = kf.InitialDensity.gamma_like(1.0, 1.0)
    check("phi mean", abs(phi.mean() - 2.0) < 1e-12)
    check("phi is C1", phi.is_c1())
    grid = [i * 0.25 for i in range(41)]
    sol = kf.solve(p2, phi, 1.0, grid)
    check("solution mass", abs(sol.total_mass - 1.0) < 1e-6, f"{sol.total_mass:.9f}")
    v8 = sol.regular_values[8]  # x = 2.0, frozen 30-digit reference
    check("solution value", abs(v8 - 0.0937875269365650) < 1e-8, f"{v8:.10f}")
    cf = kf.closed_form_solution(p2, phi, 1.0, 2.0)
    check("closed form agrees", abs(cf - v8) < 1e-8)
    m = kf.solution_mean(p2, phi, 1.0)
    want = (2.0 - 10.0) * math.exp(-1) + 10.0
    check("moment formula", abs(m - want) < 1e-12)

    # a Dirac start keeps its atom explicit
    dirac = kf.InitialDensity.dirac(1.0)
    sol = kf.solve(p2, dirac, 2.0, [0.0, 1.0, 2.0])
    (loc, mass), = sol.atoms
    check("transported atom", abs(loc - math.exp(-2)) < 1e-14 and abs(mass - math.exp(-4)) < 1e-14)
    f = kf.solution_cdf(p2, dirac, 2.0, 3.0)
    check("analytic cdf", abs(f - 0.20492475483844295) < 1e-9, f"{f:.10f}")

    # Monte Carlo cross-check at modest n
    r = kf.mc_run(p2, dirac, 2.0, 50_000, 123)
    check("mc ks distance", r["ks_distance"] < 8e-3, f"{r['ks_distance']:.2e}")
    z = abs(r["mean"] - kf.solution_mean(p2, dirac, 2.0)) / r["mean_std_err"]
    check("mc mean z-score", z < 4.0, f"z = {z:.2f}")
    det = kf.mc_run(p2, dirac, 2.0, 50_000, 123)
    check("mc determinism", det["mean"] == r["mean"])

    # PDE solver approaches the stationary profile
    centers, values, drift = kf.pde_solve(p2, phi, 90.0, 1024, 10.0)
    l1 = sum(
        abs(v - kf.stationary_density(p2, x)) for x, v in zip(centers, values)
    ) * (centers[1] - centers[0])
    check("pde stationary L1", l1 < 1.5e-2, f"{l1:.2e} (drift {drift:.1e})")

    failed = [n for n, ok in checks if not ok]
    print()
    if failed:
        print(f"FAILED: {len(failed)}/{len(checks)} checks: {', '.join(failed)}")
        return 1
    print(f"all {len(checks)} checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
