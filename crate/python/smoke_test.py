#!/usr/bin/env python3
"""Smoke test for the fano_py extension module.

Builds the cdylib with cargo, stages it under the import name
`fano_py.so`, and exercises one call from each binding group against
known values. Run from anywhere:

    python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_and_stage(stage_dir: Path) -> None:
    subprocess.run(["cargo", "build", "-p", "fano-py"], cwd=ROOT, check=True)
    built = ROOT / "target" / "debug" / "libfano_py.so"
    if not built.exists():  # e.g. macOS
        built = ROOT / "target" / "debug" / "libfano_py.dylib"
    shutil.copy(built, stage_dir / "fano_py.so")


def approx(got, want, tol=1e-9):
    assert abs(got - want) <= tol, f"got {got!r}, want {want!r} +/- {tol}"


def main() -> None:
    with tempfile.TemporaryDirectory() as stage:
        build_and_stage(Path(stage))
        sys.path.insert(0, stage)
        import fano_py as fp

        # scalar divergences and extended-real conventions
        approx(fp.kl_bernoulli(0.5, 0.25), 0.14384103622589042, 1e-15)
        assert fp.kl_bernoulli(0.5, 0.0) == math.inf
        assert fp.chi2_bernoulli(0.25, 0.25) == 0.0
        approx(fp.hellinger2_bernoulli(0.0, 1.0), 2.0, 0.0)

        # finite distributions, including a singular part
        approx(fp.divergence("kl", [0.5, 0.5], [0.25, 0.75]),
               fp.kl_bernoulli(0.5, 0.25), 1e-15)
        assert fp.divergence("kl", [1.0, 0.0], [0.0, 1.0]) == math.inf
        approx(fp.divergence("hellinger", [1.0, 0.0], [0.0, 1.0]), 2.0, 0.0)

        # solved bounds are sound at a spot point and accept inf
        p, q = 0.6, 0.2
        kl = fp.kl_bernoulli(p, q)
        for bound in (fp.lb_classic(kl, q), fp.lb_refined(kl, q),
                      fp.lb_affine(kl, q), fp.lb_kl_sqrt(kl, q),
                      fp.lb_chi2(fp.chi2_bernoulli(p, q), q),
                      fp.lb_hellinger(fp.hellinger2_bernoulli(p, q), q),
                      fp.kl_inverse(q, kl)):
            assert bound >= p - 1e-9, f"bound {bound} below p={p}"
        assert fp.lb_refined(kl, q) <= fp.lb_classic(kl, q)
        assert fp.lb_classic(math.inf, q) == 1.0
        assert fp.kl_inverse(q, math.inf) == 1.0
        approx(fp.pinsker_factor(0.5), 2.0, 1e-12)
        approx(fp.binary_entropy(0.5), math.log(2.0), 1e-15)
        assert fp.bretagnolle_huber_q_lower(p, kl) <= q + 1e-12

        # reduction front end
        bounds = fp.fano_bounds([(0.5, 0.9, 0.2, 0.05), (0.5, 0.8, 0.3, 0.07)])
        approx(bounds["q_bar"], 0.25, 1e-15)
        approx(bounds["d_bar"], 0.06, 1e-15)
        for name in ("classic", "refined", "affine", "kl_sqrt",
                     "kl_sqrt_max", "chi2", "hellinger"):
            assert 0.0 <= bounds[name] <= 1.0, (name, bounds[name])
        assert fp.haroutunian_q_lower(0.8, 1.0) > 0.0

        # constant tables
        approx(fp.birge_c(2), 0.7587, 5e-4)
        approx(fp.birge_d(2), 0.7428, 5e-4)
        approx(fp.massart_constant(), 1.0 - 0.5 / math.e, 1e-15)

        # applications
        c1, rho1 = fp.posterior_constant(1)
        assert c1 <= 0.55 and rho1 > 1.0
        approx(fp.psi_gaussian(0.2, 1.0), 0.08, 1e-15)
        assert 0.0 < fp.posterior_dd_bound(0.08, 10, 2.0) < 1.0
        r = fp.sparse_regret_bound(16, 4, 1600)
        approx(r["bound"], 1.0406932639471222, 1e-12)
        assert r["regime"] == "large_horizon"
        emp, lim = fp.cramer_rate(0.5, 0.75, 1000)
        assert emp <= lim < 0.0
        r8 = fp.sparse_regret_bound(8, 2, 64)
        mc = fp.mc_regret(8, 2, 64, r8["epsilon_used"], "uniform",
                          trials=20, seed=0)
        assert mc["samples"] == 160

        # verification suite
        reports = fp.run_verify(seed=0, budget="quick")
        assert len(reports) >= 20 and all(rep["passed"] for rep in reports)

        # validation errors surface as ValueError
        for bad in (lambda: fp.kl_bernoulli(1.5, 0.5),
                    lambda: fp.divergence("nope", [1.0], [1.0]),
                    lambda: fp.birge_c(1),
                    lambda: fp.kl_inverse(0.5, -1.0)):
            try:
                bad()
            except ValueError:
                pass
            else:
                raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
