"""Quick check that the extension imports and agrees with itself."""
import math

import hurwitz_means as hm


def main():
    z = hm.hurwitz_zeta(complex(0.5, 14.134725141734693), 1.0)
    assert abs(z) < 1e-9, z

    sp = hm.StripPoint(0.5, 40.0)
    ix = hm.integral_ix(sp, 2)
    assert abs(ix - 1.6372461497777233) < 1e-9, ix

    u, v = complex(0.75, 5.0), complex(0.6, -3.0)
    exact = hm.theorem1_jx(u, v, 2, n=2)
    oracle = hm.integral_jx(u, v, 2)
    assert abs(exact.value - oracle) < 1e-8, (exact, oracle)

    est = hm.corollary3_ix(400.0, 1)
    assert abs(est.value.real - hm.integral_ix(hm.StripPoint(0.5, 400.0), 1)) < 20 / 400

    assert hm.enumerate_a(20 * math.pi, 0.25) == [1, 2, 5, 9, 10]
    assert abs(hm.saffari_density(0.5) - (2 - 2 * math.log(2))) < 1e-12
    assert abs(hm.hyperbola_double_sum(10, 0.5) - 15.045634920634921) < 1e-12

    rows = hm.run_sweep("cor3", [0.5], [200.0, 400.0, 800.0], "1,2,4")
    assert len(rows) == 9 and all(r.error_flag == "" for r in rows)
    assert all(r.residual == abs(r.oracle - r.estimate) for r in rows)

    checks = hm.verify("lattice")
    assert all(c.passed for c in checks), checks

    try:
        hm.StripPoint(0.5, 0.5)
    except ValueError as e:
        assert "domain" in str(e)
    else:
        raise AssertionError("expected a domain error")

    print("smoke test ok:", [repr(c) for c in checks])


if __name__ == "__main__":
    main()
