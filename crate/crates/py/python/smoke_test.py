"""Smoke test for the minkowski_py extension module.

Build and install first, e.g. ``maturin develop --release`` from crates/py,
then run ``python python/smoke_test.py``.
"""

import math

import minkowski_py as mk


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def main():
    p0 = mk.davis_constant()
    close(p0, 2.5725, 1e-3)

    c = mk.Configuration(2.0)
    close(c.tau_p, 2.0 - math.sqrt(3.0), 1e-10)
    close(c.sigma_p, math.sqrt(3.0), 1e-12)
    close(c.critical_determinant, math.sqrt(3.0) / 2.0, 1e-10)
    assert c.class_name == "Davis", c
    assert len(c.contact_points()) == 6

    assert mk.classify(1.5) == "Minkowski"
    assert mk.classify(2.3) == "Davis"
    assert mk.classify(3.0) == "ChebyshevCohn"

    close(mk.critical_determinant(1.0), 0.5, 1e-12)
    close(mk.critical_determinant(3.0, 2), 16.0 * mk.critical_determinant(3.0), 1e-9)

    area, det, density = mk.packing_density(2.0)
    close(area, math.pi, 1e-10)
    close(density, math.pi / math.sqrt(12.0), 1e-9)
    close(mk.packing_density(1.0)[2], 1.0, 1e-12)

    inscribed, circumscribed = mk.hexagon_areas(3.0)
    delta = mk.critical_determinant(3.0)
    close(inscribed, 3.0 * delta, 1e-9)
    close(circumscribed, 4.0 * delta, 1e-6)
    assert mk.hexagon_areas(1.0)[1] is None

    sigma, tau, d = mk.oracle_min(2.3)
    close(d, mk.critical_determinant(2.3), 1e-6)

    csv = mk.sweep_csv(1.0, 4.0, 31, oracle_grid=200)
    lines = csv.strip().split("\n")
    assert lines[0] == "p,class,branch,delta,density,ihma,shma,oracle_delta,oracle_gap"
    assert len(lines) == 32
    assert max(abs(float(l.split(",")[8])) for l in lines[1:]) < 1e-6

    assert mk.render("moduli", 3.0).startswith("<svg")
    assert mk.limit_membership(2.0, 3.0, 0.0) == (True, 2)

    try:
        mk.Configuration(0.5)
    except ValueError as e:
        assert "p must be" in str(e)
    else:
        raise AssertionError("p < 1 accepted")

    passed, report = mk.verify()
    assert passed, report
    print("smoke test passed")


if __name__ == "__main__":
    main()
