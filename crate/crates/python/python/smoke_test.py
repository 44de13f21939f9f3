"""Smoke test for the pytrace_afe extension module.

Build the module and put it on PYTHONPATH first, e.g.

    cargo build --release -p trace-afe-py --features extension-module
    mkdir -p /tmp/pyext && cp target/release/libpytrace_afe.so /tmp/pyext/pytrace_afe.so
    PYTHONPATH=/tmp/pyext python3 crates/python/python/smoke_test.py
"""

import json
import math
from fractions import Fraction

import pytrace_afe as t


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b, tol)


def main():
    print("pytrace_afe", t.__version__)

    assert t.kronecker(-4, 3) == -1
    assert t.decompose_discriminant(-48) == (4, -3)
    assert t.is_fundamental(-23) and not t.is_fundamental(-12)
    assert t.discriminant([1, -2]) == 9  # X^2 - X - 2 = (X - 2)(X + 1)
    assert t.factor_type_mod_p([1, 2], 11) == ([1, 1], False)

    value, err = t.l_value(-4, route="afe")
    close(value, math.pi / 4, max(err, 1e-9))
    close(t.l_value(-23, route="cnf")[0], 3 * math.pi / math.sqrt(23), 1e-12)
    close(t.l_value(5, tol=1e-9)[0], 2 * math.log((1 + math.sqrt(5)) / 2) / math.sqrt(5), 1e-9)
    assert t.class_number(-23) == 3

    a, b = t.afe_quadratic(-7, 0.5, 0.5), t.afe_quadratic(-7, 0.5, 2.0)
    close(a[0], b[0], a[1] + b[1] + 1e-12)
    close(t.gamma_abs(0.5, 0.0), math.sqrt(math.pi), 1e-12)
    v, _ = t.cutoff_v(4.0)
    assert 0 < v < 1e-3

    assert t.padic_orbital_product(0, 1, 2, 2) == Fraction(3)
    report = t.verify_lfun_sum(0, 1, 2, 2, 1e-6)
    close(report["lhs"], 3 * math.pi / 8, 1e-6)
    assert report["passed"]

    rows = t.elliptic_table(2, 2, 10)
    assert any(r["delta"] == -16 and r["d_e"] == -4 for r in rows)

    split = t.residue_split_check(2, 1, 3, 1, -1, 32)
    assert split["discrepancy"] < 1e-12

    assert t.kottwitz_gl3(2, 1) == 85
    assert t.kottwitz_gl3(3, 1, "ramified", 1) == 157

    probe = t.smoothing_probe(2, 1, [2.0], 0.5)
    assert probe["values"]["passed"] and probe["partials"]["passed"]

    code, out = t.run_cli(["lvalue", "-D", "-4", "--route", "cnf"])
    assert code == 0
    close(json.loads(out)["rows"][0]["value"], math.pi / 4, 1e-12)
    assert t.run_cli(["lvalue", "-D", "1"])[0] == 2

    try:
        t.l_value(1)
    except ValueError:
        pass
    else:
        raise AssertionError("square discriminant accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
