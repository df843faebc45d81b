"""Smoke test for the Python bindings.

Build the extension and make it importable, for example:

    cargo build -p outfn-euler-py --release --features extension-module
    cp target/release/liboutfn_euler_py.so python/outfn_euler_py.so
    python3 python/smoke_test.py
"""

import json
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import outfn_euler_py as oe  # noqa: E402


def main():
    table = oe.chi_table(5)
    assert [row[1] for row in table] == [
        Fraction(-1, 24),
        Fraction(-1, 48),
        Fraction(-161, 5760),
        Fraction(-367, 5760),
        Fraction(-120257, 580608),
    ]
    assert table[1][2] == Fraction(-23, 1152)
    assert oe.chi_table(3, route="implicit") == table[:3]
    assert oe.euler_characteristic(2) == Fraction(-1, 24)
    assert oe.routes_agree(12)

    classes = oe.enumerate(1)
    assert sorted(aut for _, aut in classes) == [8, 8, 12]
    assert sum(g.character("tau") / aut for g, aut in classes) == Fraction(-1, 24)
    assert oe.character_sum(1, character="sigma") == Fraction(-1, 12)
    assert oe.character_sum(2, character="tau") == table[1][1]

    theta = oe.Graph.theta(3)
    assert theta.automorphisms() == 12 and theta.loop_order == 1 and theta.is_core()
    again = oe.Graph.from_json(theta.to_json())
    assert again.isomorphic(theta) and not again.isomorphic(oe.Graph.rose(2))

    report = json.loads(oe.run_verify("hopf", depth=2))
    assert report["status"] == "pass", report

    rows = oe.theorem_a([125, 250])
    assert all(r > 0 for _, r in rows)
    assert oe.theorem_b(100, 2) > 0

    try:
        oe.chi_table(0)
    except RuntimeError:
        pass
    else:
        raise AssertionError("max_n = 0 accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
