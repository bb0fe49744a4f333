"""Smoke test for the pyorbipar extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/orbipar-py/Cargo.toml -o dist
    pip install dist/pyorbipar-*.whl
"""

import json

import pyorbipar as op


def main():
    f25 = op.Field(5, 2)
    k2 = op.Extension.kummer(f25, 2, 16)
    assert k2.verify() is None
    assert k2.order == 2 and k2.ram_index == 2 and k2.is_tame

    one = op.Datum.trivial(k2, 1)
    v = op.Datum.sign_twist(k2)
    assert v.validate() is None
    assert not v.is_induced()
    assert v.roundtrip()
    assert v.weights() == (2, [(1, 1)], 0)
    assert v.isomorphic(one) is False
    assert v.tensor(v).isomorphic(one) is True
    assert v.dual().dual().isomorphic(v) is True

    f7 = op.Field(7)
    k3 = op.Extension.kummer(f7, 3, 16)
    w = op.Datum.random(k3, [0, 1, 2], base_power=0, seed=5)
    assert w.rank == 3 and w.validate() is None and w.roundtrip()
    n, weights, defect = w.weights()
    assert n == 3 and defect == 0 and sum(m for _, m in weights) == 3

    a2 = op.Extension.artin_schreier(op.Field(2), 16)
    assert a2.verify() is None and not a2.is_tame
    try:
        op.Datum.trivial(a2, 1).weights()
    except ValueError as e:
        assert "wild" in str(e)
    else:
        raise AssertionError("weights at a wild point should fail")

    for name in op.demos():
        code, report = op.run_scenario(op.demo_scenario(name))
        assert code == 0, (name, report)
        again = op.run_scenario(op.demo_scenario(name))
        assert again == (code, report)
        assert json.loads(report)["name"] == name

    print("pyorbipar smoke test: ok")


if __name__ == "__main__":
    main()
