"""Smoke test for the `miura` extension module.

Build the module first, e.g. `maturin develop -m crates/python/Cargo.toml`,
or `cargo build -p miura-py --release` and put `target/release/libmiura.so`
on the path as `miura.so`.
"""

import json

import miura


def main():
    tripod = miura.Graph.builtin("tripod")
    assert tripod.graph_type() == (0, 3)
    assert tripod.marking == ["l1", "l2", "l3"]
    assert tripod.validate()["valid"]

    assert miura.inv(11, 10) == 1
    assert miura.inv(5, 0) == 0
    assert miura.mu_value(11, 9) == 4

    for p in (3, 5, 7, 11, 13):
        assert miura.count(tripod, p, "strict")["total"] == p * (p - 1) // 2

    loop = miura.Graph.builtin("loop_with_leg")
    sols = miura.enumerate(loop, 7, "strict")
    assert len(sols) == 6
    assert all(s["exponent"] == [6] for s in sols)
    assert miura.enumerate(loop, 7, "strict", constraint=[-1]) == sols
    assert miura.enumerate(loop, 7, "strict", constraint=[2]) == []

    theta = miura.Graph.builtin("theta")
    assert miura.count(theta, 11, "strict", method="contraction")["total"] == 0
    assert theta.betti() == 2

    cycle = miura.Graph.builtin("cycle:3")
    report = miura.count(cycle, 5, "strict", by_exponent=True)
    assert report["by_exponent"] == [{"exponent": [4, 4, 4], "count": 4}]

    numbering = {
        "p": 11,
        "kind": "strict",
        "branch_values": {"l1.0": 1, "l1.1": 10, "l2.0": 2, "l2.1": 9, "l3.0": 9, "l3.1": 2},
    }
    image = miura.miura_transform(tripod, json.dumps(numbering))
    assert image["edge_values"] == {"l1": 0, "l2": 4, "l3": 4}
    assert image["radii"] == [0, 4, 4]

    bad = dict(numbering, branch_values={"l1.0": 0, "l1.1": 0, "l2.0": 2, "l2.1": 9, "l3.0": 9, "l3.1": 2})
    try:
        miura.miura_transform(tripod, json.dumps(bad))
    except ValueError:
        pass
    else:
        raise AssertionError("non-strict input accepted")

    assert miura.check_pp004(13)["holds"]
    assert miura.verify("figure")["status"] == "pass"
    assert miura.verify("p048", 7, miura.Graph.builtin("dumbbell"))["status"] == "pass"
    assert miura.verify("p048", 7, tripod)["status"] == "not_applicable"
    assert miura.verify("structure", 5, cycle)["status"] == "pass"

    round_trip = miura.Graph.from_json(loop.to_json())
    assert round_trip.to_json() == loop.to_json()
    assert len(miura.corpus()) == 10

    print("python smoke test ok")


if __name__ == "__main__":
    main()
