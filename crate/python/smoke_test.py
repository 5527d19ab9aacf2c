"""Smoke test for the fpbprobe extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/fpbprobe-*.whl
"""

import math

import fpbprobe as fp


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    ids = fp.curve_ids()
    assert len(ids) == 6 and "helstrom_renyi2" in ids

    for cid in ids:
        close(fp.curve(cid, 0.0), 0.0, 1e-10)
        close(fp.curve(cid, fp.PE_MAX), 1.0, 1e-10)
        close(fp.curve(cid, 0.123), fp.curve_from_table(cid, 0.123), 1e-10)

    pe, gap = fp.max_gap("helstrom_renyi2", "conclusive")
    close(gap, 0.314, 0.005)
    pe, gap = fp.max_gap("helstrom_renyi_inf", "conclusive")
    close(gap, 0.482, 0.005)
    assert 1.9 < fp.small_pe_ratio(1e-4) < 2.0

    table = fp.joint_table(1 / 6, "helstrom")
    joint = table.joint
    assert not table.empirical
    close(fp.mutual_information(joint), fp.curve("helstrom_shannon", 1 / 6), 1e-12)
    close(fp.renyi_mutual_information(joint, math.inf), fp.curve("helstrom_renyi_inf", 1 / 6), 1e-12)

    usd = fp.joint_table(0.2, "conclusive").joint
    assert usd.col_labels == ["0", "1", "?"]
    for alpha in (0.5, 1.0, 2.0, math.inf):
        close(fp.renyi_mutual_information(usd, alpha), fp.curve("conclusive", 0.2), 1e-10)
    close(fp.renyi_mutual_information(usd, math.inf, "eve_given_bob"), 0.0, 1e-12)

    close(fp.shannon_entropy([0.5, 0.5]), 1.0, 1e-15)
    close(fp.renyi_entropy([0.9, 0.1], 2.0), 0.286304185156641, 1e-12)

    sim = fp.simulate(0.2, "conclusive", 200_000, seed=7)
    assert sim.empirical and sim.seed == 7 and sim.retained > 0
    assert sim.joint.get(0, 1) == 0.0 and sim.joint.get(1, 0) == 0.0
    assert fp.simulate(0.2, "conclusive", 200_000, seed=7).joint.table() == sim.joint.table()

    for bad in (lambda: fp.curve("nope", 0.1), lambda: fp.kappa(0.5), lambda: fp.simulate(0.1, "x", 10)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("fpbprobe smoke test passed")


if __name__ == "__main__":
    main()
