"""Quick check that the vho extension loads and agrees with the CLI."""

import math
import os
import sys

import vho

HERE = os.path.dirname(os.path.abspath(__file__))


def close(a, b, tol=1e-6):
    return math.isclose(a, b, abs_tol=tol)


def main():
    ranked = vho.topsis_rank(
        ["N1", "N2", "N3"],
        [[10, 50, 5, 2000], [4, 20, 2, 1000], [20, 80, 8, 5000]],
        [0.2, 0.3, 0.1, 0.4],
        ["c", "c", "c", "b"],
    )
    assert [r[0] for r in ranked] == ["N3", "N2", "N1"], ranked
    assert close(ranked[0][1], 0.546937), ranked

    try:
        vho.validate_weights([0.5, 0.6])
    except ValueError:
        pass
    else:
        raise AssertionError("weights summing to 1.1 were accepted")

    assert vho.nqv_local([30, 150, 5, 64], [5, 40, 2, 5000], [0.3, 0.3, 0.1, 0.3]) == 1.0
    assert vho.processing_delay("CVHD", 4) == 43.0
    assert vho.processing_delay("DVHD", 4) == 13.0
    lot = vho.trust_update(1.0, [60, 300, 8, 32], [30, 150, 5, 64])
    assert close(lot, 0.8), lot

    sc = vho.Scenario.table1()
    assert sc.station_ids == ["BS1", "BS2", "BS3", "BS4"]
    sc.scheme = "TDVHD"
    row = sc.run()
    assert row["scheme"] == "TDVHD" and row["n_vns"] == 4, row
    assert sc.events_csv() == sc.events_csv()
    rows = sc.compare()
    assert len(rows) == 9

    liar = vho.Scenario.from_file(os.path.join(HERE, "..", "scenarios", "liar_honest.scn"))
    assert liar.run()["handover_events"] == 4
    again = vho.Scenario.from_str(liar.to_text())
    assert again.run() == liar.run()

    print("vho smoke test ok:", sc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
