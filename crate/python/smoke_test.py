"""Smoke test for the cotrank Python extension.

Build and install first:
    cd crates/python && maturin build --release -o dist && pip install dist/*.whl
"""

import math
import tempfile
from pathlib import Path

import cotrank


def close(a, b, tol=1e-9):
    return all(math.isclose(x, y, abs_tol=tol) for x, y in zip(a, b)) and len(a) == len(b)


def test_rankings():
    m = cotrank.DecisionMatrix(["a", "b"], [("x", "max"), ("y", "max")], [[10, 5], [5, 10]])
    saw = cotrank.rank(m, "saw", [0.7, 0.3])
    assert saw.ids == ["a", "b"] and close(saw.scores, [0.7, 0.3])

    m = cotrank.DecisionMatrix(["p", "q"], [("x", "max"), ("y", "max")], [[1, 1], [0, 0]])
    assert close(cotrank.rank(m, "topsis").scores, [1.0, 0.0])

    m = cotrank.DecisionMatrix(
        ["l", "mid", "r"], [("x", "max"), ("y", "max")], [[1, 3], [2, 2], [3, 1]]
    )
    vikor = cotrank.rank(m, "VIKOR", [0.5, 0.5], vikor_v=0.5)
    assert not vikor.higher_is_better
    assert vikor.ids == ["mid", "l", "r"] and close(vikor.scores, [0.5, 0.0, 0.5])
    assert vikor.top_k(1) == ["mid"]


def test_fronts_and_onvgr():
    m = cotrank.DecisionMatrix(
        [f"p{i}" for i in range(5)],
        [("f1", "min"), ("f2", "min")],
        [[1, 1], [1, 2], [2, 1], [2, 2], [3, 0]],
    )
    fronts = cotrank.pareto_fronts(m)
    assert fronts == cotrank.brute_force_fronts(m)
    assert fronts.fronts == [[0, 4], [1, 2], [3]]
    assert fronts.front(1) == ["p0", "p4"]
    per_front = cotrank.onvgr(["p0", "p1"], fronts)
    assert per_front == [(1, 2, 1, 0.5), (2, 2, 1, 0.5), (3, 1, 0, 0.0)]

    s = cotrank.summarize([0.1, 0.7, 0.3, 0.9, 0.2, 0.05, 0.6, 0.95, 0.0, 0.4])
    assert close([s["q1"], s["median"], s["q3"]], [0.125, 0.35, 0.675], 1e-12)


def test_catalog_and_experiment():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        catalog = cotrank.Catalog.generate(400, 7)
        catalog.save(tmp / "c.jsonl")
        assert cotrank.Catalog.load(tmp / "c.jsonl") == catalog
        assert all(0 <= b <= 100 for b in catalog.column("battery"))
        m = catalog.matrix(["battery", "price", "drift"])
        assert m.shape == (400, 3)
        assert cotrank.pareto_fronts(m) == cotrank.brute_force_fronts(m)

        plan = cotrank.ExperimentPlan()
        plan.replications = 2
        plan.generate_catalog(300, 3)
        records = plan.run(tmp / "run")
        again = cotrank.ExperimentPlan.from_toml(plan.to_toml()).run()
        assert records == again
        header = (tmp / "run" / "results.csv").read_text().splitlines()[0]
        assert header == cotrank.RESULTS_HEADER
        assert {r["algorithm"] for r in records} == {"SAW", "TOPSIS", "VIKOR"}
        assert all(0.0 <= r["onvgr"] <= 1.0 for r in records)

    try:
        cotrank.rank(m, "topsis", [0.2, 0.2, 0.2])
    except ValueError as e:
        assert "weights" in str(e)
    else:
        raise AssertionError("bad weights accepted")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok {name}")
