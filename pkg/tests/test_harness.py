import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from irdp import classic
from irdp.encode import adversarial_instance
from irdp.evaluate import expected_utility
from irdp.harness import (
    BAND_HEADER,
    ConfigResult,
    ExperimentConfig,
    InstanceSpec,
    RunResult,
    aggregate,
    aggregate_values,
    average_ranks,
    band_csv,
    default_grid,
    init_seed,
    lower_median,
    select,
    summary_csv,
    sweep,
    values_csv,
)
from irdp.model import Strategy, save_file
from irdp.optimize import GAP_REACHED, MAX_ITERATIONS, Kind, OptimizerConfig, TerminationCriteria, run, uniform_random_strategy

OPT = 4000 / 2187
K2 = [Kind.PGD, Kind.RM]
K3 = [Kind.PGD, Kind.RM, Kind.AMS]


def rows(values, times):
    return aggregate_values(values, times)


# ---------------------------------------------------------------- aggregate


def test_aggregate_forced_order():
    a = rows([{Kind.PGD: 2.0, Kind.RM: 1.0}], [{Kind.PGD: 1.0, Kind.RM: 1.0}])
    assert [r.avg_value_rank for r in a] == [1.0, 2.0]
    assert [r.pct_best_value for r in a] == [100.0, 0.0]


def test_aggregate_value_tie():
    a = rows([{Kind.PGD: 1.00004, Kind.RM: 1.0}], [{Kind.PGD: None, Kind.RM: None}])
    assert [r.avg_value_rank for r in a] == [1.5, 1.5]
    assert [r.pct_best_value for r in a] == [100.0, 100.0]


def test_aggregate_unconverged_share_bottom():
    a = rows([{k: 1.0 for k in K3}], [{Kind.PGD: 5.0, Kind.RM: None, Kind.AMS: None}])
    assert [r.avg_convergence_rank for r in a] == [1.0, 2.5, 2.5]
    assert [r.pct_converged for r in a] == [100.0, 0.0, 0.0]
    assert [r.pct_best_convergence for r in a] == [100.0, 0.0, 0.0]


def test_aggregate_errors():
    with pytest.raises(ValueError):
        aggregate_values([], [])
    with pytest.raises(ValueError):
        aggregate_values([{Kind.PGD: 1.0}], [{Kind.PGD: 1.0}])


def test_average_ranks():
    assert average_ranks([3.0, 1.0, 2.0]) == [3.0, 1.0, 2.0]
    assert average_ranks([1.0, 1.0, 2.0]) == [1.5, 1.5, 3.0]
    assert average_ranks([math.inf, 1.0, math.inf]) == [2.5, 1.0, 2.5]


table = st.integers(2, 5).flatmap(lambda k: st.lists(
    st.tuples(st.lists(st.floats(-10, 10), min_size=k, max_size=k),
              st.lists(st.one_of(st.none(), st.floats(0.001, 100)), min_size=k, max_size=k)),
    min_size=1, max_size=6))


@given(table)
def test_aggregate_sanity(data):
    kinds = list(Kind)[: len(data[0][0])]
    values = [dict(zip(kinds, v)) for v, _ in data]
    times = [dict(zip(kinds, t)) for _, t in data]
    agg = aggregate_values(values, times)
    assert len(agg) == len(kinds)
    for a in agg:
        for pct in (a.pct_best_value, a.pct_converged, a.pct_best_convergence):
            assert 0 <= pct <= 100
        for r in (a.avg_value_rank, a.avg_convergence_rank):
            assert 1 <= r <= len(kinds)
    # every instance contributes once: rank sums are fixed
    n = len(data)
    assert sum(a.avg_value_rank for a in agg) * n == pytest.approx(n * len(kinds) * (len(kinds) + 1) / 2)


# ---------------------------------------------------------------- medians / selection


def test_lower_median():
    assert lower_median([4, 1, 3, 2]) == 2
    assert lower_median([3, 1, 2]) == 2
    assert lower_median([5]) == 5


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=30))
def test_lower_median_order_statistic(xs):
    m = lower_median(xs)
    assert m in xs
    assert sum(x <= m for x in xs) >= (len(xs) + 1) // 2
    assert sum(x >= m for x in xs) >= len(xs) // 2 + 1


def fake_runs(specs):
    # (converged, iterations, gap) triples
    return [RunResult(0, GAP_REACHED if c else MAX_ITERATIONS, it, 1.0, g, it / 1000, np.zeros((0, 3))) for c, it, g in specs]


def test_select_fastest_then_smallest_gap():
    a = ConfigResult(OptimizerConfig(Kind.PGD, 1.0), fake_runs([(True, 50, 0), (False, 9, 1), (True, 40, 0)]))
    b = ConfigResult(OptimizerConfig(Kind.PGD, 0.1), fake_runs([(True, 30, 0), (True, 90, 0), (False, 9, 1)]))
    assert a.median_iterations == 50 and b.median_iterations == 90
    assert select([a, b]) is a
    c = ConfigResult(OptimizerConfig(Kind.PGD, 0.01), fake_runs([(False, 9, 0.5)] * 3))
    d = ConfigResult(OptimizerConfig(Kind.PGD, 0.001), fake_runs([(False, 9, 0.2)] * 3))
    assert select([c, d]) is d


def test_default_grids():
    assert len(default_grid(Kind.PGD)) == 4 and len(default_grid(Kind.OPTGD)) == 4
    assert len(default_grid(Kind.AMS)) == 27
    assert [c.label for c in default_grid(Kind.PRM_PLUS)] == ["PRMPlus"]


def test_init_seed():
    assert init_seed(0, 1, 2) == init_seed(0, 1, 2)
    assert len({init_seed(m, i, j) for m in range(2) for i in range(3) for j in range(12)}) == 72


# ---------------------------------------------------------------- band / summary


def test_band_header_only():
    assert band_csv([]) == ",".join(BAND_HEADER) + "\n"
    assert band_csv([np.zeros((0, 3))]) == ",".join(BAND_HEADER) + "\n"


def test_band_carry_forward():
    a = np.array([[0, 1.0, 5.0], [1, 2.0, 0.0]])
    b = np.array([[0, 0.0, 9.0], [1, 1.0, 3.0], [2, 3.0, 0.0]])
    out = list(csv.DictReader(io.StringIO(band_csv([a, b]))))
    assert [r["t"] for r in out] == ["0", "1", "2"]
    assert float(out[2]["value_min"]) == 2.0 and float(out[2]["value_max"]) == 3.0


def test_band_order_statistics(driver):
    curves = [np.array([(r.t, r.value, r.gap) for r in run(driver, OptimizerConfig(Kind.PGD, 0.1), seed=s).records])
              for s in range(12)]
    for r in csv.DictReader(io.StringIO(band_csv(curves))):
        assert float(r["value_min"]) <= float(r["value_median"]) <= float(r["value_max"])
        assert float(r["gap_min"]) <= float(r["gap_median"]) <= float(r["gap_max"])


def driver_sweep(roster, num_inits, **kw):
    cfg = ExperimentConfig(instances=[], roster=roster, num_inits=num_inits, **kw)
    return sweep(cfg, problems=[("driver", classic.absentminded_driver())])


def test_summary_converged_row():
    res = driver_sweep([Kind.PGD], 1, grids={Kind.PGD: [OptimizerConfig(Kind.PGD, 0.1)]})
    line = summary_csv(res.rows, res.roster).splitlines()
    assert line[0] == "instance,PGD value,PGD time,PGD gap"
    name, value, time, gap = line[1].split(",")
    assert float(value) == pytest.approx(OPT, abs=1e-4) and float(time) >= 0 and gap == "---"


def test_summary_unconverged_row():
    res = driver_sweep([Kind.PGD], 1, grids={Kind.PGD: [OptimizerConfig(Kind.PGD, 1e-6)]},
                       termination=TerminationCriteria(max_iterations=3))
    _, _, time, gap = summary_csv(res.rows, res.roster).splitlines()[1].split(",")
    assert time == "---" and float(gap) > 0


# ---------------------------------------------------------------- sweep examples


def test_zero_iterations_reports_initial_value(driver):
    res = driver_sweep([Kind.RM], 1, termination=TerminationCriteria(max_iterations=0))
    x0 = uniform_random_strategy(driver, init_seed(0, 0, 0))
    assert res.rows[0].value(Kind.RM) == expected_utility(driver, x0)


def test_driver_rm_plus_median():
    res = driver_sweep([Kind.RM_PLUS], 12)
    assert res.rows[0].value(Kind.RM_PLUS) == pytest.approx(OPT, abs=1e-4)
    assert res.rows[0].time(Kind.RM_PLUS) is not None


def test_driver_rm_plus_median_matches_threshold_rule(driver):
    # each init ends at the optimum below x_c = 20/27 and at 0 above it
    res = driver_sweep([Kind.RM_PLUS], 12)
    expect = []
    for j in range(12):
        xc = uniform_random_strategy(driver, init_seed(0, 0, j)).flat[0]
        expect.append(OPT if xc < 20 / 27 else 0.0)
    runs = res.rows[0].results[Kind.RM_PLUS].selected.runs
    assert [r.value for r in runs] == pytest.approx(expect, abs=1e-4)
    assert res.rows[0].value(Kind.RM_PLUS) == pytest.approx(lower_median(expect), abs=1e-4)


def rm_trap_inits(lo, hi, n=12):
    xs = np.linspace(lo, hi, n + 2)[1:-1]
    return [x for x in xs if abs(x - 0.5) > 1e-3]


def test_rm_trap_pgd_vs_rm():
    p = adversarial_instance("RMTrap")
    pgd = [run(p, OptimizerConfig(Kind.PGD, 0.01), initial_strategy=Strategy(p.offsets, np.array([x, 1 - x]))).value
           for x in rm_trap_inits(0.3, 0.7)]
    assert lower_median(pgd) == pytest.approx(1.0, abs=1e-3)
    rm = [run(p, OptimizerConfig(Kind.RM), initial_strategy=Strategy(p.offsets, np.array([x, 1 - x]))).value
          for x in rm_trap_inits(0.0, 1.0)]
    assert lower_median(rm) == pytest.approx(0.0, abs=1e-9)


# ---------------------------------------------------------------- determinism / io


def small_config(**kw):
    return ExperimentConfig(instances=[], roster=[Kind.PGD, Kind.RM_PLUS, Kind.AMS], num_inits=3,
                            grids={Kind.AMS: [OptimizerConfig(Kind.AMS, 0.1)]},
                            termination=TerminationCriteria(max_iterations=300), **kw)


def small_problems():
    return [("driver", classic.absentminded_driver()), ("forgot", classic.forgotten_move())]


def test_sweep_deterministic_and_parallel_equal():
    a = sweep(small_config(), problems=small_problems())
    b = sweep(small_config(), problems=small_problems())
    c = sweep(small_config(workers=2), problems=small_problems())
    ca, cb, cc = (values_csv(r.rows, r.roster) for r in (a, b, c))
    assert ca == cb == cc
    assert sweep(small_config(master_seed=1), problems=small_problems()) is not None


def test_report_files(tmp_path):
    res = sweep(small_config(), out_dir=str(tmp_path), problems=small_problems())
    for f in ("summary.csv", "values.csv", "aggregate.csv"):
        assert (tmp_path / f).read_text()
    assert (tmp_path / "bands" / "driver" / "RMPlus.csv").exists()
    traces = sorted((tmp_path / "traces" / "driver").rglob("*.jsonl"))
    assert len(traces) == (4 + 1 + 1) * 3
    last = json.loads(traces[0].read_text().splitlines()[-1])
    assert last["summary"]
    agg = aggregate(res.rows)
    assert {a.kind for a in agg} == {Kind.PGD, Kind.RM_PLUS, Kind.AMS}


def test_unwritable_out_dir(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        sweep(small_config(), out_dir=str(blocker / "sub"), problems=small_problems())


def test_instance_spec_build(tmp_path):
    name, p = InstanceSpec(family="simulation", config={"good_payoff": [1.0], "bad_payoff": [10.0]}).build()
    assert name == "sim-15" and len(p.nodes) == 15
    path = tmp_path / "drv.json"
    save_file(classic.absentminded_driver(), path)
    assert InstanceSpec(path=str(path)).build()[0] == "drv-7"
    with pytest.raises(ValueError):
        InstanceSpec().build()


def test_experiment_config_json_and_checks(tmp_path):
    doc = {"instances": [{"family": "random", "config": {"max_depth": 3, "seed": 1}}],
           "roster": ["PGD", "RMPlus"], "grids": {"PGD": [{"learning_rate": 0.1}]},
           "termination": {"max_iterations": 50}, "num_inits": 2}
    cfg = ExperimentConfig.from_json(doc)
    assert cfg.roster == [Kind.PGD, Kind.RM_PLUS]
    assert [c.label for c in cfg.grid(Kind.PGD)] == ["PGD(eta=0.1)"]
    assert cfg.termination.max_iterations == 50
    res = sweep(cfg)
    assert res.rows[0].instance.startswith("rnd-")
    with pytest.raises(ValueError):
        ExperimentConfig(instances=[], num_inits=0)
    with pytest.raises(ValueError):
        ExperimentConfig(instances=[], roster=[])
    with pytest.raises(ValueError):
        ExperimentConfig(instances=[], grids={Kind.PGD: []})
    with pytest.raises(ValueError):
        sweep(small_config(), problems=[("a", classic.hidden_coin()), ("a", classic.hidden_coin())])
