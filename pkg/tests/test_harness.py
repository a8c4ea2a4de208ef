import math
from dataclasses import replace

import pytest

from edgeplacer.harness import (ConfigError, ExperimentConfig,
                                TraceFormatError, apply_overrides,
                                config_from_dict, generate_scenario,
                                max_slot_migration_cost, read_trace_csv, run,
                                simulate, sweep, synthetic_trace,
                                verify_frame_oracles, verify_horizon_bound,
                                write_trace_csv)
from edgeplacer.model import service_latency
from edgeplacer.policies import PolicyConfig
from edgeplacer.predict import PredictorSpec


def test_generate_scenario_ranges_and_determinism():
    scn, obs = generate_scenario(seed=4, n_nodes=6, horizon=300)
    assert scn.node_count == 6 and len(obs) == 300
    for o in obs:
        assert 5.0 <= o.input_size <= 10.0
        assert 2.0 <= o.workload <= 20.0
        assert 5.0 <= o.access_rate <= 10.0
        assert 25.0 <= o.container_size <= 50.0
        assert 2.0 <= o.unit_migration_cost <= 10.0
        assert all(5.0 <= c <= 10.0 for c in o.compute_capacity)
        assert 0 <= o.user_node < 6
    scn2, obs2 = generate_scenario(seed=4, n_nodes=6, horizon=300)
    assert obs == obs2
    _, obs3 = generate_scenario(seed=5, n_nodes=6, horizon=300)
    assert obs != obs3


def test_generate_scenario_capacity_modes():
    _, obs = generate_scenario(seed=1, n_nodes=4, horizon=5,
                               homogeneous_capacity=True)
    assert len(set(obs[0].compute_capacity)) == 1
    _, obs = generate_scenario(seed=1, n_nodes=4, horizon=5)
    assert len(set(obs[0].compute_capacity)) > 1
    # capacities are per node, fixed over time
    assert obs[0].compute_capacity == obs[4].compute_capacity


def test_synthetic_trace_endpoints():
    assert len(set(synthetic_trace(3, 5, 200, stickiness=1.0))) == 1
    moved = synthetic_trace(3, 2, 200, stickiness=0.0)
    assert all(a != b for a, b in zip(moved[:-1], moved[1:]))
    with pytest.raises(ValueError):
        synthetic_trace(3, 2, 10, stickiness=1.5)


def test_synthetic_trace_stay_rate():
    trace = synthetic_trace(11, 6, 10_000, stickiness=0.7)
    stays = sum(a == b for a, b in zip(trace[:-1], trace[1:]))
    assert abs(stays / (len(trace) - 1) - 0.7) < 0.02


def base_config(**kw):
    defaults = dict(policy="nm", scenario_seed=2, node_count=4, horizon=120,
                    frame_len=3, budget_avg=0.05, trace_seed=3)
    defaults.update(kw)
    return ExperimentConfig(**defaults)


def test_never_migrate_run_has_no_cost():
    rec = run(base_config(policy="nm"))
    assert rec.avg_cost == 0.0
    assert rec.final_queue == 0.0
    assert all(r.q == 0.0 and r.cost == 0.0 for r in rec.per_slot)


def test_always_migrate_attains_per_slot_minimum():
    config = base_config(policy="am", homogeneous_capacity=True)
    scn, obs = generate_scenario(config.scenario_seed, 4, 120,
                                 trace=synthetic_trace(3, 4, 120),
                                 homogeneous_capacity=True,
                                 budget_avg=0.05)
    rec = simulate(scn, obs, "am")
    mins = [min(service_latency(scn, o, i) for i in range(4)) for o in obs]
    assert rec.avg_latency == pytest.approx(math.fsum(mins) / 120)
    for r, o in zip(rec.per_slot, obs):
        assert r.placement == o.user_node


def test_budget_inequality_holds_for_every_policy():
    for policy in ("osp", "psp", "pspwu", "am", "nm", "lm", "plm"):
        cfg = PolicyConfig(v=20.0, theta=10.0,
                           beta=0.65 if policy == "pspwu" else 0.0)
        rec = run(base_config(policy=policy, policy_cfg=cfg))
        total = math.fsum(r.cost for r in rec.per_slot)
        rhs = 120 * 0.05 + rec.final_queue
        assert total <= rhs + 1e-9 * max(1.0, rhs)
        assert all(r.latency >= 0 and r.cost >= 0 and r.q >= 0
                   for r in rec.per_slot)


def test_replay_determinism():
    config = base_config(policy="pspwu",
                         policy_cfg=PolicyConfig(v=15.0, theta=5.0, beta=0.65))
    a, b = run(config), run(config)
    assert a.per_slot == b.per_slot
    assert (a.avg_latency, a.avg_cost, a.avg_queue, a.final_queue) == \
        (b.avg_latency, b.avg_cost, b.avg_queue, b.final_queue)


def test_single_slot_frames_with_perfect_prediction_reduce_to_reactive():
    perfect = PredictorSpec(kind="oracle_noisy", accuracies=(1.0, 1.0, 1.0))
    cfg = PolicyConfig(v=25.0, theta=0.0)
    psp = run(base_config(policy="psp", frame_len=1, policy_cfg=cfg,
                          predictor=perfect))
    osp = run(base_config(policy="osp", frame_len=1, policy_cfg=cfg,
                          predictor=perfect))
    assert [r.placement for r in psp.per_slot] == \
        [r.placement for r in osp.per_slot]
    assert psp.avg_latency == osp.avg_latency


def test_beta_zero_weight_update_matches_plain_frames():
    cfg = PolicyConfig(v=15.0, theta=20.0, beta=0.0)
    wu = run(base_config(policy="pspwu", policy_cfg=cfg))
    plain = run(base_config(policy="psp", policy_cfg=cfg))
    assert [r.placement for r in wu.per_slot] == \
        [r.placement for r in plain.per_slot]
    assert wu.negative_w_frames == 0


def test_partial_final_frame():
    # horizon not divisible by frame_len still covers every slot
    rec = run(base_config(policy="psp", horizon=100, frame_len=3))
    assert len(rec.per_slot) == 100
    assert [r.t for r in rec.per_slot] == list(range(100))


def test_sweep_matches_individual_runs_and_is_ordered():
    config = base_config(policy="osp", sweep_axis="v",
                         sweep_values=(5.0, 50.0, 500.0))
    results = sweep(config)
    assert [v for v, _ in results] == [5.0, 50.0, 500.0]
    for v, rec in results:
        solo = run(replace(config, policy_cfg=replace(config.policy_cfg, v=v)))
        assert solo.per_slot == rec.per_slot


def test_sweep_single_value_equals_run():
    config = base_config(policy="osp", sweep_axis="e_avg", sweep_values=(0.2,))
    [(value, rec)] = sweep(config)
    solo = run(replace(config, budget_avg=0.2))
    assert value == 0.2 and rec.per_slot == solo.per_slot


def test_sweep_parallel_threads_match_sequential(monkeypatch):
    config = base_config(policy="psp", sweep_axis="t",
                         sweep_values=(1, 2, 3, 4),
                         predictor=PredictorSpec(accuracies=(0.9, 0.8, 0.5)))
    sequential = sweep(config)
    monkeypatch.setenv("EDGEPLACER_THREADS", "4")
    parallel = sweep(config)
    for (v1, r1), (v2, r2) in zip(sequential, parallel):
        assert v1 == v2 and r1.per_slot == r2.per_slot


def test_sweep_requires_axis():
    with pytest.raises(ConfigError):
        sweep(base_config())
    with pytest.raises(ConfigError):
        base_config(sweep_axis="nonsense", sweep_values=(1,))
    with pytest.raises(ConfigError):
        base_config(sweep_axis="v")


def test_trace_csv_roundtrip(tmp_path):
    path = tmp_path / "trace.csv"
    trace = synthetic_trace(8, 5, 64)
    write_trace_csv(path, trace)
    assert read_trace_csv(path) == trace


def test_trace_csv_rejects_malformed(tmp_path):
    cases = {
        "empty.csv": "",
        "header.csv": "slot,node\n0,1\n",
        "fields.csv": "slot,region\n0,1,2\n",
        "types.csv": "slot,region\n0,abc\n",
        "order.csv": "slot,region\n1,0\n",
        "negative.csv": "slot,region\n0,-2\n",
        "norows.csv": "slot,region\n",
    }
    for name, content in cases.items():
        p = tmp_path / name
        p.write_text(content)
        with pytest.raises(TraceFormatError):
            read_trace_csv(p)
    with pytest.raises(TraceFormatError):
        read_trace_csv(tmp_path / "missing.csv")


def test_file_trace_feeds_run(tmp_path):
    path = tmp_path / "trace.csv"
    write_trace_csv(path, synthetic_trace(8, 4, 200))
    rec = run(base_config(policy="am", trace_path=str(path), horizon=200))
    assert len(rec.per_slot) == 200
    # too short for the horizon
    with pytest.raises(TraceFormatError):
        run(base_config(policy="am", trace_path=str(path), horizon=500))
    # region index outside the node set
    write_trace_csv(path, [0, 1, 9] * 40)
    with pytest.raises(TraceFormatError):
        run(base_config(policy="am", trace_path=str(path), horizon=120))


def test_config_from_dict_full():
    raw = {
        "policy": {"name": "psp", "v": 900.0, "theta": 50.0},
        "scenario": {"seed": 5, "node_count": 6, "horizon": 50,
                     "frame_len": 2, "budget_avg": 0.26},
        "predictor": {"kind": "oracle_noisy", "accuracies": [0.9],
                      "rng_seed": 2},
        "trace": {"kind": "synthetic", "seed": 9, "stickiness": 0.8},
        "sweep": {"axis": "v", "values": [10, 100]},
        "output": "out.csv",
    }
    config = config_from_dict(raw)
    assert config.policy == "psp"
    assert config.policy_cfg.v == 900.0
    assert config.budget_avg == 0.26
    assert config.sweep_values == (10, 100)
    assert config.output == "out.csv"
    rec = run(config)
    assert len(rec.per_slot) == 50


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        config_from_dict({"policy": {"name": "osp", "vee": 1}})
    with pytest.raises(ConfigError):
        config_from_dict({"policy": {"name": "osp"}, "extra": {}})
    with pytest.raises(ConfigError):
        config_from_dict({})  # policy.name required
    with pytest.raises(ConfigError):
        config_from_dict({"policy": {"name": "warp"}})
    with pytest.raises(ConfigError):
        config_from_dict({"policy": {"name": "osp"},
                          "trace": {"kind": "file"}})


def test_apply_overrides():
    raw = {"policy": {"name": "osp"}}
    apply_overrides(raw, ["policy.v=900", "scenario.horizon=10",
                          "output=x.csv", "trace.stickiness=0.5"])
    assert raw["policy"]["v"] == 900
    assert raw["scenario"]["horizon"] == 10
    assert raw["output"] == "x.csv"
    config = config_from_dict(raw)
    assert config.policy_cfg.v == 900.0 and config.horizon == 10
    for bad in ("policy.vee=1", "nope.v=1", "noequals", "output.x=1"):
        with pytest.raises(ConfigError):
            apply_overrides(dict(raw), [bad])


def test_verify_frame_oracles_all_match():
    matches, total, mismatches = verify_frame_oracles(seed=2, instances=25)
    assert (matches, mismatches) == (total, [])
    matches, total, mismatches = verify_frame_oracles(seed=3, instances=15,
                                                      anchor_low=-20.0)
    assert (matches, mismatches) == (total, [])


def test_verify_horizon_bound_mostly_holds():
    passes, checks, failures = verify_horizon_bound(seed=5, instances=8)
    assert passes >= 0.9 * checks, failures


def test_max_slot_migration_cost():
    _, obs = generate_scenario(seed=2, n_nodes=3, horizon=50)
    top = max_slot_migration_cost(obs)
    assert all(o.container_size / 1000 * o.unit_migration_cost <= top
               for o in obs)
    assert top <= 0.5  # 50 MB at 10 per GB is the ceiling
