"""Time-slotted simulation engine and experiment driver.

A run wires together a scenario (static parameters plus a per-slot
observation stream), a placement policy, the budget queue, and (for the
predictive policies) a mobility predictor. Reactive policies decide slot by
slot; frame policies commit a whole frame at the frame's first slot using
predicted user locations, while realized metrics and queue updates always use
the true trace. Everything is driven by explicit seeds, so identical
configurations replay bit-identically.
"""

import csv
import json
import math
import os
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .costqueue import CostQueueState, advance, bound_constant_B
from .model import (MEGABYTES_PER_GIGABYTE, Scenario, SlotObservation,
                    slot_outcome, with_user_node)
from .policies import (FrameInput, PolicyConfig, am_decide, brute_force_frame,
                       brute_force_horizon, frame_objective, lm_decide,
                       nm_decide, osp_decide, plm_decide, psp_frame_decide,
                       pspwu_frame_decide)
from .predict import PredictorSpec, predict

POLICIES = ("osp", "psp", "pspwu", "am", "nm", "lm", "plm")
SWEEP_AXES = ("v", "e_avg", "t", "theta", "beta")

# Per-slot budget presets (cost units, GB-converted scale); see README.
BUDGET_PRESETS = {"low": 0.167, "mid": 0.260, "high": 0.417}

# Simulation value ranges for the generated scenario (uniform draws).
INPUT_SIZE_MB = (5.0, 10.0)
WORKLOAD_GCYCLES = (2.0, 20.0)
ACCESS_RATE_MBPS = (5.0, 10.0)
CAPACITY_GHZ = (5.0, 10.0)
CONTAINER_MB = (25.0, 50.0)
UNIT_COST_PER_GB = (2.0, 10.0)

SUMMARY_HEADER = ("axis", "policy", "avg_latency_s", "avg_cost", "avg_queue",
                  "final_queue", "negative_w_frames")
PER_SLOT_HEADER = ("t", "placement", "latency_s", "cost", "q", "w")


class ConfigError(ValueError):
    """Bad experiment configuration (file, schema, or override)."""


class TraceFormatError(ValueError):
    """Malformed or unusable mobility trace."""


SlotRecord = namedtuple("SlotRecord", "t placement latency cost q w")


@dataclass
class RunRecord:
    """Per-slot time series plus time-averaged summaries of one run."""

    per_slot: list
    avg_latency: float
    avg_cost: float
    avg_queue: float
    final_queue: float
    negative_w_frames: int


@dataclass
class ExperimentConfig:
    """Everything a run or sweep needs, mirrored by the JSON config schema."""

    policy: str = "osp"
    policy_cfg: PolicyConfig = field(default_factory=PolicyConfig)
    predictor: PredictorSpec = field(default_factory=PredictorSpec)
    scenario_seed: int = 0
    node_count: int = 6
    horizon: int = 1400
    frame_len: int = 3
    budget_avg: float = BUDGET_PRESETS["low"]
    backhaul_mbps: object = 100.0  # scalar, or full node_count x node_count matrix
    homogeneous_capacity: bool = False
    access_rate_scale: float = 1.0
    trace_path: str | None = None
    trace_seed: int = 1
    trace_stickiness: float = 0.7
    sweep_axis: str | None = None
    sweep_values: tuple = ()
    output: str | None = None

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}")
        if self.sweep_axis is not None:
            if self.sweep_axis not in SWEEP_AXES:
                raise ConfigError(f"unknown sweep axis {self.sweep_axis!r}")
            if not self.sweep_values:
                raise ConfigError("sweep values must be nonempty")


def synthetic_trace(seed: int, n_regions: int, length: int,
                    stickiness: float = 0.7) -> list[int]:
    """First-order Markov mobility: stay with probability stickiness,
    otherwise jump uniformly to one of the other regions."""
    if not 0.0 <= stickiness <= 1.0:
        raise ValueError("stickiness must be in [0, 1]")
    if n_regions < 1 or length < 1:
        raise ValueError("need at least one region and one slot")
    rng = np.random.default_rng(np.random.SeedSequence((seed, 1)))
    regions = [int(rng.integers(n_regions))]
    for _ in range(1, length):
        prev = regions[-1]
        if n_regions == 1 or rng.random() < stickiness:
            regions.append(prev)
        else:
            r = int(rng.integers(n_regions - 1))
            regions.append(r if r < prev else r + 1)
    return regions


def generate_scenario(seed: int, n_nodes: int = 6, horizon: int = 1400,
                      frame_len: int = 1, budget_avg: float = BUDGET_PRESETS["low"],
                      backhaul_mbps=100.0, trace=None,
                      homogeneous_capacity: bool = False,
                      access_rate_scale: float = 1.0):
    """Draw a (Scenario, observation stream) pair from the simulation ranges.

    Task profile, access rate, container size and migration price are drawn
    per slot; compute capacity per node (fixed over time). access_rate_scale
    converts the drawn access bandwidth into a data rate (1.0 = one bit per
    second per hertz). The user's associated node comes from trace, or from a
    default synthetic trace with the same seed.
    """
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0)))
    if trace is None:
        trace = synthetic_trace(seed, n_nodes, horizon)
    if len(trace) < horizon:
        raise TraceFormatError("trace shorter than horizon")
    if any(not 0 <= r < n_nodes for r in trace[:horizon]):
        raise TraceFormatError("trace region out of range")
    backhaul = np.asarray(backhaul_mbps, dtype=float)
    if backhaul.ndim == 0:
        backhaul = np.full((n_nodes, n_nodes), float(backhaul))
    scn = Scenario(node_count=n_nodes, backhaul_rate=backhaul,
                   budget_avg=budget_avg, horizon=horizon, frame_len=frame_len)
    if homogeneous_capacity:
        caps = (float(rng.uniform(*CAPACITY_GHZ)),) * n_nodes
    else:
        caps = tuple(float(c) for c in rng.uniform(*CAPACITY_GHZ, n_nodes))
    observations = []
    for t in range(horizon):
        observations.append(SlotObservation(
            slot=t,
            user_node=int(trace[t]),
            input_size=float(rng.uniform(*INPUT_SIZE_MB)),
            workload=float(rng.uniform(*WORKLOAD_GCYCLES)),
            access_rate=float(rng.uniform(*ACCESS_RATE_MBPS)) * access_rate_scale,
            compute_capacity=caps,
            container_size=float(rng.uniform(*CONTAINER_MB)),
            unit_migration_cost=float(rng.uniform(*UNIT_COST_PER_GB)),
        ))
    return scn, observations


def max_slot_migration_cost(observations) -> float:
    """Largest migration cost any placement change could incur on this stream."""
    return max(o.container_size / MEGABYTES_PER_GIGABYTE * o.unit_migration_cost
               for o in observations)


def simulate(scn: Scenario, observations, policy: str,
             policy_cfg: PolicyConfig | None = None,
             predictor: PredictorSpec | None = None) -> RunRecord:
    """Execute one policy over the observation stream and collect metrics.

    Frame policies see predicted user locations for future in-frame slots;
    realized latency/cost and all queue updates use the true observations.
    The telescoped budget inequality and the frame-approximation error bound
    are asserted on the fly.
    """
    if policy not in POLICIES:
        raise ConfigError(f"unknown policy {policy!r}")
    cfg = policy_cfg or PolicyConfig()
    spec = predictor or PredictorSpec()
    e_avg = scn.budget_avg
    horizon = scn.horizon
    trace = [o.user_node for o in observations]
    if len(observations) < horizon:
        raise TraceFormatError("observation stream shorter than horizon")
    if (policy in ("psp", "pspwu") and spec.kind == "oracle_noisy"
            and len(spec.accuracies) < scn.frame_len - 1):
        raise ConfigError("oracle_noisy needs one accuracy per look-ahead "
                          f"step: frame_len {scn.frame_len} wants "
                          f"{scn.frame_len - 1}, got {len(spec.accuracies)}")

    state = CostQueueState(beta=cfg.beta)
    prev = observations[0].user_node
    initial = prev
    lm_acc = 0.0
    records = []
    overrun = 0.0  # queue recursion without the clamp, same op order as the queue
    negative_w_frames = 0
    w_q = max(e_avg, max_slot_migration_cost(observations[:horizon]))

    if policy in ("psp", "pspwu"):
        for k, start in enumerate(range(0, horizon, scn.frame_len)):
            flen = min(scn.frame_len, horizon - start)
            anchor = state.q if policy == "psp" else state.w
            if anchor < 0:
                negative_w_frames += 1
            decision_slots = [observations[start]]
            if flen > 1:
                preds = predict(spec, trace[:start + 1],
                                trace[start + 1:start + flen], flen - 1,
                                scn.node_count, salt=k)
                decision_slots += [with_user_node(observations[start + 1 + s], preds[s])
                                   for s in range(flen - 1)]
            frame = FrameInput(k, decision_slots, anchor, prev)
            if policy == "psp":
                seq = psp_frame_decide(cfg, frame, scn, e_avg)
            else:
                seq = pspwu_frame_decide(cfg, frame, scn, e_avg)
            q_start = state.q
            max_dev = 0.0
            for p in range(flen):
                t = start + p
                obs = observations[t]
                lat, cost = slot_outcome(scn, obs, prev, seq[p])
                records.append(SlotRecord(t, seq[p], lat, cost, state.q, state.w))
                state = advance(state, cost, e_avg)
                overrun = overrun + (cost - e_avg)
                prev = seq[p]
                max_dev = max(max_dev, abs(state.q - q_start))
            # frozen-backlog approximation error stays within frame_len * w_q
            bound = scn.frame_len * w_q
            assert max_dev <= bound + 1e-9 * max(1.0, bound)
    else:
        for t in range(horizon):
            obs = observations[t]
            if policy == "osp":
                placement = osp_decide(cfg, state.q, obs, prev, scn)
            elif policy == "am":
                placement = am_decide(obs)
            elif policy == "nm":
                placement = nm_decide(initial)
            elif policy == "lm":
                placement, lm_acc = lm_decide(lm_acc, obs, prev, scn, cfg)
            else:  # plm
                predicted_next = None
                if t + 1 < horizon:
                    nxt = predict(spec, trace[:t + 1], trace[t + 1:t + 2], 1,
                                  scn.node_count, salt=t)[0]
                    predicted_next = with_user_node(observations[t + 1], nxt)
                placement = plm_decide(obs, predicted_next, prev, scn, cfg)
            lat, cost = slot_outcome(scn, obs, prev, placement)
            records.append(SlotRecord(t, placement, lat, cost, state.q, state.w))
            state = advance(state, cost, e_avg)
            overrun = overrun + (cost - e_avg)
            prev = placement

    # Telescoped budget guarantee: the clamp only ever raises the backlog, so
    # q dominates the unclamped overrun sum. Float-exact because both sides
    # apply the identical per-slot addition (rounding is monotone).
    assert state.q >= overrun

    total_cost = math.fsum(r.cost for r in records)
    rhs = horizon * e_avg + state.q
    assert total_cost <= rhs + 1e-9 * max(1.0, rhs)

    return RunRecord(
        per_slot=records,
        avg_latency=math.fsum(r.latency for r in records) / horizon,
        avg_cost=total_cost / horizon,
        avg_queue=math.fsum(r.q for r in records) / horizon,
        final_queue=state.q,
        negative_w_frames=negative_w_frames,
    )


def _materialize(config: ExperimentConfig):
    if config.trace_path is not None:
        trace = read_trace_csv(config.trace_path)
        if len(trace) < config.horizon:
            raise TraceFormatError(
                f"trace has {len(trace)} slots, horizon needs {config.horizon}")
        trace = trace[:config.horizon]
    else:
        trace = synthetic_trace(config.trace_seed, config.node_count,
                                config.horizon, config.trace_stickiness)
    return generate_scenario(
        config.scenario_seed, config.node_count, config.horizon,
        config.frame_len, config.budget_avg, config.backhaul_mbps,
        trace=trace, homogeneous_capacity=config.homogeneous_capacity,
        access_rate_scale=config.access_rate_scale)


def run(config: ExperimentConfig) -> RunRecord:
    """Materialize the configured scenario and execute one run."""
    scn, observations = _materialize(config)
    return simulate(scn, observations, config.policy, config.policy_cfg,
                    config.predictor)


def _with_axis_value(config: ExperimentConfig, axis: str, value):
    if axis == "v":
        return replace(config, policy_cfg=replace(config.policy_cfg, v=float(value)))
    if axis == "theta":
        return replace(config, policy_cfg=replace(config.policy_cfg, theta=float(value)))
    if axis == "beta":
        return replace(config, policy_cfg=replace(config.policy_cfg, beta=float(value)))
    if axis == "e_avg":
        return replace(config, budget_avg=float(value))
    if axis == "t":
        return replace(config, frame_len=int(value))
    raise ConfigError(f"unknown sweep axis {axis!r}")


def sweep(config: ExperimentConfig) -> list:
    """One run per sweep value, seeds shared so only the axis varies.

    Returns [(axis_value, RunRecord), ...] in axis order. EDGEPLACER_THREADS
    caps parallel execution; results are merged by axis order regardless.
    """
    if config.sweep_axis is None:
        raise ConfigError("sweep requires a sweep axis")
    configs = [_with_axis_value(config, config.sweep_axis, v)
               for v in config.sweep_values]
    threads = max(1, int(os.environ.get("EDGEPLACER_THREADS", "1")))
    if threads == 1 or len(configs) == 1:
        records = [run(c) for c in configs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(run, configs))
    return list(zip(config.sweep_values, records))


# ---------------------------------------------------------------------------
# config schema

_SCHEMA = {
    "policy": {"name", "v", "theta", "beta", "lm_gamma", "plm_weight"},
    "scenario": {"seed", "node_count", "horizon", "frame_len", "budget_avg",
                 "backhaul_mbps", "homogeneous_capacity", "access_rate_scale"},
    "predictor": {"kind", "accuracies", "window", "rng_seed"},
    "trace": {"kind", "seed", "stickiness", "path"},
    "sweep": {"axis", "values"},
    "output": None,
}


def load_config_file(path: str) -> dict:
    """Read and parse the JSON config; ConfigError names the path on failure."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return raw


def apply_overrides(raw: dict, overrides) -> dict:
    """Apply KEY=VALUE overrides (dotted keys) onto a parsed config dict."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not KEY=VALUE")
        key, value = item.split("=", 1)
        parts = key.split(".")
        if parts[0] not in _SCHEMA:
            raise ConfigError(f"unknown config section {parts[0]!r}")
        allowed = _SCHEMA[parts[0]]
        if allowed is None:
            if len(parts) != 1:
                raise ConfigError(f"{parts[0]!r} takes no sub-key")
        else:
            if len(parts) != 2 or parts[1] not in allowed:
                raise ConfigError(f"unknown config key {key!r}")
        try:
            parsed = json.loads(value)
        except json.JSONDecodeError:
            parsed = value
        if allowed is None:
            raw[parts[0]] = parsed
        else:
            raw.setdefault(parts[0], {})[parts[1]] = parsed
    return raw


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Validate a parsed config dict and build an ExperimentConfig."""
    for section, keys in raw.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section {section!r}")
        if _SCHEMA[section] is not None:
            if not isinstance(keys, dict):
                raise ConfigError(f"section {section!r} must be an object")
            unknown = set(keys) - _SCHEMA[section]
            if unknown:
                raise ConfigError(f"unknown key(s) in {section!r}: {sorted(unknown)}")

    policy = raw.get("policy", {})
    scenario = raw.get("scenario", {})
    predictor = raw.get("predictor", {})
    trace = raw.get("trace", {})
    sw = raw.get("sweep", {})

    if "name" not in policy:
        raise ConfigError("policy.name is required")
    try:
        policy_cfg = PolicyConfig(
            v=float(policy.get("v", 10.0)),
            theta=float(policy.get("theta", 0.0)),
            beta=float(policy.get("beta", 0.0)),
            lm_gamma=float(policy.get("lm_gamma", 1.0)),
            plm_weight=float(policy.get("plm_weight", 1.0)))
        spec_kwargs = {}
        if "accuracies" in predictor:
            spec_kwargs["accuracies"] = tuple(predictor["accuracies"])
        pred_spec = PredictorSpec(
            kind=predictor.get("kind", "oracle_noisy"),
            window=int(predictor.get("window", 3)),
            rng_seed=int(predictor.get("rng_seed", 0)),
            **spec_kwargs)
        trace_kind = trace.get("kind", "synthetic")
        if trace_kind not in ("synthetic", "file"):
            raise ConfigError(f"unknown trace kind {trace_kind!r}")
        if trace_kind == "file" and "path" not in trace:
            raise ConfigError("trace.path is required for a file trace")
        return ExperimentConfig(
            policy=policy["name"],
            policy_cfg=policy_cfg,
            predictor=pred_spec,
            scenario_seed=int(scenario.get("seed", 0)),
            node_count=int(scenario.get("node_count", 6)),
            horizon=int(scenario.get("horizon", 1400)),
            frame_len=int(scenario.get("frame_len", 3)),
            budget_avg=float(scenario.get("budget_avg", BUDGET_PRESETS["low"])),
            backhaul_mbps=scenario.get("backhaul_mbps", 100.0),
            homogeneous_capacity=bool(scenario.get("homogeneous_capacity", False)),
            access_rate_scale=float(scenario.get("access_rate_scale", 1.0)),
            trace_path=trace.get("path") if trace_kind == "file" else None,
            trace_seed=int(trace.get("seed", 1)),
            trace_stickiness=float(trace.get("stickiness", 0.7)),
            sweep_axis=sw.get("axis"),
            sweep_values=tuple(sw.get("values", ())),
            output=raw.get("output"),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# CSV input/output

def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_summary_csv(path: str, rows) -> None:
    """rows: iterable of (axis_value, policy_name, RunRecord)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for axis_value, policy, rec in rows:
            writer.writerow([_fmt(axis_value), policy, _fmt(rec.avg_latency),
                             _fmt(rec.avg_cost), _fmt(rec.avg_queue),
                             _fmt(rec.final_queue), rec.negative_w_frames])


def write_per_slot_csv(path: str, rec: RunRecord) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PER_SLOT_HEADER)
        for r in rec.per_slot:
            writer.writerow([r.t, r.placement, _fmt(r.latency), _fmt(r.cost),
                             _fmt(r.q), _fmt(r.w)])


def write_trace_csv(path: str, regions) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("slot", "region"))
        for t, r in enumerate(regions):
            writer.writerow((t, int(r)))


def read_trace_csv(path: str) -> list[int]:
    """Parse a slot,region trace file; TraceFormatError on any malformation."""
    try:
        fh = open(path)
    except FileNotFoundError:
        raise TraceFormatError(f"trace file not found: {path}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TraceFormatError(f"trace file {path} is empty") from None
        if [h.strip() for h in header] != ["slot", "region"]:
            raise TraceFormatError(f"trace file {path} must start with slot,region")
        regions = []
        for lineno, row in enumerate(reader):
            if len(row) != 2:
                raise TraceFormatError(f"{path}:{lineno + 2}: expected 2 fields")
            try:
                slot, region = int(row[0]), int(row[1])
            except ValueError:
                raise TraceFormatError(f"{path}:{lineno + 2}: non-integer entry") from None
            if slot != lineno:
                raise TraceFormatError(f"{path}:{lineno + 2}: slots must count up from 0")
            if region < 0:
                raise TraceFormatError(f"{path}:{lineno + 2}: negative region")
            regions.append(region)
    if not regions:
        raise TraceFormatError(f"trace file {path} has no rows")
    return regions


# ---------------------------------------------------------------------------
# oracle verification suites (backing the CLI verify command)

def random_frame_instance(rng, anchor_low=0.0, anchor_high=50.0):
    """Small random frame problem for DP-vs-enumeration checks."""
    n = int(rng.integers(2, 6))
    length = int(rng.integers(2, 5))
    scn, observations = generate_scenario(
        seed=int(rng.integers(2 ** 31)), n_nodes=n, horizon=length,
        frame_len=length, budget_avg=float(rng.uniform(0.0, 0.5)))
    cfg = PolicyConfig(v=float(rng.uniform(0.0, 100.0)),
                       theta=float(rng.uniform(0.0, 100.0)))
    frame = FrameInput(frame_index=0, slots=observations,
                       q_anchor=float(rng.uniform(anchor_low, anchor_high)),
                       prev_placement=int(rng.integers(n)))
    return cfg, frame, scn


def verify_frame_oracles(seed: int = 1, instances: int = 200,
                         anchor_low: float = 0.0, anchor_high: float = 50.0):
    """Compare the frame DP against exhaustive enumeration.

    Negative anchor_low exercises the weight-anchored variant. Returns
    (matches, instances, mismatch descriptions).
    """
    rng = np.random.default_rng(seed)
    matches, mismatches = 0, []
    for idx in range(instances):
        cfg, frame, scn = random_frame_instance(rng, anchor_low, anchor_high)
        e_avg = scn.budget_avg
        if frame.q_anchor >= 0:
            seq = psp_frame_decide(cfg, frame, scn, e_avg)
        else:
            seq = pspwu_frame_decide(cfg, frame, scn, e_avg)
        obj = frame_objective(cfg, frame, scn, e_avg, seq)
        best_seq, best_obj = brute_force_frame(frame, scn, e_avg, cfg)
        tol = 1e-9 * max(1.0, abs(best_obj))
        if seq == best_seq and abs(obj - best_obj) <= tol:
            matches += 1
        else:
            mismatches.append(
                f"instance {idx}: dp={seq} obj={obj!r}, "
                f"oracle={best_seq} obj={best_obj!r}")
    return matches, instances, mismatches


def verify_horizon_bound(seed: int = 1, instances: int = 20,
                         v_values=(10.0, 100.0), budget_avg: float = 0.1,
                         slack: float = 0.10):
    """Check the reactive policy against the offline horizon oracle.

    On tiny instances the realized average latency must stay within
    oracle + B/V + slack*oracle, where B is the drift bound constant.
    Returns (passes, checks, failure descriptions).
    """
    passes, failures = 0, []
    checks = 0
    for idx in range(instances):
        scn, observations = generate_scenario(
            seed=seed + idx, n_nodes=3, horizon=6, budget_avg=budget_avg)
        _, oracle_lat = brute_force_horizon(scn, observations, budget_avg)
        for v in v_values:
            checks += 1
            rec = simulate(scn, observations, "osp", PolicyConfig(v=v))
            # the bound constant uses the run's own worst realized cost
            e_max = max(r.cost for r in rec.per_slot)
            b_const = bound_constant_B(budget_avg, e_max)
            limit = oracle_lat + b_const / v + slack * oracle_lat
            if rec.avg_latency <= limit:
                passes += 1
            else:
                failures.append(
                    f"instance {idx} v={v}: latency {rec.avg_latency!r} "
                    f"> limit {limit!r}")
    return passes, checks, failures
