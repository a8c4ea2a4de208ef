"""The reactive policy and the virtual budget queue.

The queue accumulates how far migration spending has run over the per-slot
budget; the reactive rule weighs v * latency against queue * migration price
every slot. Sweeping v trades latency against queue backlog: large v chases
the user aggressively and lets the queue grow, small v rations moves.
"""

from dataclasses import replace

from edgeplacer import ExperimentConfig, PolicyConfig, run, sweep

base = ExperimentConfig(policy="osp", scenario_seed=0, trace_seed=100,
                        node_count=6, horizon=1400, budget_avg=0.03,
                        policy_cfg=PolicyConfig(),
                        sweep_axis="v",
                        sweep_values=(1.0, 10.0, 100.0, 1000.0, 4000.0))

print("reactive policy, 1400 slots, budget 0.03 per slot")
print(f"{'v':>8} {'avg latency':>12} {'avg cost':>9} {'avg queue':>10} {'final queue':>12}")
for v, rec in sweep(base):
    print(f"{v:>8.0f} {rec.avg_latency:>12.4f} {rec.avg_cost:>9.4f} "
          f"{rec.avg_queue:>10.3f} {rec.final_queue:>12.3f}")

print()
print("benchmarks at the same budget:")
for policy in ("am", "nm", "lm", "plm"):
    rec = run(replace(base, policy=policy, sweep_axis=None, sweep_values=()))
    print(f"  {policy:>4}: latency {rec.avg_latency:.4f} s, "
          f"cost {rec.avg_cost:.4f}, final queue {rec.final_queue:.3f}")
print()
print("never-migrate spends nothing but eats the backhaul every slot;")
print("always-migrate gets the best latency and the largest queue debt.")
