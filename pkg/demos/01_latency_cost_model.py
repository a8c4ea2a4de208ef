"""Walk through the per-slot latency and migration-cost arithmetic.

A task of I megabytes uploads over the access link, crosses the backhaul
when the service sits away from the user's node, and runs on the hosting
node's CPU. Moving the container between nodes costs its size times the
per-GB price.
"""

import numpy as np

from edgeplacer import Scenario, SlotObservation, migration_cost, service_latency

scn = Scenario(node_count=3, backhaul_rate=np.full((3, 3), 64.0),
               budget_avg=0.1, horizon=1)

obs = SlotObservation(slot=0, user_node=0, input_size=8.0, workload=4.0,
                      access_rate=8.0, compute_capacity=(8.0, 8.0, 4.0),
                      container_size=50.0, unit_migration_cost=2.0)

print("user sits at node 0; task: 8 MB upload, 4 Gcycles of work")
print()
for node in range(3):
    lat = service_latency(scn, obs, node)
    parts = []
    parts.append(f"access 8 MB @ 8 Mbit/s = {8 * 8 / 8:.1f} s")
    if node != 0:
        parts.append(f"backhaul @ 64 Mbit/s = {8 * 8 / 64:.2f} s")
    parts.append(f"compute 4 Gc @ {obs.compute_capacity[node]:.0f} GHz"
                 f" = {4 / obs.compute_capacity[node]:.2f} s")
    print(f"  serve from node {node}: {lat:.2f} s  ({' + '.join(parts)})")

print()
print("moving the 50 MB container at 2 $/GB:")
print(f"  stay put     -> {migration_cost(obs, 0, 0):.3f}")
print(f"  node 0 -> 1  -> {migration_cost(obs, 0, 1):.3f}")
print(f"  node 0 -> 2  -> {migration_cost(obs, 0, 2):.3f}  (same price anywhere)")
