"""Shared builders for hand-constructed scenarios and observations."""

import numpy as np

from edgeplacer.model import Scenario, SlotObservation


def make_scenario(n=3, backhaul=64.0, budget=0.1, horizon=10, frame_len=1):
    rate = np.full((n, n), float(backhaul))
    return Scenario(node_count=n, backhaul_rate=rate, budget_avg=budget,
                    horizon=horizon, frame_len=frame_len)


def make_obs(slot=0, user_node=0, input_size=8.0, workload=4.0,
             access_rate=8.0, caps=(8.0, 8.0, 8.0), container=50.0,
             unit_cost=2.0):
    return SlotObservation(slot=slot, user_node=user_node,
                           input_size=input_size, workload=workload,
                           access_rate=access_rate, compute_capacity=caps,
                           container_size=container,
                           unit_migration_cost=unit_cost)
