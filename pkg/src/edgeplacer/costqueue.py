"""Virtual cost-queue dynamics and the weight-update recursion.

The queue tracks cumulative overrun of the per-slot migration budget:
q(t+1) = max(q(t) + e(t) - e_avg, 0). Keeping it stable is what enforces
the long-term budget. The weight w(t) is a queue surrogate with recursive
memory of past backlog changes (momentum weighted by beta); with beta = 0
and zero initial state it coincides with the queue exactly.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class CostQueueState:
    """Queue backlog plus the weight history needed by the weight-update rule."""

    q: float = 0.0
    w: float = 0.0
    w_prev: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.q < 0:
            raise ValueError("queue backlog must be >= 0")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must be in [0, 1]")


def update_queue(q: float, e: float, e_avg: float) -> float:
    """One queue step: add the slot's cost, drain the budget, clamp at zero."""
    if q < 0 or e < 0 or e_avg < 0:
        raise ValueError("queue inputs must be nonnegative")
    return max(q + (e - e_avg), 0.0)


def lyapunov(q: float) -> float:
    """Quadratic backlog measure q^2 / 2."""
    if q < 0:
        raise ValueError("queue backlog must be >= 0")
    return 0.5 * q * q


def bound_constant_B(e_avg: float, e_max: float) -> float:
    """Constant (e_avg^2 + e_max^2) / 2 appearing in the drift upper bound."""
    if e_avg < 0 or e_max < 0:
        raise ValueError("costs must be nonnegative")
    return 0.5 * (e_avg * e_avg + e_max * e_max)


def update_weight(state: CostQueueState, delta_q: float) -> CostQueueState:
    """Weight step: w += delta_q + beta * max(w - w_prev, 0).

    delta_q is the same slot's queue change q(t+1) - q(t). The weight may go
    negative; no clamp is applied.
    """
    momentum = max(state.w - state.w_prev, 0.0)
    return replace(state, w=state.w + delta_q + state.beta * momentum,
                   w_prev=state.w)


def advance(state: CostQueueState, e: float, e_avg: float) -> CostQueueState:
    """Apply one slot's cost to both queue and weight, in that order."""
    q_next = update_queue(state.q, e, e_avg)
    stepped = update_weight(state, q_next - state.q)
    return replace(stepped, q=q_next)


def frame_queue_approximation(q_at_frame_start: float, frame_len: int) -> list[float]:
    """Hold the frame-start backlog constant across the frame's slots."""
    if q_at_frame_start < 0:
        raise ValueError("queue backlog must be >= 0")
    if frame_len < 1:
        raise ValueError("frame_len must be >= 1")
    return [q_at_frame_start] * frame_len
