"""Discrete-event simulation of the allocation pipeline.

Decision instants are event-driven: every distinct arrival time triggers a
pass in which all arrived, still-pending workflows are offered to the
allocator in FCFS order (ties broken by total qubit requirement, then user
priority). A successful allocation enqueues each task on its QPU's FIFO
queue; a failed one is retried at later decision instants a bounded number
of times and then recorded as failed.

Task start times respect both the QPU queue and, by default, the workflow's
dependency edges including the per-edge communication delay. Both gating
behaviours can be switched off to replicate the fully asynchronous reading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from .allocators import AllocationOutcome
from .costs import edge_communication_cost, fidelity, runtime_cost, workflow_network_cost
from .model import NetworkParams, ResourceNetwork, Workflow

DEFAULT_RETRY_LIMIT = 3


class Allocator(Protocol):
    def __call__(self, workflow: Workflow, network: ResourceNetwork, sim_time: float) -> AllocationOutcome: ...


@dataclass
class MetricsAccumulator:
    """Running totals of the six evaluation metrics."""

    execution_time: float = 0.0
    wait_time: float = 0.0
    fidelity_sum: float = 0.0
    task_count: int = 0
    communication_overhead: float = 0.0
    decision_time: float = 0.0
    tasks_allocated: int = 0
    tasks_total: int = 0

    @property
    def avg_fidelity(self) -> float:
        return self.fidelity_sum / self.task_count if self.task_count else 0.0

    @property
    def completion_pct(self) -> float:
        return 100.0 * self.tasks_allocated / self.tasks_total if self.tasks_total else 0.0


@dataclass
class TaskExecution:
    """Timeline record of one executed task."""

    workflow_id: str
    task_index: int
    node_index: int
    start: float
    finish: float

    @property
    def duration(self) -> float:
        return self.finish - self.start


@dataclass
class SimState:
    """Live simulation state; returned with final metrics after a run."""

    clock: float
    network: ResourceNetwork
    pending: list[Workflow] = field(default_factory=list)
    completed: list[Workflow] = field(default_factory=list)
    failed: list[Workflow] = field(default_factory=list)
    metrics: MetricsAccumulator = field(default_factory=MetricsAccumulator)
    executions: list[TaskExecution] = field(default_factory=list)
    busy_seconds: dict[int, float] = field(default_factory=dict)


def run_simulation(
    workload: list[Workflow],
    network: ResourceNetwork,
    allocator: Allocator,
    params: NetworkParams,
    retry_limit: int = DEFAULT_RETRY_LIMIT,
    dependency_gating: bool = True,
    gate_comm_latency: bool = True,
) -> SimState:
    """Run one workload through the pipeline and return the final state.

    The passed network is mutated in place (queue state); hand each run its
    own network. Metrics follow the evaluation conventions: execution time
    is the workload makespan, wait time sums per-task (start - arrival),
    fidelity averages over allocated tasks, communication overhead sums the
    raw per-workflow network cost, decision time sums allocator CPU time
    over every invocation including failed attempts.
    """
    state = SimState(clock=0.0, network=network)
    state.busy_seconds = {k: 0.0 for k in range(len(network.nodes))}
    state.metrics.tasks_total = sum(len(wf.tasks) for wf in workload)
    if not workload:
        return state

    order = sorted(workload, key=lambda wf: (wf.arrival_time, wf.total_qubits, wf.priority, wf.id))
    first_arrival = min(wf.arrival_time for wf in workload)
    instants = sorted({wf.arrival_time for wf in workload})
    attempts: dict[str, int] = {wf.id: 0 for wf in workload}
    pending = list(order)
    last_finish = None

    def decision_pass(t: float) -> None:
        nonlocal pending, last_finish
        state.clock = t
        eligible = [wf for wf in pending if wf.arrival_time <= t]
        still_pending = [wf for wf in pending if wf.arrival_time > t]
        for wf in eligible:
            attempts[wf.id] += 1
            outcome = allocator(wf, network, t)
            state.metrics.decision_time += outcome.decision_time
            if outcome.succeeded:
                finish = _execute(wf, outcome, state, params, t, dependency_gating, gate_comm_latency)
                last_finish = finish if last_finish is None else max(last_finish, finish)
                state.completed.append(wf)
            elif attempts[wf.id] > retry_limit:
                state.failed.append(wf)
            else:
                still_pending.append(wf)
        pending = sorted(
            still_pending, key=lambda wf: (wf.arrival_time, wf.total_qubits, wf.priority, wf.id)
        )

    for t in instants:
        decision_pass(t)
    # Workflows still pending after the last arrival spend their remaining
    # retries at synthetic instants on the final clock.
    while pending and any(attempts[wf.id] <= retry_limit for wf in pending):
        decision_pass(state.clock)

    for wf in pending:
        state.failed.append(wf)
    pending = []

    if last_finish is not None:
        state.metrics.execution_time = last_finish - first_arrival
    return state


def _execute(
    workflow: Workflow,
    outcome: AllocationOutcome,
    state: SimState,
    params: NetworkParams,
    now: float,
    dependency_gating: bool,
    gate_comm_latency: bool,
) -> float:
    """Enqueue an allocated workflow's tasks and advance node queue state.

    Returns the workflow's last task finish time.
    """
    allocation = outcome.allocation
    assert allocation is not None
    network = state.network
    assignment = allocation.assignment
    finish_times: dict[int, float] = {}
    preds: dict[int, list[int]] = {j: [] for j in range(len(workflow.tasks))}
    for a, b in workflow.edges:
        preds[b].append(a)

    workflow_last = now
    for j in workflow.topological_order():
        task = workflow.tasks[j]
        node_index = assignment[j]
        node = network.nodes[node_index]
        ready = now
        if dependency_gating:
            for p in sorted(preds[j]):
                gate = finish_times[p]
                if gate_comm_latency:
                    gate += edge_communication_cost(
                        workflow.tasks[p],
                        network.nodes[assignment[p]],
                        task,
                        node,
                        params,
                    )
                ready = max(ready, gate)
        start = max(node.next_available_time, ready)
        duration = runtime_cost(task, node)
        finish = start + duration
        finish_times[j] = finish
        node.next_available_time = finish
        node.queue.append((workflow.id, j))
        state.busy_seconds[node_index] += duration
        state.executions.append(
            TaskExecution(workflow_id=workflow.id, task_index=j, node_index=node_index, start=start, finish=finish)
        )
        state.metrics.wait_time += start - workflow.arrival_time
        state.metrics.fidelity_sum += fidelity(task, node)
        state.metrics.task_count += 1
        state.metrics.tasks_allocated += 1
        workflow_last = max(workflow_last, finish)

    state.metrics.communication_overhead += workflow_network_cost(
        workflow, assignment, network, params, require_links=True
    )
    return workflow_last


def qpu_time_distribution(state: SimState) -> list[float]:
    """Percentage of total busy time spent on each node; zeros when the run
    executed nothing."""
    total = sum(state.busy_seconds.values())
    shares = []
    for k in range(len(state.network.nodes)):
        busy = state.busy_seconds.get(k, 0.0)
        shares.append(100.0 * busy / total if total > 0 else 0.0)
    return shares


def make_allocator(
    name: str,
    weights,
    params,
    soft_config=None,
    base_seed: int = 0,
    trial_multiplier: int = 1,
) -> Allocator:
    """Bind an allocator name to a uniform (workflow, network, sim_time)
    callable for the simulation loop.

    The random strategy derives a fresh seed per invocation from the base
    seed and an invocation counter, so retries draw new trials while the
    whole run stays reproducible.
    """
    from . import allocators as alg

    if name == "soft_iso":
        def call(workflow, network, sim_time):
            return alg.soft_iso(workflow, network, weights, params, soft_config, sim_time)
    elif name == "random_aware":
        counter = [0]

        def call(workflow, network, sim_time):
            counter[0] += 1
            seed = base_seed * 1_000_003 + counter[0]
            return alg.random_aware(
                workflow, network, weights, params, seed, sim_time, trial_multiplier
            )
    elif name == "greedy_dfs":
        def call(workflow, network, sim_time):
            return alg.greedy_dfs(workflow, network, sim_time)
    elif name == "exhaustive_oracle":
        def call(workflow, network, sim_time):
            return alg.exhaustive_oracle(workflow, network, weights, params, sim_time)
    else:
        raise ValueError(f"unknown allocator {name!r}")
    return call


ALLOCATOR_NAMES = ("soft_iso", "random_aware", "greedy_dfs", "exhaustive_oracle")
