"""Enhanced crow search: population metaheuristic with rank-driven
dynamic awareness, per-dimension local-neighborhood following, and
best-guided global moves.

Minimizes a nonnegative objective over a box.  A binary mode maps the
continuous positions through a sigmoid for subset-selection problems.
The classical crow search and a plain random search are included as
internal baselines for benchmarking only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DataError

RING_REACH = 2  # neighbors on each side of the shuffled ring (size 5 total)


@dataclass(frozen=True)
class EcsaConfig:
    """Search constants and the box the crows fly in.

    Defaults follow the reference protocol: 10 crows, 100 iterations,
    awareness probability between 0.1 and 0.8, fitness weight 0.9.
    """

    bounds: tuple[tuple[float, float], ...]
    population_size: int = 10
    max_iterations: int = 100
    flight_length: float = 2.0
    ap_min: float = 0.1
    ap_max: float = 0.8
    beta: float = 0.9
    seed: int = 0
    mode: str = "continuous"
    binary_threshold: float = 0.5
    stochastic_threshold: bool = False

    def __post_init__(self):
        if self.population_size < 2:
            raise DataError(f"population_size must be >= 2, got {self.population_size}")
        if self.max_iterations < 1:
            raise DataError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not (0.0 <= self.ap_min < self.ap_max <= 1.0):
            raise DataError(
                f"need 0 <= ap_min < ap_max <= 1, got ({self.ap_min}, {self.ap_max})"
            )
        if not (0.0 <= self.beta <= 1.0):
            raise DataError(f"beta must be in [0, 1], got {self.beta}")
        if self.mode not in ("continuous", "binary"):
            raise DataError(f"mode must be 'continuous' or 'binary', got {self.mode!r}")
        if not (0.0 <= self.binary_threshold <= 1.0):
            raise DataError(f"binary_threshold must be in [0, 1], got {self.binary_threshold}")
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        if not bounds:
            raise DataError("bounds must cover at least one dimension")
        if any(lo >= hi for lo, hi in bounds):
            raise DataError("every dimension needs lower < upper bound")

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.bounds])

    @property
    def evaluation_budget(self) -> int:
        """Objective evaluations one run consumes (init + per-iteration)."""
        return self.population_size * (self.max_iterations + 1)


@dataclass
class CrowPopulation:
    """Mutable search state: positions, per-crow memories and ranks."""

    positions: np.ndarray
    memories: np.ndarray
    fitnesses: np.ndarray
    memory_fitnesses: np.ndarray
    ranks: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    itr: int = 0
    neighborhoods: list[np.ndarray] = field(default_factory=list)


@dataclass(frozen=True)
class OptimizationResult:
    """Best solution of a run plus its per-iteration best-fitness trace."""

    best_position: np.ndarray
    best_fitness: float
    fitness_history: tuple[float, ...]
    metadata: dict


def init_population(config: EcsaConfig, rng: np.random.Generator | None = None) -> CrowPopulation:
    """Scatter the crows uniformly inside the bounds; memories start at
    the initial positions."""
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    lower, upper = config.lower, config.upper
    positions = lower + rng.random((config.population_size, config.dim)) * (upper - lower)
    n = config.population_size
    return CrowPopulation(
        positions=positions,
        memories=positions.copy(),
        fitnesses=np.full(n, np.inf),
        memory_fitnesses=np.full(n, np.inf),
        ranks=np.arange(1, n + 1),
        lower=lower,
        upper=upper,
    )


def dynamic_awareness_probability(rank: int, config: EcsaConfig) -> float:
    """Awareness probability for a crow of the given rank.

    DAP = ap_min + (ap_max - ap_min) * rank / N_p, so the best crow
    (rank 1) is the least aware and the worst crow the most.
    """
    if not 1 <= rank <= config.population_size:
        raise DataError(f"rank {rank} outside 1..{config.population_size}")
    span = config.ap_max - config.ap_min
    return config.ap_min + span * rank / config.population_size


def reshuffle_neighborhoods(population: CrowPopulation, rng: np.random.Generator) -> None:
    """Rebuild each crow's small static neighborhood from a fresh shuffle.

    Crows are placed on a shuffled ring; a crow's neighborhood is itself
    plus up to two ring neighbors on each side.
    """
    n = population.positions.shape[0]
    order = rng.permutation(n)
    slot_of = np.empty(n, dtype=int)
    slot_of[order] = np.arange(n)
    neighborhoods = []
    for crow in range(n):
        s = slot_of[crow]
        slots = []
        for offset in range(-RING_REACH, RING_REACH + 1):
            slot = (s + offset) % n
            if slot not in slots:
                slots.append(slot)
        neighborhoods.append(order[slots])
    population.neighborhoods = neighborhoods


def local_neighborhood_update(
    crow_index: int,
    population: CrowPopulation,
    flight_length: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Move a crow toward cached positions borrowed from its neighborhood.

    For every dimension independently, a neighborhood member is drawn and
    the coordinate of its memory (the position it caches food at, which
    is what crows follow each other to) pulls the crow with step size
    ``flight_length``.  The result is clamped to the bounds.
    """
    position = population.positions[crow_index]
    neighborhood = population.neighborhoods[crow_index]
    dim = position.shape[0]
    picks = rng.integers(0, len(neighborhood), size=dim)
    guides = population.memories[neighborhood[picks], np.arange(dim)]
    moved = position + flight_length * (guides - position)
    return np.clip(moved, population.lower, population.upper)


def decay_coefficient(itr: int, max_itr: int) -> float:
    """Best-guided step size C1 = 2 exp(-(4 itr / max_itr)^2), decaying
    from 2 toward 0 across the run."""
    return 2.0 * math.exp(-((4.0 * itr / max_itr) ** 2))


def global_update(
    crow_position: np.ndarray,
    best_position: np.ndarray,
    itr: int,
    max_itr: int,
    rng: np.random.Generator,
    lower: np.ndarray,
    upper: np.ndarray,
) -> np.ndarray:
    """Relocate a crow around the global best.

    One direction draw decides the side for the whole move; each
    dimension gets an independent uniform step scaled by the decaying
    coefficient.  Clamped to the bounds.
    """
    if not 0 <= itr <= max_itr:
        raise DataError(f"iteration {itr} outside 0..{max_itr}")
    c1 = decay_coefficient(itr, max_itr)
    c2 = rng.random(crow_position.shape[0])
    sign = 1.0 if rng.random() < 0.5 else -1.0
    moved = best_position + sign * c1 * c2
    return np.clip(moved, lower, upper)


def binarize(
    position: np.ndarray,
    threshold: float = 0.5,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Map a continuous position to bits: 1 where sigmoid(u) >= threshold.

    Passing an rng draws a fresh uniform threshold per element instead of
    using the fixed one.
    """
    position = np.asarray(position, dtype=float)
    sig = 1.0 / (1.0 + np.exp(-position))
    thresholds = rng.random(position.shape) if rng is not None else threshold
    return (sig >= thresholds).astype(int)


def fitness(err: float, beta: float, subset_fraction: float | None = None) -> float:
    """Weighted fitness: beta * err plus the (1 - beta) term.

    Continuous searches have no subset, so the second term is the
    constant (1 - beta); binary searches weight the selected-subset
    fraction instead.
    """
    if subset_fraction is None:
        return beta * err + (1.0 - beta)
    return beta * err + (1.0 - beta) * subset_fraction


def _ranks_from_fitness(fitnesses: np.ndarray) -> np.ndarray:
    order = np.argsort(fitnesses, kind="stable")
    ranks = np.empty_like(order)
    ranks[order] = np.arange(1, len(order) + 1)
    return ranks


class ObjectiveError(RuntimeError):
    """Objective raised during a run; carries iteration and crow index."""


def _evaluate(
    objective: Callable[[np.ndarray], float],
    position: np.ndarray,
    config: EcsaConfig,
    rng: np.random.Generator,
    itr: int,
    crow: int,
) -> tuple[float, float]:
    """Fitness and raw objective value of one position."""
    if config.mode == "binary":
        bits = binarize(
            position,
            config.binary_threshold,
            rng=rng if config.stochastic_threshold else None,
        )
        solution, subset_fraction = bits, float(bits.mean())
    else:
        solution, subset_fraction = position, None
    try:
        err = float(objective(solution))
    except Exception as exc:
        raise ObjectiveError(
            f"objective failed at iteration {itr}, crow {crow}: {exc}"
        ) from exc
    return fitness(err, config.beta, subset_fraction), err


def optimize(
    objective: Callable[[np.ndarray], float],
    config: EcsaConfig,
    initial_guesses: Sequence[np.ndarray] = (),
) -> OptimizationResult:
    """Run one enhanced crow search to minimize the objective.

    Each iteration ranks the population, computes per-crow awareness
    probabilities, and moves every crow either by following its local
    neighborhood or toward the global best; memories update only on
    improvement, so the best-fitness history never increases.  Fixed
    seeds reproduce runs bit for bit.

    Args:
        initial_guesses: optional warm-start positions replacing the
            first crows' random spots (clamped to the bounds).
    """
    rng = np.random.default_rng(config.seed)
    pop = init_population(config, rng)
    n = config.population_size
    if len(initial_guesses) > n:
        raise DataError(
            f"{len(initial_guesses)} initial guesses exceed the population size {n}"
        )
    for j, guess in enumerate(initial_guesses):
        guess = np.clip(np.asarray(guess, dtype=float), config.lower, config.upper)
        if guess.shape != (config.dim,):
            raise DataError(f"initial guess {j} has shape {guess.shape}, expected ({config.dim},)")
        pop.positions[j] = guess
        pop.memories[j] = guess.copy()

    memory_errs = np.full(n, np.inf)
    for j in range(n):
        fit, err = _evaluate(objective, pop.positions[j], config, rng, 0, j)
        pop.fitnesses[j] = fit
        pop.memory_fitnesses[j] = fit
        memory_errs[j] = err
    pop.ranks = _ranks_from_fitness(pop.fitnesses)
    history = [float(pop.memory_fitnesses.min())]

    for itr in range(1, config.max_iterations + 1):
        pop.itr = itr
        reshuffle_neighborhoods(pop, rng)
        best = pop.memories[int(np.argmin(pop.memory_fitnesses))]

        new_positions = np.empty_like(pop.positions)
        for j in range(n):
            dap = dynamic_awareness_probability(int(pop.ranks[j]), config)
            if rng.random() >= dap:
                new_positions[j] = local_neighborhood_update(
                    j, pop, config.flight_length, rng
                )
            else:
                new_positions[j] = global_update(
                    pop.positions[j], best, itr, config.max_iterations,
                    rng, pop.lower, pop.upper,
                )

        pop.positions = new_positions
        for j in range(n):
            fit, err = _evaluate(objective, pop.positions[j], config, rng, itr, j)
            pop.fitnesses[j] = fit
            if fit < pop.memory_fitnesses[j]:
                pop.memory_fitnesses[j] = fit
                pop.memories[j] = pop.positions[j].copy()
                memory_errs[j] = err
        pop.ranks = _ranks_from_fitness(pop.fitnesses)
        history.append(float(pop.memory_fitnesses.min()))

    best_idx = int(np.argmin(pop.memory_fitnesses))
    metadata = {
        "seed": config.seed,
        "iterations_executed": config.max_iterations,
        "evaluations": config.evaluation_budget,
        "mode": config.mode,
        "best_objective": float(memory_errs[best_idx]),
    }
    if config.mode == "binary":
        metadata["best_bits"] = binarize(
            pop.memories[best_idx], config.binary_threshold
        ).tolist()
    return OptimizationResult(
        best_position=pop.memories[best_idx].copy(),
        best_fitness=float(pop.memory_fitnesses[best_idx]),
        fitness_history=tuple(history),
        metadata=metadata,
    )


def classical_csa(objective: Callable[[np.ndarray], float], config: EcsaConfig) -> OptimizationResult:
    """Plain crow search baseline (internal, for benchmark comparison).

    Fixed awareness probability (``ap_min``), random crow to follow,
    random relocation on awareness.  Shares the evaluation budget and
    seeding scheme with :func:`optimize`.
    """
    rng = np.random.default_rng(config.seed)
    pop = init_population(config, rng)
    n = config.population_size
    lower, upper = config.lower, config.upper

    memory_errs = np.full(n, np.inf)
    for j in range(n):
        fit, err = _evaluate(objective, pop.positions[j], config, rng, 0, j)
        pop.fitnesses[j] = fit
        pop.memory_fitnesses[j] = fit
        memory_errs[j] = err
    history = [float(pop.memory_fitnesses.min())]

    for itr in range(1, config.max_iterations + 1):
        new_positions = np.empty_like(pop.positions)
        for j in range(n):
            target = int(rng.integers(0, n))
            if rng.random() >= config.ap_min:
                step = config.flight_length * rng.random()
                moved = pop.positions[j] + step * (pop.memories[target] - pop.positions[j])
            else:
                moved = lower + rng.random(config.dim) * (upper - lower)
            new_positions[j] = np.clip(moved, lower, upper)
        pop.positions = new_positions
        for j in range(n):
            fit, err = _evaluate(objective, pop.positions[j], config, rng, itr, j)
            pop.fitnesses[j] = fit
            if fit < pop.memory_fitnesses[j]:
                pop.memory_fitnesses[j] = fit
                pop.memories[j] = pop.positions[j].copy()
                memory_errs[j] = err
        history.append(float(pop.memory_fitnesses.min()))

    best_idx = int(np.argmin(pop.memory_fitnesses))
    return OptimizationResult(
        best_position=pop.memories[best_idx].copy(),
        best_fitness=float(pop.memory_fitnesses[best_idx]),
        fitness_history=tuple(history),
        metadata={
            "seed": config.seed,
            "iterations_executed": config.max_iterations,
            "evaluations": config.evaluation_budget,
            "mode": config.mode,
            "best_objective": float(memory_errs[best_idx]),
            "algorithm": "classical-csa",
        },
    )


def random_search(objective: Callable[[np.ndarray], float], config: EcsaConfig) -> OptimizationResult:
    """Uniform random sampling with the same evaluation budget (internal
    baseline)."""
    rng = np.random.default_rng(config.seed)
    lower, upper = config.lower, config.upper
    best_fit = math.inf
    best_err = math.inf
    best_pos = lower.copy()
    history = []
    evaluated = 0
    for block in range(config.max_iterations + 1):
        for j in range(config.population_size):
            position = lower + rng.random(config.dim) * (upper - lower)
            fit, err = _evaluate(objective, position, config, rng, block, j)
            evaluated += 1
            if fit < best_fit:
                best_fit = fit
                best_err = err
                best_pos = position
        history.append(best_fit)
    return OptimizationResult(
        best_position=best_pos.copy(),
        best_fitness=float(best_fit),
        fitness_history=tuple(history),
        metadata={
            "seed": config.seed,
            "iterations_executed": config.max_iterations,
            "evaluations": evaluated,
            "mode": config.mode,
            "best_objective": float(best_err),
            "algorithm": "random-search",
        },
    )


def sphere(x: np.ndarray) -> float:
    """Sum of squares benchmark function."""
    x = np.asarray(x, dtype=float)
    return float(np.sum(x**2))


def rastrigin(x: np.ndarray) -> float:
    """Multimodal benchmark: 10 d + sum(x^2 - 10 cos(2 pi x))."""
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x**2 - 10.0 * np.cos(2.0 * math.pi * x)))


BENCHMARKS: dict[str, Callable[[np.ndarray], float]] = {
    "sphere": sphere,
    "rastrigin": rastrigin,
}
