"""Genetic search over offload genomes.

A genome is a '0'/'1' string over the genome map: bit k decides whether
eligible loop genome_map.loop_ids[k] runs on the GPU.  Each generation is
evaluate -> roulette selection with one preserved elite -> one-point
crossover -> per-gene mutation.  Fitness is seconds**(-1/2) by default, so
a fast individual cannot crowd out the rest of the search; timeouts and
invalid genomes (nested selections) are priced at a fixed penalty time.

All randomness flows through one seeded random.Random in a fixed order:
population init (one draw per gene), then per generation the roulette
draws (one per non-elite slot), the per-pair crossover draws (one
probability draw, plus one cut-point draw when crossing), and the mutation
draws (one per gene of every non-elite individual).  Evaluations consume
no randomness, so results do not depend on evaluation parallelism.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .analysis import GenomeMap
from .errors import DomainError, EmptyGenome
from .evaluation import INVALID, MEASURED, MeasurementCache, TIMEOUT
from .loops import LoopTree
from .transfer import check_genome_valid

CACHE_HIT = "cachehit"

DEFAULT_FITNESS_EXPONENT = -0.5


@dataclass
class GAConfig:
    population: int = 30
    generations: int = 20
    crossover_rate: float = 0.9
    mutation_rate: float = 0.05
    timeout_seconds: float = 180.0
    penalty_seconds: float = 1000.0
    rng_seed: int = 0
    fitness_exponent: float = DEFAULT_FITNESS_EXPONENT
    workers: int = 1

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be at least 2")
        if self.generations < 1:
            raise ValueError("generations must be at least 1")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.penalty_seconds <= 0 or self.timeout_seconds <= 0:
            raise ValueError("timeout and penalty must be positive")


@dataclass(frozen=True)
class EvaluatedIndividual:
    genome: str
    seconds: float
    fitness: float
    status: str     # 'measured' | 'timeout' | 'invalid' | 'cachehit'


@dataclass(frozen=True)
class GenerationStats:
    generation: int             # 1-based
    best_seconds: float
    best_fitness: float
    mean_fitness: float
    evaluations_performed: int  # cumulative evaluator invocations
    cache_hits: int             # cumulative individuals served from the cache


@dataclass
class SearchResult:
    best: EvaluatedIndividual
    history: list[GenerationStats]
    gene_length: int
    effective_population: int
    evaluations_performed: int
    cache_hits: int


def fitness_from_time(seconds: float, status: str = MEASURED, *,
                      penalty_seconds: float = 1000.0,
                      exponent: float = DEFAULT_FITNESS_EXPONENT) -> float:
    """seconds**exponent for real measurements; timeouts and invalid
    individuals are priced as if they took penalty_seconds."""
    if status in (TIMEOUT, INVALID):
        return penalty_seconds ** exponent
    if seconds <= 0:
        raise DomainError(f"measured time must be positive, got {seconds}")
    return seconds ** exponent


def init_population(size: int, gene_length: int, rng: random.Random) -> list[str]:
    """size genomes with each gene drawn uniformly from {0, 1}."""
    if gene_length < 1:
        raise EmptyGenome("cannot build genomes of length 0")
    return ["".join("1" if rng.random() < 0.5 else "0" for _ in range(gene_length))
            for _ in range(size)]


def select_next_parents(evaluated: list[EvaluatedIndividual],
                        rng: random.Random) -> list[str]:
    """Slot 0 holds a verbatim copy of the best individual (ties break to
    the lower index); the remaining slots are fitness-proportional draws
    with replacement."""
    best_index = 0
    for i, ind in enumerate(evaluated):
        if ind.fitness > evaluated[best_index].fitness:
            best_index = i
    weights = [ind.fitness for ind in evaluated]
    total = sum(weights)
    cumulative = []
    acc = 0.0
    for w in weights:
        acc += w
        cumulative.append(acc)

    parents = [evaluated[best_index].genome]
    for _ in range(len(evaluated) - 1):
        x = rng.random() * total
        index = 0
        while index < len(cumulative) - 1 and cumulative[index] <= x:
            index += 1
        parents.append(evaluated[index].genome)
    return parents


def one_point_crossover(parent1: str, parent2: str, crossover_rate: float,
                        rng: random.Random) -> tuple[str, str]:
    """With probability crossover_rate, swap suffixes at a cut drawn
    uniformly from 1..len-1; genomes shorter than 2 pass through."""
    if len(parent1) != len(parent2):
        raise ValueError("crossover parents must have equal length")
    if len(parent1) < 2:
        return parent1, parent2
    if rng.random() < crossover_rate:
        cut = rng.randint(1, len(parent1) - 1)
        return (parent1[:cut] + parent2[cut:], parent2[:cut] + parent1[cut:])
    return parent1, parent2


def mutate(genome: str, mutation_rate: float, rng: random.Random) -> str:
    """Flip each gene independently with probability mutation_rate."""
    return "".join(
        ("0" if bit == "1" else "1") if rng.random() < mutation_rate else bit
        for bit in genome
    )


def _better_best(current: EvaluatedIndividual | None,
                 candidate: EvaluatedIndividual) -> EvaluatedIndividual:
    """Best-ever tracking: a valid individual always beats an invalid one;
    otherwise lower seconds wins and the earlier individual keeps ties."""
    if current is None:
        return candidate
    current_invalid = current.status == INVALID
    candidate_invalid = candidate.status == INVALID
    if current_invalid != candidate_invalid:
        return candidate if current_invalid else current
    return candidate if candidate.seconds < current.seconds else current


def run_ga(config: GAConfig, genome_map: GenomeMap, tree: LoopTree, evaluate,
           cache: MeasurementCache | None = None) -> SearchResult:
    """Run the full generation loop and return the best individual ever seen
    plus the per-generation history.

    `evaluate(bits) -> Measurement` is only ever called for genomes that are
    valid (no nested selections) and not in the dedup cache; invalid genomes
    are priced at the penalty without evaluation.  The population is clamped
    to the gene length (never below 2) so tiny search spaces do not drown in
    duplicates; the effective size is reported in the result.
    """
    gene_length = len(genome_map)
    if gene_length == 0:
        raise EmptyGenome("no offloadable loops")
    size = min(config.population, max(2, gene_length))
    rng = random.Random(config.rng_seed)
    cache = cache if cache is not None else MeasurementCache()

    population = init_population(size, gene_length, rng)
    validity: dict[str, bool] = {}

    def is_valid(bits: str) -> bool:
        if bits not in validity:
            validity[bits] = check_genome_valid(bits, genome_map, tree)
        return validity[bits]

    best: EvaluatedIndividual | None = None
    history: list[GenerationStats] = []
    evaluations = 0
    hits = 0

    for generation in range(1, config.generations + 1):
        # measure the distinct valid genomes this generation adds, then
        # score every individual from the cache
        fresh: list[str] = []
        seen: set[str] = set()
        for bits in population:
            if is_valid(bits) and bits not in seen and bits not in cache:
                seen.add(bits)
                fresh.append(bits)
        if config.workers > 1 and len(fresh) > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                measurements = list(pool.map(evaluate, fresh))
        else:
            measurements = [evaluate(bits) for bits in fresh]
        for bits, measurement in zip(fresh, measurements):
            cache.put(bits, measurement)
        evaluations += len(fresh)

        claimed: set[str] = set()
        evaluated: list[EvaluatedIndividual] = []
        for bits in population:
            if not is_valid(bits):
                fitness = fitness_from_time(
                    config.penalty_seconds, INVALID,
                    penalty_seconds=config.penalty_seconds,
                    exponent=config.fitness_exponent)
                evaluated.append(EvaluatedIndividual(
                    bits, config.penalty_seconds, fitness, INVALID))
                continue
            measurement = cache.get(bits)
            if bits in seen and bits not in claimed:
                claimed.add(bits)
                status = measurement.status
            else:
                status = CACHE_HIT
                hits += 1
            fitness = fitness_from_time(
                measurement.seconds, measurement.status,
                penalty_seconds=config.penalty_seconds,
                exponent=config.fitness_exponent)
            evaluated.append(EvaluatedIndividual(
                bits, measurement.seconds, fitness, status))

        for individual in evaluated:
            best = _better_best(best, individual)

        gen_best = max(range(size), key=lambda i: (evaluated[i].fitness, -i))
        history.append(GenerationStats(
            generation=generation,
            best_seconds=evaluated[gen_best].seconds,
            best_fitness=evaluated[gen_best].fitness,
            mean_fitness=sum(ind.fitness for ind in evaluated) / size,
            evaluations_performed=evaluations,
            cache_hits=hits,
        ))

        if generation == config.generations:
            break

        parents = select_next_parents(evaluated, rng)
        offspring = [parents[0]]  # the elite skips crossover and mutation
        index = 1
        while index < size:
            if index + 1 < size:
                child1, child2 = one_point_crossover(
                    parents[index], parents[index + 1], config.crossover_rate, rng)
                offspring.append(mutate(child1, config.mutation_rate, rng))
                offspring.append(mutate(child2, config.mutation_rate, rng))
                index += 2
            else:
                offspring.append(mutate(parents[index], config.mutation_rate, rng))
                index += 1
        population = offspring

    return SearchResult(
        best=best,
        history=history,
        gene_length=gene_length,
        effective_population=size,
        evaluations_performed=evaluations,
        cache_hits=hits,
    )
