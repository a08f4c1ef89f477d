"""
Sample-and-delete construction of configuration-free incidence structures.

Each incidence of the lattice survives independently with probability p.
Dropping an incidence (q, line) stands for perturbing the line so that it
misses q, so the result is a combinatorial structure. Afterwards one
incidence of every remaining forbidden configuration is deleted until none
is left.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from .configurations import iter_configurations
from .incidence import IncidenceStructure, Lattice
from .errors import InputError
from .models import DeletionAudit, Provenance

logger = logging.getLogger(__name__)


def deletion_probability(n: int, s: int, multiplier: float = 1.0) -> float:
    """n^(-(s-1)/(3(s^2-s-1))) times a multiplier, clamped to [0, 1]"""
    if s < 3:
        raise InputError(f"s must be at least 3, got {s}")
    exponent = (s - 1) / (3 * (s * s - s - 1))
    return min(1.0, max(0.0, n ** (-exponent) * multiplier))


def trial_seed(seed: int, trial: int) -> int:
    """Seed of one trial, reproducible on its own"""
    return int(np.random.SeedSequence([seed, trial]).generate_state(1, np.uint64)[0])


def _sample(structure: IncidenceStructure, p: float, seed: int) -> IncidenceStructure:
    pairs = structure.incidence_pairs()
    rng = np.random.default_rng(seed)
    draws = rng.random(len(pairs))
    keep = {}
    for (c, q), u in zip(pairs, draws):
        if u < p:
            keep.setdefault(c, []).append(q)
    return structure.restricted(keep, Provenance.COMBINATORIAL)


def _without(structure: IncidenceStructure, removed: set) -> IncidenceStructure:
    keep = {c: [q for q in pts if (c, q) not in removed] for c, pts in structure.curves.items()}
    return structure.restricted(keep, Provenance.COMBINATORIAL)


def sample_and_delete(
    source,
    s: int,
    p: float,
    seed: int = 0,
    trial: int = 0,
    max_rounds: Optional[int] = None,
) -> Tuple[IncidenceStructure, DeletionAudit]:
    """
    Sample incidences, then delete until no forbidden configuration remains.

    Args:
        source: a Lattice or an IncidenceStructure with k = 1
        s: configuration size, at least 3
        p: selection probability
        seed: seed of this trial's generator
        trial: trial index recorded in the audit
        max_rounds: stop rescanning after this many rounds (unbounded by default)

    Returns:
        The surviving structure and the audit of the run
    """
    if not 0 <= p <= 1:
        raise InputError(f"p must lie in [0, 1], got {p}")
    if s < 3:
        raise InputError(f"s must be at least 3, got {s}")
    structure = source.structure if isinstance(source, Lattice) else source
    total = structure.incidences

    current = _sample(structure, p, seed)
    selected = current.incidences
    bad = 0
    deleted = 0
    rounds = 0
    while max_rounds is None or rounds < max_rounds:
        rounds += 1
        witnesses = list(iter_configurations(current, 1, s))
        if rounds == 1:
            bad = len(witnesses)
        if not witnesses:
            break
        removed: set = set()
        for witness in witnesses:
            used = witness.incidences()
            if any(pair in removed for pair in used):
                continue
            removed.add(used[0])
        deleted += len(removed)
        current = _without(current, removed)
        logger.debug("round %d: %d configurations, %d incidences deleted", rounds, len(witnesses), len(removed))

    audit = DeletionAudit(
        trial=trial,
        seed=seed,
        n=len(structure.point_ids),
        s=s,
        p=p,
        total_incidences=total,
        selected=selected,
        bad=bad,
        deleted=deleted,
        surviving=current.incidences,
        rounds=rounds,
    )
    logger.info(
        "trial %d: selected %d of %d, %d bad, %d deleted, %d surviving (%.2f of p*I)",
        trial, selected, total, bad, deleted, audit.surviving, audit.ratio,
    )
    return current, audit


def run_trials(lattice: Lattice, s: int, p: float, seed: int, trials: int) -> List[DeletionAudit]:
    return [sample_and_delete(lattice, s, p, trial_seed(seed, i), trial=i)[1] for i in range(trials)]
