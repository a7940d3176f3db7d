"""Modularity, greedy Louvain optimization, and run stabilization.

The quality score of a partition is

    Q = (1/2m) * sum_ij (A_ij - k_i k_j / 2m) * [c_i == c_j]

summed over ordered vertex pairs including i == j. Because edge weights
are integers, Q times (2m)^2 is an integer; every comparison in this
module (greedy move gains, the brute-force argmax, tie-breaks) is done on
those exact integer numerators, so results never depend on float rounding.

Louvain alternates local vertex moves with community aggregation. After
the aggregation hierarchy stops merging, local-move sweeps are rerun on
the original graph from the induced flat partition until no single-vertex
move improves Q; the returned partition is therefore always single-move
locally optimal, which plain top-level convergence does not guarantee.
"""

import csv
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ._seeds import child_seed, make_rng
from .cooccur import KeywordGraph

__all__ = [
    "Partition",
    "LouvainConfig",
    "StabilizedResult",
    "modularity",
    "louvain",
    "brute_force_best",
    "stabilized_count",
    "is_locally_optimal",
    "write_partition_csv",
    "read_partition_csv",
]

BRUTE_FORCE_LIMIT = 10


@dataclass(frozen=True)
class Partition:
    """Community labels per vertex index; labels are contiguous 0..C-1."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        labels = set(self.assignment)
        if self.assignment and labels != set(range(len(labels))):
            raise ValueError("labels must be contiguous 0..C-1 and all used")

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment))

    def __len__(self):
        return len(self.assignment)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Canonicalize arbitrary labels by first appearance."""
        remap = {}
        out = []
        for lab in labels:
            if lab not in remap:
                remap[lab] = len(remap)
            out.append(remap[lab])
        return cls(assignment=tuple(out))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(assignment=tuple(range(n)))

    @classmethod
    def all_in_one(cls, n: int) -> "Partition":
        return cls(assignment=(0,) * n)

    def groups(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_communities)]
        for i, lab in enumerate(self.assignment):
            out[lab].append(i)
        return out


@dataclass(frozen=True)
class LouvainConfig:
    seed: int = 0
    max_sweeps_per_level: int = 100
    min_gain: float = 0.0

    def __post_init__(self):
        if self.max_sweeps_per_level < 1:
            raise ValueError("max_sweeps_per_level must be >= 1")
        if self.min_gain < 0:
            raise ValueError("min_gain must be >= 0")


@dataclass(frozen=True)
class StabilizedResult:
    """Modal community count over repeated seeded Louvain runs."""

    modal_count: int
    count_histogram: dict[int, int]
    representative: Partition
    representative_modularity: float | None


def _numerator(A_int, assignment) -> int:
    """Exact integer value of Q * (2m)^2 for a python-int matrix."""
    n = len(assignment)
    two_m = sum(sum(row) for row in A_int)
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(assignment):
        groups.setdefault(lab, []).append(i)
    total = 0
    for members in groups.values():
        s_c = 0
        sigma = 0
        for i in members:
            row = A_int[i]
            sigma += sum(row)
            for j in members:
                s_c += row[j]
        total += two_m * s_c - sigma * sigma
    return total


def modularity(g: KeywordGraph, p: Partition) -> float:
    """Q of a partition; raises on the m = 0 graph where Q is undefined."""
    if len(p) != g.n:
        raise ValueError("partition does not cover the graph's vertices")
    two_m = int(g.weights.sum())
    if two_m == 0:
        raise ValueError("empty graph: modularity undefined")
    A_int = [[int(x) for x in row] for row in g.weights]
    return _numerator(A_int, p.assignment) / (two_m * two_m)


def brute_force_best(g: KeywordGraph) -> tuple[Partition, float]:
    """Exhaustive modularity maximum over all set partitions.

    Ties go to the partition with fewest communities, then the
    lexicographically smallest assignment. Only feasible for small graphs;
    refuses more than 10 vertices (Bell numbers grow too fast).
    """
    n = g.n
    if n == 0:
        raise ValueError("empty graph")
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_LIMIT} vertices, got {n}")
    two_m = int(g.weights.sum())
    if two_m == 0:
        raise ValueError("empty graph: modularity undefined")
    A_int = [[int(x) for x in row] for row in g.weights]
    k = [sum(row) for row in A_int]

    best_num = None
    best_ncomm = None
    best_assign = None
    assign = [0] * n

    def descend(i, max_label):
        nonlocal best_num, best_ncomm, best_assign
        if i == n:
            num = 0
            groups: dict[int, list[int]] = {}
            for v, lab in enumerate(assign):
                groups.setdefault(lab, []).append(v)
            for members in groups.values():
                s_c = 0
                sigma = 0
                for a in members:
                    sigma += k[a]
                    row = A_int[a]
                    for b in members:
                        s_c += row[b]
                num += two_m * s_c - sigma * sigma
            ncomm = max_label + 1
            if best_num is None or num > best_num or (num == best_num and ncomm < best_ncomm):
                best_num = num
                best_ncomm = ncomm
                best_assign = tuple(assign)
            return
        for lab in range(max_label + 2):
            assign[i] = lab
            descend(i + 1, max(max_label, lab))

    descend(1, 0)
    return Partition(assignment=best_assign), best_num / (two_m * two_m)


def _relabel(comm: np.ndarray) -> np.ndarray:
    """Contiguous labels in order of first appearance."""
    remap = {}
    out = np.empty_like(comm)
    for i, lab in enumerate(comm.tolist()):
        if lab not in remap:
            remap[lab] = len(remap)
        out[i] = remap[lab]
    return out


def _one_level(A_int, nbrs, wts, comm, rng, cfg) -> tuple[np.ndarray, bool]:
    """Greedy local moves at one aggregation level.

    Sweeps vertices in a seeded random order, offering each a move to a
    neighboring community or to a fresh singleton; the best positive gain
    wins and staying put wins ties. The singleton candidate is what makes
    converged partitions single-move locally optimal: any move to a
    non-neighbor community is weakly worse than detaching.

    Gains are compared via the integer merits 2m*w_i[d] - k_i*sigma[d];
    gain(c -> d) = (merit_d - merit_stay) / (2m * m).
    """
    n = len(A_int)
    k = [sum(row) for row in A_int]
    two_m = sum(k)
    threshold = cfg.min_gain * two_m * (two_m / 2.0)
    sigma = [0] * (int(comm.max()) + 1)
    for i, lab in enumerate(comm.tolist()):
        sigma[lab] += k[i]

    moved_any = False
    for _ in range(cfg.max_sweeps_per_level):
        moved = False
        for i in rng.permutation(n).tolist():
            ki = k[i]
            if ki == 0:
                continue
            c = int(comm[i])
            w: dict[int, int] = {}
            for j, wij in zip(nbrs[i], wts[i]):
                d = int(comm[j])
                w[d] = w.get(d, 0) + wij
            sigma[c] -= ki
            stay = two_m * w.get(c, 0) - ki * sigma[c]
            best_c, best_merit = c, stay
            for d in sorted(w):
                if d == c:
                    continue
                merit = two_m * w[d] - ki * sigma[d]
                if merit > best_merit and (merit - stay) > threshold:
                    best_c, best_merit = d, merit
            if 0 > best_merit and (0 - stay) > threshold:
                best_c = len(sigma)  # detach into a fresh community
                sigma.append(0)
            sigma[best_c] += ki
            if best_c != c:
                comm[i] = best_c
                moved = True
        moved_any = moved_any or moved
        if not moved:
            break
    return comm, moved_any


def _adjacency(A_int):
    """Neighbor index/weight lists, self-loops excluded."""
    nbrs = []
    wts = []
    for i, row in enumerate(A_int):
        idx = [j for j, x in enumerate(row) if x and j != i]
        nbrs.append(idx)
        wts.append([row[j] for j in idx])
    return nbrs, wts


def _aggregate(A_int, comm, ncomm):
    """Collapse communities into super-vertices; internal weight becomes a
    self-loop so strengths and m are preserved at the next level."""
    B = [[0] * ncomm for _ in range(ncomm)]
    for i, row in enumerate(A_int):
        ci = int(comm[i])
        Bi = B[ci]
        for j, x in enumerate(row):
            if x:
                Bi[int(comm[j])] += x
    return B


def louvain(g: KeywordGraph, cfg: LouvainConfig | None = None) -> Partition:
    """Two-phase greedy modularity optimization, seeded and deterministic.

    Repeats local-move sweeps and community aggregation until aggregation
    stops merging, then refines at the original-vertex level until the flat
    partition is single-move locally optimal. Zero-strength vertices never
    move and end as singletons; the m = 0 graph yields all singletons.
    """
    cfg = cfg or LouvainConfig()
    n = g.n
    if n == 0:
        raise ValueError("empty graph")
    A0 = [[int(x) for x in row] for row in g.weights]
    if sum(sum(row) for row in A0) == 0:
        return Partition.singletons(n)
    rng = make_rng(cfg.seed)
    nbrs0, wts0 = _adjacency(A0)

    flat = np.arange(n)
    while True:
        flat, moved = _multilevel(A0, nbrs0, wts0, flat, rng, cfg)
        if not moved:
            break
    return Partition.from_labels(flat.tolist())


def _multilevel(A0, nbrs0, wts0, init, rng, cfg):
    A, nbrs, wts = A0, nbrs0, wts0
    comm = _relabel(np.asarray(init))
    mapping = None
    moved_total = False
    while True:
        comm, moved = _one_level(A, nbrs, wts, comm.copy(), rng, cfg)
        moved_total = moved_total or moved
        comm = _relabel(comm)
        mapping = comm if mapping is None else comm[mapping]
        ncomm = int(comm.max()) + 1
        if ncomm == len(A):
            break
        A = _aggregate(A, comm, ncomm)
        nbrs, wts = _adjacency(A)
        comm = np.arange(ncomm)
    return mapping, moved_total


def is_locally_optimal(g: KeywordGraph, p: Partition) -> bool:
    """True if no single-vertex move strictly increases Q.

    Moves considered: to any other existing community, and detaching into
    a new singleton community.
    """
    A_int = [[int(x) for x in row] for row in g.weights]
    k = [sum(row) for row in A_int]
    two_m = sum(k)
    comm = list(p.assignment)
    ncomm = p.n_communities
    sigma = [0] * ncomm
    for i, lab in enumerate(comm):
        sigma[lab] += k[i]
    for i in range(g.n):
        ki = k[i]
        if ki == 0:
            continue
        c = comm[i]
        w: dict[int, int] = {}
        for j, x in enumerate(A_int[i]):
            if x and j != i:
                w[comm[j]] = w.get(comm[j], 0) + x
        stay = two_m * w.get(c, 0) - ki * (sigma[c] - ki)
        if 0 > stay:  # detaching would improve
            return False
        for d in range(ncomm):
            if d == c:
                continue
            merit = two_m * w.get(d, 0) - ki * sigma[d]
            if merit > stay:
                return False
    return True


def stabilized_count(g: KeywordGraph, runs: int = 100, master_seed: int = 0,
                     config: LouvainConfig | None = None,
                     workers: int | None = None) -> StabilizedResult:
    """Run Louvain `runs` times with derived per-run seeds and keep the
    most frequent community count.

    Ties between equally frequent counts go to the count whose best run
    has higher modularity, then to the smaller count. The representative
    partition is the highest-modularity run achieving the modal count
    (lowest run index on ties). Results are identical whether runs execute
    serially or on a thread pool.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    base = config or LouvainConfig()
    has_edges = g.total_weight > 0

    def one_run(idx: int):
        p = louvain(g, replace(base, seed=child_seed(master_seed, idx)))
        q = modularity(g, p) if has_edges else None
        return p, q

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one_run, range(runs)))
    else:
        results = [one_run(i) for i in range(runs)]

    histogram = Counter(p.n_communities for p, _ in results)
    top_freq = max(histogram.values())
    candidates = sorted(c for c, f in histogram.items() if f == top_freq)
    if len(candidates) == 1 or not has_edges:
        modal = candidates[0]
    else:
        best_q = {c: max(q for p, q in results if p.n_communities == c) for c in candidates}
        modal = min(candidates, key=lambda c: (-best_q[c], c))

    rep, rep_q = None, None
    for p, q in results:
        if p.n_communities != modal:
            continue
        if rep is None or (has_edges and q > rep_q):
            rep, rep_q = p, q
    return StabilizedResult(
        modal_count=modal,
        count_histogram=dict(sorted(histogram.items())),
        representative=rep,
        representative_modularity=rep_q,
    )


def write_partition_csv(g: KeywordGraph, p: Partition, path) -> None:
    """Partition CSV: header keyword,community; labels as integers."""
    if len(p) != g.n:
        raise ValueError("partition does not cover the graph's vertices")
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
        writer.writerow(["keyword", "community"])
        for v, lab in zip(g.vertices, p.assignment):
            writer.writerow([v, lab])


def read_partition_csv(path) -> tuple[tuple[str, ...], Partition]:
    """Read a partition CSV back as (keywords, Partition)."""
    keywords = []
    labels = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["keyword", "community"]:
            raise ValueError("partition CSV must start with header keyword,community")
        for row in reader:
            if not row:
                continue
            keywords.append(row[0])
            labels.append(int(float(row[1])))
    return tuple(keywords), Partition.from_labels(labels)
