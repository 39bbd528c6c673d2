# hamlim/services/graphdecomp.py
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import networkx as nx
import numpy as np
from networkx.utils import UnionFind

from hamlim.core.errors import (
    DecompositionError,
    DiagonalError,
    DimensionMismatchError,
    DomainError,
    NotAForestError,
)
from hamlim.schemas.graph import ArboricityReport, DecompositionDocument, StarDocument
from hamlim.schemas.norms import InequalityCheck
from hamlim.services.matcore import (
    HermitianMatrix,
    abs_entrywise,
    check_state,
    hermitian,
    spectral_norm,
)
from hamlim.services.norms import equality_check, inequality_check, mcn

logger = logging.getLogger(__name__)

FLATTEN_TOL = 1e-12
STAR_IDENTITY_TOL = 1e-10
WEIGHT_MATCH_TOL = 1e-12

Edge = tuple[int, int, complex]


@dataclass(frozen=True)
class WeightedGraph:
    """
    Graph of the nonzero off-diagonal entries of a Hermitian matrix.

    Each edge is (u, v, H[u, v]) with u < v; the diagonal is carried along
    for reporting only.
    """

    n: int
    edges: tuple[Edge, ...]
    diagonal: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("graph must have at least one vertex")
        seen: set[tuple[int, int]] = set()
        for u, v, w in self.edges:
            if not 0 <= u < v < self.n:
                raise DomainError(f"edge ({u}, {v}) must satisfy 0 <= u < v < {self.n}")
            if (u, v) in seen:
                raise DomainError(f"duplicate edge ({u}, {v})")
            if w == 0:
                raise DomainError(f"edge ({u}, {v}) has zero weight")
            seen.add((u, v))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from((u, v, {"weight": w}) for u, v, w in self.edges)
        return g


@dataclass(frozen=True)
class GraphClassification:
    is_forest: bool
    components: tuple[tuple[int, ...], ...] = ()
    roots: tuple[int, ...] = ()
    cycle: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class PhaseFlattening:
    """
    Diagonal unitary U = diag(u_diag) with U H U^dagger = abs(H).
    """

    u_diag: np.ndarray
    root_choices: tuple[int, ...]
    residual: float

    def unitary(self) -> np.ndarray:
        return np.diag(self.u_diag)

    def apply(self, h: HermitianMatrix) -> np.ndarray:
        u = self.u_diag
        return u[:, None] * hermitian(h).data * u.conj()[None, :]


@dataclass(frozen=True)
class Star:
    """
    Star Hamiltonian with S[leaf, center] = w_leaf and S[center, leaf] = conj(w_leaf).

    Its only nonzero eigenvalues are +||w|| and -||w||.
    """

    center: int
    leaves: tuple[int, ...]
    weights: tuple[complex, ...]

    def __post_init__(self) -> None:
        if not self.leaves:
            raise DecompositionError("star needs at least one leaf")
        if len(set(self.leaves)) != len(self.leaves):
            raise DecompositionError(f"star at {self.center} has repeated leaves")
        if self.center in self.leaves:
            raise DecompositionError(f"star center {self.center} listed as its own leaf")
        if len(self.weights) != len(self.leaves):
            raise DecompositionError("star needs exactly one weight per leaf")
        if any(w == 0 for w in self.weights):
            raise DecompositionError(f"star at {self.center} has a zero-weight leaf")

    @property
    def w(self) -> np.ndarray:
        return np.array(self.weights, dtype=np.complex128)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.w))

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.center, *self.leaves)


StarForest = tuple[Star, ...]


@dataclass(frozen=True)
class StarForestDecomposition:
    """
    Edge partition of a Hamiltonian into forests of stars, H = sum_l S_l.

    source_forest_count is k', the number of forests the edges were split
    into before each was halved by parent-depth parity.
    """

    n: int
    forests: tuple[StarForest, ...]
    source_forest_count: int
    source_edge_count: int = field(default=0)

    def hamiltonians(self) -> list[HermitianMatrix]:
        return [forest_matrix(forest, self.n) for forest in self.forests]

    @property
    def star_count(self) -> int:
        return sum(len(forest) for forest in self.forests)


def graph_of(h: HermitianMatrix) -> WeightedGraph:
    h = hermitian(h)
    a = h.data
    rows, cols = np.nonzero(np.triu(a, 1))
    edges = tuple((int(u), int(v), complex(a[u, v])) for u, v in zip(rows, cols))
    return WeightedGraph(n=h.n, edges=edges, diagonal=tuple(float(x) for x in np.real(np.diag(a))))


def classify_graph(g: WeightedGraph) -> GraphClassification:
    """
    Forest test with deterministic roots (smallest vertex per component).

    For a graph with a cycle, one cycle is returned as a list of edges.
    """
    graph = g.to_networkx()
    if not nx.is_forest(graph):
        cycle = nx.find_cycle(graph)
        return GraphClassification(
            is_forest=False,
            cycle=tuple((int(u), int(v)) for u, v in cycle),
        )

    components = sorted(
        (tuple(sorted(c)) for c in nx.connected_components(graph)),
        key=lambda comp: comp[0],
    )
    return GraphClassification(
        is_forest=True,
        components=tuple(components),
        roots=tuple(comp[0] for comp in components),
    )


def _require_forest(g: WeightedGraph) -> GraphClassification:
    classification = classify_graph(g)
    if not classification.is_forest:
        raise NotAForestError(
            f"graph has a cycle: {list(classification.cycle)}",
            cycle=list(classification.cycle),
        )
    return classification


def _bfs_edges(graph: nx.Graph, roots: Iterable[int]) -> list[tuple[int, int, int]]:
    """(parent, child, depth of parent) for every tree edge, roots in order."""
    out: list[tuple[int, int, int]] = []
    for root in roots:
        depth = {root: 0}
        for parent, child in nx.bfs_edges(graph, root, sort_neighbors=sorted):
            depth[child] = depth[parent] + 1
            out.append((parent, child, depth[parent]))
    return out


def flatten_phases(h: HermitianMatrix) -> PhaseFlattening:
    """
    Diagonal unitary that turns every edge weight of a forest into its modulus.

    Rules
    -----
    - Each component is rooted at its smallest vertex, with U_root = 1.
    - Walking down the tree, U_child = U_parent * alpha where
      alpha = H[parent, child] / |H[parent, child]|.
    Then (U H U^dagger)[parent, child] = |H[parent, child]|.

    Raises
    ------
    NotAForestError
        If the graph of H has a cycle.
    DiagonalError
        If some diagonal entry is negative; conjugation by U leaves H_ii
        unchanged, so abs(H) would be unreachable.
    """
    h = hermitian(h)
    diag = np.real(np.diag(h.data))
    if np.any(diag < 0):
        bad = int(np.flatnonzero(diag < 0)[0])
        raise DiagonalError(f"diagonal entry H[{bad},{bad}] = {diag[bad]} is negative")

    g = graph_of(h)
    classification = _require_forest(g)

    u = np.ones(h.n, dtype=np.complex128)
    for parent, child, _ in _bfs_edges(g.to_networkx(), classification.roots):
        entry = h.data[parent, child]
        value = u[parent] * entry / abs(entry)
        u[child] = value / abs(value)

    u.setflags(write=False)
    flattened = u[:, None] * h.data * u.conj()[None, :]
    residual = float(np.max(np.abs(flattened - np.abs(h.data))))
    if residual > FLATTEN_TOL:
        logger.warning("phase flattening residual %.3e exceeds %.0e", residual, FLATTEN_TOL)
    return PhaseFlattening(u_diag=u, root_choices=classification.roots, residual=residual)


def _leaf_weight(weights: dict[tuple[int, int], complex], leaf: int, center: int) -> complex:
    if leaf < center:
        return weights[(leaf, center)]
    return weights[(center, leaf)].conjugate()


def _split_roots(graph: nx.Graph, classification: GraphClassification) -> list[int]:
    """Smallest vertex per component, except that a star is rooted at its center."""
    roots = []
    for component, root in zip(classification.components, classification.roots):
        if len(component) > 2:
            hub = max(component, key=lambda v: (graph.degree(v), -v))
            if graph.degree(hub) == len(component) - 1:
                root = hub
        roots.append(root)
    return roots


def star_forest_split(g: WeightedGraph) -> tuple[StarForest, StarForest]:
    """
    Split a forest into two star forests by the parity of the parent's depth.

    Forest 0 holds the edges whose parent sits at even depth, forest 1 the
    rest. Within each, the children of one parent form one star centred on
    that parent. A component that is already a star is rooted at its center,
    so it lands whole in forest 0.
    """
    classification = _require_forest(g)
    weights = {(u, v): w for u, v, w in g.edges}
    graph = g.to_networkx()

    grouped: tuple[dict[int, list[int]], dict[int, list[int]]] = ({}, {})
    for parent, child, depth in _bfs_edges(graph, _split_roots(graph, classification)):
        grouped[depth % 2].setdefault(parent, []).append(child)

    forests = []
    for groups in grouped:
        stars = []
        for center in sorted(groups):
            leaves = tuple(sorted(groups[center]))
            stars.append(
                Star(
                    center=center,
                    leaves=leaves,
                    weights=tuple(_leaf_weight(weights, leaf, center) for leaf in leaves),
                )
            )
        forests.append(tuple(stars))
    return forests[0], forests[1]


def greedy_forest_partition(g: WeightedGraph) -> list[WeightedGraph]:
    """
    Peel off maximal spanning forests until no edge remains.

    Edges are scanned in (u, v) order and joined through union-find, so the
    result is deterministic. The count k' is an upper bound on arboricity.
    """
    remaining = sorted(g.edges, key=lambda e: (e[0], e[1]))
    forests: list[WeightedGraph] = []
    while remaining:
        components = UnionFind(range(g.n))
        taken: list[Edge] = []
        rest: list[Edge] = []
        for edge in remaining:
            u, v, _ = edge
            if components[u] != components[v]:
                components.union(u, v)
                taken.append(edge)
            else:
                rest.append(edge)
        forests.append(WeightedGraph(n=g.n, edges=tuple(taken)))
        remaining = rest
    return forests


def _check_partition(g: WeightedGraph, forests: Sequence[WeightedGraph]) -> None:
    expected = {(u, v): w for u, v, w in g.edges}
    seen: set[tuple[int, int]] = set()
    for index, forest in enumerate(forests):
        if forest.n != g.n:
            raise DecompositionError(f"forest {index} has {forest.n} vertices, expected {g.n}")
        if not classify_graph(forest).is_forest:
            raise DecompositionError(f"part {index} of the partition is not a forest")
        for u, v, w in forest.edges:
            if (u, v) not in expected:
                raise DecompositionError(f"edge ({u}, {v}) is not an edge of H")
            if (u, v) in seen:
                raise DecompositionError(f"edge ({u}, {v}) appears in two forests")
            if w != expected[(u, v)]:
                raise DecompositionError(f"edge ({u}, {v}) weight differs from H")
            seen.add((u, v))
    missing = set(expected) - seen
    if missing:
        raise DecompositionError(f"partition misses edges {sorted(missing)}")


def star_decompose(
    h: HermitianMatrix,
    forests: Sequence[WeightedGraph] | None = None,
) -> StarForestDecomposition:
    """
    Write H as a sum of star-forest Hamiltonians S_l.

    Without an explicit partition, the edges are split by
    greedy_forest_partition; each forest is then halved by
    star_forest_split. Empty star forests are dropped.

    Raises
    ------
    DiagonalError
        If H has a nonzero diagonal entry.
    DecompositionError
        If a supplied partition is not an exact forest partition of H's edges.
    """
    h = hermitian(h)
    if np.any(np.diag(h.data) != 0):
        raise DiagonalError("star decomposition requires a zero diagonal")

    g = graph_of(h)
    if forests is None:
        forests = greedy_forest_partition(g)
    else:
        _check_partition(g, forests)

    parts: list[StarForest] = []
    for forest in forests:
        parts.extend(part for part in star_forest_split(forest) if part)

    decomposition = StarForestDecomposition(
        n=h.n,
        forests=tuple(parts),
        source_forest_count=len(forests),
        source_edge_count=len(g.edges),
    )
    logger.debug(
        "decomposed n=%d edges=%d into k'=%d forests, %d star forests, %d stars",
        h.n,
        len(g.edges),
        len(forests),
        len(parts),
        decomposition.star_count,
    )
    return decomposition


def validate_decomposition(h: HermitianMatrix, decomposition: StarForestDecomposition) -> None:
    """
    Raises DecompositionError unless every edge of H lies in exactly one
    star with a matching weight and the stars of each forest are
    vertex-disjoint.
    """
    h = hermitian(h)
    if decomposition.n != h.n:
        raise DecompositionError(f"decomposition is for n={decomposition.n}, H has n={h.n}")

    covered: set[tuple[int, int]] = set()
    for index, forest in enumerate(decomposition.forests):
        used: set[int] = set()
        for star in forest:
            if any(v < 0 or v >= h.n for v in star.vertices):
                raise DecompositionError(f"star at {star.center} leaves the vertex range")
            if used.intersection(star.vertices):
                raise DecompositionError(f"stars of forest {index} share a vertex")
            used.update(star.vertices)
            for leaf, w in zip(star.leaves, star.weights):
                key = (min(leaf, star.center), max(leaf, star.center))
                if key in covered:
                    raise DecompositionError(f"edge {key} appears in two stars")
                entry = h.data[leaf, star.center]
                if abs(w - entry) > WEIGHT_MATCH_TOL * max(1.0, abs(entry)):
                    raise DecompositionError(f"star weight on edge {key} does not match H")
                covered.add(key)

    edges = {(u, v) for u, v, _ in graph_of(h).edges}
    if covered != edges:
        raise DecompositionError(f"decomposition misses edges {sorted(edges - covered)}")


def arboricity_bound_report(
    h: HermitianMatrix,
    decomposition: StarForestDecomposition,
) -> ArboricityReport:
    """
    Evaluate the star-forest norm bounds with k' in place of the arboricity.

    Every term S_l is a forest of stars, so mcn(S_l) = ||S_l|| = ||abs(S_l)||;
    the largest relative gap among those three is reported and checked.
    """
    h = hermitian(h)
    validate_decomposition(h, decomposition)

    k = decomposition.source_forest_count
    spectral = spectral_norm(h)
    abs_spectral = spectral_norm(abs_entrywise(h))
    column = mcn(h)

    term_norms: list[float] = []
    deviation = 0.0
    for term in decomposition.hamiltonians():
        norm = spectral_norm(term)
        term_norms.append(norm)
        triple = (mcn(term), norm, spectral_norm(abs_entrywise(term)))
        for a, b in ((triple[0], triple[1]), (triple[1], triple[2])):
            deviation = max(deviation, -equality_check("star", a, b).slack)

    total = math.fsum(term_norms)
    checks: list[InequalityCheck] = [
        inequality_check("abs_spectral<=2k*mcn", abs_spectral, 2 * k * column),
        inequality_check("abs_spectral<=2k*spectral", abs_spectral, 2 * k * spectral),
        inequality_check("spectral<=2k*mcn", spectral, 2 * k * column),
        inequality_check(
            "sum(term_norms)/2k<=mcn",
            total / (2 * k) if k else 0.0,
            column,
        ),
        inequality_check("abs_spectral<=sum(term_norms)", abs_spectral, total),
        inequality_check("star_terms:identity_gap<=tol", deviation, STAR_IDENTITY_TOL),
    ]
    if k == 1:
        checks.append(inequality_check("tree:spectral<=2*mcn", spectral, 2 * column))

    passed = all(check.ok for check in checks)
    if not passed:
        logger.warning(
            "arboricity bounds violated: %s",
            [c.name for c in checks if not c.ok],
        )
    return ArboricityReport(
        n=h.n,
        k_prime=k,
        term_count=len(decomposition.forests),
        spectral=spectral,
        abs_spectral=abs_spectral,
        mcn=column,
        term_norms=term_norms,
        term_identity_deviation=deviation,
        checks=checks,
        passed=passed,
    )


def _apply_star(star: Star, t: float, vec: np.ndarray) -> np.ndarray:
    # S^2 = ||w||^2 P with P the projector onto span{e_center, w/||w||}, so
    # e^{-iSt} = I + (cos(||w|| t) - 1) P - i sin(||w|| t) S / ||w||.
    w = star.w
    norm = float(np.linalg.norm(w))
    leaves = np.asarray(star.leaves)
    c = star.center

    psi_c = vec[c]
    psi_l = vec[leaves]
    w_hat = w / norm
    cos_term = math.cos(norm * t) - 1.0
    sin_term = math.sin(norm * t)

    out = vec.copy()
    out[c] = psi_c + cos_term * psi_c - 1j * sin_term * np.vdot(w, psi_l) / norm
    out[leaves] = psi_l + cos_term * w_hat * np.vdot(w_hat, psi_l) - 1j * sin_term * w * psi_c / norm
    return out


def _state_for(vec: np.ndarray | list, stars: Iterable[Star]) -> np.ndarray:
    arr = np.asarray(vec, dtype=np.complex128)
    arr = check_state(arr.shape[0] if arr.ndim == 1 else -1, arr)
    top = max((max(star.vertices) for star in stars), default=-1)
    if top >= arr.shape[0]:
        raise DimensionMismatchError(
            f"state of dimension {arr.shape[0]} does not cover vertex {top}"
        )
    return arr


def star_exponential(star: Star, t: float, psi: np.ndarray | list) -> np.ndarray:
    """
    e^{-iSt} psi in closed form, touching only the star's vertices.
    """
    vec = _state_for(psi, (star,))
    if t == 0:
        return vec.copy()
    return _apply_star(star, t, vec)


Terms = Union[StarForestDecomposition, Sequence[Sequence[Star]]]


def trotter_evolve(terms: Terms, t: float, steps: int, psi: np.ndarray | list) -> np.ndarray:
    """
    First-order product formula (prod_l e^{-i S_l t/steps})^steps.

    Terms are applied in list order; stars inside one term act on disjoint
    vertices and commute.
    """
    if steps < 1:
        raise DomainError("steps must be at least 1")
    forests = terms.forests if isinstance(terms, StarForestDecomposition) else terms
    stars = [star for forest in forests for star in forest]
    vec = _state_for(psi, stars)

    dt = t / steps
    for _ in range(steps):
        for star in stars:
            vec = _apply_star(star, dt, vec)

    drift = abs(float(np.linalg.norm(vec)) - 1.0)
    if drift > 1e-9:
        logger.warning("trotter evolution lost unitarity: norm drift %.3e", drift)
    return vec


def star_matrix(star: Star, n: int) -> HermitianMatrix:
    if max(star.vertices) >= n:
        raise DimensionMismatchError(f"star at {star.center} does not fit in dimension {n}")
    a = np.zeros((n, n), dtype=np.complex128)
    for leaf, w in zip(star.leaves, star.weights):
        a[leaf, star.center] = w
        a[star.center, leaf] = complex(w).conjugate()
    return HermitianMatrix(a, tol=0.0)


def forest_matrix(stars: Iterable[Star], n: int) -> HermitianMatrix:
    a = np.zeros((n, n), dtype=np.complex128)
    for star in stars:
        a = a + star_matrix(star, n).data
    return HermitianMatrix(a, tol=0.0)


def _random_weight(rng: np.random.Generator, complex_weights: bool, magnitude: tuple[float, float]) -> complex:
    lo, hi = magnitude
    size = float(rng.uniform(lo, hi)) if hi > lo else float(lo)
    if complex_weights:
        return size * complex(np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))
    return size if rng.random() < 0.5 else -size


def random_tree(
    n: int,
    rng: np.random.Generator,
    *,
    complex_weights: bool = True,
    magnitude: tuple[float, float] = (0.5, 1.0),
) -> HermitianMatrix:
    """
    Random recursive tree on n vertices with randomly relabelled vertices.

    magnitude=(1, 1) gives unit-modulus weights; complex_weights=False gives
    random signs.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    lo, hi = magnitude
    if not 0 < lo <= hi:
        raise DomainError("magnitude must satisfy 0 < lo <= hi")

    labels = rng.permutation(n)
    a = np.zeros((n, n), dtype=np.complex128)
    for child in range(1, n):
        parent = int(rng.integers(0, child))
        w = _random_weight(rng, complex_weights, magnitude)
        u, v = labels[parent], labels[child]
        a[u, v] = w
        a[v, u] = w.conjugate()
    return HermitianMatrix(a, tol=0.0)


def random_star(
    leaves: int,
    rng: np.random.Generator,
    *,
    complex_weights: bool = True,
    magnitude: tuple[float, float] = (0.5, 1.0),
) -> Star:
    """Star centred on vertex 0 with leaves 1..leaves."""
    if leaves < 1:
        raise DomainError("a star needs at least one leaf")
    return Star(
        center=0,
        leaves=tuple(range(1, leaves + 1)),
        weights=tuple(_random_weight(rng, complex_weights, magnitude) for _ in range(leaves)),
    )


def decomposition_to_document(decomposition: StarForestDecomposition) -> DecompositionDocument:
    return DecompositionDocument(
        forests=[
            [
                StarDocument(
                    center=star.center,
                    leaves=list(star.leaves),
                    weights=[(w.real, w.imag) for w in map(complex, star.weights)],
                )
                for star in forest
            ]
            for forest in decomposition.forests
        ]
    )
