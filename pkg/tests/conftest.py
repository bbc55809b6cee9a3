import numpy as np
import pytest

from tridiff.core import (
    BipartiteGraph,
    EntityIndexMap,
    TripartiteDataset,
    build_graph,
)

# Fixture F1: users {u1,u2,u3}, objects {o1,o2};
# edges u1-o1, u1-o2, u2-o1, u3-o2.
F1_EDGES = [(0, 0), (0, 1), (1, 0), (2, 1)]


@pytest.fixture
def f1_graph() -> BipartiteGraph:
    return build_graph(F1_EDGES, 3, 2)


def make_dataset(uo_edges, ut_edges, m, n, r) -> TripartiteDataset:
    return TripartiteDataset(
        users=EntityIndexMap.from_ids(f"u{i}" for i in range(m)),
        objects=EntityIndexMap.from_ids(f"o{i}" for i in range(n)),
        tags=EntityIndexMap.from_ids(f"t{i}" for i in range(r)),
        user_object=build_graph(uo_edges, m, n),
        user_tag=build_graph(ut_edges, m, r),
    )


@pytest.fixture
def f1_dataset() -> TripartiteDataset:
    # F1 object graph plus one shared tag so the container is well-formed.
    return make_dataset(F1_EDGES, [(0, 0), (1, 0), (2, 0)], 3, 2, 1)


@pytest.fixture
def f2_dataset() -> TripartiteDataset:
    # F2 = F1 plus object o3 (index 2) with edge u2-o3.
    return make_dataset(F1_EDGES + [(1, 2)], [(0, 0), (1, 0), (2, 0)], 3, 3, 1)


def random_graph(rng: np.random.Generator, max_left=50, max_right=50) -> BipartiteGraph:
    """Random bipartite graph with varied size and density."""
    m = int(rng.integers(1, max_left + 1))
    n = int(rng.integers(1, max_right + 1))
    density = float(rng.uniform(0.02, 0.5))
    mask = rng.random((m, n)) < density
    left, right = np.nonzero(mask)
    return build_graph(list(zip(left.tolist(), right.tolist())), m, n)


def dense_adjacency(graph: BipartiteGraph) -> np.ndarray:
    """Independent dense 0/1 matrix built from the edge list alone."""
    A = np.zeros((graph.left_count, graph.right_count))
    for u, x in graph.edges():
        A[u, x] = 1.0
    return A


def brute_diffusion_matrix(graph: BipartiteGraph) -> np.ndarray:
    """Dense two-step transition product; S[u, v] is the mass u receives
    from target v. Computed from scratch, independent of the sparse kernel."""
    A = dense_adjacency(graph)
    k_left = A.sum(axis=1)
    k_right = A.sum(axis=0)
    inv_right = np.divide(1.0, k_right, out=np.zeros_like(k_right), where=k_right > 0)
    inv_left = np.divide(1.0, k_left, out=np.zeros_like(k_left), where=k_left > 0)
    # step 1: v -> right nodes (equal split); step 2: right node -> users.
    return A @ np.diag(inv_right) @ A.T @ np.diag(inv_left)


def random_tripartite(
    rng: np.random.Generator, m: int, n: int, r: int,
    obj_density: float = 0.02, tag_density: float = 0.02,
) -> TripartiteDataset:
    """Seeded synthetic tripartite dataset; every user gets >= 1 edge per graph."""
    uo = rng.random((m, n)) < obj_density
    ut = rng.random((m, r)) < tag_density
    for u in range(m):
        if not uo[u].any():
            uo[u, rng.integers(0, n)] = True
        if not ut[u].any():
            ut[u, rng.integers(0, r)] = True
    uo_edges = list(zip(*(a.tolist() for a in np.nonzero(uo))))
    ut_edges = list(zip(*(a.tolist() for a in np.nonzero(ut))))
    return make_dataset(uo_edges, ut_edges, m, n, r)
