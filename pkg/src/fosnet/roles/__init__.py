"""Structural role analysis: layered distances, context walks, embeddings,
cluster-count selection, and role summary tables."""

from .clustering import (
    ClusterSelection,
    StabilityRow,
    cluster_stability,
    knee_point,
    select_k_and_cluster,
)
from .context import ContextGraph, build_context_graph
from .distances import DistanceTable, dtw_distance, node_rings, structural_distances
from .pipeline import RoleModel, RoleParams, learn_roles
from .skipgram import Embedding, train_embeddings
from .summary import RoleRow, RoleSummary, summarize_roles
from .walks import role_walks

__all__ = [
    "ClusterSelection",
    "ContextGraph",
    "DistanceTable",
    "Embedding",
    "RoleModel",
    "RoleParams",
    "RoleRow",
    "RoleSummary",
    "StabilityRow",
    "build_context_graph",
    "cluster_stability",
    "dtw_distance",
    "knee_point",
    "learn_roles",
    "node_rings",
    "role_walks",
    "select_k_and_cluster",
    "structural_distances",
    "summarize_roles",
    "train_embeddings",
]
