"""Role characterization tables built from a labeling and a centrality report."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..centrality import CentralityReport
from ..corpus import Corpus
from ..errors import ConfigError


@dataclass(frozen=True)
class RoleRow:
    role: int
    count: int
    mean_degree: float
    mean_betweenness: float
    mean_closeness: float
    mean_eigenvector: float
    focal_prop: float


@dataclass(frozen=True)
class RoleSummary:
    rows: tuple[RoleRow, ...]

    def row_for(self, role: int) -> RoleRow:
        for row in self.rows:
            if row.role == role:
                return row
        raise KeyError(role)


def summarize_roles(
    labels: Mapping[str, int],
    report: CentralityReport,
    corpus: Corpus,
) -> RoleSummary:
    """Mean centrality per role, member count, and focal-field proportion.

    The focal proportion is the fraction of a role's fields tagged on at
    least one focal paper. Rows are ordered by role id.
    """
    missing = [node for node in report.nodes if node not in labels]
    if missing:
        raise ConfigError(f"labels missing for nodes: {missing[:5]}")
    members: dict[int, list[str]] = {}
    for node in report.nodes:
        members.setdefault(labels[node], []).append(node)
    focal_fields = corpus.focal_field_ids()
    rows = []
    for role in sorted(members):
        nodes = members[role]
        count = len(nodes)
        rows.append(
            RoleRow(
                role=role,
                count=count,
                mean_degree=sum(report.degree[u] for u in nodes) / count,
                mean_betweenness=sum(report.betweenness[u] for u in nodes) / count,
                mean_closeness=sum(report.closeness[u] for u in nodes) / count,
                mean_eigenvector=sum(report.eigenvector[u] for u in nodes) / count,
                focal_prop=sum(1 for u in nodes if u in focal_fields) / count,
            )
        )
    return RoleSummary(rows=tuple(rows))
