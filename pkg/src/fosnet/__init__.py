"""fosnet: field-of-study networks from research-paper metadata.

Construct static and temporal field networks from author-field publication
records, then characterize them: centrality rankings, seeded Louvain
communities, structural role embeddings, and close-reading drill-down from
edges back to papers.
"""

from .builder import (
    BipartiteGraph,
    BuildConfig,
    EdgeData,
    FosGraph,
    FosMeta,
    Witness,
    build_bipartite,
    build_fos,
    mean_edge_weight,
    project,
    threshold,
)
from .centrality import (
    CentralityReport,
    betweenness_all,
    centrality_report,
    closeness_all,
    degree_all,
    eigenvector_all,
)
from .closeread import (
    EdgeProvenance,
    audit_witness_weights,
    keyword_frequencies,
    papers_for_edge,
    subfield_frequencies,
)
from .community import (
    CommunityAssignment,
    CommunityRow,
    CommunitySummary,
    louvain,
    modularity,
    summarize_communities,
)
from .corpus import (
    Author,
    Corpus,
    FieldRef,
    IngestConfig,
    IngestStats,
    Paper,
    author_publications,
    corpus_from_records,
    dump_corpus,
    filter_fields,
    load_corpus,
)
from .graph import SimpleGraph
from .roles import (
    Embedding,
    RoleModel,
    RoleParams,
    RoleSummary,
    learn_roles,
    select_k_and_cluster,
    structural_distances,
    summarize_roles,
    train_embeddings,
)
from .temporal import (
    SplitRule,
    TemporalEdgeData,
    TemporalFosGraph,
    TemporalWitness,
    build_temporal,
    restrict_post_field,
    top_k_edges,
)

__version__ = "0.1.0"
