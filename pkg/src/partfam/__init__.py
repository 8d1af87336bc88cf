"""Part-family formation from numeric part classification codes.

Parts coded as digit vectors are compared digit by digit, seeded into families
by complete-linkage clustering and refined by simulated annealing on the
sum-of-similarities objective.
"""

from .annealing import (
    AnnealConfig,
    AnnealResult,
    ClusterResult,
    ConfigError,
    PipelineResult,
    accept,
    anneal,
    cluster_stage,
    run_pipeline,
    seed_sweep,
    single_move,
)
from .clustering import LinkageTree, complete_linkage, cut_tree, default_family_count, export_dendrogram
from .dataset import DatasetError, PartCodeMatrix, builtin_dataset, load_matrix, parse_matrix
from .oracle import EnumerationCapError, brute_force_optimum, enumerate_partitions, stirling2
from .partition import Partition
from .report import RunReport, perfection_percentage
from .similarity import (
    SymmetricMatrix,
    attribute_similarity,
    distance_matrix,
    family_score,
    objective,
    pairwise_similarity,
    similarity_matrix,
)
from .tuning import TaguchiDesign, anova, l9_array, response_table, run_design, sn_ratio_larger_better, tune

__version__ = "0.1.0"
