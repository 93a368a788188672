"""Multiplicative attribute graph toolkit.

Generate graphs whose edge probabilities are products of per-attribute
affinities, evaluate the model's closed-form structure theory, and verify
the two against each other at desk scale.
"""

from .core import (
    AffinityMatrix,
    AttributeAssignment,
    MagConfig,
    SharedCounts,
    SimplifiedTheta,
    edge_probability,
    kronecker_to_mag,
    node_weight,
    sample_attributes,
    shared_counts,
)
from .generate import BucketIndex, Graph, degree_sequence, generate_bucketed, generate_naive

__all__ = [
    "AffinityMatrix",
    "AttributeAssignment",
    "BucketIndex",
    "Graph",
    "MagConfig",
    "SharedCounts",
    "SimplifiedTheta",
    "degree_sequence",
    "edge_probability",
    "generate_bucketed",
    "generate_naive",
    "kronecker_to_mag",
    "node_weight",
    "sample_attributes",
    "shared_counts",
]
