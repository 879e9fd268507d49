"""Dynamical systems on hypernetworks: balanced partitions, fibrations, synchrony breaking."""

from .model import Hyperedge, Hypernetwork, HypernetworkError, ParseError, Vertex, dump, load, parse, serialize, validate
from .partition import Partition, census, enumerate_balanced, is_balanced, is_balanced_oracle, parse_partition
from .polynomial import Polynomial, parse_polynomial
from .admissible import AdmissibleSystem, InputSchema, InvariantPolynomial, PolynomialResponse, symmetrize
from .fibration import FibrationMap, check_fibration, quotient, r_phi
from .synchrony import Perm, attune, find_breaking_witness, power_sum, robust_verdict, vandermonde_quotient
from .augment import augment

__version__ = "0.1.0"

__all__ = [
    "Hyperedge", "Hypernetwork", "HypernetworkError", "ParseError", "Vertex", "dump", "load", "parse", "serialize",
    "validate", "Partition", "census", "enumerate_balanced", "is_balanced", "is_balanced_oracle", "parse_partition",
    "Polynomial", "parse_polynomial", "AdmissibleSystem", "InputSchema", "InvariantPolynomial",
    "PolynomialResponse", "symmetrize", "FibrationMap", "check_fibration", "quotient", "r_phi", "Perm", "attune",
    "find_breaking_witness", "power_sum", "robust_verdict", "vandermonde_quotient", "augment",
]
