"""Random generation of RNA pseudoknot structures of fixed topological genus."""
from .counting import (InfeasibleError, arcs_distribution, catalan, delta, delta_total,
                       epsilon, next_genus_distribution, path_weight)
from .diagram import Diagram, DiagramError
from .energy import (TEST_VECTOR, ZERO, EnergyParams, Genus1Sampler, LoopClass, PartitionTables,
                     build_partitions, classify_loops, eta_direct, eta_labeled, sample_genus1)
from .fatgraph import (Fatgraph, GenusResult, Permutation, genus_of_diagram, genus_of_matching,
                       matching_to_unicellular, trace_boundaries, unicellular_to_matching)
from .records import DiagramRecord, read_records
from .sampling import (RandomSource, sample_exact, uniform_diagram, uniform_matching,
                       uniform_plane_tree)
from .stats import LoopHistogram
from .unicellular import (Trisection, UnicellularMap, find_trisections, glue_lambda, glue_phi,
                          glue_psi, slice_xi)

__version__ = "0.1.0"
