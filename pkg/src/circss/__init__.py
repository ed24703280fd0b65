"""Heights on projective classes over Z/NZ, circulant Cayley digraphs, and
exact minimum feedback arc sets, with an exhaustive verification harness for
the CSS inequality beta(G) <= gamma(G)/2 on triangle-free digraphs."""
import os

# The TBB and OpenMP threading layers misbehave on some hosts (old TBB ABI,
# fork conflicts); workqueue is always safe. Must be set before numba spins up
# its thread pool, and an explicit user choice wins.
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

from .cayley import (  # noqa: E402
    DEFAULT_EXACT_CAP,
    CirculantGraph,
    GraphReport,
    beta_height_bound,
    circulant,
    cycle_certificate,
    edges,
    gamma,
    gamma_oracle,
    graph_report,
    has_cycle_of_length,
    is_acyclic,
    is_triangle_free,
    sumset,
    unit_backward_count,
    unit_backward_edges,
)
from .errors import (  # noqa: E402
    CircssError,
    ConfigurationError,
    DomainError,
    ResourceLimitError,
    TableMismatchError,
)
from .fas import (  # noqa: E402
    BRUTE_FORCE_CAP,
    FasInstance,
    FasResult,
    beta_exact,
    beta_exact_circulant_batch,
    beta_upper_by_ordering,
    brute_force_beta,
    from_edges,
    from_graph,
)
from .heights import (  # noqa: E402
    HeightResult,
    ProjectiveTuple,
    canonicalize,
    height,
    height_bound,
    nonzero_count,
)
from .residues import (  # noqa: E402
    MAX_MODULUS,
    Modulus,
    inv,
    make_modulus,
    unit_weighted_sum,
)
from .scanner import (  # noqa: E402
    CssFailure,
    CssVerification,
    ScanConfig,
    ScanRecord,
    TableRow,
    records_to_csv,
    records_to_json,
    reproduce_tables,
    scan,
    scan_summary,
    triangle_free_masks,
    verify_css_up_to,
)

__version__ = "0.1.0"

__all__ = [
    "BRUTE_FORCE_CAP",
    "CircssError",
    "CirculantGraph",
    "ConfigurationError",
    "CssFailure",
    "CssVerification",
    "DEFAULT_EXACT_CAP",
    "DomainError",
    "FasInstance",
    "FasResult",
    "GraphReport",
    "HeightResult",
    "MAX_MODULUS",
    "Modulus",
    "ProjectiveTuple",
    "ResourceLimitError",
    "ScanConfig",
    "ScanRecord",
    "TableMismatchError",
    "TableRow",
    "beta_exact",
    "beta_exact_circulant_batch",
    "beta_height_bound",
    "beta_upper_by_ordering",
    "brute_force_beta",
    "canonicalize",
    "circulant",
    "cycle_certificate",
    "edges",
    "from_edges",
    "from_graph",
    "gamma",
    "gamma_oracle",
    "graph_report",
    "has_cycle_of_length",
    "height",
    "height_bound",
    "inv",
    "is_acyclic",
    "is_triangle_free",
    "make_modulus",
    "nonzero_count",
    "records_to_csv",
    "records_to_json",
    "reproduce_tables",
    "scan",
    "scan_summary",
    "sumset",
    "triangle_free_masks",
    "unit_backward_count",
    "unit_backward_edges",
    "unit_weighted_sum",
    "verify_css_up_to",
]
