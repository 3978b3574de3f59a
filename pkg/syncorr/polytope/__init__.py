from syncorr.polytope.bell import BellReport, bell_values, ns_vertex_classification
from syncorr.polytope.coordinates import (
    TwoPointDomainData,
    WCoordinates,
    correlation_from_w,
    two_point_classical,
    two_point_nonsignaling,
    w_coordinates,
)
from syncorr.polytope.double_description import (
    HPolytope,
    VPolytope,
    affine_dimension,
    dd_enumerate,
    facet_enumerate,
)
from syncorr.polytope.polytopes import (
    classical_polytope_3_2,
    sync_ns_polytope_3_2,
    sync_ns_polytope_w,
    sync_polytope,
)
