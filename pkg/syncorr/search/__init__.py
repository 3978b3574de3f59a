from syncorr.search.bloch import (
    BlochAngles,
    SumDiffAngles,
    j_closed_form,
    qubit_pvms,
    w_closed_form,
)
from syncorr.search.minimize import BlochSearch, SearchResult, minimize
from syncorr.search.saturators import Saturator, known_j0_argmins, reference_saturators
