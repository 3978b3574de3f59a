from syncorr.correlation.correlation import (
    Correlation,
    Marginal,
    NonsignalingCheck,
    SynchronousCheck,
    convex_combine,
    distance,
    from_function,
    is_nonsignaling,
    is_symmetric,
    is_synchronous,
    uniform,
    validate_stochastic,
)
