from syncorr.classical.functions import (
    FunctionDistribution,
    FunctionStrategy,
    correlation_from_distribution,
    enumerate_functions,
    function_count,
    random_distribution,
)
from syncorr.classical.membership import (
    ClassicalCertificate,
    SeparatingFunctional,
    Verdict,
    classical_membership,
    two_input_decompose,
)
