from syncorr.quantum.observables import (
    ObservableTraces,
    bell_from_traces,
    observable_traces,
    tsirelson_certificate,
)
from syncorr.quantum.pvm import PVMFamily, pvm_from_kets, validate_pvm
from syncorr.quantum.schmidt import SchmidtBlocks, decompose_me, schmidt
from syncorr.quantum.strategies import (
    GeneralQuantumStrategy,
    classical_embedding,
    correlation_general,
    correlation_me,
    maximally_entangled,
)
