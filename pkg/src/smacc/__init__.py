"""Secure multi-access coded caching: simulator, verifier, and analyzer.

K users each read L cyclically consecutive caches out of K.  The library
provides bit-exact placement and encrypted delivery for every achievable
corner point, per-user decoding, an exact wiretap security oracle, and
the rate-memory tradeoff machinery with its optimality-gap bounds.
"""

from .errors import (
    BoundViolatedError,
    CaseMismatchError,
    DecodeError,
    DivisibilityError,
    ExactnessError,
    KeyExhaustedError,
    LengthMismatchError,
    NotCoprimeError,
    ParamError,
    ShapeError,
    SideInfoError,
    SingularMatrixError,
    SmaccError,
    TooLargeError,
)
from .gf2 import AirMatrix, build_air, inverse, matmul, rank, solve, verify_air
from .index_coding import SuicpInstance, code_length, decode_receiver, encode, mod1
from .system_model import (
    Case,
    FileLibrary,
    MemoryAccounting,
    SystemParams,
    accessible_caches,
    memory_accounting,
    min_file_size,
    min_secure_memory,
    validate_demand,
    validate_params,
)
from .placement import (
    CacheContents,
    DataShare,
    KeySet,
    KeyShare,
    Placement,
    place,
    place_data_coded,
    place_data_uncoded,
    place_full_keys,
    place_keys_coprime,
    place_keys_grouped,
)
from .delivery import (
    Delivery,
    DemandTable,
    Transmission,
    build_demand_table,
    decode_all_files,
    decode_user,
    encode_deliver,
    measured_rate,
    permute_row,
    reconstruct_keys,
    row_permutation,
)
from .security import (
    AuditReport,
    OracleResult,
    WiretapInstance,
    entropy_accounting,
    mutual_information_oracle,
    structural_audit,
)
from .tradeoff import (
    CornerPoint,
    GapEvaluation,
    RateCurve,
    corner_points,
    envelope,
    gap_check,
    insecure_baseline,
    insecure_corner_points,
    insecure_envelope,
    secure_uncoded_corners,
)

__version__ = "0.1.0"
