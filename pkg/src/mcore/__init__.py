"""Multi-client order-revealing encryption over BLS12-381."""

from .basic import (
    BasicCiphertext,
    BasicComparisonKey,
    ClientSecretKey,
    CmpOutcome,
    IntegrityError,
    MasterKey,
    OrientationError,
    PublicParams,
    Registration,
    assemble_centerless_key,
    client_keygen,
    compare,
    compare_mc,
    encrypt,
    gen_cmp_key,
    gen_cmp_key_from_registrations,
    gen_cmp_key_share_centerless,
    gen_key,
    register,
    setup,
)
from .encoding import Plaintext, cmp, encode, ind
from .enhanced import (
    EnhancedCiphertext,
    EnhancedSecretKey,
    enh_compare,
    enh_compare_mc,
    enh_encrypt,
    enh_gen_cmp_key,
    enh_gen_key,
    enh_setup,
)
from .eore import (
    EoreCiphertext,
    EoreComparisonKey,
    EoreMasterKey,
    EorePublicParams,
    eore_compare_mc,
    eore_encrypt,
    eore_gen_cmp_key,
    eore_gen_key,
    eore_setup,
)
from .ore import OreCiphertext, OreSecretKey, ore_compare, ore_encrypt, ore_setup
from .pairing import DeserializationError, PairingStats
from .rangequery import (
    EncryptedColumn,
    compare_mc_binsearch,
    query_binsearch,
    query_hybrid,
    query_simple,
)

__version__ = "0.1.0"
