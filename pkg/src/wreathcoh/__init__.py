"""Finite p-group computations: wreath tower centralizers, isoclinism
witnesses, elementary abelian subgroups, stable mod-p cohomology and Sylow
parameters of finite general linear groups."""

from .groups import (
    BUDGET_EXHAUSTED,
    CapExceededError,
    CyclicGroup,
    DEFAULT_ORDER_CAP,
    DihedralGroup,
    DirectProductGroup,
    FiniteGroup,
    FOUND,
    GroupError,
    GroupHom,
    InvalidGroupError,
    IsoSearchResult,
    NOT_ISOMORPHIC,
    NotNormalError,
    OrderOverflowError,
    PermGroup,
    Subgroup,
    TableGroup,
    WreathProductGroup,
    abelianization,
    builtin_group,
    center,
    centralizer_bruteforce,
    derived_subgroup,
    direct_product,
    elementary_abelian,
    generated_subgroup,
    isomorphism_search,
    load_group,
    quaternion_group,
    quotient,
    subgroup,
    subgroup_as_group,
    validate_group,
    wreath_with_cyclic,
)
from .isoclinism import (
    CommutatorPairing,
    ISOCLINIC,
    IsoclinismResult,
    IsoclinismWitness,
    NOT_ISOCLINIC,
    commutator_pairing,
    hall_correspondence_spotcheck,
    is_isoclinic,
    isoclinic_to_abelian_extension,
)
from .stabcoh import (
    DetectionCertificate,
    ExteriorElement,
    HilbertSeries,
    RankDeficientError,
    StableClass,
    detection_matrix,
    hilbert_series,
    kunneth_product,
    multiply,
    restrict_to_base,
    restriction_to_elab,
    stable_basis,
    theta_class,
    unit_class,
)
from .wreath import (
    CentralizerReport,
    LevelMismatchError,
    MaxElabDescriptor,
    NotCaseBError,
    SylowGLParams,
    UnsupportedParametersError,
    WitnessBudgetExhaustedError,
    WreathTower,
    classify_centralizer,
    cp_certificate,
    elem_abelians_bruteforce,
    make_iterated,
    maximal_elem_abelians,
    normal_form_case_b,
    sylow_gl_parameters,
)

__version__ = "0.1.0"
