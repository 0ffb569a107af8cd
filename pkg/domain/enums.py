"""
Domain enumerations
"""

from enum import Enum


class ClassLabel(str, Enum):
    """Sequence classes of the frame taxonomy"""
    BESSEL = "Bessel"
    FRAME_SEQUENCE = "FrameSequence"
    FRAME = "Frame"
    RIESZ_BASIS = "RieszBasis"
    LOWER_FRAME_SEQUENCE = "LowerFrameSequence"
    RIESZ_FISCHER = "RieszFischer"
    COMPLETE = "Complete"


class Characterization(str, Enum):
    """Operator through which a class verdict is reached"""
    C = "C"
    D = "D"
    S = "S"
    G = "G"


class Subspace(str, Enum):
    """Fundamental subspaces of a matrix"""
    RANGE = "range"
    NULLSPACE = "nullspace"


class MembershipStatus(str, Enum):
    """Outcome of a domain-membership probe"""
    IN_DOMAIN = "InDomain"
    NOT_IN_DOMAIN = "NotInDomain"
    CONVERGES = "NumericEvidenceConverges"
    DIVERGES = "NumericEvidenceDiverges"
    INCONCLUSIVE = "Inconclusive"


class OperatorDomain(str, Enum):
    """Operators whose domains can be probed"""
    C = "C"
    D = "D"
    S = "S"
    G = "G"


class CoefficientKind(str, Enum):
    """How a coefficient sequence is given"""
    FINITELY_SUPPORTED = "finitely-supported"
    CLOSED_FORM = "closed-form"


class TransformRule(str, Enum):
    """Bound-preservation rules for operators applied to sequences"""
    BESSEL = "bessel"
    FRAME = "frame"
    RIESZ_BASIS = "riesz_basis"
    LOWER_FRAME = "lower_frame"
    RIESZ_FISCHER = "riesz_fischer"
    COMPLETE = "complete"


class OutputFormat(str, Enum):
    """Report output formats"""
    JSON = "json"
    TEXT = "text"


class Verb(str, Enum):
    """CLI verbs"""
    CLASSIFY = "classify"
    OPERATORS = "operators"
    GALLERY = "gallery"
    PROBE = "probe"
    TRANSFORM = "transform"
    FACTORIZE = "factorize"
