"""
Domain models for the frame operator toolkit
Core entities: matrices, vector sequences, operator suites and reports
"""

import math
from dataclasses import dataclass
from numbers import Number
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from domain.enums import (
    Characterization, ClassLabel, CoefficientKind, MembershipStatus,
    OperatorDomain, OutputFormat, TransformRule, Verb,
)
from domain.exceptions import InvalidInputError, ValidationError


@dataclass(frozen=True, eq=False)
class Matrix:
    """Dense complex matrix; real input is promoted, the stored array is read-only"""
    data: np.ndarray

    def __post_init__(self):
        try:
            arr = np.array(self.data, dtype=np.complex128, copy=True)
        except (TypeError, ValueError, OverflowError) as e:
            raise InvalidInputError(f"Matrix entries are not complex scalars: {e}") from e
        if arr.ndim != 2:
            raise InvalidInputError(f"Matrix must be two-dimensional, got {arr.ndim} dimension(s)")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("Matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, 'data', arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def entries(self) -> np.ndarray:
        """Row-major flat view of the entries"""
        return self.data.reshape(-1)

    @property
    def H(self) -> 'Matrix':
        return Matrix(self.data.conj().T)

    def __matmul__(self, other: 'Matrix') -> 'Matrix':
        if self.cols != other.rows:
            raise InvalidInputError(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        return Matrix(self.data @ other.data)

    @classmethod
    def identity(cls, n: int) -> 'Matrix':
        return cls(np.eye(n, dtype=np.complex128))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'Matrix':
        return cls(np.zeros((rows, cols), dtype=np.complex128))

    @classmethod
    def diag(cls, values) -> 'Matrix':
        return cls(np.diag(np.asarray(values, dtype=np.complex128)))


@dataclass(frozen=True)
class Tolerance:
    """Numerical cutoffs shared by every rank and identity decision of a report"""
    rank_rel: float
    residual_abs: float

    def __post_init__(self):
        for name in ('rank_rel', 'residual_abs'):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValidationError(f"Tolerance {name} must lie in (0, 1), got {value}")


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Thin singular value decomposition M = U diag(s) V^H"""
    left_vectors: Matrix
    singular_values: np.ndarray
    right_vectors: Matrix
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        u = self.left_vectors.data
        v = self.right_vectors.data
        return (u * self.singular_values) @ v.conj().T


@dataclass(frozen=True, eq=False)
class FiniteSequence:
    """Finitely many vectors psi_k of C^d"""
    dimension: int
    vectors: Tuple[np.ndarray, ...]
    label: Optional[str] = None

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidInputError(f"Dimension must be positive, got {self.dimension}")
        if len(self.vectors) < 1:
            raise InvalidInputError("A sequence needs at least one vector")
        frozen = []
        for index, vector in enumerate(self.vectors):
            arr = np.array(vector, dtype=np.complex128, copy=True).reshape(-1)
            if arr.shape[0] != self.dimension:
                raise InvalidInputError(
                    f"Vector {index} has length {arr.shape[0]}, expected {self.dimension}"
                )
            if not np.all(np.isfinite(arr)):
                raise InvalidInputError(f"Vector {index} has non-finite entries")
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, 'vectors', tuple(frozen))

    @property
    def count(self) -> int:
        return len(self.vectors)

    def synthesis_matrix(self) -> Matrix:
        """d x n matrix whose columns are the psi_k"""
        return Matrix(np.column_stack(self.vectors))

    @classmethod
    def from_matrix(cls, matrix: Matrix, label: Optional[str] = None) -> 'FiniteSequence':
        return cls(
            dimension=matrix.rows,
            vectors=tuple(matrix.data[:, k] for k in range(matrix.cols)),
            label=label,
        )

    @classmethod
    def canonical_basis(cls, n: int, label: Optional[str] = None) -> 'FiniteSequence':
        return cls.from_matrix(Matrix.identity(n), label=label or f"ONB(C^{n})")


# Weights and fiber sums are exact Python numbers where possible (int, Fraction);
# math.inf marks an infinite fiber sum.
ExtendedReal = Number


def is_infinite(value: ExtendedReal) -> bool:
    return isinstance(value, float) and math.isinf(value)


@dataclass(frozen=True, eq=False)
class StructuredSequence:
    """
    Infinite weighted indexed ONB sequence psi_k = w_k e_{sigma(k)}.

    The generator maps k >= 1 to (sigma(k), w_k). The remaining fields are
    analytic annotations; None means the annotation is not available.
    """
    generator: Callable[[int], Tuple[int, Number]]
    fiber_sum: Callable[[int], ExtendedReal]
    label: str
    sup_fiber_sum: Optional[ExtendedReal] = None
    inf_fiber_sum_all: Optional[ExtendedReal] = None
    sigma_injective: Optional[bool] = None
    sigma_surjective: Optional[bool] = None
    inf_weight_sq: Optional[ExtendedReal] = None
    inf_fiber_sum_range: Optional[ExtendedReal] = None
    fiber_ratio: Optional[float] = None
    extrema_attained: bool = False

    def terms(self, n: int) -> List[Tuple[int, Number]]:
        """(sigma(k), w_k) for k = 1..n"""
        return [self.generator(k) for k in range(1, n + 1)]

    @property
    def is_bessel(self) -> Optional[bool]:
        if self.sup_fiber_sum is None:
            return None
        return not is_infinite(self.sup_fiber_sum)


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """
    Coefficient sequence (c_k), also used for coordinate sequences <f, e_n>.

    Finitely supported sequences vanish beyond `support`. A closed-form
    sequence may carry `ratio`, the eventual value of |c_{k+1} / c_k|.
    """
    kind: CoefficientKind
    values: Callable[[int], Number]
    label: str
    support: Optional[int] = None
    ratio: Optional[float] = None

    def __post_init__(self):
        if self.kind == CoefficientKind.FINITELY_SUPPORTED and self.support is None:
            raise InvalidInputError("Finitely supported coefficients need a support bound")

    def value(self, k: int) -> Number:
        if self.kind == CoefficientKind.FINITELY_SUPPORTED and k > self.support:
            return 0
        return self.values(k)

    def prefix(self, n: int) -> List[Number]:
        return [self.value(k) for k in range(1, n + 1)]

    @property
    def square_summable(self) -> Optional[bool]:
        if self.kind == CoefficientKind.FINITELY_SUPPORTED:
            return True
        if self.ratio is None or self.ratio == 1:
            return None
        return self.ratio < 1

    def is_zero(self) -> bool:
        """Decidable only for finitely supported sequences; closed forms report False"""
        if self.kind != CoefficientKind.FINITELY_SUPPORTED:
            return False
        return all(self.value(k) == 0 for k in range(1, self.support + 1))

    @classmethod
    def from_values(cls, values: List[Number], label: str) -> 'CoefficientSequence':
        frozen = tuple(values)
        return cls(
            kind=CoefficientKind.FINITELY_SUPPORTED,
            values=lambda k: frozen[k - 1] if 1 <= k <= len(frozen) else 0,
            label=label,
            support=len(frozen),
        )


@dataclass(frozen=True)
class ExpectedFact:
    """A ground-truth statement pinned to a fixture"""
    fact_id: str
    expected: Any
    anchor: str


@dataclass(frozen=True)
class Fixture:
    """A structured sequence together with its expected facts"""
    fixture_id: str
    sequence: StructuredSequence
    expected: Tuple[ExpectedFact, ...]


@dataclass(frozen=True)
class FactOutcome:
    """Result of checking one expected fact"""
    fixture_id: str
    fact_id: str
    expected: Any
    observed: Any
    anchor: str
    passed: bool


@dataclass(frozen=True, eq=False)
class OperatorSuite:
    """The analysis, synthesis, frame and Gram matrices of a finite sequence"""
    synthesis: Matrix
    analysis: Matrix
    frame_op: Matrix
    gram: Matrix
    source: FiniteSequence
    tol: Tolerance


@dataclass(frozen=True)
class IdentityCheck:
    """A named residual and whether it is within tolerance"""
    name: str
    residual: float
    passed: bool


@dataclass(frozen=True)
class IdentityReport:
    """Residuals of the operator identities, kernel and range relations"""
    checks: Tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def get(self, name: str) -> IdentityCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


@dataclass(frozen=True, eq=False)
class MembershipVerdict:
    """Answer to a domain-membership question"""
    domain: OperatorDomain
    status: MembershipStatus
    evidence: Tuple[Tuple[int, float], ...] = ()
    anchor: Optional[str] = None
    limit: Optional[np.ndarray] = None


@dataclass(frozen=True)
class FrameBounds:
    """Lower and upper bounds; None when a bound does not apply"""
    lower: Optional[float] = None
    upper: Optional[float] = None
    optimal: bool = False

    def __post_init__(self):
        for name in ('lower', 'upper'):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValidationError(f"Bound {name} must be nonnegative, got {value}")
        if self.lower is not None and self.upper is not None:
            if self.lower > self.upper * (1 + 1e-12) + 1e-300:
                raise ValidationError(f"Lower bound {self.lower} exceeds upper bound {self.upper}")


@dataclass(frozen=True)
class LabelVerdict:
    """Verdict for one class label through one characterization"""
    label: ClassLabel
    holds: Optional[bool]
    via: Characterization
    anchor: str
    bounds: Optional[FrameBounds] = None
    borderline: bool = False


@dataclass(frozen=True)
class Disagreement:
    """Characterizations that reach different verdicts for one label"""
    label: ClassLabel
    verdicts: Tuple[Tuple[Characterization, Optional[bool]], ...]
    residuals: Tuple[float, ...] = ()


@dataclass(frozen=True)
class ClassificationReport:
    """Per-characterization verdicts and their consensus"""
    verdicts: Dict[Characterization, Tuple[LabelVerdict, ...]]
    consensus: Dict[ClassLabel, Optional[bool]]
    agreement: bool
    borderline: bool = False
    tol: Optional[Tolerance] = None
    disagreements: Tuple[Disagreement, ...] = ()
    tight: bool = False
    parseval: bool = False
    source: Optional[str] = None

    @property
    def via_c(self) -> Tuple[LabelVerdict, ...]:
        return self.verdicts.get(Characterization.C, ())

    @property
    def via_d(self) -> Tuple[LabelVerdict, ...]:
        return self.verdicts.get(Characterization.D, ())

    @property
    def via_s(self) -> Tuple[LabelVerdict, ...]:
        return self.verdicts.get(Characterization.S, ())

    @property
    def via_g(self) -> Tuple[LabelVerdict, ...]:
        return self.verdicts.get(Characterization.G, ())

    def verdict(self, label: ClassLabel, via: Characterization) -> Optional[LabelVerdict]:
        for verdict in self.verdicts.get(via, ()):
            if verdict.label == label:
                return verdict
        return None

    def holds(self, label: ClassLabel) -> Optional[bool]:
        return self.consensus.get(label)

    def bounds(self, label: ClassLabel) -> Optional[FrameBounds]:
        """Bounds of the first deciding characterization that reports them"""
        for via in Characterization:
            verdict = self.verdict(label, via)
            if verdict is not None and verdict.holds and verdict.bounds is not None:
                return verdict.bounds
        return None


@dataclass(frozen=True)
class SectionsResult:
    """Riesz-Fischer test through the leading sections G_n of the Gram matrix"""
    a_est: float
    per_section: Tuple[float, ...]
    riesz_fischer: bool
    threshold: float


@dataclass(frozen=True)
class TransformPrediction:
    """Bounds predicted for (F psi_k) from the bounds of (psi_k) and norms of F"""
    input_bounds: FrameBounds
    operator_norm: float
    pinv_norm: Optional[float]
    predicted: FrameBounds
    rule: TransformRule
    anchor: str


@dataclass(frozen=True)
class TransformReport:
    """Predicted bounds against the optimal bounds of the transformed sequence"""
    prediction: TransformPrediction
    actual: Optional[FrameBounds]
    label_holds: bool
    sandwich: bool
    classification: ClassificationReport
    failures: Tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class FactorizationReport:
    """V with V delta_k = psi_k and the class properties read off V"""
    v: Matrix
    norm: float
    inverse_norm: Optional[float]
    operator_properties: Dict[str, bool]
    properties: Dict[ClassLabel, bool]
    matches_classification: bool
    mismatches: Tuple[ClassLabel, ...] = ()


@dataclass
class Command:
    """A parsed command line"""
    verb: Verb
    input_path: Optional[str] = None
    fixture: Optional[str] = None
    coeff: Optional[str] = None
    domain: Optional[OperatorDomain] = None
    levels: Tuple[int, ...] = ()
    tol_rank: Optional[float] = None
    output_format: OutputFormat = OutputFormat.JSON
    operator_path: Optional[str] = None
    rule: Optional[TransformRule] = None
    probe_lnx2: bool = False
