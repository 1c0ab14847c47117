class TateSmithError(Exception):
    """Base exception for tatesmith errors"""

    pass


class InputError(TateSmithError):
    """Input data violates a documented precondition"""

    pass


class CrossCheckError(TateSmithError):
    """Two independent computations disagree"""

    pass


class DocumentError(InputError):
    """Malformed JSON input document"""

    pass


class InvalidModule(InputError):
    """Action matrix is not unimodular of order dividing p"""

    pass


class InvalidComplex(InputError):
    """Differentials do not square to zero or are not equivariant"""

    pass


class InvalidWindow(InputError):
    """Window too narrow to read Tate cohomology"""

    pass


class CompositionNonzero(InputError):
    """Composite of consecutive maps is not zero"""

    pass


class PrimeMismatch(InputError):
    """Objects live over different primes"""

    pass


class ShapeMismatch(InputError):
    """Matrix or complex shapes do not fit together"""

    pass


class UnknownStratum(InputError):
    """Stratum label not in the poset"""

    pass


class NotUpSet(InputError):
    """Subset is not upward closed"""

    pass


class NotDownSet(InputError):
    """Subset is not downward closed"""

    pass


class BaseMismatch(InputError):
    """Sheaves live on different posets"""

    pass


class NotRegular(InputError):
    """Group action fixes a simplex setwise but not pointwise"""

    pass


class NotTateParity(InputError):
    """Object failed the Tate-parity certificate"""

    pass


class NotNormal(InputError):
    """Object is not a sum of unshifted parity sheaves"""

    pass


class NegativeExtensions(InputError):
    """Endomorphisms live in negative degrees"""

    pass


class PairingNotDivisible(InputError):
    """Weight divisible by p while its pairing is not"""

    pass


class UnsupportedInput(InputError):
    """Input outside the class the computation supports"""

    pass


class StabilizationFailure(CrossCheckError):
    """Stable hom routes disagree"""

    pass


class TateCohomologyError(CrossCheckError):
    """Tate cohomology group is not an F_p vector space"""

    pass


class DecompositionMismatch(CrossCheckError):
    """Summand multiplicities disagree with the idempotent count"""

    pass


class SpectralBoundFailure(CrossCheckError):
    """Hypercohomology page is smaller than its abutment"""

    pass
