"""Exception hierarchy.

Errors marked "internal" signal a broken invariant inside the library and
should never fire on valid input.
"""


class KirillovError(Exception):
    pass


class MalformedRational(KirillovError, ValueError):
    pass


class MalformedSpec(KirillovError, ValueError):
    pass


class DimensionMismatch(KirillovError, ValueError):
    pass


class JacobiViolation(KirillovError):
    def __init__(self, i, j, k, defect):
        self.indices = (i, j, k)
        self.defect = tuple(defect)
        super().__init__(f"Jacobi identity fails on basis triple ({i}, {j}, {k}): defect {[str(c) for c in defect]}")


class NotNilpotent(KirillovError):
    pass


class NotAnIdeal(KirillovError):
    pass


class NotASubalgebra(KirillovError):
    pass


class AlgebraMismatch(KirillovError):
    pass


class OddRank(KirillovError):
    """internal: a skew form of odd rank."""


class NormalizationFailure(KirillovError):
    """internal: the canonical-form loop could not clear a jump coordinate."""

    def __init__(self, index):
        self.index = index
        super().__init__(f"could not normalize flag coordinate {index}")


class NotInvolutive(KirillovError):
    pass


class NotHomomorphism(KirillovError):
    def __init__(self, i, j, defect):
        self.indices = (i, j)
        self.defect = tuple(defect)
        super().__init__(f"S[e_{i}, e_{j}] != [S e_{i}, S e_{j}]: defect {[str(c) for c in defect]}")


class CenterNotLine(KirillovError):
    pass


class ConstructionFailure(KirillovError):
    """internal: a construction guaranteed to exist was not found."""


class FunctionalNotAntiInvariant(KirillovError):
    pass


class WitnessSearchFailure(KirillovError):
    """internal: a conjugate self-dual orbit without a witness vanishing on U+."""


class NotAField(KirillovError):
    pass


class InadmissiblePrime(KirillovError):
    def __init__(self, p, reason):
        self.p = p
        self.reason = reason
        super().__init__(f"prime {p} is inadmissible: {reason}")


class NonSquareOrbit(KirillovError):
    """internal: an orbit whose size is not an even power of p."""


class NonIntegralMultiplicity(KirillovError):
    """internal: a character pairing that is not a rational integer."""
