"""Exception hierarchy shared by every module of the package."""


class FoliateError(Exception):
    """Base class for all errors raised by foliate."""


# series algebra

class ZeroConstantTerm(FoliateError, ZeroDivisionError):
    pass


class CompositionNeedsPositiveValuation(FoliateError, ValueError):
    pass


class NotInvertible(FoliateError, ValueError):
    pass


class RootNeedsUnitConstantTerm(FoliateError, ValueError):
    pass


class LogNeedsUnitConstantTerm(FoliateError, ValueError):
    pass


class ExpNeedsZeroConstantTerm(FoliateError, ValueError):
    pass


# normal forms and germs

class ZeroSeries(FoliateError, ValueError):
    pass


class NonzeroConstantTerm(FoliateError, ValueError):
    pass


class FieldCannotRepresentRoot(FoliateError, ValueError):
    """An algebraic number needed by the computation is not in the exact field.

    Callers should retry with an approximate field.
    """


class NotAGerm(FoliateError, ValueError):
    pass


class UndecidedResonance(FoliateError):
    """A unit-modulus multiplier is too close to a root of unity to decide."""


# foliations

class ZeroForm(FoliateError, ValueError):
    pass


class TruncationTooShort(FoliateError):
    pass


class RootIsolationFailed(FoliateError):
    pass


class AxisNotInvariant(FoliateError, ValueError):
    pass


class DenominatorVanishes(FoliateError, ZeroDivisionError):
    pass


class Resonance(FoliateError):
    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"resonant recursion at order {step}")


class ZeroLinearPart(FoliateError, ValueError):
    pass


# transport

class LeftSection(FoliateError):
    pass


class StiffnessFailure(FoliateError):
    pass


class NotAbelianShape(FoliateError, ValueError):
    pass


class BranchCutCrossed(FoliateError):
    pass


# asymptotics

class EmptySubsector(FoliateError, ValueError):
    pass


class EvaluationFailure(FoliateError):
    def __init__(self, sample, cause=None):
        self.sample = sample
        self.cause = cause
        super().__init__(f"evaluation failed at z={sample!r}: {cause!r}")


class ExtrapolationUnstable(FoliateError):
    def __init__(self, last_stable_k, message=None):
        self.last_stable_k = last_stable_k
        super().__init__(message or f"extrapolation unstable after k={last_stable_k}")


class SectorTooWide(FoliateError, ValueError):
    pass


class QuadratureFailure(FoliateError):
    pass


# ingestion

class ParseError(FoliateError, ValueError):
    def __init__(self, location, message):
        self.location = location
        super().__init__(f"{location}: {message}")
