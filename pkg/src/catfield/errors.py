"""Exception hierarchy.

Every error carries a module-qualified code such as ``category.MissingComposite``
so the CLI can print machine-parsable diagnostics.
"""


class CatFieldError(Exception):
    module = "catfield"

    @classmethod
    def code(cls) -> str:
        return f"{cls.module}.{cls.__name__}"


class CategoryError(CatFieldError):
    module = "category"


class RigError(CatFieldError):
    module = "rig"


class AlgebraError(CatFieldError):
    module = "algebra"


class CausalError(CatFieldError):
    module = "causal"


class StateError(CatFieldError):
    module = "states"


class GnsError(CatFieldError):
    module = "gns"


class DynamicsError(CatFieldError):
    module = "dynamics"


class UsageError(CatFieldError):
    module = "cli"


# category-core
class MissingComposite(CategoryError): pass
class AssociativityViolation(CategoryError): pass
class IdentityViolation(CategoryError): pass
class DanglingEndpoint(CategoryError): pass
class BadComposite(CategoryError): pass
class UnknownArrow(CategoryError): pass
class UnknownObject(CategoryError): pass
class NotAPreorder(CategoryError): pass
class NotAssociativeTable(CategoryError): pass
class NoUnit(CategoryError): pass
class NoInverse(CategoryError): pass
class GraphHasCycle(CategoryError): pass
class NotClosedUnderComposition(CategoryError): pass
class NotInvolutive(CategoryError): pass
class VarianceViolation(CategoryError): pass
class ObjectsNotCovered(CategoryError): pass
class NotAFunctor(CategoryError): pass

# rig
class UnknownRig(RigError): pass
class BadDimension(RigError): pass
class NotSampleable(RigError): pass
class NoRigInvolution(RigError): pass
class NoPositivity(RigError): pass

# category-algebra
class MismatchedCategory(AlgebraError): pass
class MismatchedRig(AlgebraError): pass
class SupportOutsideCarrier(AlgebraError): pass
class TooLarge(AlgebraError): pass
class UnsupportedRig(AlgebraError): pass
class NotIndiscrete(AlgebraError): pass
class NotASubcategory(AlgebraError): pass
class NotInvertible(AlgebraError): pass

# causal
class NotWide(CausalError): pass
class NotClosed(CausalError): pass
class LatticeTooLarge(CausalError): pass
class NotARegion(CausalError): pass
class NoPartialInvolution(CausalError): pass

# states
class NotNormalized(StateError): pass
class HermitianViolation(StateError): pass
class NotPSD(StateError): pass
class SupportOffCarrier(StateError): pass
class NotDaggerStructure(StateError): pass
class CarrierRestrictionInvalid(StateError): pass

# gns
class CarrierNotWholeCategory(GnsError): pass
class DegenerateTolerance(GnsError): pass
class SingularBlock(GnsError): pass
class ContractivityFails(GnsError): pass

# dynamics
class CocycleViolation(DynamicsError): pass
class NotInvertibleComponent(DynamicsError): pass
class NotUnitary(DynamicsError): pass
class StateInvalid(DynamicsError): pass
class EvolvedStateInvalid(DynamicsError): pass
class CoinNotUnitary(DynamicsError): pass
