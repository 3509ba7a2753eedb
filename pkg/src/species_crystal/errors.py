class SpeciesError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class FieldError(SpeciesError):
    pass


class ValidationError(SpeciesError):
    pass


class RepresentationError(SpeciesError):
    pass


class GenericityError(SpeciesError):
    """Random samples of a 'generic' construction did not agree."""


class CrystalScopeError(SpeciesError):
    pass
