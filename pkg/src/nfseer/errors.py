class NFSeerError(Exception):
    """Base class for all package errors."""


class ParseError(NFSeerError, ValueError):
    pass


class DomainError(NFSeerError, ValueError):
    pass


class LoadError(NFSeerError, ValueError):
    pass


class LookupFailure(NFSeerError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class InputError(NFSeerError, ValueError):
    pass


class NumericError(NFSeerError, ArithmeticError):
    pass


class ConfigError(NFSeerError, ValueError):
    pass


class DataError(NFSeerError, ValueError):
    pass


class MappingError(NFSeerError, ValueError):
    pass


class CaseError(NFSeerError, ValueError):
    pass


class RenderError(NFSeerError, ValueError):
    pass
