"""
Exception hierarchy for the MCWC toolkit

Every error carries a short machine-readable ``code`` and the process exit
status the CLI uses for it (1 verification failure, 2 usage or precondition
error, 3 internal consistency violation).
"""

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_CONSISTENCY = 3


class McwcError(Exception):
    """Base class for all toolkit errors"""
    code = 'mcwc-error'
    exit_code = EXIT_USAGE

    def one_line(self):
        message = ' '.join(str(self).split())
        return f"error: {self.code}: {message}"


class FieldError(McwcError):
    code = 'field'


class CodeFormatError(McwcError):
    code = 'code-format'


class VerificationError(McwcError):
    code = 'verification'
    exit_code = EXIT_VERIFICATION


class ConstructionError(McwcError):
    code = 'construction'


class DesignError(McwcError):
    code = 'design'


class BoundError(McwcError):
    code = 'bound'


class SearchLimitError(McwcError):
    code = 'search-limit'


class DomainError(McwcError):
    code = 'domain'


class ConsistencyError(McwcError):
    """A best lower bound exceeded a best upper bound: a bug, never new mathematics"""
    code = 'consistency'
    exit_code = EXIT_CONSISTENCY


class SimulationError(McwcError):
    code = 'puf'
