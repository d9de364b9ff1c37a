"""
Exceptions
"""


class TubeSpectraError(Exception):
    """Error class for tubespectra"""


class DomainError(TubeSpectraError):
    """An argument outside the domain of a function"""


class PotentialError(TubeSpectraError):
    """A potential which is malformed, uneven or non-monotone in x"""


class InvalidTubeError(TubeSpectraError):
    """A winding vector which does not define a nanotube"""


class PreconditionError(TubeSpectraError):
    """An operation called outside its preconditions"""


class AssemblyError(TubeSpectraError):
    """A discretized operator which lost its Hermitian structure"""


class InvalidConfigError(TubeSpectraError):
    """A periodic graph whose Bloch determinant misses the dispersion cubic"""


class ValidationError(TubeSpectraError):
    """An oracle disagreeing with the analytic description"""

    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)


class UsageError(TubeSpectraError):
    """A command line which cannot be run"""
