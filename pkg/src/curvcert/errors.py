"""Exception hierarchy shared by every module."""


class CurvcertError(Exception):
    pass


class DegreeError(CurvcertError, ValueError):
    """Exterior degree out of range (k > n, k + l > n, mismatched degrees)."""


class SubsetError(CurvcertError, ValueError):
    pass


class SymmetryConflict(CurvcertError, ValueError):
    """Two component entries imply different values for the same slot."""


class BianchiViolation(CurvcertError, ValueError):
    pass


class NotAnIsometry(CurvcertError, ValueError):
    pass


class DimensionTooSmall(CurvcertError, ValueError):
    pass


class WrongSignature(CurvcertError, ValueError):
    pass


class NullVector(CurvcertError, ValueError):
    pass


class PreconditionFailed(CurvcertError, ValueError):
    pass


class CertificateViolation(CurvcertError):
    """A theorem demanded an exact zero and the computation produced something else.

    This is never an expected outcome; it means a kernel is wrong.
    """

    def __init__(self, certificate):
        super().__init__(f"nonzero witness {certificate.witness} for alpha={certificate.alpha}")
        self.certificate = certificate


class NotWeyl(CurvcertError, ValueError):
    pass


class StarCommutationFailed(CurvcertError, ValueError):
    pass


class IndeterminateClassification(CurvcertError, ValueError):
    pass


class SpecParseError(CurvcertError, ValueError):
    """Malformed tensor specification; `location` names the offending entry."""

    def __init__(self, message, location=None):
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location
