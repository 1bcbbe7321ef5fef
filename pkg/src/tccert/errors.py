"""Exception types shared across the package."""


class TCCertError(Exception):
    """Base class for every error raised by tccert."""


class FieldMismatchError(TCCertError):
    pass


class SquareZeroViolation(TCCertError):
    def __init__(self, degree, message=None):
        self.degree = degree
        super().__init__(message or f"boundary composite d_{degree - 1} o d_{degree} is nonzero")


class UnknownProductError(TCCertError):
    """A computation needed a structure constant that was never determined."""

    def __init__(self, i, j, labels=None):
        self.pair = (i, j)
        if labels is not None:
            msg = f"product {labels[i]} * {labels[j]} is UNKNOWN"
        else:
            msg = f"product of basis elements {i} and {j} is UNKNOWN"
        super().__init__(msg)


class AlgebraError(TCCertError):
    pass


class SchemaError(TCCertError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
