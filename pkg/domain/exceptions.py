"""
Domain-specific exceptions
"""


class FrameToolkitError(Exception):
    """Base exception for toolkit errors"""
    pass


class InvalidInputError(FrameToolkitError):
    """Raised when a matrix or sequence violates its construction invariants"""
    pass


class ParsingError(FrameToolkitError):
    """Raised when JSON input cannot be decoded"""
    pass


class SchemaError(ParsingError):
    """Raised when decoded JSON does not follow the expected schema"""
    pass


class HypothesisError(FrameToolkitError):
    """Raised when an operator does not satisfy the hypothesis of a transform rule"""

    def __init__(self, condition: str, message: str):
        super().__init__(message)
        self.condition = condition


class ValidationError(FrameToolkitError):
    """Raised when validation of arguments fails"""
    pass


class FileError(FrameToolkitError):
    """Raised when file operations fail"""
    pass
