"""
Error types shared by every service
src/common/errors.py

Handlers map these onto status codes: 2 validation, 3 math precondition,
1 internal consistency failure.
"""


class ToricError(Exception):
    status = 1

    def __init__(self, name, message='', module=None):
        super().__init__(f"{name}: {message}" if message else name)
        self.name = name
        self.message = message
        self.module = module

    def to_dict(self):
        return {
            'error': self.name,
            'message': self.message,
            'module': self.module,
        }


class ValidationError(ToricError):
    """Structurally bad input (wrong shape, non-primitive ray, caps exceeded)."""
    status = 2


class PreconditionError(ToricError):
    """Input is well-formed but the math does not apply (NotBig, OutsideSupport, ...)."""
    status = 3


class ConsistencyError(ToricError):
    """Two independent computations of the same quantity disagreed."""
    status = 1
