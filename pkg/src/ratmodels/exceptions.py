class ModelError(Exception):
    """Base class for invalid algebraic input."""


class DifferentialError(ModelError):
    """A differential has the wrong degree or does not square to zero."""


class TopDegreeNotFound(ModelError):
    pass


class NotAMorphism(ModelError):
    pass


class NotARetract(ModelError):
    pass


class ConnectivityViolation(ModelError):
    pass


class NotSimplyConnected(ModelError):
    pass


class NonHomogeneousInput(ModelError):
    pass


class ModelParseError(ModelError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
