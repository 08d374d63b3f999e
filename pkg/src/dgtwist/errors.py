"""Exception types shared across the toolkit."""


class DgtwistError(Exception):
    """Base class for all toolkit errors."""


class CompositionNonzero(DgtwistError):
    """d_out . d_in != 0; carries a witness entry (row, col, value)."""

    def __init__(self, row, col, value):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"composition is nonzero at ({row}, {col}): {value}")


class DimensionMismatch(DgtwistError):
    pass


class TruncationExceeded(DgtwistError):
    pass


class MixedAlgebra(DgtwistError):
    """Operands belong to different algebras or modules."""


class MissingCorner(DgtwistError):
    """A positive-degree table word has no declared degree-0 corner."""


class DifferentialNotSquareZero(DgtwistError):
    """D*D != 0 on the examined window; carries a witness basis element."""

    def __init__(self, degree, witness):
        self.degree, self.witness = degree, witness
        super().__init__(f"D^2 != 0 at degree {degree}, witness {witness}")


class NotActionMonotone(DgtwistError):
    """A cocycle entry does not strictly decrease the action."""

    def __init__(self, source, target):
        self.source, self.target = source, target
        super().__init__(f"entry {source} -> {target} does not decrease action")


class NotACycle(DgtwistError):
    pass


class NotTopDegree(DgtwistError):
    pass


class EndpointMismatch(DgtwistError):
    pass


class ActionsMissing(DgtwistError):
    pass


class ChainMapViolation(DgtwistError):
    """Post-hoc chain-map check failed (usually a truncation artifact)."""

    def __init__(self, witness, message="chain map identity violated"):
        self.witness = witness
        super().__init__(f"{message}; witness {witness}")


class ActionNotDescending(DgtwistError):
    """The degree-0 action does not descend to homology within truncation."""


class TruncationTooSmall(DgtwistError):
    pass


class WindowUnstable(DgtwistError):
    """A windowed group-ring computation did not stabilize."""


class ModelError(DgtwistError):
    """Base class for model-file problems, with source location."""

    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + where)


class ModelSyntaxError(ModelError):
    pass


class UnresolvedReference(ModelError):
    pass


class DuplicateName(ModelError):
    pass
