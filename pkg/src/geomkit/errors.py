"""Exception hierarchy shared by all geomkit modules."""


class GeomError(Exception):
    """Base class for every error raised by geomkit."""


class ContractViolation(GeomError, ValueError):
    """An operation was called with arguments outside its contract."""


class DimensionMismatch(ContractViolation):
    def __init__(self, expected, got, what="operand"):
        self.expected = expected
        self.got = got
        super().__init__(f"dimension mismatch: expected {what} of dim {expected}, got {got}")


class DegenerateGeometry(ContractViolation):
    """A derived quantity is undefined for the given (degenerate) object."""


class CapabilityError(GeomError, TypeError):
    """The requested capability is not available for the type."""


class UnknownNode(GeomError, KeyError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"unknown pose {node!r}")

    def __str__(self):
        return self.args[0]


class DuplicateNode(GeomError, ValueError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"pose {node!r} already exists in the tree")


class ExportError(GeomError):
    """Rendering or writing of LaTeX output failed."""
