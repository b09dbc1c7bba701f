"""Domain errors raised by knotres."""


class KnotresError(ValueError):
    """Base class for every domain failure; `code` names the failure in JSON output."""

    code = "KnotresError"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        payload = {"error": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


# Diagram parsing and validation

class MalformedSyntax(KnotresError):
    code = "MalformedSyntax"


class BadArcMultiplicity(KnotresError):
    code = "BadArcMultiplicity"


class DisconnectedDiagram(KnotresError):
    code = "DisconnectedDiagram"


class NonPlanarRotation(KnotresError):
    code = "NonPlanarRotation"


class InconsistentOrientation(KnotresError):
    code = "InconsistentOrientation"


class NotBipartite(KnotresError):
    code = "NotBipartite"


class NotAccepted(KnotresError):
    """A diagram failed validate(); `code` is the first failing flag."""

    code = "NotAccepted"

    def __init__(self, message="", code=None, **details):
        super().__init__(message, **details)
        if code:
            self.code = code


# Graphs and matrices

class IndexOutOfRange(KnotresError):
    code = "IndexOutOfRange"


class UnbalancedGraph(KnotresError):
    code = "UnbalancedGraph"


class NonSquare(KnotresError):
    code = "NonSquare"


class Singular(KnotresError):
    code = "Singular"


class SingularInterior(KnotresError):
    code = "SingularInterior"


class PenroseViolation(KnotresError):
    code = "PenroseViolation"


class NonUniformWeights(KnotresError):
    code = "NonUniformWeights"


# Flypes and batch runs

class NotAdmissible(KnotresError):
    code = "NotAdmissible"


class ManifestError(KnotresError):
    code = "ManifestError"


class InputNotFound(KnotresError):
    code = "InputNotFound"
