"""Exception hierarchy.  Every domain error derives from ``HidistError``."""


class HidistError(Exception):
    pass


class MetricError(HidistError, ValueError):
    pass


class NotSquare(MetricError):
    pass


class AsymmetricMatrix(MetricError):
    pass


class NonzeroDiagonal(MetricError):
    pass


class TriangleViolation(MetricError):
    def __init__(self, i, j, k, lhs, rhs):
        self.triple = (i, j, k)
        super().__init__(
            f"d({i},{j}) = {lhs!r} > d({i},{k}) + d({k},{j}) = {rhs!r}")


class DuplicatePoint(MetricError):
    pass


class InvalidCorrespondence(HidistError, ValueError):
    pass


class IndexOutOfRange(HidistError, IndexError):
    pass


class TooLarge(HidistError):
    pass


class InvalidComplex(HidistError, ValueError):
    pass


class NonMonotoneFunction(InvalidComplex):
    def __init__(self, face, coface, face_value, coface_value):
        self.face = face
        self.coface = coface
        super().__init__(
            f"value({face}) = {face_value!r} > value({coface}) = {coface_value!r}")


class GridMismatch(HidistError, ValueError):
    pass


class InvalidMatching(HidistError, ValueError):
    pass


class InvalidWitness(HidistError, ValueError):
    pass


class FormatError(HidistError, ValueError):
    pass
