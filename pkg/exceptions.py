class FreeLoopError(Exception):
    """Base class for engine errors"""


class RingError(FreeLoopError):
    """Unsupported coefficient ring"""


class DimensionMismatch(FreeLoopError):
    """Matrix or basis sizes do not agree"""


class DegreeError(FreeLoopError):
    """Element or operation has the wrong degree"""


class UnknownBlock(FreeLoopError):
    """Cell text does not parse as a block sequence"""


class FaceIndexError(FreeLoopError):
    """Face or degeneracy index out of range"""

    def __init__(self, kind, index, limit):
        super().__init__(f"{kind} index {index} out of range 1..{limit}")
        self.kind = kind
        self.index = index
        self.limit = limit


class PreconditionError(FreeLoopError):
    """Operation precondition not satisfied"""


class CorpusError(FreeLoopError):
    """Malformed or non 1-reduced simplicial set"""


class ConfigError(FreeLoopError):
    """Malformed suite configuration"""
