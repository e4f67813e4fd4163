"""Exception hierarchy shared by all loopalg modules."""


class LoopAlgError(Exception):
    """Base class; the CLI maps subclasses of InputError to exit code 2."""


class InputError(LoopAlgError):
    pass


class EngineError(LoopAlgError):
    pass


class InvalidCharacter(InputError):
    """Positions here and in ParseError are 1-based."""

    def __init__(self, position: int, char: str = ""):
        self.position = position
        self.char = char
        super().__init__(f"invalid character {char!r} at position {position}")


class GeneratorOutOfRank(InputError):
    def __init__(self, letter: str, rank: int):
        self.letter = letter
        self.rank = rank
        super().__init__(f"generator {letter!r} outside rank {rank}")


class ParseError(InputError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DegenerateClass(EngineError):
    pass


class NonHyperbolic(EngineError):
    pass


class NotLinked(EngineError):
    pass


class TangencyUnresolved(EngineError):
    pass


class NotDiscreteInput(InputError):
    pass


class NoRegisteredSplitting(InputError):
    pass


class NonEssentialClass(EngineError):
    pass


class NotStabilized(EngineError):
    pass


class FoldFailure(EngineError):
    pass
