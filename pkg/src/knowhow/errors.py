"""Exception hierarchy shared by every module of the package."""


class KnowHowError(Exception):
    """Base class for all errors raised by knowhow."""


class FormulaSyntaxError(KnowHowError):
    def __init__(self, position, expected, text=None):
        self.position = position
        self.expected = expected
        self.text = text
        super().__init__(f"syntax error at position {position}: expected {expected}")


class ReservedWordError(KnowHowError):
    def __init__(self, word, position=None):
        self.word = word
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"{word!r} is reserved and cannot be used as a proposition{where}")


class NotSubformulaClosed(KnowHowError):
    def __init__(self, missing):
        self.missing = missing
        super().__init__(f"set is not subformula-closed: missing {missing}")


class ParseError(KnowHowError):
    """Malformed model, strategy or proof file."""


class ValidationError(KnowHowError):
    KINDS = ("overlapping-blocks", "unknown-state", "unknown-action", "empty-state-set")

    def __init__(self, kind, detail=""):
        if kind not in self.KINDS:
            raise ValueError(f"unknown validation kind {kind!r}")
        self.kind = kind
        self.detail = detail
        super().__init__(f"{kind}: {detail}" if detail else kind)


class UnknownState(KnowHowError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"unknown state {state!r}")


class InvalidStrategy(KnowHowError):
    """A strategy assigns an action that is not uniformly executable."""


class SpaceTooLarge(KnowHowError):
    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"strategy space has {count} members, cap is {cap}")


class TooLarge(KnowHowError):
    def __init__(self, size, cap, what="closure"):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} too large: {size} exceeds cap {cap}")


class TooManyAtoms(KnowHowError):
    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} opaque atoms exceeds truth-table cap {cap}")


class VerdictDisagreement(KnowHowError):
    """The canonical-model verdict and the bounded search disagree."""
