"""Exception types shared across the toolkit."""


class QualOmegaError(Exception):
    """Base class for every error raised by qualomega."""


class ValidationError(QualOmegaError):
    """An object failed validation; ``issues`` lists every problem found."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


class NotBinaryBranching(QualOmegaError):
    pass


class NotSimple(QualOmegaError):
    pass


class NotSemiSimple(QualOmegaError):
    pass


class NotParity(QualOmegaError):
    pass


class NotRabin(QualOmegaError):
    pass


class UnsupportedAcceptance(QualOmegaError):
    pass


class EmptySet(QualOmegaError, ValueError):
    pass


class AllSilentBscc(QualOmegaError):
    """A reachable bottom component carries no objective-relevant label."""

    def __init__(self, bscc):
        self.bscc = bscc
        super().__init__(f"reachable BSCC with only silent states: {sorted(map(str, bscc))}")


class AlphabetMismatch(QualOmegaError):
    pass


class CodingWidthTooSmall(QualOmegaError):
    pass


class DocumentError(QualOmegaError):
    """A JSON document or command-line value could not be interpreted."""
