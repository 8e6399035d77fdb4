class FacetRankError(Exception):
    """Base class for all errors raised by facetrank."""


class EmptyGraphError(FacetRankError, ValueError):
    pass


class MissingTagError(FacetRankError, KeyError):
    def __init__(self, tag):
        super().__init__(tag)
        self.tag = tag

    def __str__(self):
        return f"tag not present in rank store: {self.tag!r}"


class ParameterError(FacetRankError, ValueError):
    pass


class TooFewBinsError(FacetRankError, ValueError):
    pass


class InsufficientVocabularyError(FacetRankError, ValueError):
    pass


class StoreError(FacetRankError):
    pass


class StoreNotFoundError(StoreError, FileNotFoundError):
    pass


class CorruptStoreError(StoreError, ValueError):
    pass


class StoreVersionError(StoreError, ValueError):
    pass


class FingerprintMismatchError(StoreError):
    pass
