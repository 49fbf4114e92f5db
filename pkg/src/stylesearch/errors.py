"""Exception hierarchy shared across the package.

Every error raised by stylesearch derives from StyleSearchError, so callers
can catch one base class at API boundaries. Subclasses carry the offending
key/name as an attribute where that helps error reporting.
"""

from __future__ import annotations


class StyleSearchError(Exception):
    """Base class for all stylesearch errors."""


# taxonomy -----------------------------------------------------------------

class TaxonomyError(StyleSearchError):
    pass


class MissingClassError(TaxonomyError):
    def __init__(self, name: str):
        super().__init__(f"taxonomy is missing garment class {name!r}")
        self.name = name


class UnknownClassError(TaxonomyError):
    def __init__(self, name: str):
        super().__init__(f"unknown garment class {name!r}")
        self.name = name


class DuplicateLabelError(TaxonomyError):
    def __init__(self, garment_class: str, label: str):
        super().__init__(
            f"duplicate subcategory label {label!r} under {garment_class!r} "
            "(labels collide after analyzer normalization)"
        )
        self.garment_class = garment_class
        self.label = label


class InvalidLabelError(TaxonomyError):
    def __init__(self, garment_class: str, label: str):
        super().__init__(
            f"subcategory label {label!r} under {garment_class!r} yields no "
            "tokens under the search analyzer"
        )
        self.garment_class = garment_class
        self.label = label


# providers ----------------------------------------------------------------

class ProviderError(StyleSearchError):
    pass


class MissingFixtureError(ProviderError):
    def __init__(self, image_id: str):
        super().__init__(f"no detection fixture for image {image_id!r}")
        self.image_id = image_id


class RemoteUnavailableError(ProviderError):
    pass


class MalformedResponseError(ProviderError):
    pass


class MissingEmbeddingError(ProviderError):
    def __init__(self, key: str):
        super().__init__(f"no embedding for key {key!r}")
        self.key = key


class MissingCaptionError(ProviderError):
    def __init__(self, key: str):
        super().__init__(f"no caption for crop key {key!r}")
        self.key = key


class DegenerateBoxError(StyleSearchError):
    pass


class DimensionMismatchError(StyleSearchError):
    pass


# vision-language ----------------------------------------------------------

class ZeroVectorError(StyleSearchError):
    def __init__(self, label: str | None = None):
        what = f"embedding for {label!r}" if label else "embedding"
        super().__init__(f"{what} is all zeros; cosine undefined")
        self.label = label


class EmptyCandidatesError(StyleSearchError):
    pass


class EmptyLabelError(StyleSearchError):
    pass


class EmptyCaptionError(StyleSearchError):
    pass


# search-core --------------------------------------------------------------

class SearchError(StyleSearchError):
    pass


class EmptyDocIdError(SearchError):
    pass


class UnknownDocError(SearchError):
    def __init__(self, doc_id: str):
        super().__init__(f"document {doc_id!r} is not indexed")
        self.doc_id = doc_id


class EmptyQueryError(SearchError):
    pass


class CorruptSnapshotError(SearchError):
    pass


# catalog-store ------------------------------------------------------------

class CatalogError(StyleSearchError):
    pass


class MissingFieldError(CatalogError):
    def __init__(self, field: str):
        super().__init__(f"missing field: {field}")
        self.field = field


class MalformedRecordError(CatalogError):
    pass


class UnreadableSourceError(CatalogError):
    pass


class NotFoundError(CatalogError):
    def __init__(self, product_id: str):
        super().__init__(f"no product with id {product_id!r}")
        self.product_id = product_id


class UnknownClusterError(CatalogError):
    def __init__(self, cluster: str):
        super().__init__(f"no cluster named {cluster!r}")
        self.cluster = cluster
