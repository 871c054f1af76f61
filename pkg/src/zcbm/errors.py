"""Exception hierarchy shared across the package."""


class ZcbmError(Exception):
    """Base class for all package errors."""


class NonFiniteError(ZcbmError):
    """A vector contains NaN or Inf components."""


class ZeroNormError(ZcbmError):
    """A vector with (near-)zero L2 norm cannot be normalized."""


class DimensionMismatchError(ZcbmError):
    """Operands disagree on embedding dimension."""


class EmptyBankError(ZcbmError):
    """The concept bank holds no concepts."""


class EmptyClassSetError(ZcbmError):
    """The class set holds no classes."""


# --- matrix file format ---

class BadMagicError(ZcbmError):
    """File does not start with the expected magic bytes."""


class UnsupportedVersionError(ZcbmError):
    """File declares an unknown format version or dtype code."""


class TruncatedFileError(ZcbmError):
    """File payload is shorter than the header promises."""


class DimMismatchError(ZcbmError):
    """File payload length is inconsistent with the header dimensions."""


# --- embedding provider ---

class ProviderError(ZcbmError):
    """Base class for embedding-provider failures."""


class ProviderUnreachableError(ProviderError):
    """Provider could not be reached after retries."""


class ProviderBadResponseError(ProviderError):
    """Provider answered with malformed or mismatched data."""


class ProviderTimeoutError(ProviderError):
    """Provider did not answer within the configured timeout."""


# --- metrics ---

class LengthMismatchError(ZcbmError):
    """Paired sequences differ in length."""


class EmptyReferenceError(ZcbmError):
    """Coverage requires a non-empty reference set."""


class NoNonzeroConceptsError(ZcbmError):
    """A score over selected concepts needs at least one nonzero weight."""


class TooFewConceptsError(ZcbmError):
    """Pairwise statistics need at least two concepts."""


class DegenerateVarianceError(ZcbmError):
    """PCA input has zero pooled variance."""


class EmptySamplesError(ZcbmError):
    """Calibration needs at least one sample."""


# --- sessions ---

class UnknownSessionError(ZcbmError):
    """No session with the given id exists."""


class ExpiredSessionError(ZcbmError):
    """The session exceeded its TTL."""
