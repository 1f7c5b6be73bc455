"""Error taxonomy shared across the package.

Every exception carries a stable machine-readable ``code`` (its class name)
so the HTTP layer can map failures to structured 4xx/5xx bodies without
string matching.
"""


class DeviceDeskError(Exception):
    """Base class; ``code`` is the stable identifier exposed over the API."""

    status = 400

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.details = details

    @property
    def code(self) -> str:
        return self.__class__.__name__

    def to_payload(self) -> dict:
        payload = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


# corpus ingestion
class EmptyDocument(DeviceDeskError):
    pass


class InvalidLanguageTag(DeviceDeskError):
    pass


class DuplicateCode(DeviceDeskError):
    pass


class EmptyCode(DeviceDeskError):
    pass


class EmptyManifest(DeviceDeskError):
    pass


class ValidationError(DeviceDeskError):
    pass


# embedding
class ProviderUnavailable(DeviceDeskError):
    status = 503


class DimensionMismatch(DeviceDeskError):
    pass


# vector store
class DuplicateId(DeviceDeskError):
    pass


class EmptySegment(DeviceDeskError):
    pass


class MixedEmbedderSpec(DeviceDeskError):
    pass


class FormatVersionMismatch(DeviceDeskError):
    pass


class EmbedderSpecMismatch(DeviceDeskError):
    pass


class CorruptFile(DeviceDeskError):
    pass


# router
class EmptyQuery(DeviceDeskError):
    pass


class TooFewExemplars(DeviceDeskError):
    pass


# tools
class NoCatalogLoaded(DeviceDeskError):
    status = 503


class UnknownFormatSpec(DeviceDeskError):
    pass


class NoScriptForModel(DeviceDeskError):
    status = 404


class SessionComplete(DeviceDeskError):
    status = 409


class UnknownSession(DeviceDeskError):
    status = 404


class EmptyProfile(DeviceDeskError):
    status = 404


class InvalidHorizon(DeviceDeskError):
    pass


# rag
class StoreUnavailable(DeviceDeskError):
    status = 503


class ProviderTimeout(DeviceDeskError):
    status = 504


# forum
class DuplicateVote(DeviceDeskError):
    status = 409


class NotAuthorized(DeviceDeskError):
    status = 403


class UnknownPost(DeviceDeskError):
    status = 404


class UnknownReply(DeviceDeskError):
    status = 404


class UnknownTarget(DeviceDeskError):
    status = 404


class RuleNotMet(DeviceDeskError):
    status = 409


class AlreadyPromoted(DeviceDeskError):
    status = 409


# server
class InvalidToken(DeviceDeskError):
    status = 401


class Expired(DeviceDeskError):
    status = 401


class MissingStores(DeviceDeskError):
    status = 503
