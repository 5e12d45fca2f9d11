import pytest

from causalmk import Setting, load_model_file
from causalmk.cli import corpus

_PATHS = {path.name.removesuffix(".ck"): path for path in corpus()}


@pytest.fixture(scope="session")
def docs():
    return {name: load_model_file(path) for name, path in _PATHS.items()}


def _setting(docs, name, context="t"):
    doc = docs[name]
    return Setting(doc.model, doc.context(context))


@pytest.fixture(scope="session")
def umbrella(docs):
    return _setting(docs, "umbrella")


@pytest.fixture(scope="session")
def umbrella_variant(docs):
    return _setting(docs, "umbrella-variant")


@pytest.fixture(scope="session")
def stalemate(docs):
    return _setting(docs, "stalemate")


@pytest.fixture(scope="session")
def stalemate_revisited(docs):
    return _setting(docs, "stalemate-revisited")


@pytest.fixture(scope="session")
def police(docs):
    def make(context):
        return _setting(docs, "police", context)
    return make


@pytest.fixture(scope="session")
def robot(docs):
    return _setting(docs, "robot")


@pytest.fixture(scope="session")
def navigation(docs):
    return _setting(docs, "navigation")
