import pathlib

import pytest

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "src" / "speccheck" / "corpus"


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS


def corpus_text(name):
    return (CORPUS / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def corpus():
    return corpus_text
