from importlib import resources

import pytest

from whiteprod.relations import load_relations_text


@pytest.fixture(scope="session")
def db():
    ref = resources.files("whiteprod").joinpath("data/toda-core.rel")
    return load_relations_text(ref.read_text(encoding="utf-8"), "toda-core.rel")
