from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpus import colored_icons, full_corpus, write_corpus


@pytest.fixture(scope="session")
def corpus() -> dict[str, str]:
    return full_corpus()


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory, corpus) -> Path:
    directory = tmp_path_factory.mktemp("corpus")
    write_corpus(directory, corpus)
    return directory


@pytest.fixture(scope="session")
def colored_corpus() -> dict[str, str]:
    return colored_icons(100)


@pytest.fixture(scope="session")
def colored_dir(tmp_path_factory, colored_corpus) -> Path:
    directory = tmp_path_factory.mktemp("colored")
    write_corpus(directory, colored_corpus)
    return directory
