import ast
import csv
from pathlib import Path

import pytest

from timevortex.lattice import Embedding

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES: list[str] = []


def golden_rows():
    with open(DATA / "optimal_embeddings.csv") as fh:
        for r in csv.DictReader(fh):
            yield (r["family"], int(r["D"]), int(r["N"]),
                   ast.literal_eval(r["L1"]), ast.literal_eval(r["L2"]))


def emb(L1, L2) -> Embedding:
    return Embedding.from_vectors(L1, L2)


@pytest.fixture
def record():
    def _record(line: str):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
