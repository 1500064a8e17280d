from pathlib import Path

FIXTURES = Path(__file__).resolve().parent


def path(name: str) -> Path:
    return FIXTURES / name
