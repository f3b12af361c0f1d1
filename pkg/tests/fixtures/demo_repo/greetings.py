"""Small greeting helpers used by the walkthrough."""

from typing import Optional

DEFAULT_NAME: str = "world"
PUNCTUATION: str = "!"


def greet(name: str) -> str:
    """Greet someone by name.

    Args:
        name (str): Who to greet.

    Returns:
        str: The greeting line.
    """
    return f"Hello, {name}{PUNCTUATION}"


def greet_all(names: list[str], sep: str = ", ") -> str:
    # Keep the separator configurable for tests.
    joined = sep.join(greet(n) for n in names)
    return joined


def maybe_greet(name: Optional[str]) -> Optional[str]:
    if name is None:
        return None
    return greet(name)


async def fetch_greeting(source: "str") -> str:
    return greet(source)
