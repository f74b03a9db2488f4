import os
from typing import Sequence


def write_price_file(directory: str, name: str, rows: Sequence[str]) -> str:
    """Write a price CSV with the given data rows and return its path."""
    path = os.path.join(str(directory), name)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("date,close\n")
        for row in rows:
            handle.write("{}\n".format(row))
    return path
