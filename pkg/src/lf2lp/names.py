"""Fresh-name supply and display-name assignment shared by both term languages.

Internally generated names carry a ``#<n>`` suffix that no surface
identifier can contain; pretty printers strip the suffix again whenever
that stays unambiguous.
"""

from __future__ import annotations

from itertools import count

_counter = count(1)


def fresh(stem: str = "x") -> str:
    """A globally unused name whose display stem is ``stem``."""
    return f"{stem_of(stem)}#{next(_counter)}"


def stem_of(name: str) -> str:
    return name.split("#", 1)[0] or "_"


def is_generated(name: str) -> bool:
    return "#" in name


def assign_displays(names, taken=()) -> dict[str, str]:
    """Injective name -> display map, preferring bare stems.

    ``names`` is ordered; earlier names win the nicer displays. ``taken``
    displays are never produced.
    """
    out: dict[str, str] = {}
    used = set(taken)
    for name in names:
        if name in out:
            continue
        base = stem_of(name)
        if base == "_":
            base = "x"
        cand = base
        i = 0
        while cand in used:
            i += 1
            cand = f"{base}{i}"
        out[name] = cand
        used.add(cand)
    return out
