"""Transcribed reference matrices for the D' matrix and its 10x10 minor.

Each block is a list of rows; a row is a comma-separated string whose empty
fields are zero.  Entries are an optional sign, an optional integer and an
optional parameter name (``-3``, ``a1``, ``2h1``, ``-e1``).  ``*`` marks an
entry that is left unspecified in the source and is never compared.

Block ``(k, s)`` occupies rows ``13k .. 13k+12`` of the 26x25 matrix
(k = 0 for the first component) and the columns of V-slot group ``s``:
s = 1 is column 1..5, s = 2 is 6..15, s = 3 is 16..25.
"""

from __future__ import annotations

import re

from .scalars import ParamPoly

STAR = "*"

_L11 = [
    "3,,,,", "0,,,,", "0,,,,", "0,,,,",
    ",a1", ",b1,a1", ",,b1", ",c1,,a1", ",d1,c1,b1,a1", ",,d1,,b1",
    ",,,c1", ",,,d1,c1", ",,,,d1",
]

_L12 = [
    "-3,,,,,-e1", ",2e1", "-3,,a1,,,-e1,0,c1", ",,,,b1,,,,,d1",
    ",,3,,,,,e1", ",,,3,,,,,e1", ",,,,3,,,,,e1",
    ",,2e1", ",,,2e1", ",,,,2e1", ",,,,0", ",,,,0", ",,,,0",
]

_L22 = [
    ",-g2,,,,,-3", ",,,,,2g2", ",,a2,,,,,c2", "0,-g2,,,b2,,-3,,,d2",
    ",,,,,,,0", ",,,,,,,0", ",,,,,,,0",
    ",,,,,,,2g2", ",,,,,,,,2g2", ",,,,,,,,,2g2",
    ",,g2,,,,,3", ",,,g2,,,,,3", ",,,,g2,,,,,3",
]

_L13 = [
    ",,-a1,,-c1,,,-b1,,-d1", ",,,c1,*,,,,d1,*", "3,,-a1,,,h1,0,-b1", ",l1,,,-c1,,,,,-d1",
    ",,3,,,,,h1", ",,2h1,,,,,2l1", ",,l1",
    ",,,3,,,,,h1", ",,,2h1,,,,,2l1", ",,,l1",
    ",,,,3,,,,,h1", ",,,,2h1,,,,,2l1", ",,,,l1",
]

_L23 = [
    ",,-a2,,-c2,,,-b2,,-d2", ",,*,a2,,,,*,b2", ",,-a2,,,h2,,-b2", "0,l2,,,-c2,,3,,,-d2",
    ",,,,,,,h2", ",,2h2,,,,,2l2", ",,l2,,,,,3",
    ",,,,,,,,h2", ",,,2h2,,,,,2l2", ",,,l2,,,,,3",
    ",,,,,,,,,h2", ",,,,2h2,,,,,2l2", ",,,,l2,,,,,3",
]

_L5 = [
    "c1,,a1,,,3,,,h1,", "d1,c1,b1,a1,,2h1,,,2l1,", ",d1,,b1,,l1,,,,",
    ",,c1,,,,3,,,h1", ",,d1,c1,,,2h1,,,2l1",
    "b2,a2,,,2h2,,,2l2,,", ",b2,,,l2,,,3,,", "c2,,a2,,,,,,h2,",
    "d2,c2,b2,a2,,2h2,,,2l2,", ",d2,,b2,,l2,,,3,",
]


def _swap_component(rows: list[str]) -> list[str]:
    return [re.sub(r"([a-z])1", r"\g<1>2", r) for r in rows]


_ENTRY = re.compile(r"^(-?)(\d*)([a-z]\d)?$")


def parse_entry(text: str):
    """ParamPoly for one field, or ``STAR``."""
    text = text.strip()
    if text == STAR:
        return STAR
    if not text:
        return ParamPoly()
    m = _ENTRY.match(text)
    if not m:
        raise ValueError(f"cannot parse entry {text!r}")
    sign, num, sym = m.groups()
    c = int(num) if num else 1
    if sign:
        c = -c
    return ParamPoly.symbol(sym) * c if sym else ParamPoly.const(c)


def parse_rows(rows: list[str], width: int) -> list[list]:
    out = []
    for r in rows:
        fields = r.split(",")
        if len(fields) > width:
            raise ValueError(f"row {r!r} wider than {width}")
        fields += [""] * (width - len(fields))
        out.append([parse_entry(f) for f in fields])
    return out


# name -> (row offset, column offset, rows, width), offsets 0-based in the 26x25 matrix
BLOCKS = {
    "L11": (0, 0, _L11, 5),
    "L21": (13, 0, _swap_component(_L11), 5),
    "L12": (0, 5, _L12, 10),
    "L22": (13, 5, _L22, 10),
    "L13": (0, 15, _L13, 10),
    "L23": (13, 15, _L23, 10),
}


def reference_block(name: str) -> list[list]:
    _, _, rows, width = BLOCKS[name]
    return parse_rows(rows, width)


def reference_l5() -> list[list]:
    return parse_rows(_L5, 10)
