"""Reference fixtures: the published classification tables shipped as
TSV files, plus their summary counts.

All loaders return parsed, canonical objects.  Torsion groups are
represented as ascending invariant-factor tuples, () being the trivial
group; the files print them in the descending bracket notation
("[4,2]", "[1]").
"""

from __future__ import annotations

import re
from importlib import resources

from .ade_types import ADEType, parse_type

FactorTuple = tuple[int, ...]

#: Number of realizable (type, group) pairs per torsion group.
GROUP_COUNTS: dict[FactorTuple, int] = {
    (): 2746, (2,): 732, (3,): 85, (4,): 41, (5,): 6, (6,): 10,
    (7,): 1, (8,): 1, (2, 2): 61, (2, 4): 5, (2, 6): 1, (3, 3): 3,
    (4, 4): 1,
}

#: Candidate types per rank (rank <= 18 and Euler number <= 24).
CANDIDATES_PER_RANK = (1, 2, 3, 6, 9, 16, 24, 39, 57, 88, 128, 193,
                       274, 393, 531, 688, 773, 712)

#: Types per rank under the rank bound alone (no Euler bound).
RANK_BOUND_PER_RANK = (1, 2, 3, 6, 9, 16, 24, 39, 57, 88, 128, 193,
                       276, 403, 570, 815, 1137, 1599)

#: Realizable types per rank.
REALIZABLE_PER_RANK = (1, 2, 3, 6, 9, 16, 24, 39, 57, 88, 128, 193,
                       274, 392, 518, 624, 580, 325)

#: Types per rank whose only torsion group is the trivial one.
TRIVIAL_ONLY_PER_RANK = (1, 2, 3, 6, 9, 16, 24, 38, 55, 82, 115, 162,
                         217, 289, 362, 419, 372, 188)

#: Realizable types per rank admitting a given torsion group, for the
#: groups with full per-rank reference rows.
GROUP_PER_RANK: dict[FactorTuple, tuple[int, ...]] = {
    (): (1, 2, 3, 6, 9, 16, 24, 39, 57, 88, 127, 189, 262, 360, 448,
         500, 416, 199),
    (2,): (0, 0, 0, 0, 0, 0, 0, 1, 2, 6, 13, 29, 53, 92, 133, 164,
           155, 84),
    (3,): (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 6, 12, 21, 24, 19),
    (4,): (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 4, 10, 15, 11),
    (2, 2): (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 5, 10, 16, 16,
             11),
}

_GROUP_TOKEN = re.compile(r"\[([0-9,]*)\]")


def parse_group(token: str) -> FactorTuple:
    """Parse one bracketed group cell like "[4,2]" or "[1]" into the
    ascending invariant-factor tuple."""
    m = _GROUP_TOKEN.fullmatch(token.strip())
    if m is None:
        raise ValueError(f"malformed group token: {token!r}")
    factors = tuple(sorted(int(x) for x in m.group(1).split(",") if x))
    factors = tuple(f for f in factors if f != 1)
    for f in factors:
        if f < 1:
            raise ValueError(f"malformed group token: {token!r}")
    return factors


def format_group(factors: FactorTuple) -> str:
    """Inverse of parse_group, in the descending bracket notation."""
    if not factors:
        return "[1]"
    return "[" + ",".join(str(f) for f in sorted(factors, reverse=True)) \
        + "]"


def parse_group_list(cell: str) -> tuple[FactorTuple, ...]:
    """Parse a multi-group cell like "[6],[3],[2],[1]"."""
    tokens = _GROUP_TOKEN.findall(cell.replace(" ", ""))
    rebuilt = "".join(f"[{t}]" for t in tokens)
    if not tokens or rebuilt != cell.replace(" ", "").replace("],[", "]["):
        raise ValueError(f"malformed group cell: {cell!r}")
    return tuple(parse_group(f"[{t}]") for t in tokens)


def format_group_list(groups) -> str:
    """Inverse of parse_group_list: groups sorted by descending order,
    then descending factors, comma-joined."""
    ordered = sorted(groups, key=group_sort_key, reverse=True)
    return ",".join(format_group(g) for g in ordered)


def group_sort_key(factors: FactorTuple):
    """Sort key matching the published group-cell order: by group
    order, then by the descending factor tuple."""
    order = 1
    for f in factors:
        order *= f
    return (order, tuple(sorted(factors, reverse=True)))


def _lines(name: str) -> list[str]:
    text = (resources.files("k3ade") / "data" / name).read_text()
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(line)
    if not out:
        raise ValueError(f"fixture {name} is empty")
    return out[1:]  # drop the column-header line


def load_classification() -> list[tuple[int, int, ADEType,
                                        tuple[FactorTuple, ...]]]:
    """The full classification table: (index, rank, type, groups) per
    row, in published order; groups keep the file's descending order."""
    rows = []
    for line in _lines("table1.tsv"):
        no, rank, type_str, cell = line.split("\t")
        rows.append((int(no), int(rank), parse_type(type_str),
                     parse_group_list(cell)))
    return rows


def load_reference_pairs() -> list[tuple[ADEType, FactorTuple]]:
    """The classification flattened to (type, group) pairs."""
    pairs = []
    for _, _, sigma, groups in load_classification():
        for g in groups:
            pairs.append((sigma, g))
    return pairs


def load_nontrivial_pairs() -> list[tuple[FactorTuple, ADEType]]:
    """The (group, type) rows of the nontrivial-torsion table, i.e.
    every pair whose group is neither [1] nor [2]."""
    rows = []
    for line in _lines("table2.tsv"):
        cell, type_str = line.split("\t")
        rows.append((parse_group(cell), parse_type(type_str)))
    return rows


_RULESET_FILES = {
    "trivial": ("rank18_1.tsv", "rank18_1.tsv"),
    "[2]": ("rank18_2.tsv", "seeds_2.tsv"),
    "[3]": ("rank18_3.tsv", "seeds_3.tsv"),
    "[4]": ("rank18_4.tsv", "seeds_4.tsv"),
    "[2,2]": ("rank18_22.tsv", "seeds_22.tsv"),
}

#: Torsion group realized by each restricted ruleset.
RULESET_GROUPS: dict[str, FactorTuple] = {
    "trivial": (), "[2]": (2,), "[3]": (3,), "[4]": (4,),
    "[2,2]": (2, 2),
}


def load_rank18(ruleset: str) -> list[ADEType]:
    """The published rank-18 types admitting the ruleset's group."""
    name, _ = _RULESET_FILES[ruleset]
    return [parse_type(line) for line in _lines(name)]


def load_seeds(ruleset: str) -> list[ADEType]:
    """The published seed types whose closure under the ruleset's
    substitutions yields every type admitting the ruleset's group."""
    _, name = _RULESET_FILES[ruleset]
    return [parse_type(line) for line in _lines(name)]
