"""Small grids with known invariants, shipped as package data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .braid import BraidWord, parse_braid
from .grid import GridDiagram, mirror, parse_grid


@dataclass(frozen=True)
class Fixture:
    name: str
    grid: GridDiagram
    components: int
    tau_top: Fraction
    tau_bot: Fraction
    signature: int
    braid: BraidWord | None = None
    alternating: bool = True


def load_grid(name: str) -> GridDiagram:
    path = resources.files("gridtau") / "data" / "fixtures" / f"{name}.grid"
    return parse_grid(path.read_text())


# name -> (file, components, tau_top, tau_bot, signature, braid)
_TABLE = {
    "unknot": ("unknot2", 1, 0, 0, 0, "1:"),
    "trefoil": ("trefoil5", 1, 1, 1, -2, "2: 1 1 1"),
    "figure8": ("figure8_6", 1, 0, 0, 0, "3: 1 -2 1 -2"),
    "hopf": ("hopf4", 2, 1, 0, -1, "2: 1 1"),
    "torus2_4": ("torus2_4_6", 2, 2, 1, -3, "2: 1 1 1 1"),
    "torus2_5": ("torus2_5_7", 1, 2, 2, -4, "2: 1 1 1 1 1"),
}


def fixture(name: str) -> Fixture:
    if name == "mirror_trefoil":
        base = fixture("trefoil")
        return Fixture(name, mirror(base.grid), 1, Fraction(-1), Fraction(-1), 2, base.braid.mirror())
    try:
        file, ell, top, bot, sigma, braid = _TABLE[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(fixture_names())}") from None
    return Fixture(name, load_grid(file), ell, Fraction(top), Fraction(bot), sigma, parse_braid(braid))


def fixture_names() -> list[str]:
    return list(_TABLE) + ["mirror_trefoil"]


def all_fixtures() -> list[Fixture]:
    return [fixture(name) for name in fixture_names()]
