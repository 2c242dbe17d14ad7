"""The fixed set of fonts the recommender ranks over.

A catalog is an ordered list of fonts with contiguous integer ids starting
at 0. The default catalog holds the ten display fonts the annotated corpus
was labeled with; alternative catalogs can be loaded from a JSON file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

__all__ = ["Font", "FontCatalog", "default_catalog"]


@dataclass(frozen=True)
class Font:
    font_id: int
    name: str
    css_family_hint: str


@dataclass(frozen=True)
class FontCatalog:
    fonts: tuple[Font, ...]

    def __post_init__(self) -> None:
        if not self.fonts:
            raise ValueError("catalog must contain at least one font")
        ids = [f.font_id for f in self.fonts]
        if ids != list(range(len(self.fonts))):
            raise ValueError(f"font ids must be contiguous from 0, got {ids}")
        names = [f.name for f in self.fonts]
        if len(set(names)) != len(names):
            raise ValueError("font names must be unique")

    def __len__(self) -> int:
        return len(self.fonts)

    def __iter__(self):
        return iter(self.fonts)

    @property
    def names(self) -> list[str]:
        return [f.name for f in self.fonts]

    def font(self, font_id: int) -> Font:
        if not 0 <= font_id < len(self.fonts):
            raise KeyError(f"font_id {font_id} not in catalog of size {len(self.fonts)}")
        return self.fonts[font_id]

    def to_json(self, path: str | Path) -> None:
        rows = [
            {"id": f.font_id, "name": f.name, "css": f.css_family_hint}
            for f in self.fonts
        ]
        Path(path).write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def from_json(cls, path: str | Path) -> "FontCatalog":
        rows = json.loads(Path(path).read_text(encoding="utf-8"))
        fonts = tuple(
            Font(font_id=int(r["id"]), name=str(r["name"]), css_family_hint=str(r["css"]))
            for r in sorted(rows, key=lambda r: int(r["id"]))
        )
        return cls(fonts)


_DEFAULT_FONTS = (
    ("Source Sans Pro", "source-sans-pro"),
    ("Blakely", "blakely"),
    ("FF Ernestine Pro", "ff-ernestine-pro"),
    ("FF Market Web", "ff-market-web"),
    ("Bickham Script Pro 3", "bickham-script-pro-3"),
    ("Burbank Big", "burbank-big"),
    ("Fresno", "fresno"),
    ("Sneakers Script Narrow", "sneakers-script-narrow"),
    ("Felt Tip Roman", "felt-tip-roman"),
    ("Pauline", "pauline"),
)


def default_catalog() -> FontCatalog:
    """The ten-font catalog the released annotations refer to."""
    return FontCatalog(
        tuple(Font(i, name, css) for i, (name, css) in enumerate(_DEFAULT_FONTS))
    )
