"""Geographic metadata: CSV ingestion and the country -> city -> image tree.

The metadata file is UTF-8 CSV with a mandatory `image_id,country,city`
header; city may be empty, in which case the image hangs directly off
its country node.
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DuplicateId, ParseError, UnknownImage

HEADER = ["image_id", "country", "city"]


@dataclass(frozen=True)
class GeoRecord:
    image_id: str
    country: str
    city: str = ""  # empty means no city


@dataclass(frozen=True)
class GeoIndex:
    records: dict  # image_id -> GeoRecord

    def __contains__(self, image_id):
        return image_id in self.records

    def __getitem__(self, image_id) -> GeoRecord:
        return self.records[image_id]

    def __len__(self):
        return len(self.records)


@dataclass
class CityNode:
    name: str
    images: list = field(default_factory=list)


@dataclass
class CountryNode:
    name: str
    cities: list = field(default_factory=list)  # CityNode, lexicographic
    images: list = field(default_factory=list)  # city-less leaves


@dataclass
class GeoTree:
    countries: list = field(default_factory=list)  # CountryNode, lexicographic

    def leaves(self) -> list:
        out = []
        for country in self.countries:
            out.extend(country.images)
            for city in country.cities:
                out.extend(city.images)
        return out


def load_geo(path) -> GeoIndex:
    path = Path(path)
    records = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file, expected header {','.join(HEADER)}")
        if [h.strip().lower() for h in header] != HEADER:
            raise ParseError(f"{path}:1: expected header {','.join(HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2 or len(row) > 3:
                raise ParseError(f"{path}:{lineno}: expected 2-3 fields, got {len(row)}")
            image_id = row[0].strip()
            country = row[1].strip()
            city = row[2].strip() if len(row) == 3 else ""
            if not image_id:
                raise ParseError(f"{path}:{lineno}: empty image_id")
            if not country:
                raise ParseError(f"{path}:{lineno}: empty country")
            if image_id in records:
                raise DuplicateId(image_id)
            records[image_id] = GeoRecord(image_id=image_id, country=country, city=city)
    return GeoIndex(records=records)


def build_hierarchy(geo: GeoIndex, ids) -> GeoTree:
    """Group image ids by country then city; all children sorted lexicographically."""
    by_country = {}
    for image_id in ids:
        if image_id not in geo:
            raise UnknownImage(image_id)
        rec = geo[image_id]
        by_country.setdefault(rec.country, []).append(rec)

    tree = GeoTree()
    for country_name in sorted(by_country):
        node = CountryNode(name=country_name)
        by_city = {}
        for rec in by_country[country_name]:
            if rec.city:
                by_city.setdefault(rec.city, []).append(rec.image_id)
            else:
                node.images.append(rec.image_id)
        node.images.sort()
        for city_name in sorted(by_city):
            node.cities.append(CityNode(name=city_name, images=sorted(by_city[city_name])))
        tree.countries.append(node)
    return tree
