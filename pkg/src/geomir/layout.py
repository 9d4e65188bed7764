"""Deterministic force-directed layout of the geo hierarchy.

Springs connect root -> country -> city -> image along the tree;
particles of the same level repulse each other with an inverse-square
law. Integration is semi-implicit Euler with damping, a fixed timestep
and a speed clamp, so a (tree, config, command sequence) triple fully
determines every frame. Dragging is modeled by pinning.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import CannotReleaseRoot, UnknownParticle
from .geostore import GeoTree

LEVEL_ROOT = "root"
LEVEL_COUNTRY = "country"
LEVEL_CITY = "city"
LEVEL_IMAGE = "image"

ROOT_ID = "root"


@dataclass(frozen=True)
class LayoutConfig:
    rest_length_country: float = 200.0  # root - country spring
    rest_length_city: float = 100.0  # country - city spring
    rest_length_image: float = 50.0  # city/country - image spring
    stiffness: float = 0.05
    repulsion: float = 5000.0
    repulsion_min_distance: float = 1.0
    damping: float = 0.9
    dt: float = 1.0
    max_speed: float = 50.0
    jitter_radius: float = 10.0
    jitter_seed: int = 0

    def __post_init__(self):
        if not 0 < self.damping <= 1:
            raise ValueError("damping must be in (0, 1]")


@dataclass
class LayoutGraph:
    ids: list  # particle id per index; index 0 is the root
    levels: list  # level string per index
    payloads: list  # country/city name or image id
    positions: np.ndarray  # (n, 2)
    velocities: np.ndarray  # (n, 2)
    pinned: dict  # index -> (x, y); root always present
    springs: np.ndarray  # (m, 2) int, (parent index, child index)
    rest_lengths: np.ndarray  # (m,)
    step_count: int = 0
    _index: dict = field(default_factory=dict)

    def index_of(self, particle_id: str) -> int:
        try:
            return self._index[particle_id]
        except KeyError:
            raise UnknownParticle(particle_id) from None

    def snapshot(self) -> dict:
        return {
            "step": self.step_count,
            "particles": [
                {
                    "id": self.ids[i],
                    "level": self.levels[i],
                    "x": float(self.positions[i, 0]),
                    "y": float(self.positions[i, 1]),
                    "payload": self.payloads[i],
                }
                for i in range(len(self.ids))
            ],
        }


def build_graph(tree: GeoTree, cfg: LayoutConfig = LayoutConfig()) -> LayoutGraph:
    """One particle per tree node plus a root pinned at the origin; springs
    mirror the tree edges; children start jittered around their parent."""
    rng = np.random.default_rng(cfg.jitter_seed)
    ids = [ROOT_ID]
    levels = [LEVEL_ROOT]
    payloads = [""]
    positions = [np.zeros(2)]
    springs = []
    rests = []

    def jitter(parent_pos):
        angle = rng.uniform(0.0, 2.0 * np.pi)
        radius = rng.uniform(0.0, cfg.jitter_radius)
        return parent_pos + radius * np.array([np.cos(angle), np.sin(angle)])

    def add(particle_id, level, payload, parent_idx, rest):
        ids.append(particle_id)
        levels.append(level)
        payloads.append(payload)
        positions.append(jitter(positions[parent_idx]))
        springs.append((parent_idx, len(ids) - 1))
        rests.append(rest)
        return len(ids) - 1

    for country in tree.countries:
        ci = add(f"country:{country.name}", LEVEL_COUNTRY, country.name, 0, cfg.rest_length_country)
        for image_id in country.images:
            add(f"img:{image_id}", LEVEL_IMAGE, image_id, ci, cfg.rest_length_image)
        for city in country.cities:
            yi = add(
                f"city:{country.name}/{city.name}", LEVEL_CITY, city.name, ci, cfg.rest_length_city
            )
            for image_id in city.images:
                add(f"img:{image_id}", LEVEL_IMAGE, image_id, yi, cfg.rest_length_image)

    n = len(ids)
    graph = LayoutGraph(
        ids=ids,
        levels=levels,
        payloads=payloads,
        positions=np.array(positions, dtype=np.float64).reshape(n, 2),
        velocities=np.zeros((n, 2)),
        pinned={0: (0.0, 0.0)},
        springs=np.array(springs, dtype=np.int64).reshape(len(springs), 2),
        rest_lengths=np.array(rests, dtype=np.float64),
        _index={pid: i for i, pid in enumerate(ids)},
    )
    return graph


def _forces(graph: LayoutGraph, cfg: LayoutConfig) -> np.ndarray:
    pos = graph.positions
    forces = np.zeros_like(pos)

    if len(graph.springs):
        parents = graph.springs[:, 0]
        children = graph.springs[:, 1]
        delta = pos[children] - pos[parents]
        dist = np.linalg.norm(delta, axis=1)
        ok = dist > 1e-12
        mag = np.where(ok, cfg.stiffness * (dist - graph.rest_lengths), 0.0)
        unit = np.where(ok[:, None], delta / np.where(ok, dist, 1.0)[:, None], 0.0)
        pull = mag[:, None] * unit
        np.add.at(forces, children, -pull)
        np.add.at(forces, parents, pull)

    for level in (LEVEL_COUNTRY, LEVEL_CITY, LEVEL_IMAGE):
        members = [i for i, lv in enumerate(graph.levels) if lv == level]
        if len(members) < 2:
            continue
        p = pos[members]
        delta = p[:, None, :] - p[None, :, :]
        dist = np.linalg.norm(delta, axis=2)
        np.fill_diagonal(dist, np.inf)
        eff = np.maximum(dist, cfg.repulsion_min_distance)
        mag = cfg.repulsion / (eff * eff)
        unit = np.zeros_like(delta)
        ok = np.isfinite(dist) & (dist > 1e-12)
        unit[ok] = delta[ok] / dist[ok][:, None]
        # coincident particles: deterministic push along +x for the lower index
        coincident = np.isfinite(dist) & ~ok
        ii, jj = np.nonzero(coincident)
        unit[ii, jj, 0] = np.where(ii < jj, 1.0, -1.0)
        mag[~np.isfinite(dist)] = 0.0
        forces[members] += (mag[:, :, None] * unit).sum(axis=1)

    return forces


def step(graph: LayoutGraph, cfg: LayoutConfig = LayoutConfig()) -> LayoutGraph:
    """Advance one tick in place; pinned particles hold their coordinates."""
    forces = _forces(graph, cfg)
    vel = cfg.damping * (graph.velocities + forces * cfg.dt)
    speed = np.linalg.norm(vel, axis=1)
    over = speed > cfg.max_speed
    vel[over] *= (cfg.max_speed / speed[over])[:, None]
    graph.velocities = vel
    graph.positions = graph.positions + vel * cfg.dt
    for idx, (px, py) in graph.pinned.items():
        graph.positions[idx] = (px, py)
        graph.velocities[idx] = 0.0
    graph.step_count += 1
    return graph


def pin(graph: LayoutGraph, particle_id: str, x: float, y: float) -> LayoutGraph:
    idx = graph.index_of(particle_id)
    graph.pinned[idx] = (float(x), float(y))
    graph.positions[idx] = (x, y)
    graph.velocities[idx] = 0.0
    return graph


def release(graph: LayoutGraph, particle_id: str) -> LayoutGraph:
    idx = graph.index_of(particle_id)
    if idx == 0:
        raise CannotReleaseRoot("the root particle stays at the canvas center")
    graph.pinned.pop(idx, None)
    graph.velocities[idx] = 0.0
    return graph


def kinetic_energy(graph: LayoutGraph) -> float:
    """0.5 * sum |v|^2 over unpinned particles (unit mass)."""
    mask = np.ones(len(graph.ids), dtype=bool)
    for idx in graph.pinned:
        mask[idx] = False
    return float(0.5 * (graph.velocities[mask] ** 2).sum())
