"""Scene configuration: line-oriented key = value with [generator]/[factor] blocks.

Complex scalars are written re,im.  Lists are space-separated.  The
canonical serialization (sorted keys, repr floats) feeds the SHA-256
config hash embedded in every output file.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional

from .maps import ComplexPoint, HenonFactor, HenonMap
from .semigroup import GeneratorSet, make_generator_set
from .slices import SliceSpec, affine_plane, horizontal_line, vertical_line

__all__ = ["SceneConfig", "ConfigError", "parse_config", "load_config", "config_hash"]

_KNOWN_KEYS = {
    "scene",
    "slice",
    "anchor",
    "origin",
    "basis",
    "window",
    "nx",
    "ny",
    "sign",
    "max_depth",
    "tail_depth",
    "classify_depth",
    "node_budget",
    "seed",
    "threads",
    "out",
    "point",
    "level",
    "sequence",
    "sequence_length",
    "max_steps",
    "vmin",
    "vmax",
}

MAX_DEPTH_LIMIT = 40
NODE_BUDGET_LIMIT = 2**26


class ConfigError(ValueError):
    """Parse or validation failure, carrying line/field diagnostics."""

    def __init__(self, message: str, line: Optional[int] = None, field_name: Optional[str] = None):
        self.line = line
        self.field_name = field_name
        where = f" (line {line})" if line is not None else ""
        which = f" [{field_name}]" if field_name else ""
        super().__init__(f"config error{where}{which}: {message}")


def _parse_complex(tok: str, line: int, fieldname: str) -> complex:
    parts = tok.split(",")
    if len(parts) != 2:
        raise ConfigError(f"expected re,im pair, got {tok!r}", line, fieldname)
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ConfigError(f"bad number in {tok!r}", line, fieldname)


@dataclass
class SceneConfig:
    generators: list[list[tuple[tuple[complex, ...], complex]]] = field(default_factory=list)
    scene: Optional[str] = None
    slice_kind: str = "vertical"
    anchor: complex = 0j
    origin: tuple[complex, complex] = (0j, 0j)
    basis: tuple[complex, complex] = (0j, 1 + 0j)
    window: tuple[float, float, float, float] = (-5.0, -5.0, 5.0, 5.0)
    nx: int = 256
    ny: int = 256
    sign: int = 1
    max_depth: int = 12
    tail_depth: int = 24
    classify_depth: int = 8
    node_budget: int = 2**20
    seed: int = 12345
    threads: int = 0
    out: Optional[str] = None
    point: Optional[ComplexPoint] = None
    level: int = 6
    sequence: Optional[tuple[int, ...]] = None
    sequence_length: int = 64
    max_steps: int = 200
    vmin: Optional[float] = None
    vmax: Optional[float] = None

    def build_generator_set(self) -> GeneratorSet:
        if not self.generators and self.scene:
            from .scenes import scene_by_name

            return scene_by_name(self.scene).gs
        if not self.generators:
            raise ConfigError("no generators and no scene name given")
        maps = []
        for factors in self.generators:
            maps.append(HenonMap(tuple(HenonFactor(c, a) for c, a in factors)))
        return make_generator_set(maps)

    def build_slice(self) -> SliceSpec:
        if self.slice_kind == "vertical":
            return vertical_line(self.anchor, self.window, self.nx, self.ny)
        if self.slice_kind == "horizontal":
            return horizontal_line(self.anchor, self.window, self.nx, self.ny)
        if self.slice_kind == "plane":
            return affine_plane(self.origin, self.basis, self.window, self.nx, self.ny)
        raise ConfigError(f"unknown slice kind {self.slice_kind!r}", field_name="slice")

    def canonical_text(self) -> str:
        lines = []
        for gi, factors in enumerate(self.generators):
            lines.append(f"generator{gi}=" + ";".join(
                " ".join(f"{c.real!r},{c.imag!r}" for c in coeffs) + f"|{a.real!r},{a.imag!r}"
                for coeffs, a in factors
            ))
        simple = {
            "scene": self.scene or "",
            "slice": self.slice_kind,
            "anchor": f"{self.anchor.real!r},{self.anchor.imag!r}",
            "origin": " ".join(f"{c.real!r},{c.imag!r}" for c in self.origin),
            "basis": " ".join(f"{c.real!r},{c.imag!r}" for c in self.basis),
            "window": " ".join(repr(v) for v in self.window),
            "nx": self.nx,
            "ny": self.ny,
            "sign": self.sign,
            "max_depth": self.max_depth,
            "tail_depth": self.tail_depth,
            "classify_depth": self.classify_depth,
            "node_budget": self.node_budget,
            "seed": self.seed,
            "level": self.level,
            "sequence": " ".join(map(str, self.sequence or ())),
            "sequence_length": self.sequence_length,
            "max_steps": self.max_steps,
            "point": (
                f"{self.point[0].real!r},{self.point[0].imag!r} "
                f"{self.point[1].real!r},{self.point[1].imag!r}"
                if self.point
                else ""
            ),
            "vmin": "" if self.vmin is None else repr(self.vmin),
            "vmax": "" if self.vmax is None else repr(self.vmax),
        }
        for key in sorted(simple):
            lines.append(f"{key}={simple[key]}")
        return "\n".join(lines) + "\n"


def config_hash(cfg: SceneConfig) -> str:
    return hashlib.sha256(cfg.canonical_text().encode()).hexdigest()


def parse_config(text: str) -> SceneConfig:
    cfg = SceneConfig()
    cur_gen: Optional[list] = None
    cur_factor: Optional[dict] = None

    def flush_factor(line_no: int) -> None:
        nonlocal cur_factor
        if cur_factor is None:
            return
        if "coeffs" not in cur_factor:
            raise ConfigError("factor missing coeffs", line_no, "coeffs")
        if "a" not in cur_factor:
            raise ConfigError("factor missing a", line_no, "a")
        try:
            HenonFactor(cur_factor["coeffs"], cur_factor["a"])
        except ValueError as e:
            raise ConfigError(str(e), line_no, "factor")
        cur_gen.append((cur_factor["coeffs"], cur_factor["a"]))
        cur_factor = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[generator]":
            flush_factor(line_no)
            cur_gen = []
            cfg.generators.append(cur_gen)
            continue
        if line == "[factor]":
            if cur_gen is None:
                # a bare [factor] opens a fresh single-factor generator
                cur_gen = []
                cfg.generators.append(cur_gen)
            flush_factor(line_no)
            cur_factor = {}
            continue
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {line!r}", line_no)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if cur_factor is not None and key in ("coeffs", "a"):
            if key == "coeffs":
                cur_factor["coeffs"] = tuple(
                    _parse_complex(tok, line_no, "coeffs") for tok in value.split()
                )
            else:
                cur_factor["a"] = _parse_complex(value, line_no, "a")
            continue
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", line_no, key)
        try:
            _assign(cfg, key, value, line_no)
        except ConfigError:
            raise
        except Exception as e:
            raise ConfigError(str(e), line_no, key)
    flush_factor(len(text.splitlines()))
    _validate(cfg)
    return cfg


def _assign(cfg: SceneConfig, key: str, value: str, line_no: int) -> None:
    if key == "scene":
        cfg.scene = value
    elif key == "slice":
        cfg.slice_kind = value
    elif key == "anchor":
        cfg.anchor = _parse_complex(value, line_no, key)
    elif key == "origin":
        toks = value.split()
        if len(toks) != 2:
            raise ConfigError("origin needs two complex scalars", line_no, key)
        cfg.origin = tuple(_parse_complex(t, line_no, key) for t in toks)
    elif key == "basis":
        toks = value.split()
        if len(toks) != 2:
            raise ConfigError("basis needs two complex scalars", line_no, key)
        cfg.basis = tuple(_parse_complex(t, line_no, key) for t in toks)
    elif key == "window":
        toks = value.split()
        if len(toks) != 4:
            raise ConfigError("window needs re_min im_min re_max im_max", line_no, key)
        cfg.window = tuple(float(t) for t in toks)
    elif key in ("nx", "ny", "max_depth", "tail_depth", "classify_depth",
                 "node_budget", "seed", "threads", "level", "sequence_length",
                 "max_steps"):
        setattr(cfg, key, int(value))
    elif key == "sign":
        if value in ("plus", "+", "1"):
            cfg.sign = 1
        elif value in ("minus", "-", "-1"):
            cfg.sign = -1
        else:
            raise ConfigError(f"sign must be plus or minus, got {value!r}", line_no, key)
    elif key == "out":
        cfg.out = value
    elif key == "point":
        toks = value.split()
        if len(toks) != 2:
            raise ConfigError("point needs two complex scalars (x y)", line_no, key)
        x = _parse_complex(toks[0], line_no, key)
        y = _parse_complex(toks[1], line_no, key)
        cfg.point = ComplexPoint(x, y)
    elif key == "sequence":
        cfg.sequence = tuple(int(t) for t in value.split())
    elif key in ("vmin", "vmax"):
        setattr(cfg, key, float(value))


def _validate(cfg: SceneConfig) -> None:
    if cfg.nx < 8 or cfg.ny < 8:
        raise ConfigError("grid sizes must be at least 8", field_name="nx/ny")
    if not (1 <= cfg.max_depth <= MAX_DEPTH_LIMIT):
        raise ConfigError(f"max_depth out of range 1..{MAX_DEPTH_LIMIT}", field_name="max_depth")
    if not (1 <= cfg.tail_depth <= 64):
        raise ConfigError("tail_depth out of range 1..64", field_name="tail_depth")
    if not (1 <= cfg.classify_depth <= MAX_DEPTH_LIMIT):
        raise ConfigError("classify_depth out of range", field_name="classify_depth")
    if not (1 <= cfg.node_budget <= NODE_BUDGET_LIMIT):
        raise ConfigError(f"node_budget out of range 1..{NODE_BUDGET_LIMIT}", field_name="node_budget")
    for gi, factors in enumerate(cfg.generators):
        if not factors:
            raise ConfigError(f"generator {gi + 1} has no factors", field_name="generator")


def load_config(path: str) -> SceneConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
