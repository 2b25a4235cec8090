"""Run configuration: one flat key=value namespace over all module defaults.

Precedence is command-line overrides > config file > built-in defaults.  The
canonicalized field list feeds a SHA-256 digest that is embedded in every
encrypted output, so any parameter drift between encryption and decryption
setups is detectable.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

from .array import ArrayConfig
from .errors import ConfigError
from .pixel import PixelParams
from .variation import VariationSpec


@dataclass(frozen=True)
class RunConfig:
    pixel: PixelParams = field(default_factory=PixelParams)
    levels: int = 16
    pva_min: float = 1.3
    pva_max: float = 2.8
    half_select_kappa: float = 0.4
    variation: VariationSpec = field(default_factory=VariationSpec)

    @classmethod
    def defaults(cls) -> "RunConfig":
        return cls()

    def array_config(self, rows: int, cols: int) -> ArrayConfig:
        return ArrayConfig(
            rows=rows,
            cols=cols,
            levels=self.levels,
            pva_min=self.pva_min,
            pva_max=self.pva_max,
            half_select_kappa=self.half_select_kappa,
        )

    def to_items(self) -> list[tuple[str, object]]:
        """Canonical (key, value) listing; the basis of the config hash."""
        fe = self.pixel.fe
        return [
            ("array.half_select_kappa", self.half_select_kappa),
            ("array.levels", self.levels),
            ("array.pva_max", self.pva_max),
            ("array.pva_min", self.pva_min),
            ("fe.g_max", fe.g_max),
            ("fe.g_min", fe.g_min),
            ("fe.mu_c", fe.mu_c),
            ("fe.sigma_c", fe.sigma_c),
            ("fe.v_reset", fe.v_reset),
            ("pixel.beta_p", self.pixel.beta_p),
            ("pixel.c_pd", self.pixel.c_pd),
            ("pixel.i_dark", self.pixel.i_dark),
            ("pixel.v_dd", self.pixel.v_dd),
            ("pixel.v_tp", self.pixel.v_tp),
            ("variation.clamp_at", self.variation.clamp_at),
            ("variation.enabled", self.variation.enabled),
            ("variation.thickness_nominal", self.variation.thickness_nominal),
            ("variation.thickness_rel_sigma", self.variation.thickness_rel_sigma),
            ("variation.vth_sigma", self.variation.vth_sigma),
        ]

    def config_hash(self) -> str:
        canon = "\n".join(f"{k}={v!r}" for k, v in self.to_items())
        return hashlib.sha256(canon.encode("ascii")).hexdigest()


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_number(raw: str, key: str, kind):
    try:
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {raw!r}") from exc


def apply_override(cfg: RunConfig, key: str, raw: str) -> RunConfig:
    """Return a new RunConfig with one flat key set from its text value."""
    fe = cfg.pixel.fe
    if key == "array.levels":
        return replace(cfg, levels=_parse_number(raw, key, int))
    if key == "array.pva_min":
        return replace(cfg, pva_min=_parse_number(raw, key, float))
    if key == "array.pva_max":
        return replace(cfg, pva_max=_parse_number(raw, key, float))
    if key == "array.half_select_kappa":
        return replace(cfg, half_select_kappa=_parse_number(raw, key, float))
    if key.startswith("fe."):
        name = key[3:]
        if name not in ("mu_c", "sigma_c", "g_min", "g_max", "v_reset"):
            raise ConfigError(f"unknown config key {key!r}")
        new_fe = replace(fe, **{name: _parse_number(raw, key, float)})
        return replace(cfg, pixel=replace(cfg.pixel, fe=new_fe))
    if key.startswith("pixel."):
        name = key[6:]
        if name not in ("v_dd", "c_pd", "i_dark", "v_tp", "beta_p"):
            raise ConfigError(f"unknown config key {key!r}")
        return replace(cfg, pixel=replace(cfg.pixel, **{name: _parse_number(raw, key, float)}))
    if key.startswith("variation."):
        name = key[10:]
        if name == "enabled":
            return replace(cfg, variation=replace(cfg.variation, enabled=_parse_bool(raw, key)))
        if name not in ("thickness_nominal", "thickness_rel_sigma", "vth_sigma", "clamp_at"):
            raise ConfigError(f"unknown config key {key!r}")
        return replace(
            cfg, variation=replace(cfg.variation, **{name: _parse_number(raw, key, float)})
        )
    raise ConfigError(f"unknown config key {key!r}")


def parse_config_text(text: str, base: RunConfig | None = None, source: str = "<config>") -> RunConfig:
    """Apply `key = value` lines (with # comments) on top of a base config."""
    cfg = base if base is not None else RunConfig.defaults()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        cfg = apply_override(cfg, key, raw)
    return cfg


def load_config(path, base: RunConfig | None = None) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, base=base, source=str(path))
