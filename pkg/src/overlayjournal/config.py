"""Deployment configuration: file-based key/value document plus environment
variable overrides (``OJ_`` prefix + upper-cased field name)."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, fields
from pathlib import Path

import yaml

from .errors import InvalidField

_DOI_PREFIX_RE = re.compile(r"^10\.\d+$")
_ISSN_RE = re.compile(r"^\d{4}-\d{3}[\dX]$")

ENV_PREFIX = "OJ_"


@dataclass(frozen=True)
class JournalConfig:
    journal_title: str = "Journal of Open Source Software"
    issn: str = "2475-9066"
    doi_prefix: str = "10.21105"
    bot_handle: str = "whedon"
    magic_word: str = "bananas"
    reviews_repository: str = "openjournals/joss-reviews"
    license_url: str = "https://creativecommons.org/licenses/by/4.0/"
    resource_url_template: str = "https://joss.theoj.org/papers/{doi}"
    storage_path: str | None = None
    listen_address: str = "127.0.0.1:8000"
    ui_path: str | None = None  # directory with the built web UI, served at /

    def __post_init__(self):
        if not _DOI_PREFIX_RE.match(self.doi_prefix):
            raise InvalidField(f"doi_prefix must look like 10.NNNN: {self.doi_prefix!r}")
        if not _ISSN_RE.match(self.issn):
            raise InvalidField(f"issn must look like NNNN-NNNC: {self.issn!r}")

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rsplit(":", 1)[1])

    def resource_url(self, doi) -> str:
        return self.resource_url_template.format(doi=doi)


def load_config(path: str | Path | None = None, env: dict | None = None) -> JournalConfig:
    """Build the config from defaults, an optional YAML/JSON file, and the
    environment. Environment variables win over the file."""
    values: dict = {}
    if path is not None:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise InvalidField(f"config file must be a key/value document: {path}")
        known = {f.name for f in fields(JournalConfig)}
        unknown = set(raw) - known
        if unknown:
            raise InvalidField(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.update({k: v for k, v in raw.items() if v is not None})
    environ = os.environ if env is None else env
    for f in fields(JournalConfig):
        env_value = environ.get(ENV_PREFIX + f.name.upper())
        if env_value is not None:
            values[f.name] = env_value
    return JournalConfig(**values)
