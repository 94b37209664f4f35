"""Bundled constants from the public tests, checked against pinned digests."""

from __future__ import annotations

import hashlib
import json
from importlib import resources

from ..errors import FixtureError

PINNED_DIGESTS = {
    "appendix_b": "88cdb19c16c08eff0b568a18af8c333cd279a1cf5dd2037da7f720d6c69da2e2",
    "appendix_c": "c34444dd6943569e6ac80d7e40e39f7eb0f2487697d69061c9439631a1edb782",
}


def data_digest(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def read_fixture_text(name: str) -> str:
    try:
        return resources.files(__package__).joinpath("data", f"{name}.json").read_text("utf-8")
    except FileNotFoundError:
        raise FixtureError(f"fixture {name!r} is missing") from None


def load_fixture(name: str, text: str | None = None) -> dict:
    """Parsed ``data`` block of a fixture, after the digest check.

    ``text`` overrides the bundled file (used to test corruption handling).
    """
    if name not in PINNED_DIGESTS:
        raise FixtureError(f"unknown fixture {name!r}")
    raw = text if text is not None else read_fixture_text(name)
    try:
        doc = json.loads(raw)
        payload = doc["data"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FixtureError(f"fixture {name!r} is corrupt: {exc}") from None
    digest = data_digest(payload)
    if digest != PINNED_DIGESTS[name]:
        raise FixtureError(f"fixture {name!r} digest mismatch: {digest[:16]}...")
    return payload
