"""Curved scene-text synthesis, rectification and evaluation."""

import json

from ._core import *  # noqa: F401,F403
from ._core import __version__, render_block_word as _render_block_word, synth_samples as _synth_samples


def render_block_word(text, **kwargs):
    """Render text with block glyphs. Returns (image, record dict)."""
    image, record = _render_block_word(text, **kwargs)
    return image, json.loads(record)


def synth_samples(corpus, **kwargs):
    """Render synthetic samples. Returns a list of (image, record dict)."""
    return [(image, json.loads(record)) for image, record in _synth_samples(str(corpus), **kwargs)]
