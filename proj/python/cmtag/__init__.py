"""Token-level language identification for code-switched English / Roman Urdu.

Thin wrapper over the compiled _core module: corpus I/O, normalization,
annotation, skipgram embeddings, HMM / CRF / neural taggers and evaluation.
"""

from cmtag._core import *  # noqa: F401,F403
from cmtag._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
