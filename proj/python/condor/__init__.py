"""Code-correctness discriminator: mining, augmentation, training, reranking."""

from ._condor import *  # noqa: F401,F403
from ._condor import __version__  # noqa: F401
