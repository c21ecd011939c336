"""Python bindings for the gerbe library."""

from ._gerbe import *  # noqa: F401,F403
from ._gerbe import __version__
