"""Deterministic data-parallel discrete social-field pedestrian simulation engine."""

try:
    from socfield._core import *  # noqa: F401,F403
    from socfield._core import __doc__  # noqa: F401
except ImportError:  # in-tree builds put the extension on sys.path directly
    from _core import *  # noqa: F401,F403
    from _core import __doc__  # noqa: F401
