"""Road surface condition/type classification toolkit (python bindings)."""

try:
    from ._core import *  # noqa: F401,F403
    from . import _core  # noqa: F401
except ImportError:  # pragma: no cover - source-tree layout with a built module
    from _core import *  # noqa: F401,F403
    import _core  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
