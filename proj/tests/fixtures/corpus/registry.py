"""Plugin registry exercising the trickier corners of the grammar."""

from typing import Any, Callable, Dict, Optional

_REGISTRY: Dict[str, Callable[..., Any]] = {}

BANNER = """
This module registers plugins. It is not a plugin itself, even though the
word def appears in this string: def not_a_function(): pass
"""


def register(
    name: str,
    *,
    replace: bool = False,
    tags: Optional[list] = None,
) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    """Decorator registering a callable under ``name``."""

    def decorator(func):
        if name in _REGISTRY and not replace:
            raise KeyError(f"duplicate plugin {name!r}")
        func.tags = tuple(tags or ())
        _REGISTRY[name] = func
        return func

    return decorator


@register(
    "echo",
    tags=["debug", "io"],
)
def echo_plugin(payload, /, prefix="", *extra, sep=" ", **options):
    """Echo the payload back, with optional decoration."""
    parts = [prefix, str(payload), *map(str, extra)]
    return sep.join(p for p in parts if p)  # trailing comment inside the body


@register("counter")
def counter_plugin(start=0):
    count = start

    def bump(step=1):
        nonlocal count
        count += step
        return count

    class _Peek:
        def current(self):
            return count

    bump.peek = _Peek()
    return bump


def lookup(name: str) -> Callable[..., Any]:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise LookupError(name) from None


def names():
    return sorted(_REGISTRY)


class PluginSet:
    """A frozen view over a subset of the registry."""

    def __init__(self, selected):
        self._plugins = {name: lookup(name) for name in selected}

    def run_all(
        self,
        payload,
        *,
        stop_on_error=False,
    ):
        results = {}
        for name, plugin in sorted(self._plugins.items()):
            try:
                results[name] = plugin(payload)
            except Exception as exc:
                if stop_on_error:
                    raise
                results[name] = exc
        return results

    def __contains__(self, name):
        return name in self._plugins
