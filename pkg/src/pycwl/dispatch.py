from __future__ import annotations

import functools
from typing import (
    TYPE_CHECKING, Any, Callable, Dict, Generic, Optional, Type, TypeVar
)

T = TypeVar('T')
R = TypeVar('R')
DispatchFunction = Callable[..., R]


def _dispatch(func: DispatchFunction[R]) -> DispatchFunction[R]:
    """Decorator to make a single-dispatch function that depends on the type
    of its first argument.

    Implementations are looked up along the MRO of the argument's class, so a
    registration for a base class covers its subclasses. The decorated body
    is the fallback for unregistered types.
    """

    registry: Dict[type, DispatchFunction[R]] = {}

    def register(value_type: type):
        def wrapper(wrapped: DispatchFunction[R]):
            registry[value_type] = wrapped
            return wrapped

        return wrapper

    def dispatch(value: Any) -> DispatchFunction[R]:
        for cls in type(value).__mro__:
            impl: Optional[DispatchFunction[R]] = registry.get(cls)
            if impl is not None:
                return impl
        return func

    def wrapped(value: Any, *args: Any, **kwargs: Any) -> R:
        return dispatch(value)(value, *args, **kwargs)

    wrapped.register = register  # type: ignore
    functools.update_wrapper(wrapped, func)
    return wrapped


if TYPE_CHECKING:

    class Dispatcher(Generic[R]):
        """Dispatcher function, for type check only."""
        def register(
            self, value_type: Type[Any]
        ) -> Callable[[DispatchFunction[R]], DispatchFunction[R]]:
            ...

        def __call__(self, value: Any, *args: Any, **kwargs: Any) -> R:
            ...

    def dispatch(func: DispatchFunction[R]) -> Dispatcher[R]:
        ...
else:
    dispatch = _dispatch

__all__ = ['dispatch']
