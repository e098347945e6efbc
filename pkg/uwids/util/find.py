# 2026/09/03
"""
find.py - Filtering of records and nodes
"""

from typing import Any, Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")

_MISSING = object()


def _matches(
    predicates: tuple[Callable[[T], bool], ...], attrs: dict[str, Any]
) -> Callable[[T], bool]:
    def check(item: T) -> bool:
        for name, wanted in attrs.items():
            value = getattr(item, name, _MISSING)
            if value is _MISSING:
                return False
            # Sets and ranges act as membership tests
            if isinstance(wanted, (set, frozenset, range)):
                if value not in wanted:
                    return False
            elif value != wanted:
                return False
        return all(pred(item) for pred in predicates)

    return check


def _iter_matches(
    seq: Iterable[T], predicates: tuple[Callable[[T], bool], ...], attrs: dict
) -> Iterator[T]:
    check = _matches(predicates, attrs)
    return (item for item in seq if check(item))


def find(seq: Iterable[T], *args: Callable[[T], bool], **kwargs: Any) -> list[T]:
    """Returns the items of `seq` matching every criterion.

    Positional criteria are predicates. Keyword criteria compare attributes;
    a set, frozenset or range value matches any of its members. Items lacking
    an attribute never match.

    E.g.: find(records, lambda r: r.time > 300, status="d", sender={3, 7})

    """
    return list(_iter_matches(seq, args, kwargs))


def find_first(seq: Iterable[T], *args: Callable[[T], bool], **kwargs: Any) -> T | None:
    """Like 'find', but returns only the first match, or None."""
    return next(_iter_matches(seq, args, kwargs), None)
