#!/usr/bin/env python3
"""Mini test runner emitting one '<id> <status> [message]' line per test."""

import stats
import textkit

CHECKS = []


def check(test_id):
    def register(func):
        CHECKS.append((test_id, func))
        return func
    return register


@check("stats::t_total")
def _total():
    assert stats.total([1, 2, 3]) == 6


@check("stats::t_mean")
def _mean():
    got = stats.mean([1, 2, 3, 4])
    assert got == 2.5, f"expected 2.5 got {got}"


@check("stats::t_mean_pair")
def _mean_pair():
    got = stats.mean([2, 4])
    assert got == 3, f"expected 3 got {got}"


@check("stats::t_spread")
def _spread():
    assert stats.spread([1, 5]) == 4


@check("text::t_shout")
def _shout():
    assert textkit.shout("hi") == "HI!"


def main():
    for test_id, func in CHECKS:
        try:
            func()
        except AssertionError as exc:
            print(f"{test_id} fail {exc}")
        except Exception as exc:  # noqa: BLE001
            print(f"{test_id} error {type(exc).__name__}: {exc}")
        else:
            print(f"{test_id} pass")


if __name__ == "__main__":
    main()
