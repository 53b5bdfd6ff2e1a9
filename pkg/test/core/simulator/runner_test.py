"""Tests for the scan runners."""

import functools
import pickle

import pytest

from dapsim.core.errors import DapsValueError
from dapsim.core.simulator.runner import (
    DelayedException,
    MultiProcessRunner,
    MultiThreadRunner,
    SequentialRunner,
    get_runner,
)


def _square(x):
    return x * x


def _fail_on(bad, x):
    if x in bad:
        raise DapsValueError(f"unit {x} failed", setting=x)
    return x


def _units(fn, n=8):
    return [(idx, functools.partial(fn, idx)) for idx in range(n)]


@pytest.mark.parametrize(
    "processes,allow,cls",
    [
        (1, True, SequentialRunner),
        (2, True, MultiProcessRunner),
        (2, False, MultiThreadRunner),
    ],
)
def test__runner__get_runner(processes, allow, cls):
    """Runner choice follows the process count and the parallelism flag."""
    assert type(get_runner(processes, allow)) is cls


@pytest.mark.parametrize("runner", [SequentialRunner(), MultiThreadRunner(3)])
def test__runner__ordered_results(runner):
    """Results come back in unit order."""
    assert runner.run(_units(_square)) == [i * i for i in range(8)]


def test__runner__reraises_first_failure():
    """The first failing unit (by index) raises in the parent."""
    runner = MultiThreadRunner(3)
    with pytest.raises(DapsValueError) as excinfo:
        runner.run(_units(functools.partial(_fail_on, {5, 2})))
    assert excinfo.value.setting == 2


def test__runner__delayed_exception_pickles():
    """The original error and its traceback survive pickling."""
    try:
        _fail_on({1}, 1)
    except DapsValueError as err:
        delayed = DelayedException(err, index=1)
    clone = pickle.loads(pickle.dumps(delayed))
    assert clone.index == 1
    assert clone.tb is not None
    with pytest.raises(DapsValueError, match="unit 1 failed"):
        clone.reraise()
