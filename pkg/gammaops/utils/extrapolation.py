"""Richardson extrapolation along a doubling ladder."""

from typing import List, Sequence, TypeVar

from gammaops.exceptions import LadderShapeError

Number = TypeVar('Number')


def check_doubling_ladder(n_values: Sequence[int]) -> None:
    """
    Raise LadderShapeError unless n_values is n0, 2 n0, 4 n0, ...

    Raises:
        LadderShapeError: If fewer than two rungs or a rung is not twice the previous one
    """
    if len(n_values) < 2:
        raise LadderShapeError('a ladder needs at least two rungs')
    for smaller, larger in zip(n_values, n_values[1:]):
        if larger != 2 * smaller:
            raise LadderShapeError(f'not a doubling ladder: {smaller} -> {larger} in {list(n_values)}')


def doubling_ladder(start: int, stop: int) -> List[int]:
    """start, 2 start, ... up to and including stop (stop must be on the ladder)."""
    if start < 1 or stop < start:
        raise LadderShapeError(f'invalid ladder bounds {start}:{stop}')
    rungs = [start]
    while rungs[-1] < stop:
        rungs.append(rungs[-1] * 2)
    if rungs[-1] != stop:
        raise LadderShapeError(f'{stop} is not reachable from {start} by doubling')
    return rungs


def two_point(coarse: Number, fine: Number, p: int = 1, ratio: int = 2) -> Number:
    """Eliminate a c/n^p term from two rungs: (ratio^p E_fine - E_coarse) / (ratio^p - 1)."""
    factor = ratio ** p
    return (factor * fine - coarse) / (factor - 1)


def richardson_extrapolate(values: Sequence[Number], p: int = 1, ratio: int = 2) -> Number:
    """
    Full Richardson tableau on values at n, ratio n, ratio^2 n, ...

    Assumes E_n = V + c_p / n^p + c_{p+1} / n^{p+1} + ...; column j removes
    the n^-(p+j-1) term. Works for floats and Fractions alike (the
    arithmetic stays in the input type).

    Args:
        values: Estimates in ladder order (coarsest first)
        p: Order of the leading error term
        ratio: Ladder ratio between consecutive rungs

    Returns:
        The extrapolated limit
    """
    if len(values) < 2:
        raise LadderShapeError('richardson_extrapolate requires at least two values')

    column = list(values)
    for j in range(len(values) - 1):
        order = p + j
        column = [two_point(column[i], column[i + 1], order, ratio) for i in range(len(column) - 1)]
    return column[-1]
