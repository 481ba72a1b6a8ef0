import numpy as np


def almost_equal(x, y, thresh=1e-12):
    return np.abs(x - y) < thresh


def states_close(a, b, thresh=1e-7):
    """Largest amplitude difference of two PureStates is below thresh"""
    return np.max(np.abs(a.amplitudes - b.amplitudes)) < thresh
