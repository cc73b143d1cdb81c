# -*- coding: utf-8 -*-
"""
    maglab.utils.fourier
    ~~~~~~~~~~~~~~~~~~~~

    One-dimensional Fourier transforms of even functions by trapezoid
    quadrature, with the convention ``f^(w) = int f(x) exp(-2 pi i x w) dx``.
"""
import math

import numpy as np
from scipy.special import gamma, gammaincc


#: frequencies evaluated per block, bounds the size of the cosine table
BLOCK = 64


def cosine_transform(values, half_width, frequencies):
    """Transform of an even function sampled on ``[0, half_width]``.

    :param values: samples at ``len(values)`` equally spaced nodes including
                   both ends.
    :returns: ``2 int_0^L f(x) cos(2 pi x w) dx`` for every frequency w.
    """
    values = np.asarray(values, dtype=float)
    nodes = np.linspace(0.0, half_width, len(values))
    h = half_width / (len(values) - 1)
    weights = np.full(len(values), h)
    weights[0] = weights[-1] = h / 2.0
    weighted = 2.0 * weights * values
    frequencies = np.asarray(frequencies, dtype=float)
    out = np.empty(frequencies.shape)
    flat = frequencies.ravel()
    result = out.ravel()
    for start in range(0, len(flat), BLOCK):
        block = flat[start:start + BLOCK]
        result[start:start + BLOCK] = np.cos(
            2.0 * np.pi * np.outer(block, nodes)) @ weighted
    return out


def gamma_tail(beta, half_width):
    """``2 int_L^inf exp(-x^beta) dx``, the mass cut off by truncation."""
    s = 1.0 / beta
    return 2.0 * gamma(s) * gammaincc(s, half_width ** beta) / beta


def discretization_error(beta, half_width, nodes):
    """Rough size of the trapezoid error for ``exp(-|x|^beta)``.

    The kink at the origin limits the rule to order ``h^(1 + beta)`` when
    beta < 2.
    """
    h = half_width / nodes
    if beta >= 2:
        return h ** 4
    return h ** (1.0 + beta)


def gamma_samples(beta, half_width, nodes):
    x = np.linspace(0.0, half_width, nodes + 1)
    return np.exp(-x ** beta)


def bump_transform(frequencies, nodes=4096):
    """Transform of the unit-mass bump supported on ``[-1, 1]``.

    The bump is proportional to ``exp(1 / (x^2 - 1))`` inside the interval.
    """
    x = np.linspace(0.0, 1.0, nodes + 1)
    values = np.zeros_like(x)
    inside = x < 1.0
    values[inside] = np.exp(1.0 / (x[inside] ** 2 - 1.0))
    mass = cosine_transform(values, 1.0, [0.0])[0]
    return cosine_transform(values, 1.0, frequencies) / mass


def interval_transform(half_length, frequencies):
    """Transform of the indicator of ``[-a, a]``.

    Equal to ``sin(2 pi a w) / (pi w)``.
    """
    frequencies = np.asarray(frequencies, dtype=float)
    return 2.0 * half_length * np.sinc(2.0 * half_length * frequencies)


def closed_form(p, frequencies):
    """Known transforms of ``exp(-|x|^p)`` for p = 1 and p = 2."""
    w = np.asarray(frequencies, dtype=float)
    if p == 1:
        return 2.0 / (1.0 + 4.0 * math.pi ** 2 * w ** 2)
    if p == 2:
        return math.sqrt(math.pi) * np.exp(-math.pi ** 2 * w ** 2)
    raise ValueError('no closed form for p=%r' % (p,))
