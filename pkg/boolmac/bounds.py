""" Codeword length bounds and the ML error exponent

All logarithms are in base 2.
"""
import math
from collections import namedtuple

import numpy as np
from scipy.special import gammaln

from . import _LN2
from . import _DEFAULT_EXPONENT_CAP_K
from . import CapacityError
from . import InfeasibleError
from . import ParameterError

# ceilings tolerate this much floating error above an integer
_CEIL_SLACK = 1e-9

_EXACT_BINOMIAL_MAX_K = 256

_BoundParams = namedtuple('_BoundParams', ['n_sensors', 'k_active', 'n_messages', 'epsilon', 'delta'])


class BoundParams(_BoundParams):
    """Inputs of the length bounds.

    :param n_sensors: N
    :param k_active: K
    :param n_messages: C
    :param epsilon: slack factor, default 0
    :param delta: fraction of minislots seen by the eavesdropper, 0 for the plain code
    """
    __slots__ = ()

    def __new__(cls, n_sensors, k_active, n_messages=1, epsilon=0.0, delta=0.0):
        self = _BoundParams.__new__(cls, int(n_sensors), int(k_active), int(n_messages),
                                    float(epsilon), float(delta))
        if self.n_sensors < 1 or self.k_active < 1 or self.n_messages < 1:
            raise ParameterError('bound_params_not_positive: %r' % (tuple(self[:3]),))
        if self.k_active > self.n_sensors:
            raise ParameterError('k_active_exceeds_n_sensors: %d > %d' % (self.k_active, self.n_sensors))
        if self.epsilon < 0:
            raise ParameterError('epsilon_negative: %r' % self.epsilon)
        if not 0.0 <= self.delta < 1.0:
            raise ParameterError('delta_out_of_range: %r' % self.delta)
        return self

    @classmethod
    def from_code_params(cls, params, epsilon=0.0, delta=0.0):
        return cls(params.n_sensors, params.k_active, params.n_messages, epsilon, delta)


def log2_binomial(n, k, exact=None):
    """log2 of the binomial coefficient, ``-inf`` when it is zero.

    :param exact: use integer arithmetic instead of log-gamma; by default
                  only when min(k, n - k) is small
    """
    if k < 0 or k > n:
        return -math.inf
    if exact is None:
        exact = min(k, n - k) <= _EXACT_BINOMIAL_MAX_K
    if exact:
        return math.log2(math.comb(n, k))
    return float((gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)) / _LN2)


def _ceil(value):
    return max(1, int(math.ceil(value - _CEIL_SLACK)))


def _lemma_terms(bp):
    n, k, c, eps = bp.n_sensors, bp.k_active, bp.n_messages, bp.epsilon
    log_c = math.log2(c)
    terms = []
    for i in range(1, k + 1):
        competing = log2_binomial(n - k, i) + i * log_c
        if competing == -math.inf:
            continue
        terms.append((1.0 + eps) * k / i * competing)
    return terms


def _lemma_max(bp):
    return max(_lemma_terms(bp), default=0.0)


def bound_T_lemma1_raw(bp):
    """The un-rounded maximum of the noiseless length bound"""
    if bp.delta != 0:
        raise ParameterError('lemma1_requires_zero_delta: %r' % bp.delta)
    return _lemma_max(bp)


def bound_T_lemma1(bp):
    """Smallest T with T >= max_i ((1+eps) K / i) log2(binom(N-K, i) C^i).

    :param bp: bound parameters with ``delta == 0``
    :rtype: int
    """
    return _ceil(bound_T_lemma1_raw(bp))


def _secrecy_factor(bp):
    leak = (1.0 + bp.epsilon) * bp.delta
    if leak >= 1.0:
        raise InfeasibleError('secrecy_infeasible: (1+eps)*delta = %r >= 1' % leak)
    return 1.0 / (1.0 - leak)


def bound_T_lemma2_raw(bp):
    return _secrecy_factor(bp) * _lemma_max(bp)


def bound_T_lemma2(bp):
    """The Lemma-1 bound inflated by 1 / (1 - (1+eps) delta) for the
    sub-binned code. Equals :func:`bound_T_lemma1` when ``delta == 0``.

    :rtype: int
    """
    return _ceil(bound_T_lemma2_raw(bp))


def closed_form_T(bp):
    """(1+eps) / (1 - (1+eps) delta) * K log2((N-K) C e), which upper-bounds
    the exact maximum.
    """
    n, k, c = bp.n_sensors, bp.k_active, bp.n_messages
    if n == k:
        return 0.0
    return _secrecy_factor(bp) * (1.0 + bp.epsilon) * k * math.log2((n - k) * c * math.e)


def message_bits_order(n_sensors, k_active, message_bits):
    """Order of growth K log2 N + K B of the length needed for B-bit messages"""
    return k_active * math.log2(n_sensors) + k_active * message_bits


def ofdma_minislots(code_length, f_ch):
    """Minislots needed when T bits are spread over ``f_ch`` subcarriers"""
    if code_length < 1 or f_ch < 1:
        raise ParameterError('ofdma_args_not_positive: T=%r f_ch=%r' % (code_length, f_ch))
    return -(-int(code_length) // int(f_ch))


########################################
# Error exponent
########################################

def _product_bernoulli(width, bit_prob):
    """Weights of every vector in {0,1}^width and whether it is nonzero"""
    index = np.arange(1 << width, dtype=np.int64)
    ones = np.zeros_like(index)
    for b in range(width):
        ones += (index >> b) & 1
    weights = bit_prob ** ones * (1.0 - bit_prob) ** (width - ones)
    return weights, index > 0


def gallager_e0(rho, k_active, i, bit_prob, cap_k=_DEFAULT_EXPONENT_CAP_K):
    """E_o(rho) of the Boolean OR channel by exact enumeration.

    X_S1 ranges over {0,1}^i and X_S2 over {0,1}^(K-i), both with product
    Bernoulli(bit_prob) weights, and Y is the OR of all K bits.
    """
    if k_active > cap_k:
        raise CapacityError('exponent_enumeration_exceeds_cap: K=%d > %d' % (k_active, cap_k))
    if not 1 <= i <= k_active:
        raise ParameterError('i_out_of_range: %d not in [1, %d]' % (i, k_active))
    if not 0.0 <= rho <= 1.0:
        raise ParameterError('rho_out_of_range: %r' % rho)
    if rho == 0:
        return 0.0
    w1, busy1 = _product_bernoulli(i, bit_prob)
    w2, busy2 = _product_bernoulli(k_active - i, bit_prob)
    busy = busy2[:, None] | busy1[None, :]
    total = 0.0
    for y in (False, True):
        inner = (w1[None, :] * (busy == y)).sum(axis=1)
        total += float((w2 * inner ** (1.0 + rho)).sum())
    return -math.log2(total)


def error_exponent_bound(i, rho, bp, bit_prob, code_length, cap_k=_DEFAULT_EXPONENT_CAP_K):
    """Exponent of the bound P(E_i) <= 2^-exponent:

        T E_o(rho) - rho log2(binom(N-K, i) C^i) - log2 binom(K, i)

    :param i: number of wrongly decoded sensors, 1 <= i <= K
    :param rho: in [0, 1]
    :param bp: bound parameters
    :param bit_prob: codebook bit probability
    :param code_length: T
    """
    n, k, c = bp.n_sensors, bp.k_active, bp.n_messages
    e0 = gallager_e0(rho, k, i, bit_prob, cap_k)
    competing = log2_binomial(n - k, i, exact=True) + i * math.log2(c)
    penalty = rho * competing if rho and competing != -math.inf else 0.0
    return code_length * e0 - penalty - math.log2(math.comb(k, i))


def error_probability_bound(bp, bit_prob, code_length, rho_grid=None, cap_k=_DEFAULT_EXPONENT_CAP_K):
    """Union bound sum_i min_rho 2^-exponent_i(rho), capped at 1"""
    if rho_grid is None:
        rho_grid = np.linspace(0.0, 1.0, 21)
    total = 0.0
    for i in range(1, bp.k_active + 1):
        best = max(error_exponent_bound(i, rho, bp, bit_prob, code_length, cap_k) for rho in rho_grid)
        total += 2.0 ** -best
    return min(1.0, total)


########################################
# Ambiguity of exact-K ML
########################################

def ml_rival_count(bp, code_length, n_subcodewords=1, bit_prob=None):
    """Expected number of rival explanations seen by exact-K ML in the
    noiseless channel, a union bound on the probability that the outcome is
    ambiguous.

    A rival keeps K - j of the sent rows and replaces the other j by rows of
    the codebook. At one minislot the rival gives the same OR when a kept
    row has a one there, or when the j new bits have the OR of the j old
    ones, so each of the binom(K, j) binom(N C F, j) row choices matches
    with probability

        pi_j^T,  pi_j = 1 - (1-p)^(K-j) (1 - (1-p)^(2j) - (1 - (1-p)^j)^2)

    Rows that are not valid rivals (a sent row, a sibling sub-codeword) are
    counted too, which only loosens the bound. ``1 - ml_rival_count`` is a
    lower bound on the exact recovery rate.

    :param bp: bound parameters, ``delta`` is ignored
    :param code_length: T
    :param n_subcodewords: F of the sub-binned code
    :param bit_prob: codebook bit probability, ln2/K by default
    """
    n, k, c = bp.n_sensors, bp.k_active, bp.n_messages
    if code_length < 1 or n_subcodewords < 1:
        raise ParameterError('rival_count_args_not_positive: T=%r F=%r' % (code_length, n_subcodewords))
    p = _LN2 / k if bit_prob is None else float(bit_prob)
    rows = n * c * int(n_subcodewords)
    total = 0.0
    for j in range(1, k + 1):
        idle = (1.0 - p) ** j
        same_or = idle * idle + (1.0 - idle) ** 2
        pi = 1.0 - (1.0 - p) ** (k - j) * (1.0 - same_or)
        if pi <= 0.0:
            continue
        exponent = log2_binomial(k, j, exact=True) + log2_binomial(rows, j) + code_length * math.log2(pi)
        total += 2.0 ** exponent
    return total
