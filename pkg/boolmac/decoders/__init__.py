""" Decoders of the sink and of the sensors
"""
from .. import ParameterError
from .base import Decoder, DecodeResult, ActiveSet, Entry, UNIQUE, AMBIGUOUS, INFEASIBLE
from .coma import Coma, decode_coma
from .noisy import NoisyComa, NoisyMl, decode_noisy_coma, decode_noisy_ml
from .ml import Ml, decode_ml
from .secure import Secure, decode_secure
from .dissemination import decode_dissemination


_decoder_classes = {
    'coma': Coma,
    'noisy_coma': NoisyComa,
    'ml': Ml,
    'noisy_ml': NoisyMl,
    'secure': Secure,
}

_NEEDS_K = ('ml', 'noisy_ml', 'secure')


def create_decoder(config, k_active=None):
    """Build a decoder from a config dict::

        create_decoder({'type': 'ml', 'k': 3, 'prefilter': True})

    :param config: dict with a ``type`` key, other keys go to the constructor
    :param k_active: default for ``k`` when the config has none
    """
    config = dict(config)
    decoder_type = config.pop('type', None)
    if decoder_type not in _decoder_classes:
        raise ParameterError('unknown_decoder_type: %s' % decoder_type)
    if decoder_type in _NEEDS_K and config.get('k') is None:
        if k_active is None:
            raise ParameterError('decoder_requires_k: %s' % decoder_type)
        config['k'] = k_active
    try:
        return _decoder_classes[decoder_type](**config)
    except TypeError as e:
        raise ParameterError('bad_decoder_config: %s' % e)
