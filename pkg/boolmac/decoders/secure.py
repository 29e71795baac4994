""" Decoding the sub-binned code
"""
from .. import _DEFAULT_ENUMERATION_CAP
from .. import ParameterError
from .base import Decoder
from .coma import decode_coma
from .ml import decode_ml


def decode_secure(codebook, y, k, decoder='coma', prefilter=True, exact=True, mask=None,
                  cap=_DEFAULT_ENUMERATION_CAP):
    """Decode over all N * C * F rows and report each found row by its
    sub-bin. Picking another sub-codeword of the right sub-bin is not an
    error, the (sensor, message) pair alone is the message.

    With F = 1 this is plain decoding.

    :param decoder: ``coma`` or ``ml``
    :rtype: DecodeResult
    """
    if decoder == 'coma':
        return decode_coma(codebook, y, mask)
    if decoder == 'ml':
        return decode_ml(codebook, y, k, prefilter, exact, mask, cap)
    raise ParameterError('unknown_secure_decoder: %s' % decoder)


class Secure(Decoder):

    name = 'secure'

    def __init__(self, k, decoder='coma', prefilter=True, exact=True, cap=_DEFAULT_ENUMERATION_CAP):
        if decoder not in ('coma', 'ml'):
            raise ParameterError('unknown_secure_decoder: %s' % decoder)
        Decoder.__init__(self, k=k, decoder=decoder, prefilter=prefilter, exact=exact, cap=cap)

    def decode(self, codebook, y, mask=None):
        c = self.config
        return decode_secure(codebook, y, c['k'], c['decoder'], c['prefilter'], c['exact'], mask, c['cap'])
