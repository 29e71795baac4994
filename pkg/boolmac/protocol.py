""" Collection and dissemination sessions over a single hop

A collection session opens with an RFR beacon: every awake sensor sends the
codeword of its message, the sink decodes the OR it detects. When the sink
cannot decode it sends an RR beacon and each still pending sensor takes part
in the next interval only with probability ``rr_participation``. Rounds are
logical; beacon timing is not simulated.
"""
import json
import logging
from collections import namedtuple

import numpy as np

from . import derive_seed
from . import ParameterError
from .channel import AnalogParams
from .channel import NoiseParams
from .channel import analog_superpose_detect
from .channel import apply_flip_noise
from .channel import dumps_outcome
from .channel import or_superpose
from .codebook import CodeParams
from .codebook import generate_codebook
from .decoders import AMBIGUOUS
from .decoders import INFEASIBLE
from .decoders import UNIQUE
from .decoders import ActiveSet
from .decoders import DecodeResult
from .decoders import Entry
from .decoders import create_decoder
from .decoders import decode_dissemination
from .decoders.coma import coma_survivors
from .decoders.coma import definite_pairs

log = logging.getLogger(__name__)

# sub-stream keys of a session seed
_ACTIVATION = 0
_ROUND = 1
_DISSEMINATION = 2
_CHANNEL = 0
_NOISE = 1

ACTIVATION_MODELS = ('exact', 'uniform', 'poisson')


_ActivationModel = namedtuple('_ActivationModel', ['kind', 'rate'])


class ActivationModel(_ActivationModel):
    """Random activation: which sensors wake up after an RFR.

    :param kind: ``exact`` (exactly K sensors), ``uniform`` (count uniform
                 in 0..K) or ``poisson`` (Poisson(rate) truncated at K)
    :param rate: mean of the Poisson model
    """
    __slots__ = ()

    def __new__(cls, kind='exact', rate=None):
        if kind not in ACTIVATION_MODELS:
            raise ParameterError('unknown_activation_model: %s' % kind)
        if kind == 'poisson' and (rate is None or rate < 0):
            raise ParameterError('poisson_rate_required')
        return _ActivationModel.__new__(cls, kind, rate)

    def draw(self, params, rng):
        """Sensors drawn without replacement, messages uniform over C"""
        k = params.k_active
        if self.kind == 'exact':
            count = k
        elif self.kind == 'uniform':
            count = int(rng.integers(0, k + 1))
        else:
            count = min(k, int(rng.poisson(self.rate)))
        sensors = rng.choice(params.n_sensors, size=count, replace=False)
        messages = rng.integers(0, params.n_messages, size=count)
        return ActiveSet(Entry(int(s), int(m)) for s, m in zip(sensors, messages))


class SessionConfig(object):
    """Everything a session needs.

    :param code_params: the :class:`~boolmac.codebook.CodeParams` of the sink
    :param channel: :class:`~boolmac.channel.AnalogParams`, None for the ideal OR channel
    :param noise: :class:`~boolmac.channel.NoiseParams` of the detector
    :param activation: an explicit :class:`~boolmac.decoders.ActiveSet` of
                       (sensor, message) pairs or an :class:`ActivationModel`
    :param rr_participation: probability a pending sensor joins an RR round
    :param max_rounds: RFR round plus RR rounds
    :param decoder: decoder config dict, see :func:`~boolmac.decoders.create_decoder`
    :param ack_definite: over the noiseless OR channel acknowledge, in every
                         round, only the pairs that alone explain some busy
                         minislot; these were certainly sent
    """

    def __init__(self, code_params, channel=None, noise=None, activation=None, rr_participation=1.0,
                 max_rounds=1, decoder=None, ack_definite=False):
        self.code_params = code_params
        self.channel = channel
        self.noise = noise or NoiseParams()
        self.activation = activation if activation is not None else ActivationModel()
        self.rr_participation = float(rr_participation)
        self.max_rounds = int(max_rounds)
        self.decoder = dict(decoder or {'type': 'coma'})
        self.ack_definite = bool(ack_definite)
        self.validate()

    def validate(self):
        if not isinstance(self.code_params, CodeParams):
            raise ParameterError('code_params_required')
        if self.max_rounds < 1:
            raise ParameterError('max_rounds_not_positive: %d' % self.max_rounds)
        if not 0.0 < self.rr_participation <= 1.0:
            raise ParameterError('rr_participation_out_of_range: %r' % self.rr_participation)
        if self.channel is not None and not isinstance(self.channel, AnalogParams):
            raise ParameterError('channel_not_analog_params: %r' % type(self.channel))
        if isinstance(self.activation, ActiveSet):
            self.activation = ActiveSet(Entry(e.sensor, e.message) for e in self.activation).validate()
            p = self.code_params
            for e in self.activation:
                if not (0 <= e.sensor < p.n_sensors and 0 <= e.message < p.n_messages):
                    raise ParameterError('activation_out_of_range: %r' % (e,))
        elif not isinstance(self.activation, ActivationModel):
            raise ParameterError('bad_activation: %r' % type(self.activation))
        create_decoder(self.decoder, self.code_params.k_active)

    def make_decoder(self):
        return create_decoder(self.decoder, self.code_params.k_active)

    def replace(self, **kw):
        values = dict(code_params=self.code_params, channel=self.channel, noise=self.noise,
                      activation=self.activation, rr_participation=self.rr_participation,
                      max_rounds=self.max_rounds, decoder=self.decoder, ack_definite=self.ack_definite)
        values.update(kw)
        return SessionConfig(**values)

    @classmethod
    def from_dict(cls, config):
        """Build from a plain dict, e.g. loaded from JSON::

            {"code": {"n_sensors": 500, "k_active": 3, "n_messages": 10, "code_length": 130},
             "channel": null, "noise": {"q_false_pos": 0.0, "q_false_neg": 0.0},
             "activation": {"kind": "exact"}, "rr_participation": 0.5, "max_rounds": 5,
             "decoder": {"type": "coma"}}

        ``activation`` may instead hold ``{"entries": [[sensor, message], ...]}``.
        """
        code_params = CodeParams(**config['code'])
        channel = config.get('channel')
        channel = AnalogParams(**channel) if channel else None
        noise = NoiseParams(**(config.get('noise') or {}))
        activation = config.get('activation') or {}
        if 'entries' in activation:
            activation = ActiveSet(Entry(s, m) for s, m in activation['entries'])
        else:
            activation = ActivationModel(**activation)
        return cls(code_params, channel, noise, activation, config.get('rr_participation', 1.0),
                   config.get('max_rounds', 1), config.get('decoder'), config.get('ack_definite', False))

    @property
    def noiseless_or(self):
        return self.channel is None and self.noise.is_noiseless


RoundOutcome = namedtuple('RoundOutcome', ['y', 'result', 'rounds_used', 'success', 'truth', 'trace'])


def resolve_activation(cfg, seed):
    if isinstance(cfg.activation, ActiveSet):
        return cfg.activation
    rng = np.random.default_rng(derive_seed(seed, _ACTIVATION))
    return cfg.activation.draw(cfg.code_params, rng)


def encode(codebook, pairs, rng):
    """Pick the codeword of each (sensor, message); the sub-codeword is drawn
    uniformly inside the sub-bin.
    """
    f = codebook.params.n_subcodewords
    return [Entry(e.sensor, e.message, int(rng.integers(0, f)) if f > 1 else 0)
            for e in sorted(pairs, key=lambda e: e.sensor)]


def transmit(codebook, entries, cfg, seed):
    """Outcome vector the sink detects when ``entries`` are sent at once"""
    rows = codebook.rows_bits(codebook.row_index(*e) for e in entries)
    if cfg.channel is None:
        y = or_superpose(rows, codebook.code_length)
    else:
        gains = cfg.channel.gains_of([e.sensor for e in entries])
        y = analog_superpose_detect(rows, gains, cfg.channel, derive_seed(seed, _CHANNEL), codebook.code_length)
    return apply_flip_noise(y, cfg.noise, derive_seed(seed, _NOISE))


def _trace_record(index, participants, y, result, acked):
    return {
        'round': index,
        'participants': sorted(e.sensor for e in participants),
        'y': dumps_outcome(y),
        'estimate': [list(e) for e in sorted(result.estimate)],
        'status': result.status,
        'ack': acked,
    }


def run_collection_round(cfg, seed, codebook=None):
    """One collection session: the RFR round and up to ``max_rounds - 1`` RR
    rounds.

    Messages decoded in a unique round are acknowledged. A sensor leaves the
    pending set when the acknowledgement carries its own message; a wrong
    acknowledgement keeps it pending and a later round overrides it. The
    session ends once nothing is pending.

    :param cfg: :class:`SessionConfig`
    :param seed: int or SeedSequence; the same (cfg, seed) gives the same outcome
    :param codebook: reuse a codebook instead of generating ``cfg.code_params``
    :rtype: RoundOutcome
    """
    if codebook is None:
        codebook = generate_codebook(cfg.code_params)
    elif codebook.params.n_sensors != cfg.code_params.n_sensors or \
            codebook.params.n_messages != cfg.code_params.n_messages:
        raise ParameterError('codebook_does_not_match_config')
    decoder = cfg.make_decoder()
    truth = resolve_activation(cfg, seed)
    pending = dict((e.sensor, e.message) for e in truth)
    acked = {}
    trace = []
    statuses = []
    y = None
    result = None
    for index in range(cfg.max_rounds):
        round_seed = derive_seed(seed, _ROUND, index)
        rng = np.random.default_rng(round_seed)
        if index == 0:
            senders = sorted(pending)
        else:
            senders = [s for s in sorted(pending) if rng.random() < cfg.rr_participation]
        entries = encode(codebook, [Entry(s, pending[s]) for s in senders], rng)
        y = transmit(codebook, entries, cfg, round_seed)
        result = decoder.decode(codebook, y)
        statuses.append(result.status)
        if cfg.ack_definite and cfg.noiseless_or:
            newly = [Entry(s, m) for s, m in definite_pairs(codebook, coma_survivors(codebook, y), y)]
        elif result.is_unique:
            newly = list(result.estimate)
        else:
            newly = []
        for e in newly:
            acked[e.sensor] = e
            if pending.get(e.sensor) == e.message:
                del pending[e.sensor]
        trace.append(_trace_record(index, entries, y, result, sorted(e.sensor for e in newly)))
        log.debug('round %d: %d senders, status %s, %d pending', index, len(entries), result.status, len(pending))
        if not pending:
            break
    if not pending:
        status = UNIQUE
    elif statuses[-1] == INFEASIBLE:
        status = INFEASIBLE
    else:
        status = AMBIGUOUS
    final = DecodeResult(acked.values(), result.candidates_surviving, status,
                         dict(result.diagnostics, rounds=len(trace)))
    success = final.matches(truth)
    return RoundOutcome(y, final, len(trace), success, truth, trace)


def dumps_trace(outcome):
    """Line-delimited JSON, one record per round"""
    return ''.join(json.dumps(record, sort_keys=True) + '\n' for record in outcome.trace)


def run_dissemination_round(cfg, addressees, seed, codebook=None):
    """One downstream interval: the sink sends the sum of the addressees'
    codewords after a DDB beacon and every sensor runs CoMa on its own bin.

    No addressee means an NB beacon: nothing is sent and every sensor
    reports an empty result.

    :param addressees: (sensor, message) pairs, at most K
    :returns: dict sensor -> :class:`~boolmac.decoders.DecodeResult`
    """
    params = cfg.code_params
    addressees = ActiveSet(Entry(s, m) for s, m in ((a[0], a[1]) for a in addressees)).validate()
    if len(addressees) > params.k_active:
        raise ParameterError('too_many_addressees: %d > %d' % (len(addressees), params.k_active))
    if not addressees:
        return dict((s, DecodeResult()) for s in range(params.n_sensors))
    if codebook is None:
        codebook = generate_codebook(params)
    dissemination_seed = derive_seed(seed, _DISSEMINATION)
    entries = encode(codebook, addressees, np.random.default_rng(dissemination_seed))
    rows = codebook.rows_bits(codebook.row_index(*e) for e in entries)
    if cfg.channel is None:
        y = or_superpose(rows, codebook.code_length)
    else:
        # one transmitter, the sink, sends the sum of the rows
        y = analog_superpose_detect(rows, np.ones(len(entries)), cfg.channel,
                                    derive_seed(dissemination_seed, _CHANNEL), codebook.code_length)
    y = apply_flip_noise(y, cfg.noise, derive_seed(dissemination_seed, _NOISE))
    return dict((s, decode_dissemination(codebook.bin(s), y)) for s in range(params.n_sensors))
