""" Monte Carlo sweeps and bound tables

Every grid point is simulated on one codebook drawn for that point; trial t
of a point uses the seed ``SeedSequence(seed, spawn_key=(point_id, t))``, the
point id being a hash of its grid values, so serial and parallel runs produce
the same numbers.
"""
import hashlib
import itertools
import json
import logging
import math
import time
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pandas as pd
from scipy.stats import norm

from . import _DEFAULT_ENUMERATION_CAP
from . import _DEFAULT_SUBBIN_BITS_CAP
from . import _DEFAULT_TRIALS
from . import derive_seed
from . import seed_to_int
from . import CapacityError
from . import InfeasibleError
from . import ParameterError
from .bounds import BoundParams
from .bounds import bound_T_lemma1
from .bounds import bound_T_lemma1_raw
from .bounds import bound_T_lemma2
from .bounds import closed_form_T
from .bounds import log2_binomial
from .bounds import message_bits_order
from .bounds import ofdma_minislots
from .channel import EveParams
from .channel import NoiseParams
from .channel import eavesdrop
from .channel import observed_bits
from .channel import observed_mask
from .codebook import CodeParams
from .codebook import generate_codebook
from .decoders import UNIQUE
from .decoders import AMBIGUOUS
from .decoders import INFEASIBLE
from .decoders import DecodeResult
from .decoders import decode_ml
from .decoders.coma import coma_survivors
from .decoders.coma import definite_pairs
from .decoders.coma import summarize_survivors
from .protocol import ActivationModel
from .protocol import SessionConfig
from .protocol import encode
from .protocol import run_collection_round
from .protocol import transmit

log = logging.getLogger(__name__)

EXPERIMENTS = ('cdf', 'secure_cdf', 'leakage', 'bounds')

CAPACITY = 'capacity'

# the eavesdropper runs ML only below this many CoMa survivors
_EVE_ML_MAX_ROWS = 1 << 14

CDF_COLUMNS = [
    'experiment', 'n_sensors', 'k_active', 'n_messages', 'code_length', 'delta', 'q', 'n_subcodewords',
    'subbin_capped', 'decoder', 'trials', 'successes', 'success_rate', 'success_low', 'success_high',
    'success_monotone', 'ambiguous_rate', 'infeasible_rate', 'misdecode_rate', 'capacity_rate',
    'false_positive_rate', 'mean_rounds', 'wall_time',
]

LEAKAGE_COLUMNS = [
    'experiment', 'n_sensors', 'k_active', 'n_messages', 'code_length', 'delta', 'n_subcodewords',
    'subbin_capped', 'trials', 'sink_success_rate', 'eve_exact_rate', 'eve_exact_low', 'eve_exact_high',
    'eve_partial_rate', 'eve_mean_pairs', 'eve_ml_rate', 'chance_rate', 'wall_time',
]

BOUND_COLUMNS = [
    'n_sensors', 'k_active', 'n_messages', 'epsilon', 'delta', 'lemma1_T', 'lemma1_raw', 'lemma2_T',
    'closed_form_T', 'closed_form_plain_T', 'corollary_T', 'f_ch', 'ofdma_minislots', 'feasible',
]


def wilson_interval(successes, trials, confidence=0.95):
    """Wilson score interval of a binomial proportion"""
    if trials <= 0:
        return 0.0, 1.0
    z = norm.ppf(0.5 + confidence / 2.0)
    p = successes / float(trials)
    denominator = 1.0 + z * z / trials
    centre = (p + z * z / (2.0 * trials)) / denominator
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denominator
    return max(0.0, min(p, centre - half)), min(1.0, max(p, centre + half))


def two_proportion_test(successes_a, trials_a, successes_b, trials_b):
    """Pooled two-sided z test of equal proportions.

    :returns: (z, p-value); identical all-or-nothing samples give (0, 1)
    """
    if trials_a <= 0 or trials_b <= 0:
        raise ParameterError('trials_not_positive')
    pooled = (successes_a + successes_b) / float(trials_a + trials_b)
    variance = pooled * (1.0 - pooled) * (1.0 / trials_a + 1.0 / trials_b)
    if variance == 0:
        return 0.0, 1.0
    z = (successes_a / float(trials_a) - successes_b / float(trials_b)) / math.sqrt(variance)
    return z, float(2.0 * norm.sf(abs(z)))


def subbin_size(code_length, delta, k_active, exponent_cap=_DEFAULT_SUBBIN_BITS_CAP):
    """F = 2^ceil(T delta / K), the exponent capped at ``exponent_cap``.

    :returns: (F, whether the cap applied)
    """
    if not 0.0 <= delta < 1.0:
        raise ParameterError('delta_out_of_range: %r' % delta)
    exponent = int(math.ceil(code_length * delta / float(k_active) - 1e-9))
    capped = exponent > exponent_cap
    return 1 << min(exponent, exponent_cap), capped


_SweepSpec = namedtuple('_SweepSpec', [
    'experiment', 'n_sensors', 'k_active', 'n_messages', 'code_lengths', 'deltas', 'qs', 'f_ch', 'epsilon',
    'decoder', 'trials', 'seed',
])


def _grid(values, name):
    if isinstance(values, (int, float)):
        values = (values,)
    values = tuple(values)
    if not values:
        raise ParameterError('empty_grid: %s' % name)
    return values


class SweepSpec(_SweepSpec):
    """Grids of a sweep; every field but ``experiment``, ``decoder``,
    ``trials`` and ``seed`` takes one value or a sequence.
    """
    __slots__ = ()

    def __new__(cls, experiment='cdf', n_sensors=(500,), k_active=(3,), n_messages=(10,), code_lengths=(105,),
                deltas=(0.0,), qs=(0.0,), f_ch=(1,), epsilon=(0.0,), decoder=None, trials=_DEFAULT_TRIALS,
                seed=0):
        if experiment not in EXPERIMENTS:
            raise ParameterError('unknown_experiment: %s' % experiment)
        if int(trials) < 1:
            raise ParameterError('trials_not_positive: %r' % trials)
        return _SweepSpec.__new__(
            cls, experiment,
            _grid(n_sensors, 'n_sensors'), _grid(k_active, 'k_active'), _grid(n_messages, 'n_messages'),
            _grid(code_lengths, 'code_lengths'), _grid(deltas, 'deltas'), _grid(qs, 'qs'), _grid(f_ch, 'f_ch'),
            _grid(epsilon, 'epsilon'), dict(decoder or {'type': 'coma'}), int(trials), int(seed))

    def to_dict(self):
        return dict((k, list(v) if isinstance(v, tuple) else v) for k, v in self._asdict().items())

    @classmethod
    def from_dict(cls, config):
        return cls(**config)


class SweepResult(object):
    """Rows of a sweep, one per grid point, and the spec that produced them"""

    def __init__(self, rows, spec=None, columns=None):
        self.rows = list(rows)
        self.spec = spec
        self.columns = columns or sorted(set(k for row in self.rows for k in row))

    def __len__(self):
        return len(self.rows)

    def to_frame(self):
        return pd.DataFrame(self.rows, columns=self.columns)

    def column(self, name):
        return [row[name] for row in self.rows]

    def to_csv(self, path):
        """Write the rows to ``path`` and the spec to ``path + '.json'``"""
        self.to_frame().to_csv(path, index=False)
        with open(path + '.json', 'w') as fp:
            json.dump({'spec': self.spec, 'columns': self.columns}, fp, indent=2, sort_keys=True)

    def dumps_csv(self):
        return self.to_frame().to_csv(index=False)


def add_monotone_column(rows, source='success_rate', target='success_monotone', along='code_length'):
    """Running maximum of ``source`` over ascending ``along`` within rows that
    agree on every other grid column. Raw values are left untouched.
    """
    if not rows:
        return rows
    frame = pd.DataFrame(rows)
    keys = [c for c in ('experiment', 'n_sensors', 'k_active', 'n_messages', 'delta', 'q', 'decoder')
            if c in frame.columns]
    frame['_order'] = range(len(frame))
    frame = frame.sort_values(keys + [along])
    frame[target] = frame.groupby(keys, sort=False)[source].cummax()
    frame = frame.sort_values('_order')
    for row, value in zip(rows, frame[target].tolist()):
        row[target] = float(value)
    return rows


def _identify(point):
    """Adds the point id, a hash of the grid values, and the codebook seed
    derived from it. Equal points of different sweeps share both.
    """
    content = dict((k, v) for k, v in point.items() if k != 'index')
    text = json.dumps(content, sort_keys=True)
    point['point_id'] = int(hashlib.sha1(text.encode('utf-8')).hexdigest()[:12], 16)
    point['codebook_seed'] = seed_to_int(derive_seed(point['seed'], point['point_id']))
    return point


def point_key(experiment, point, trials, seed):
    """Store key of a grid point"""
    text = json.dumps([experiment, point, trials, seed], sort_keys=True)
    return 'point:%s' % hashlib.sha1(text.encode('utf-8')).hexdigest()


def _decoder_name(decoder):
    extra = ','.join('%s=%s' % kv for kv in sorted(decoder.items()) if kv[0] != 'type')
    return decoder['type'] + (':' + extra if extra else '')


def _chunks(trials, workers):
    size = max(1, -(-trials // (workers * 4)))
    return [range(start, min(trials, start + size)) for start in range(0, trials, size)]


def _run_points(task, points, trials, workers):
    """Records of every trial of every point, grouped by point"""
    jobs = [(point, chunk) for point in points for chunk in _chunks(trials, max(1, workers))]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(task, jobs))
    else:
        outputs = [task(job) for job in jobs]
    records = dict((point['index'], []) for point in points)
    for (point, _), output in zip(jobs, outputs):
        records[point['index']].extend(output)
    return records


def _memoized(experiment, points, trials, seed, store, simulate):
    """Rows of ``points``; points found in ``store`` are not simulated"""
    keys = [point_key(experiment, dict((k, v) for k, v in p.items() if k != 'index'), trials, seed)
            for p in points]
    found = store.get_key_to_value(*keys) if store is not None else {}
    missing = [p for p, k in zip(points, keys) if k not in found]
    if found:
        log.info('%s: %d of %d points found in store', experiment, len(found), len(points))
    rows = dict(zip((p['index'] for p in missing), simulate(missing))) if missing else {}
    result = []
    for point, key in zip(points, keys):
        if key in found:
            result.append(found[key])
        else:
            row = rows[point['index']]
            if store is not None:
                store.set(key, row)
            result.append(row)
    return result


# collection sweeps

def _session(point):
    params = CodeParams(point['n_sensors'], point['k_active'], point['n_messages'], point['code_length'],
                        point['n_subcodewords'], seed=point['codebook_seed'])
    decoder = dict(point['decoder'])
    if point['n_subcodewords'] > 1 or point.get('secure'):
        if decoder['type'] in ('coma', 'ml'):
            inner = decoder.pop('type')
            decoder = dict(decoder, type='secure', decoder=inner)
    noise = NoiseParams.symmetric(point['q'])
    return SessionConfig(params, noise=noise, activation=ActivationModel('exact'),
                         rr_participation=point.get('rr_participation', 1.0),
                         max_rounds=point.get('max_rounds', 1), decoder=decoder)


def _collection_task(job):
    point, trials = job
    cfg = _session(point)
    codebook = generate_codebook(cfg.code_params)
    records = []
    for trial in trials:
        seed = derive_seed(point['seed'], point['point_id'], trial)
        try:
            outcome = run_collection_round(cfg, seed, codebook)
        except CapacityError:
            records.append((CAPACITY, False, False, 0))
            continue
        truth = outcome.truth.pairs()
        extra = bool(outcome.result.estimate.pairs() - truth) if outcome.result.is_unique else False
        records.append((outcome.result.status, outcome.success, extra, outcome.rounds_used))
    return records


def _collection_row(point, records, elapsed):
    trials = len(records)
    statuses = [r[0] for r in records]
    successes = sum(1 for r in records if r[1])
    low, high = wilson_interval(successes, trials)
    unique = statuses.count(UNIQUE)
    return {
        'experiment': point['experiment'],
        'n_sensors': point['n_sensors'],
        'k_active': point['k_active'],
        'n_messages': point['n_messages'],
        'code_length': point['code_length'],
        'delta': point['delta'],
        'q': point['q'],
        'n_subcodewords': point['n_subcodewords'],
        'subbin_capped': point['subbin_capped'],
        'decoder': _decoder_name(point['decoder']),
        'trials': trials,
        'successes': successes,
        'success_rate': successes / float(trials),
        'success_low': low,
        'success_high': high,
        'ambiguous_rate': statuses.count(AMBIGUOUS) / float(trials),
        'infeasible_rate': statuses.count(INFEASIBLE) / float(trials),
        'misdecode_rate': (unique - successes) / float(trials),
        'capacity_rate': statuses.count(CAPACITY) / float(trials),
        'false_positive_rate': sum(1 for r in records if r[2]) / float(trials),
        'mean_rounds': float(np.mean([r[3] for r in records])),
        'wall_time': elapsed,
    }


def _simulate_collection(points, trials, workers):
    started = time.perf_counter()
    records = _run_points(_collection_task, points, trials, workers)
    elapsed = (time.perf_counter() - started) / max(1, len(points))
    return [_collection_row(p, records[p['index']], elapsed) for p in points]


def _collection_points(experiment, n_sensors, k_active, n_messages, code_lengths, deltas, qs, decoder, seed,
                       exponent_cap, rr_participation, max_rounds, first_index=0):
    points = []
    grid = itertools.product(_grid(n_sensors, 'n_sensors'), _grid(k_active, 'k_active'),
                             _grid(n_messages, 'n_messages'), _grid(deltas, 'deltas'), _grid(qs, 'qs'),
                             _grid(code_lengths, 'code_lengths'))
    for n, k, c, delta, q, t in grid:
        index = first_index + len(points)
        if experiment == 'cdf':
            f, capped = 1, False
        else:
            f, capped = subbin_size(t, delta, k, exponent_cap)
        points.append(_identify({
            'index': index, 'experiment': experiment, 'n_sensors': n, 'k_active': k, 'n_messages': c,
            'code_length': t, 'delta': delta, 'q': q, 'n_subcodewords': f, 'subbin_capped': capped,
            'decoder': dict(decoder), 'seed': seed,
            'secure': experiment != 'cdf', 'rr_participation': rr_participation, 'max_rounds': max_rounds,
        }))
    return points


def run_cdf_experiment(n_sensors, k_active, n_messages, decoder, code_lengths, trials=_DEFAULT_TRIALS, seed=0,
                       q=0.0, rr_participation=1.0, max_rounds=1, workers=1, store=None):
    """Exact recovery frequency as a function of T.

    :param decoder: decoder config dict, e.g. ``{'type': 'ml', 'prefilter': True}``
    :param code_lengths: the T grid
    :param q: symmetric detector flip probability
    :param workers: processes; 1 runs in this process
    :param store: optional result store, see :mod:`boolmac.caches`
    :rtype: SweepResult
    """
    if trials < 1:
        raise ParameterError('trials_not_positive: %r' % trials)
    points = _collection_points('cdf', n_sensors, k_active, n_messages, code_lengths, (0.0,), q, decoder, seed,
                                _DEFAULT_SUBBIN_BITS_CAP, rr_participation, max_rounds)
    rows = _memoized('cdf', points, trials, seed, store, lambda ps: _simulate_collection(ps, trials, workers))
    add_monotone_column(rows)
    spec = SweepSpec('cdf', n_sensors, k_active, n_messages, code_lengths, (0.0,), q, (1,), (0.0,), decoder,
                     trials, seed)
    return SweepResult(rows, spec.to_dict(), CDF_COLUMNS)


def run_secure_cdf_experiment(n_sensors, k_active, n_messages, delta, decoder, code_lengths,
                              trials=_DEFAULT_TRIALS, seed=0, exponent_cap=_DEFAULT_SUBBIN_BITS_CAP, q=0.0,
                              workers=1, store=None):
    """:func:`run_cdf_experiment` over the sub-binned code, F from
    :func:`subbin_size`. A codebook larger than the memory cap raises
    :class:`~boolmac.CapacityError`.
    """
    if trials < 1:
        raise ParameterError('trials_not_positive: %r' % trials)
    points = _collection_points('secure_cdf', n_sensors, k_active, n_messages, code_lengths, delta, q, decoder,
                                seed, exponent_cap, 1.0, 1)
    rows = _memoized('secure_cdf', points, trials, seed, store, lambda ps: _simulate_collection(ps, trials, workers))
    add_monotone_column(rows)
    spec = SweepSpec('secure_cdf', n_sensors, k_active, n_messages, code_lengths, delta, q, (1,), (0.0,), decoder,
                     trials, seed)
    return SweepResult(rows, spec.to_dict(), CDF_COLUMNS)


# eavesdropper

def eve_decode(codebook, z, k, cap=_DEFAULT_ENUMERATION_CAP, max_rows=_EVE_ML_MAX_ROWS):
    """Best effort decoding of an erased outcome: CoMa restricted to the
    observed minislots, then ML over its survivors when at most ``max_rows``
    rows survive and the search stays under ``cap``.

    :returns: (DecodeResult, definite pairs, whether ML was used)
    """
    mask = observed_mask(z)
    y = observed_bits(z)
    survivors = coma_survivors(codebook, y, mask)
    result = summarize_survivors(codebook, survivors, y, mask)
    definite = definite_pairs(codebook, survivors, y, mask)
    if result.is_unique or len(survivors) > max_rows:
        return result, definite, False
    try:
        ml = decode_ml(codebook, y, k, prefilter=True, exact=True, mask=mask, cap=cap)
    except CapacityError:
        return result, definite, False
    diagnostics = dict(ml.diagnostics, surviving_pairs=result.diagnostics['surviving_pairs'])
    return DecodeResult(ml.estimate, ml.candidates_surviving, ml.status, diagnostics), definite, True


def _leakage_task(job):
    point, trials = job
    params = CodeParams(point['n_sensors'], point['k_active'], point['n_messages'], point['code_length'],
                        point['n_subcodewords'], seed=point['codebook_seed'])
    codebook = generate_codebook(params)
    cfg = SessionConfig(params, decoder={'type': 'secure', 'decoder': point['sink_decoder']})
    sink = cfg.make_decoder()
    eve = EveParams.from_delta(point['delta'])
    activation = ActivationModel('exact')
    records = []
    for trial in trials:
        seed = derive_seed(point['seed'], point['point_id'], trial)
        rng = np.random.default_rng(derive_seed(seed, 0))
        truth = activation.draw(params, rng)
        entries = encode(codebook, truth, rng)
        y = transmit(codebook, entries, cfg, derive_seed(seed, 1))
        try:
            sink_ok = sink.decode(codebook, y).matches(truth)
        except CapacityError:
            sink_ok = False
        z = eavesdrop(y, eve, derive_seed(seed, 2))
        result, definite, used_ml = eve_decode(codebook, z, params.k_active, point['eve_cap'])
        pairs = truth.pairs()
        recovered = set(definite)
        if result.is_unique:
            recovered |= result.estimate.pairs()
        records.append((sink_ok, result.matches(truth), bool(recovered & pairs),
                        result.diagnostics.get('surviving_pairs', 0), used_ml))
    return records


def chance_rate(n_sensors, k_active, n_messages):
    """Probability of guessing the whole active set and its messages"""
    return 2.0 ** -(log2_binomial(n_sensors, k_active) + k_active * math.log2(n_messages))


def _leakage_row(point, records, elapsed):
    trials = len(records)
    exact = sum(1 for r in records if r[1])
    low, high = wilson_interval(exact, trials)
    return {
        'experiment': 'leakage',
        'n_sensors': point['n_sensors'],
        'k_active': point['k_active'],
        'n_messages': point['n_messages'],
        'code_length': point['code_length'],
        'delta': point['delta'],
        'n_subcodewords': point['n_subcodewords'],
        'subbin_capped': point['subbin_capped'],
        'trials': trials,
        'sink_success_rate': sum(1 for r in records if r[0]) / float(trials),
        'eve_exact_rate': exact / float(trials),
        'eve_exact_low': low,
        'eve_exact_high': high,
        'eve_partial_rate': sum(1 for r in records if r[2]) / float(trials),
        'eve_mean_pairs': float(np.mean([r[3] for r in records])),
        'eve_ml_rate': sum(1 for r in records if r[4]) / float(trials),
        'chance_rate': chance_rate(point['n_sensors'], point['k_active'], point['n_messages']),
        'wall_time': elapsed,
    }


def run_leakage_experiment(n_sensors, k_active, n_messages, delta, code_length, trials=_DEFAULT_TRIALS, seed=0,
                           sink_decoder='coma', n_subcodewords=None, exponent_cap=_DEFAULT_SUBBIN_BITS_CAP,
                           eve_cap=_DEFAULT_ENUMERATION_CAP, workers=1, store=None):
    """How much an eavesdropper seeing a fraction ``delta`` of the minislots
    learns, next to the sink's success on the same trials.

    :param n_subcodewords: force F, by default :func:`subbin_size`
    :returns: :class:`SweepResult` with a single row
    """
    if trials < 1:
        raise ParameterError('trials_not_positive: %r' % trials)
    if not 0.0 <= delta <= 1.0:
        raise ParameterError('delta_out_of_range: %r' % delta)
    if n_subcodewords is None:
        f, capped = subbin_size(code_length, min(delta, 1.0 - 1e-12), k_active, exponent_cap)
    else:
        f, capped = int(n_subcodewords), False
    point = {
        'index': 0, 'n_sensors': n_sensors, 'k_active': k_active, 'n_messages': n_messages,
        'code_length': code_length, 'delta': delta, 'n_subcodewords': f, 'subbin_capped': capped,
        'sink_decoder': sink_decoder, 'eve_cap': eve_cap, 'seed': seed,
    }
    _identify(point)

    def simulate(points):
        started = time.perf_counter()
        records = _run_points(_leakage_task, points, trials, workers)
        return [_leakage_row(p, records[p['index']], time.perf_counter() - started) for p in points]

    rows = _memoized('leakage', [point], trials, seed, store, simulate)
    spec = SweepSpec('leakage', n_sensors, k_active, n_messages, code_length, delta, (0.0,), (1,), (0.0,),
                     {'type': sink_decoder}, trials, seed)
    return SweepResult(rows, spec.to_dict(), LEAKAGE_COLUMNS)


# bounds

def run_bound_sweeps(spec):
    """Length bounds over the grids of ``spec``, one row per
    (N, K, C, epsilon, delta, f_ch). Grid points with K > N are skipped.
    Where (1 + epsilon) delta >= 1 no secrecy length exists: the row is kept
    with ``feasible`` False and NaN in the secure columns.
    """
    rows = []
    grid = itertools.product(spec.n_sensors, spec.k_active, spec.n_messages, spec.epsilon, spec.deltas, spec.f_ch)
    for n, k, c, eps, delta, f_ch in grid:
        if k > n:
            continue
        bp = BoundParams(n, k, c, eps, delta)
        plain = bp._replace(delta=0.0)
        try:
            lemma2 = bound_T_lemma2(bp)
            secure_closed = closed_form_T(bp)
            minislots = ofdma_minislots(lemma2, f_ch)
            feasible = True
        except InfeasibleError:
            log.debug('no secrecy length for %r', bp)
            lemma2 = secure_closed = minislots = float('nan')
            feasible = False
        rows.append({
            'n_sensors': n,
            'k_active': k,
            'n_messages': c,
            'epsilon': eps,
            'delta': delta,
            'lemma1_T': bound_T_lemma1(plain),
            'lemma1_raw': bound_T_lemma1_raw(plain),
            'lemma2_T': lemma2,
            'closed_form_T': secure_closed,
            'closed_form_plain_T': closed_form_T(plain),
            'corollary_T': message_bits_order(n, k, math.log2(c)),
            'f_ch': f_ch,
            'ofdma_minislots': minislots,
            'feasible': feasible,
        })
    return SweepResult(rows, spec.to_dict(), BOUND_COLUMNS)


def run_sweep(spec, workers=1, store=None):
    """Dispatch a :class:`SweepSpec` to its experiment"""
    if spec.experiment == 'bounds':
        return run_bound_sweeps(spec)
    if spec.experiment == 'cdf':
        return run_cdf_experiment(spec.n_sensors, spec.k_active, spec.n_messages, spec.decoder, spec.code_lengths,
                                  spec.trials, spec.seed, spec.qs, workers=workers, store=store)
    if spec.experiment == 'secure_cdf':
        return run_secure_cdf_experiment(spec.n_sensors, spec.k_active, spec.n_messages, spec.deltas,
                                         spec.decoder, spec.code_lengths, spec.trials, spec.seed, workers=workers,
                                         store=store)
    rows = []
    for n, k, c, t, delta in itertools.product(spec.n_sensors, spec.k_active, spec.n_messages, spec.code_lengths,
                                               spec.deltas):
        rows.extend(run_leakage_experiment(n, k, c, delta, t, spec.trials, spec.seed,
                                           spec.decoder.get('decoder', spec.decoder['type']),
                                           workers=workers, store=store).rows)
    return SweepResult(rows, spec.to_dict(), LEAKAGE_COLUMNS)
