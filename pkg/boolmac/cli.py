""" Command line interface

    boolmac gen -N 500 -K 3 -C 10 -T 130 --seed 1 --out book.txt
    boolmac bound -N 500 -K 3 -C 10 --delta 0.1
    boolmac cdf -N 500 -K 3 -C 10 -T 60:140:5 --trials 4000 --seed 1 --out cdf.csv
"""
import argparse
import json
import logging
import math
import sys

from . import _LN2
from . import _DEFAULT_ENUMERATION_CAP
from . import _DEFAULT_SUBBIN_BITS_CAP
from . import _DEFAULT_TRIALS
from . import derive_seed
from . import seed_to_int
from . import BoolMacError
from . import ParameterError
from .bounds import BoundParams
from .bounds import bound_T_lemma1
from .bounds import bound_T_lemma1_raw
from .bounds import bound_T_lemma2
from .bounds import bound_T_lemma2_raw
from .bounds import closed_form_T
from .bounds import error_probability_bound
from .bounds import message_bits_order
from .bounds import ofdma_minislots
from .caches import create_cache_client
from .caches import parse_cache_url
from .codebook import CodeParams
from .codebook import dump
from .codebook import generate_codebook
from .experiments import SweepResult
from .experiments import SweepSpec
from .experiments import run_cdf_experiment
from .experiments import run_leakage_experiment
from .experiments import run_secure_cdf_experiment
from .experiments import run_sweep
from .experiments import subbin_size
from .experiments import wilson_interval
from .multihop import RoutingTree
from .multihop import build_tree_codebooks
from .multihop import draw_tree_activation
from .multihop import run_multihop_round
from .protocol import SessionConfig
from .protocol import dumps_trace
from .protocol import run_collection_round

log = logging.getLogger(__name__)

_LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'

_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG, 3: logging.DEBUG}


def setup_logging(verbosity=0, log_file=None):
    level = _LEVELS.get(min(verbosity, 3), logging.WARNING)
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    root = logging.getLogger('boolmac')
    root.handlers = []
    formatter = logging.Formatter(_LOG_FORMAT)
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)
    root.setLevel(level)
    if verbosity >= 3:
        logging.getLogger().setLevel(logging.DEBUG)


def parse_int_list(text):
    """``30,35,40`` or ``start:stop:step`` (stop included)"""
    try:
        if ':' in text:
            parts = [int(p) for p in text.split(':')]
            if len(parts) == 2:
                parts.append(1)
            start, stop, step = parts
            if step < 1:
                raise ValueError(text)
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(',') if p]
    except ValueError:
        raise argparse.ArgumentTypeError('bad integer list: %s' % text)


def parse_float_list(text):
    try:
        return [float(p) for p in text.split(',') if p]
    except ValueError:
        raise argparse.ArgumentTypeError('bad number list: %s' % text)


def parse_decoder(text):
    """``coma`` or a JSON object such as ``{"type": "ml", "prefilter": true}``"""
    if text.lstrip().startswith('{'):
        try:
            config = json.loads(text)
        except ValueError:
            raise argparse.ArgumentTypeError('bad decoder json: %s' % text)
        if 'type' not in config:
            raise argparse.ArgumentTypeError('decoder json needs a type')
        return config
    return {'type': text}


def _read_json(path):
    with open(path) as fp:
        return json.load(fp)


def _write(args, text):
    if args.out:
        with open(args.out, 'w') as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)


def _store(args):
    if not args.cache:
        return None
    return create_cache_client('boolmac', parse_cache_url(args.cache))


def _emit(args, result):
    if args.out:
        result.to_csv(args.out)
        log.info('wrote %d rows to %s', len(result), args.out)
    else:
        sys.stdout.write(result.dumps_csv())


def cmd_gen(args):
    f = args.subcodewords
    if args.delta:
        f, capped = subbin_size(args.code_length, args.delta, args.k_active, args.exponent_cap)
        if capped:
            log.warning('sub-bin exponent capped, F = %d', f)
    params = CodeParams(args.n_sensors, args.k_active, args.n_messages, args.code_length, f, seed=args.seed)
    codebook = generate_codebook(params)
    if args.out:
        with open(args.out, 'w') as fp:
            dump(codebook, fp)
    else:
        dump(codebook, sys.stdout)


def cmd_bound(args):
    bp = BoundParams(args.n_sensors, args.k_active, args.n_messages, args.epsilon, args.delta)
    plain = bp._replace(delta=0.0)
    record = {
        'lemma1_T': bound_T_lemma1(plain),
        'lemma1_raw': bound_T_lemma1_raw(plain),
        'lemma2_T': bound_T_lemma2(bp),
        'lemma2_raw': bound_T_lemma2_raw(bp),
        'closed_form_T': closed_form_T(bp),
        'corollary_T': message_bits_order(bp.n_sensors, bp.k_active, math.log2(bp.n_messages)),
        'ofdma_minislots': ofdma_minislots(bound_T_lemma2(bp), args.f_ch),
    }
    if args.code_length:
        record['error_probability_bound'] = error_probability_bound(plain, _LN2 / plain.k_active, args.code_length)
    _write(args, json.dumps(record, sort_keys=True) + '\n')


def _session_from_args(args):
    config = _read_json(args.config) if args.config else {}
    code = dict(config.get('code', {}))
    for key, value in (('n_sensors', args.n_sensors), ('k_active', args.k_active), ('n_messages', args.n_messages),
                       ('code_length', args.code_length), ('n_subcodewords', args.subcodewords)):
        if value is not None:
            code[key] = value
    code['seed'] = seed_to_int(derive_seed(args.seed, 0))
    config['code'] = code
    if args.q is not None:
        config['noise'] = {'q_false_pos': args.q, 'q_false_neg': args.q}
    if args.activation is not None:
        config['activation'] = {'kind': args.activation, 'rate': args.rate}
    if args.rr is not None:
        config['rr_participation'] = args.rr
    if args.max_rounds is not None:
        config['max_rounds'] = args.max_rounds
    if args.ack_definite:
        config['ack_definite'] = True
    if args.decoder is not None:
        config['decoder'] = args.decoder
    try:
        return SessionConfig.from_dict(config)
    except (KeyError, TypeError) as e:
        raise ParameterError('bad_session_config: %s' % e)


def cmd_simulate(args):
    cfg = _session_from_args(args)
    outcome = run_collection_round(cfg, args.seed)
    summary = {
        'summary': True,
        'truth': [list(e) for e in sorted(outcome.truth)],
        'result': outcome.result.to_record(),
        'rounds_used': outcome.rounds_used,
        'success': outcome.success,
    }
    _write(args, dumps_trace(outcome) + json.dumps(summary, sort_keys=True) + '\n')


def cmd_cdf(args):
    result = run_cdf_experiment(args.n_sensors, args.k_active, args.n_messages, args.decoder, args.code_lengths,
                                args.trials, args.seed, q=args.q or 0.0, rr_participation=args.rr or 1.0,
                                max_rounds=args.max_rounds or 1, workers=args.workers, store=_store(args))
    _emit(args, result)


def cmd_secure_cdf(args):
    result = run_secure_cdf_experiment(args.n_sensors, args.k_active, args.n_messages, args.delta, args.decoder,
                                       args.code_lengths, args.trials, args.seed, args.exponent_cap,
                                       q=args.q or 0.0, workers=args.workers, store=_store(args))
    _emit(args, result)


def cmd_leakage(args):
    result = run_leakage_experiment(args.n_sensors, args.k_active, args.n_messages, args.delta, args.code_length,
                                    args.trials, args.seed, args.sink_decoder, args.subcodewords, args.exponent_cap,
                                    args.eve_cap, workers=args.workers, store=_store(args))
    _emit(args, result)


def cmd_sweep(args):
    config = _read_json(args.config) if args.config else {}
    overrides = dict(experiment=args.experiment, n_sensors=args.n_sensors, k_active=args.k_active,
                     n_messages=args.n_messages, code_lengths=args.code_lengths, deltas=args.deltas, qs=args.qs,
                     f_ch=args.f_ch, epsilon=args.epsilon, decoder=args.decoder, trials=args.trials, seed=args.seed)
    config.update((k, v) for k, v in overrides.items() if v is not None)
    try:
        spec = SweepSpec.from_dict(config)
    except TypeError as e:
        raise ParameterError('bad_sweep_spec: %s' % e)
    _emit(args, run_sweep(spec, args.workers, _store(args)))


def cmd_multihop(args):
    if args.tree:
        with open(args.tree) as fp:
            tree = RoutingTree.loads(fp.read())
    else:
        tree = RoutingTree.random(args.clusters, args.depth, args.cluster_size, derive_seed(args.seed, 0))
    sensors = tree.sensors
    if sensors != list(range(len(sensors))):
        raise ParameterError('tree_sensors_not_contiguous')
    k = min(args.k_active, len(sensors))
    bound = bound_T_lemma1(BoundParams(len(sensors), k, args.n_messages))
    length = args.code_length or max(1, int(round(args.scale * bound)))
    sink_params = CodeParams(len(sensors), k, args.n_messages, length,
                             seed=seed_to_int(derive_seed(args.seed, 1)))
    sink_codebook = generate_codebook(sink_params)
    codebooks = build_tree_codebooks(tree, k, args.n_messages, derive_seed(args.seed, 2), scale=args.scale)
    combine = encode_decode = 0
    for trial in range(args.trials):
        seed = derive_seed(args.seed, 3, trial)
        active = draw_tree_activation(tree, k, args.n_messages, seed)
        outcome = run_multihop_round(tree, sink_codebook, codebooks, active, seed, args.decoder)
        combine += outcome.combine_result.matches(active)
        encode_decode += outcome.encode_decode_result.matches(active)
    rows = []
    for scheme, successes in (('combine_forward', combine), ('encode_decode_forward', encode_decode)):
        low, high = wilson_interval(successes, args.trials)
        rows.append({'scheme': scheme, 'nodes': len(tree.nodes), 'n_sensors': len(sensors), 'k_active': k,
                     'n_messages': args.n_messages, 'sink_code_length': length, 'trials': args.trials,
                     'success_rate': successes / float(args.trials), 'success_low': low, 'success_high': high})
    _emit(args, SweepResult(rows, {'tree': tree.dumps(), 'seed': args.seed, 'scale': args.scale}))


def _add_common(parser, seed_required=True):
    parser.add_argument('--seed', type=int, required=seed_required, help='base seed, required for reproducibility')
    parser.add_argument('--out', help='output path, standard output when missing')


def _add_code(parser, with_length=True, length_type=int):
    parser.add_argument('-N', '--n-sensors', dest='n_sensors', type=int)
    parser.add_argument('-K', '--k-active', dest='k_active', type=int)
    parser.add_argument('-C', '--n-messages', dest='n_messages', type=int)
    if with_length:
        parser.add_argument('-T', '--code-length', dest='code_length', type=length_type)


def _add_run(parser):
    parser.add_argument('--trials', type=int, default=_DEFAULT_TRIALS)
    parser.add_argument('--workers', type=int, default=1, help='worker processes')
    parser.add_argument('--cache', help='result store: null, memory or redis://host:port/db')


def build_parser():
    parser = argparse.ArgumentParser(prog='boolmac', description='Group testing data collection simulator')
    parser.add_argument('-v', '--verbosity', type=int, default=0, choices=range(4))
    parser.add_argument('--log-file')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('gen', help='write a codebook file')
    _add_code(p)
    p.add_argument('-F', '--subcodewords', type=int, default=1)
    p.add_argument('--delta', type=float, default=0.0, help='derive F from the eavesdropper fraction')
    p.add_argument('--exponent-cap', type=int, default=_DEFAULT_SUBBIN_BITS_CAP)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser('bound', help='print the length bounds')
    _add_code(p, with_length=False)
    p.add_argument('--epsilon', type=float, default=0.0)
    p.add_argument('--delta', type=float, default=0.0)
    p.add_argument('--f-ch', type=int, default=1, help='OFDMA subcarriers')
    p.add_argument('-T', '--code-length', dest='code_length', type=int,
                   help='also print the ML error probability bound at this length')
    _add_common(p, seed_required=False)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser('simulate', help='one collection session, trace to standard output')
    _add_code(p)
    p.add_argument('-F', '--subcodewords', type=int)
    p.add_argument('--config', help='session config JSON, flags override it')
    p.add_argument('--decoder', type=parse_decoder)
    p.add_argument('--q', type=float, help='symmetric detector flip probability')
    p.add_argument('--activation', choices=('exact', 'uniform', 'poisson'))
    p.add_argument('--rate', type=float, help='poisson activation mean')
    p.add_argument('--rr', type=float, help='RR participation probability')
    p.add_argument('--max-rounds', type=int)
    p.add_argument('--ack-definite', action='store_true',
                   help='acknowledge definite pairs of ambiguous rounds')
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('cdf', help='success rate against T')
    _add_code(p, length_type=parse_int_list)
    p.add_argument('--decoder', type=parse_decoder, default={'type': 'coma'})
    p.add_argument('--q', type=float)
    p.add_argument('--rr', type=float)
    p.add_argument('--max-rounds', type=int)
    _add_run(p)
    _add_common(p)
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser('secure-cdf', help='success rate of the sub-binned code against T')
    _add_code(p, length_type=parse_int_list)
    p.add_argument('--delta', type=float, required=True)
    p.add_argument('--decoder', type=parse_decoder, default={'type': 'coma'})
    p.add_argument('--q', type=float)
    p.add_argument('--exponent-cap', type=int, default=_DEFAULT_SUBBIN_BITS_CAP)
    _add_run(p)
    _add_common(p)
    p.set_defaults(func=cmd_secure_cdf)

    p = sub.add_parser('leakage', help='what an eavesdropper recovers')
    _add_code(p)
    p.add_argument('--delta', type=float, required=True)
    p.add_argument('-F', '--subcodewords', type=int, help='force F instead of deriving it')
    p.add_argument('--sink-decoder', choices=('coma', 'ml'), default='coma')
    p.add_argument('--exponent-cap', type=int, default=_DEFAULT_SUBBIN_BITS_CAP)
    p.add_argument('--eve-cap', type=int, default=_DEFAULT_ENUMERATION_CAP)
    _add_run(p)
    _add_common(p)
    p.set_defaults(func=cmd_leakage)

    p = sub.add_parser('sweep', help='run a sweep spec')
    p.add_argument('--config', help='sweep spec JSON, flags override it')
    p.add_argument('--experiment', choices=('cdf', 'secure_cdf', 'leakage', 'bounds'))
    p.add_argument('-N', '--n-sensors', dest='n_sensors', type=parse_int_list)
    p.add_argument('-K', '--k-active', dest='k_active', type=parse_int_list)
    p.add_argument('-C', '--n-messages', dest='n_messages', type=parse_int_list)
    p.add_argument('-T', '--code-lengths', dest='code_lengths', type=parse_int_list)
    p.add_argument('--deltas', type=parse_float_list)
    p.add_argument('--qs', type=parse_float_list)
    p.add_argument('--f-ch', type=parse_int_list)
    p.add_argument('--epsilon', type=parse_float_list)
    p.add_argument('--decoder', type=parse_decoder)
    p.add_argument('--trials', type=int)
    p.add_argument('--workers', type=int, default=1)
    p.add_argument('--cache')
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('multihop', help='both relay schemes on a routing tree')
    p.add_argument('--tree', help='routing tree file, a random tree when missing')
    p.add_argument('--clusters', type=int, default=8)
    p.add_argument('--depth', type=int, default=3)
    p.add_argument('--cluster-size', type=int, default=10)
    p.add_argument('-K', '--k-active', dest='k_active', type=int, default=4)
    p.add_argument('-C', '--n-messages', dest='n_messages', type=int, default=1)
    p.add_argument('-T', '--code-length', dest='code_length', type=int,
                   help='sink T, scale times the bound when missing')
    p.add_argument('--scale', type=float, default=6.0, help='T of every node as a multiple of its bound')
    p.add_argument('--decoder', type=parse_decoder, default={'type': 'coma'})
    p.add_argument('--trials', type=int, default=500)
    _add_common(p)
    p.set_defaults(func=cmd_multihop)
    return parser


_REQUIRED_CODE = {
    'gen': ('n_sensors', 'k_active', 'n_messages', 'code_length'),
    'bound': ('n_sensors', 'k_active', 'n_messages'),
    'cdf': ('n_sensors', 'k_active', 'n_messages', 'code_length'),
    'secure-cdf': ('n_sensors', 'k_active', 'n_messages', 'code_length'),
    'leakage': ('n_sensors', 'k_active', 'n_messages', 'code_length'),
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    missing = [name for name in _REQUIRED_CODE.get(args.command, ()) if getattr(args, name, None) is None]
    if missing:
        parser.error('%s requires %s' % (args.command, ', '.join('--' + m.replace('_', '-') for m in missing)))
    if args.command in ('cdf', 'secure-cdf'):
        args.code_lengths = args.code_length
    if getattr(args, 'trials', None) is not None and args.trials < 1:
        parser.error('--trials must be positive')
    if getattr(args, 'seed', None) is not None and args.seed < 0:
        parser.error('--seed must be non-negative')
    setup_logging(args.verbosity, args.log_file)
    try:
        args.func(args)
    except BoolMacError as e:
        sys.stderr.write('boolmac: %s\n' % e)
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
