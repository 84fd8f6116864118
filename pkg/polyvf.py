#!/usr/bin/env python3
"""
polyvf: Lie algebras of polynomial vector fields on affine varieties

Command-line front end. Each subcommand reads a variety (from --vars and
--ideal, or a variety file), runs one analysis in exact rational arithmetic
and prints a text or JSON report on stdout. Diagnostics go to stderr.

Exit codes: 0 success, 1 a check or certificate failed, 2 bad input.
"""

__version__ = "0.1.0"

import json
import logging
import os
import sys
import argparse
from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Optional, Tuple

import jsonschema

from alggroup import (GroupContext, commutation_check, gamma_kronecker_check, independent_at_identity,
                      roundtrip_check, structure_check)
from hyperelliptic import (HyperellipticCurve, kernel_ad_bounded, module_generators, not_in_image_check,
                           smoothness_gcd)
from polyparse import ParseError, parse_point, parse_polynomial, validate_variables
from properties import run_suites
from sphere import SphereContext, generation_check, harmonic_dimension, harmonic_dimension_formula, sl_bracket_check
from variety import Variety, dimension, format_point, is_smooth, jacobian_rank, load_variety, singular_ideal
from vecfield import (DEFAULT_SWEEP_HEIGHT, CertificateNotFound, VectorField, WitnessNotFound, ample_witness,
                      derivation_module_generators, filtration_depth, global_one_certificate,
                      nonzero_second_derivative, singular_invariance_check)

LIBRARY_LOGGERS = ('poly', 'polyparse', 'groebner', 'linalg', 'variety', 'vecfield',
                   'sphere', 'hyperelliptic', 'alggroup', 'properties')

REPORT_SCHEMA_VERSION = 1

# Configuration schema
CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "jet_order": {"type": "integer", "minimum": 1},
        "jet_order_cap": {"type": "integer", "minimum": 1},
        "degree_bound": {"type": "integer", "minimum": 1},
        "word_bound": {"type": "integer", "minimum": 1},
        "sweep_height": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "instances": {"type": "integer", "minimum": 1},
        "output_format": {"type": "string", "enum": ["text", "json"]},
        "log_level": {"type": "string", "enum": ["DEBUG", "INFO", "WARNING", "ERROR"]}
    },
    "additionalProperties": False
}

# Report schema
REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "schema": {"const": REPORT_SCHEMA_VERSION},
        "command": {
            "type": "string",
            "enum": ["smooth", "generators", "bracket", "witness", "simplicity", "filtration",
                     "sphere", "curve", "group", "selftest"]
        },
        "ok": {"type": "boolean"},
        "result": {"type": "object"},
        "error": {"type": "string"}
    },
    "required": ["schema", "command", "ok", "result"],
    "additionalProperties": False
}

logger = logging.getLogger('polyvf')


@dataclass
class Config:
    jet_order: int = 6
    jet_order_cap: int = 48
    degree_bound: int = 12
    word_bound: int = 4
    sweep_height: int = DEFAULT_SWEEP_HEIGHT
    seed: int = 0
    instances: int = 200
    output_format: str = 'text'
    log_level: str = 'WARNING'

    @classmethod
    def load(cls, path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> 'Config':
        """Defaults, then the JSON file at path, then non-None overrides."""
        values: Dict[str, Any] = {}
        if path:
            try:
                with open(path, 'r') as f:
                    values = json.load(f)
                jsonschema.validate(values, CONFIG_SCHEMA)
            except FileNotFoundError:
                logger.error(f"Config file {path} not found")
                raise
            except json.JSONDecodeError as e:
                logger.error(f"Error parsing config file: {e}")
                raise
            except jsonschema.ValidationError as e:
                logger.error(f"Configuration validation failed: {e.message}")
                raise
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = value
        jsonschema.validate(values, CONFIG_SCHEMA)
        return cls(**values)

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


def _setup_logging(level: str) -> logging.Logger:
    """Setup logging configuration."""
    formatter = logging.Formatter(
        '%(asctime)s - [%(name)s] - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S %Z'
    )
    for name in ('polyvf',) + LIBRARY_LOGGERS:
        lg = logging.getLogger(name)
        lg.setLevel(getattr(logging, level.upper()))
        lg.propagate = False
        if not lg.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(formatter)
            lg.addHandler(handler)
    return logging.getLogger('polyvf')


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------

def _variety(args) -> Variety:
    if getattr(args, 'variety', None):
        return load_variety(args.variety)
    if not args.vars:
        raise ValueError("Give a variety with --variety FILE or --vars/--ideal")
    variables = validate_variables(args.vars.replace(',', ' ').split())
    gens = [parse_polynomial(text, variables) for text in (args.ideal or '').split(';') if text.strip()]
    return Variety(variables, gens)


def _points(text: Optional[str], X: Variety) -> List[Tuple]:
    if not text:
        return []
    return [parse_point(p, X.n) for p in text.split(';') if p.strip()]


def _field(X: Variety, text: Optional[str], option: str) -> VectorField:
    if not text:
        raise ValueError(f"{option} is required")
    return VectorField.parse(X, text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------
# Each returns (ok, result, text lines).

Outcome = Tuple[bool, Dict[str, Any], List[str]]


def cmd_smooth(args, config: Config) -> Outcome:
    X = _variety(args)
    cert = is_smooth(X)
    result = {
        'smooth': cert.smooth,
        'dimension': dimension(X),
        'jacobian_rank': jacobian_rank(X),
        'singular_ideal': [str(d) for d in singular_ideal(X)],
    }
    lines = [f"smooth: {'true' if cert.smooth else 'false'}", f"dimension: {result['dimension']}"]
    if cert.smooth:
        result['certificate'] = {'generators': [str(g) for g in cert.generators],
                                 'cofactors': [str(q) for q in cert.cofactors]}
        terms = [f"({q})*({g})" for q, g in zip(cert.cofactors, cert.generators) if not q.is_zero()]
        lines.append(f"certificate: 1 = {' + '.join(terms)}")
    else:
        lines.append(f"singular ideal: {', '.join(result['singular_ideal'])}")
    return True, result, lines


def cmd_generators(args, config: Config) -> Outcome:
    X = _variety(args)
    gens = derivation_module_generators(X, with_relations=args.relations)
    lines = [str(g) for g in gens.generators]
    if args.relations:
        lines += [f"relation: {', '.join(str(a) for a in r)}" for r in gens.relations]
    return True, gens.to_json(), lines


def cmd_bracket(args, config: Config) -> Outcome:
    X = _variety(args)
    eta, mu = _field(X, args.eta, '--eta'), _field(X, args.mu, '--mu')
    value = eta.bracket(mu)
    return True, {'eta': str(eta), 'mu': str(mu), 'bracket': str(value)}, [str(value)]


def cmd_witness(args, config: Config) -> Outcome:
    X = _variety(args)
    eta = _field(X, args.field, '--field')
    points = _points(args.point, X)
    if len(points) != 1:
        raise ValueError("--point must give exactly one point")
    w = ample_witness(X, points[0], eta, config.jet_order, config.jet_order_cap)
    g, second = nonzero_second_derivative(w.mu)
    result = w.to_json()
    result['second_derivative'] = {'g': str(g), 'value': str(second)}
    lines = [f"point: {format_point(w.point)}", f"exponents: {list(w.exponents)}",
             f"mu: {w.mu}", f"mu({w.f})(P) = {w.value}", f"mu(mu({g})) = {second}"]
    return True, result, lines


def cmd_simplicity(args, config: Config) -> Outcome:
    X = _variety(args)
    eta = _field(X, args.field, '--field')
    cert = global_one_certificate(X, eta, _points(args.points, X), config.jet_order, config.jet_order_cap,
                                  sweep_height=config.sweep_height)
    lines = [f"points: {'; '.join(format_point(loc.point) for loc in cert.locals)}",
             f"certificate: 1 = {cert.expand()}"]
    return True, cert.to_json(), lines


def cmd_filtration(args, config: Config) -> Outcome:
    X = _variety(args)
    invariant = singular_invariance_check(X)
    result: Dict[str, Any] = {'invariant': invariant}
    lines = [f"singular ideal invariant: {'true' if invariant else 'false'}"]
    if args.field:
        eta = _field(X, args.field, '--field')
        depth = filtration_depth(X, eta, args.max_power)
        result['field'] = str(eta)
        result['depth'] = depth
        lines.append(f"depth: {depth if depth is not None else f'> {args.max_power}'}")
    return invariant, result, lines


def cmd_sphere(args, config: Config) -> Outcome:
    ctx = SphereContext(args.n)
    result: Dict[str, Any] = {'N': args.n}
    lines = []
    ok = True
    if args.table:
        table = sl_bracket_check(ctx)
        result['table'] = table
        ok = ok and table['ok']
        lines.append(f"sl table: {table['pairs']} pairs, {len(table['failures'])} failures")
    if args.level is not None:
        report = generation_check(ctx, args.level, args.direction)
        dims = {'computed': harmonic_dimension(args.n, report.target_level),
                'formula': harmonic_dimension_formula(args.n, report.target_level)}
        result['generation'] = report.to_json()
        result['dimension'] = dims
        ok = ok and report.ok and dims['computed'] == dims['formula']
        lines.append(f"generation {args.direction} from level {args.level}: "
                     f"rank {report.rank} of {report.target_dimension}")
    return ok, result, lines


def cmd_curve(args, config: Config) -> Outcome:
    if args.curve:
        with open(args.curve, 'r') as f:
            lines_in = [ln for ln in f.read().splitlines() if ln.strip() and not ln.strip().startswith('#')]
        if not lines_in:
            raise ValueError(f"{args.curve} holds no 'h:' line")
        C = HyperellipticCurve.from_line(lines_in[0])
    else:
        C = HyperellipticCurve.from_line(args.h or '')
    d = smoothness_gcd(C)
    gens = module_generators(C)
    result: Dict[str, Any] = {'h': str(C.h), 'm': C.m, 'gcd': str(d), 'smooth': d == 1,
                              'generators': [str(g) for g in gens.fields]}
    lines = [f"gcd(h, h'): {d}", f"smooth: {'true' if d == 1 else 'false'}"]
    lines += [f"generator: {g}" for g in gens.fields]
    ok = True
    if d == 1:
        f = C.one()
        kernel = kernel_ad_bounded(C, f, config.degree_bound)
        image = not_in_image_check(C, f, config.degree_bound)
        result['kernel'] = [str(k) for k in kernel]
        result['image'] = image.to_json()
        ok = len(kernel) == 1 and image.ok
        lines.append(f"kernel of ad(tau) up to degree {config.degree_bound}: {len(kernel)} dimensional")
        lines.append(f"image checks: {'pass' if image.ok else 'fail'}")
    return ok, result, lines


def cmd_group(args, config: Config) -> Outcome:
    ctx = GroupContext(args.n, allow_slow=args.slow)
    structure = structure_check(ctx)
    result = {
        'n': ctx.n,
        'commute': commutation_check(ctx),
        'structure': structure.to_json(),
        'kronecker': gamma_kronecker_check(ctx),
        'independent': independent_at_identity(ctx),
        'roundtrip': roundtrip_check(ctx, derivation_module_generators(ctx.variety).generators),
    }
    ok = result['commute'] and structure.ok and result['kronecker'] and result['independent'] and result['roundtrip']
    lines = [f"{key}: {'true' if result[key] else 'false'}"
             for key in ('commute', 'kronecker', 'independent', 'roundtrip')]
    lines.insert(1, f"structure constants: {'match' if structure.ok else 'mismatch'}")
    return ok, result, lines


def cmd_selftest(args, config: Config) -> Outcome:
    results = run_suites(args.suite or None, config.instances, config.seed)
    ok = all(r.ok for r in results)
    lines = [f"{r.name}: {r.instances} instances, {'ok' if r.ok else 'FAILED'}" for r in results]
    for r in results:
        lines += [f"  {failure}" for failure in r.failures]
    return ok, {'suites': [r.to_json() for r in results]}, lines


COMMANDS = {
    'smooth': cmd_smooth,
    'generators': cmd_generators,
    'bracket': cmd_bracket,
    'witness': cmd_witness,
    'simplicity': cmd_simplicity,
    'filtration': cmd_filtration,
    'sphere': cmd_sphere,
    'curve': cmd_curve,
    'group': cmd_group,
    'selftest': cmd_selftest,
}


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--config',
        default=os.environ.get('POLYVF_CONFIG'),
        help='Path to configuration JSON file (env: POLYVF_CONFIG)'
    )
    common.add_argument(
        '--format',
        dest='output_format',
        choices=['text', 'json'],
        default=None,
        help='Report format (default: text)'
    )
    common.add_argument(
        '--jet-order',
        type=int,
        default=os.environ.get('POLYVF_JET_ORDER'),
        help='Initial jet order (env: POLYVF_JET_ORDER, default: 6)'
    )
    common.add_argument(
        '--seed',
        type=int,
        default=os.environ.get('POLYVF_SEED'),
        help='Random seed for property suites (env: POLYVF_SEED, default: 0)'
    )
    common.add_argument(
        '--degree-bound',
        type=int,
        default=None,
        help='Degree window for bounded checks (default: 12)'
    )
    common.add_argument(
        '--log-level',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        default=os.environ.get('LOG_LEVEL'),
        help='Logging level (env: LOG_LEVEL, default: WARNING)'
    )

    variety = argparse.ArgumentParser(add_help=False)
    variety.add_argument('--vars', help='Ambient variable names, space separated')
    variety.add_argument('--ideal', help="Ideal generators separated by ';'")
    variety.add_argument('--variety', help='Variety file (alternative to --vars/--ideal)')

    parser = argparse.ArgumentParser(
        prog='polyvf',
        description='Lie algebras of polynomial vector fields on affine varieties'
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('smooth', parents=[common, variety], help='Jacobian criterion with certificate')
    p = sub.add_parser('generators', parents=[common, variety], help='Generators of the derivation module')
    p.add_argument('--relations', action='store_true', help='Also list relations among the generators')
    p = sub.add_parser('bracket', parents=[common, variety], help='Lie bracket of two fields')
    p.add_argument('--eta', help="First field, components separated by ','")
    p.add_argument('--mu', help='Second field')
    p = sub.add_parser('witness', parents=[common, variety], help='Ample witness at a nonsingular point')
    p.add_argument('--field', help='Seed field')
    p.add_argument('--point', help="Point, coordinates separated by ','")
    p = sub.add_parser('simplicity', parents=[common, variety], help='Certificate that 1 is reached from a seed')
    p.add_argument('--field', help='Seed field')
    p.add_argument('--points', help="Sample points separated by ';'")
    p = sub.add_parser('filtration', parents=[common, variety], help='Singular-locus invariance and filtration')
    p.add_argument('--field', help='Field whose filtration depth to compute')
    p.add_argument('--max-power', type=int, default=6, help='Largest power of the singular ideal (default: 6)')
    p = sub.add_parser('sphere', parents=[common], help='Harmonics and the sl_N action on the sphere')
    p.add_argument('--n', type=int, default=3, help='Ambient dimension N (default: 3)')
    p.add_argument('--level', type=int, help='Harmonic level for the generation check')
    p.add_argument('--direction', choices=['up', 'down'], default='up')
    p.add_argument('--table', action='store_true', help='Check the full sl_N bracket table')
    p = sub.add_parser('curve', parents=[common], help='Hyperelliptic curve y^2 = 2h(x)')
    p.add_argument('--h', help='h as a polynomial in x')
    p.add_argument('--curve', help="File with an 'h: <polynomial>' line")
    p = sub.add_parser('group', parents=[common], help='Invariant fields on SL_n')
    p.add_argument('--n', type=int, default=2, help='Matrix size (default: 2)')
    p.add_argument('--slow', action='store_true', help='Allow n = 3')
    p = sub.add_parser('selftest', parents=[common], help='Randomized property suites')
    p.add_argument('--suite', action='append', help='Run only this suite (repeatable)')
    return parser


def _emit(command: str, ok: bool, result: Dict[str, Any], lines: List[str], config: Config,
          error: Optional[str] = None) -> None:
    if config.output_format == 'json':
        report: Dict[str, Any] = {'schema': REPORT_SCHEMA_VERSION, 'command': command, 'ok': ok, 'result': result}
        if error:
            report['error'] = error
        jsonschema.validate(report, REPORT_SCHEMA)
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
    else:
        for line in lines:
            print(line)
        if error:
            print(f"error: {error}")


def _emit_input_error(command: str, config: Config, error: str) -> None:
    if config.output_format == 'json':
        _emit(command, False, {}, [], config, error=error)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    overrides = {
        'jet_order': args.jet_order,
        'seed': args.seed,
        'degree_bound': args.degree_bound,
        'output_format': args.output_format,
        'log_level': args.log_level,
    }
    try:
        config = Config.load(args.config, overrides)
    except (OSError, ValueError, jsonschema.ValidationError) as e:
        _setup_logging('WARNING')
        logger.error(f"Invalid configuration: {e}")
        return 2
    _setup_logging(config.log_level)
    logger.debug(f"Configuration: {config.to_json()}")

    try:
        ok, result, lines = COMMANDS[args.command](args, config)
    except ParseError as e:
        logger.error(f"Parse error: {e}")
        _emit_input_error(args.command, config, f"parse error: {e}")
        return 2
    except (CertificateNotFound, WitnessNotFound) as e:
        _emit(args.command, False, {}, [], config, error=str(e))
        return 1
    except (ValueError, OSError) as e:
        logger.error(f"{e}")
        _emit_input_error(args.command, config, str(e))
        return 2
    except Exception as e:
        logger.error(f"Fatal error: {e}")
        return 1

    _emit(args.command, ok, result, lines, config)
    return 0 if ok else 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
