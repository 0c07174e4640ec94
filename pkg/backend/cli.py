"""
MCWC Toolkit - command-line front end

Subcommands: construct, verify, design, bound, table, curves, puf-sim.
Exit status: 0 success, 1 verification failure, 2 usage or precondition
error, 3 internal consistency violation. Every failure prints a single
'error: <code>: <message>' line on stderr.
"""
import argparse
import json
import logging
import os
import sys

from modules import __version__
from modules import recipes
from modules.asymptotics import CURVE_NAMES, curves_write, delta_grid, emit_curves, ordering_violations
from modules.code_core import (INFINITY, BinaryCode, QaryCode, WeightProfile, code_dumps, code_read,
                               verify_code)
from modules.config import settings
from modules.designs import design_dumps, design_read, design_write, verify_design
from modules.errors import (EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, CodeFormatError, ConsistencyError,
                            McwcError, SimulationError)
from modules.manifest import RunManifest
from modules.puf_sim import device_load, device_new, device_save, distance_summary, population_sweep, sweep_write
from modules.tabulator import grid_cells, parse_range, table_build, table_write

logger = logging.getLogger('mcwc')


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors are one line and exit 2"""

    def error(self, message):
        self.exit(EXIT_USAGE, f"error: usage: {' '.join(message.split())}\n")


def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument('--seed', type=int, default=default, help='base seed for every random stream')
    parser.add_argument('--threads', type=int, default=default, help='worker threads')
    parser.add_argument('--budget', type=int, default=default, help='node budget per exact search')
    parser.add_argument('--out', default=default, help='output file (stdout when omitted)')


def _seed(args):
    return getattr(args, 'seed', None) or 0


def load_code(uri):
    """builtin:<name>, rs:<q>:<length>:<d> or a code file path"""
    if uri.startswith(('builtin:', 'rs:')):
        return recipes.resolve(uri)
    if not os.path.exists(uri):
        raise CodeFormatError(f"no such code file {uri!r}")
    return code_read(uri)


def _manifest(args, params, inputs=()):
    manifest = RunManifest(args.command, params=params, seeds={'seed': _seed(args)})
    for uri in inputs:
        if uri and os.path.exists(uri):
            manifest.add_input(uri)
    return manifest


def _emit_text(args, text):
    out = getattr(args, 'out', None)
    if out:
        with open(out, 'w') as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def cmd_construct(args):
    result, inputs = recipes.run(args.method, vars(args), load_code, design_read)
    params = {k: v for k, v in vars(args).items() if k not in ('command', 'handler', 'out')}
    manifest = _manifest(args, params, inputs)
    if isinstance(result, QaryCode):
        text = code_dumps(result, comments=manifest.comment_lines())
        summary = f"size={len(result)} q={result.q} length={result.length} d={result.claimed_distance}"
    else:
        comments = [f"provenance: {result.provenance}"] + manifest.comment_lines()
        text = code_dumps(result.code, comments=comments)
        info = result.summary()
        summary = (f"size={info['size']} length={info['length']} d={info['guaranteed_distance']} "
                   f"verified_d={info['verified_distance']} profile={info['profile']} "
                   f"provenance={info['provenance']}")
    if args.out:
        _emit_text(args, text)
        print(summary)
    else:
        sys.stdout.write(text)
        print(f"# {summary}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _block_report(code):
    profile = code.profile
    blocks = []
    for index, (n, w) in enumerate(profile.parts):
        bad = sum(1 for word in code.words if profile.block_weights(word)[index] != w)
        blocks.append({'block': index, 'n': n, 'w': w, 'violations': bad})
    return blocks


def cmd_verify(args):
    code = load_code(args.path)
    if args.d is not None or args.profile is not None:
        profile = WeightProfile.parse(args.profile) if args.profile is not None else code.profile
        if isinstance(code, BinaryCode):
            code = code.with_claim(args.d, profile)
        elif args.d is not None:
            code = code.with_claim(args.d)
    report = verify_code(code)
    data = report.to_dict()
    if isinstance(code, BinaryCode) and code.profile is not None:
        data['blocks'] = _block_report(code)
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        status = 'PASS' if report.passed else 'FAIL'
        print(f"{status} size={data['size']} length={data['length']} claimed_d={data['claimed_distance']} "
              f"min_d={data['min_distance']} profile={data['profile']}")
        if not report.distance_ok and report.closest_pair:
            i, j = report.closest_pair
            words = code.strings() if isinstance(code, BinaryCode) else [','.join(map(str, w)) for w in code.words]
            print(f"violating pair: #{i} {words[i]} / #{j} {words[j]} at distance {data['min_distance']}")
        for block in data.get('blocks', []):
            state = 'ok' if not block['violations'] else f"{block['violations']} words off weight"
            print(f"block {block['block']}: n={block['n']} w={block['w']} {state}")
    return EXIT_OK if report.passed else EXIT_VERIFICATION


# ---------------------------------------------------------------------------
# design
# ---------------------------------------------------------------------------

def cmd_design(args):
    if args.action == 'verify':
        design = design_read(args.path)
    else:
        design = recipes.design_from_params(vars(args))
    report = verify_design(design)
    stream = sys.stdout
    if args.action == 'generate':
        if args.out:
            design_write(args.out, design)
        else:
            sys.stdout.write(design_dumps(design))
            stream = sys.stderr
    print(json.dumps(report, sort_keys=True), file=stream)
    return EXIT_OK if report['valid'] else EXIT_VERIFICATION


# ---------------------------------------------------------------------------
# bound / table
# ---------------------------------------------------------------------------

def cmd_bound(args):
    cell = (args.m, args.n, args.d, args.w)
    budget = args.settings.node_budget
    table = table_build([cell], exact=args.exact, budget=budget, threads=1)
    lower, upper = table.best(cell)
    flag = ' exact' if lower.value == upper.value else ''
    upper_text = 'inf' if upper.value == INFINITY else int(upper.value)
    lines = [f"lower={int(lower.value)} upper={upper_text}{flag}"]
    if args.records:
        for record in sorted(table.records(cell), key=lambda r: (r.kind, str(r.value), r.provenance)):
            lines.append(f"  {record.kind} {record.to_dict()['value']} {record.provenance}")
    manifest = _manifest(args, {'m': args.m, 'n': args.n, 'd': args.d, 'w': args.w,
                                'exact': args.exact, 'budget': budget})
    _emit_text(args, '\n'.join(lines) + '\n' + manifest.comment_block())
    return EXIT_OK


def cmd_table(args):
    d_values = parse_range(args.d) if args.d else None
    cells = grid_cells(parse_range(args.m), parse_range(args.n), parse_range(args.w), d_values)
    budget, threads = args.settings.node_budget, args.settings.threads
    table = table_build(cells, exact=not args.no_exact, budget=budget, threads=threads)
    manifest = _manifest(args, {'m': args.m, 'n': args.n, 'w': args.w, 'd': args.d,
                                'exact': not args.no_exact, 'budget': budget, 'threads': threads})
    if getattr(args, 'out', None):
        table_write(table, args.out, manifest)
    else:
        sys.stdout.write(manifest.comment_block())
        table.to_frame().to_csv(sys.stdout, index=False)
    return EXIT_OK


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

def cmd_curves(args):
    curves = [c.strip() for c in args.curves.split(',')] if args.curves else None
    frame = emit_curves(delta_grid(args.grid_start, args.grid_end, args.grid_step), curves)
    violations = ordering_violations(frame)
    manifest = _manifest(args, {'grid_start': args.grid_start, 'grid_end': args.grid_end,
                                'grid_step': args.grid_step, 'curves': curves or list(CURVE_NAMES)})
    if getattr(args, 'out', None):
        curves_write(frame, args.out, manifest)
    else:
        sys.stdout.write(manifest.comment_block())
        frame[['curve', 'delta', 'rate']].to_csv(sys.stdout, index=False, float_format='%.6g')
    if violations:
        raise ConsistencyError(f"{len(violations)} curve ordering violations, first {violations[0]}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# puf-sim
# ---------------------------------------------------------------------------

def _device_shape(args, code):
    profile = code.profile
    m = args.m if args.m is not None else (profile.m if profile is not None and profile.is_homogeneous() else None)
    n = args.n if args.n is not None else (profile.lengths[0] if m is not None and profile is not None else None)
    if m is None or n is None:
        raise SimulationError("give --m and --n for codes without a homogeneous profile")
    return m, n


def cmd_puf_sim(args):
    code = load_code(args.code)
    if not isinstance(code, BinaryCode):
        raise SimulationError("PUF control words must come from a binary code")
    seed = _seed(args)
    if args.device_in:
        devices = [device_load(args.device_in)]
    else:
        m, n = _device_shape(args, code)
        devices = [device_new(m, n, args.mu, args.s_eps, seed + k) for k in range(args.devices)]
    if args.device_out:
        device_save(devices[0], args.device_out)
    noise = args.noise if args.noise is not None else devices[0].s_eps
    frame = population_sweep(devices, code, noise, args.trials, seed=seed,
                             threads=args.settings.threads)
    manifest = _manifest(args, {'code': args.code, 'mu': args.mu, 's_eps': devices[0].s_eps, 'noise': noise,
                                'trials': args.trials, 'devices': len(devices)},
                         [args.code, args.device_in])
    if getattr(args, 'out', None):
        sweep_write(frame, args.out, manifest)
    else:
        sys.stdout.write(manifest.comment_block())
        for row in distance_summary(frame).itertuples(index=False):
            sys.stdout.write(f"# summary: distance={row.distance} mean_flip_rate={row.mean_flip_rate:.6g} "
                             f"pairs={row.pairs}\n")
        frame[['pair_index', 'distance', 'flip_rate']].to_csv(sys.stdout, index=False, float_format='%.6g',
                                                              na_rep='nan')
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog='mcwc', description='Multiply constant-weight code toolkit')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--log-level', default=None, help='logging level (default from MCWC_LOG_LEVEL)')
    _global_flags(parser, suppress=False)
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('construct', parents=[common], help='build and verify a code')
    p.add_argument('method', choices=['concat', 'pseudo-product', 'complement', 'append',
                                      'qary-expand', 'rs', 'design'])
    p.add_argument('--outer', help='outer q-ary code (file or rs:<q>:<len>:<d>)')
    p.add_argument('--inner', help='inner constant-weight code')
    p.add_argument('--cwc', help='systematic constant-weight code')
    p.add_argument('--sys', help='systematic binary code')
    p.add_argument('--code', help='input code')
    p.add_argument('--k', type=int, help='information bits for append')
    p.add_argument('--w', type=int, help='symbols per block for q-ary expansion')
    p.add_argument('--q', type=int, help='field order (rs) or affine plane order (design)')
    p.add_argument('--len', type=int, help='Reed-Solomon length')
    p.add_argument('--d', type=int, help='Reed-Solomon distance')
    p.add_argument('--expand', action='store_true', help='expand the Reed-Solomon code to an MCWC')
    p.add_argument('--family', choices=['affine', 'one-factorization'])
    p.add_argument('--v', type=int, help='points of a one-factorization')
    p.add_argument('--file', help='design file')
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser('verify', parents=[common], help='check a code file against its claims')
    p.add_argument('path', help='code file or builtin:<name>')
    p.add_argument('--d', type=int, help='distance claim (overrides the header)')
    p.add_argument('--profile', help="profile claim 'n1:w1,n2:w2,...' (overrides the header)")
    p.add_argument('--json', action='store_true', help='machine-readable report')
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser('design', parents=[common], help='generate or verify resolvable designs')
    p.add_argument('action', choices=['generate', 'verify'])
    p.add_argument('path', nargs='?', help='design file (verify)')
    p.add_argument('--family', choices=['affine', 'one-factorization'])
    p.add_argument('--q', type=int)
    p.add_argument('--v', type=int)
    p.set_defaults(handler=cmd_design)

    p = sub.add_parser('bound', parents=[common], help='best bounds for one cell M(m,n,d,w)')
    for name in ('m', 'n', 'd', 'w'):
        p.add_argument(f'--{name}', type=int, required=True)
    p.add_argument('--exact', action='store_true', help='run the exact search when bounds differ')
    p.add_argument('--records', action='store_true', help='list every rule and construction')
    p.set_defaults(handler=cmd_bound)

    p = sub.add_parser('table', parents=[common], help='bound table over a parameter grid')
    p.add_argument('--m', required=True, help="range like '1..3'")
    p.add_argument('--n', required=True)
    p.add_argument('--w', required=True)
    p.add_argument('--d', help='distances (default: every even d <= mn)')
    p.add_argument('--no-exact', action='store_true', help='skip the exact-search oracle')
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser('curves', parents=[common], help='asymptotic rate curves at omega = 1/2')
    p.add_argument('--grid-start', type=float, default=0.0)
    p.add_argument('--grid-end', type=float, default=0.5)
    p.add_argument('--grid-step', type=float, default=0.01)
    p.add_argument('--curves', help=f"comma list from {', '.join(CURVE_NAMES)}")
    p.set_defaults(handler=cmd_curves)

    p = sub.add_parser('puf-sim', parents=[common], help='Loop PUF reliability sweep')
    p.add_argument('--code', required=True)
    p.add_argument('--m', type=int)
    p.add_argument('--n', type=int)
    p.add_argument('--mu', type=float, default=1.0, help='mean element delay')
    p.add_argument('--s-eps', type=float, default=None, help='manufacturing offset scale')
    p.add_argument('--noise', type=float, default=None, help='measurement noise scale (default s_eps)')
    p.add_argument('--trials', type=int, default=1000)
    p.add_argument('--devices', type=int, default=1)
    p.add_argument('--device-in', help='load the device from a JSON file')
    p.add_argument('--device-out', help='save the (first) device to a JSON file')
    p.set_defaults(handler=cmd_puf_sim)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.settings = settings.override(node_budget=getattr(args, 'budget', None),
                                      threads=getattr(args, 'threads', None))
    logging.basicConfig(level=(args.log_level or settings.log_level).upper(),
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    try:
        return args.handler(args)
    except McwcError as e:
        print(e.one_line(), file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: io: {' '.join(str(e).split())}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
